#pragma once

#include <json.hpp>

#include "nodecount/naive_bayes.hpp"
#include "nodecount/svm.hpp"

namespace nodecount {

/// Model serialization for report embedding and reload.
nlohmann::ordered_json to_json(const BinarySvmModel& model);
BinarySvmModel binary_svm_from_json(const nlohmann::json& j);

nlohmann::ordered_json to_json(const OvoSvmModel& model);
OvoSvmModel ovo_svm_from_json(const nlohmann::json& j);

nlohmann::ordered_json to_json(const NaiveBayesModel& model);

} // namespace nodecount
