#include "nodecount/model_json.hpp"

#include "nodecount/errors.hpp"

namespace nodecount {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json matrix_to_json(const FeatureMatrix& m) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
        ordered_json row = ordered_json::array();
        for (std::size_t j = 0; j < m.cols; ++j) row.push_back(m.at(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

FeatureMatrix matrix_from_json(const json& j, std::size_t cols) {
    FeatureMatrix m(j.size(), cols);
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (j[i].size() != cols) throw DataError("svm model json: ragged support vector rows");
        for (std::size_t c = 0; c < cols; ++c) m.at(i, c) = j[i][c].get<double>();
    }
    return m;
}

} // namespace

ordered_json to_json(const BinarySvmModel& model) {
    ordered_json j;
    j["kernel"] = to_string(model.kernel.kind);
    if (model.kernel.kind == KernelKind::kRbf) j["gamma"] = model.kernel.gamma;
    j["cost"] = model.cost;
    j["class_pair"] = {model.class_pair.first, model.class_pair.second};
    j["bias"] = model.bias;
    j["n_features"] = model.support_vectors.cols;
    j["sv_coef"] = model.sv_coef;
    j["support_vectors"] = matrix_to_json(model.support_vectors);
    j["converged"] = model.converged;
    return j;
}

BinarySvmModel binary_svm_from_json(const json& j) {
    BinarySvmModel model;
    const std::string kernel = j.at("kernel").get<std::string>();
    if (kernel == "linear") {
        model.kernel.kind = KernelKind::kLinear;
    } else if (kernel == "rbf") {
        model.kernel.kind = KernelKind::kRbf;
        model.kernel.gamma = j.at("gamma").get<double>();
    } else {
        throw DataError("svm model json: unknown kernel '" + kernel + "'");
    }
    model.cost = j.at("cost").get<double>();
    model.class_pair = {j.at("class_pair")[0].get<int>(), j.at("class_pair")[1].get<int>()};
    model.bias = j.at("bias").get<double>();
    const auto cols = j.at("n_features").get<std::size_t>();
    model.sv_coef = j.at("sv_coef").get<std::vector<double>>();
    model.support_vectors = matrix_from_json(j.at("support_vectors"), cols);
    if (model.sv_coef.size() != model.support_vectors.rows)
        throw DataError("svm model json: coefficient/support vector count mismatch");
    model.converged = j.value("converged", true);
    return model;
}

ordered_json to_json(const OvoSvmModel& model) {
    ordered_json j;
    j["class_weight"] = model.class_weight;
    ordered_json models = ordered_json::array();
    for (const BinarySvmModel& binary : model.models) models.push_back(to_json(binary));
    j["models"] = std::move(models);
    return j;
}

OvoSvmModel ovo_svm_from_json(const json& j) {
    OvoSvmModel model;
    const auto& weights = j.at("class_weight");
    for (int c = 0; c < kNumClasses; ++c) model.class_weight[c] = weights[c].get<double>();
    for (const auto& binary : j.at("models"))
        model.models.push_back(binary_svm_from_json(binary));
    model.all_converged = true;
    for (const BinarySvmModel& binary : model.models)
        model.all_converged = model.all_converged && binary.converged;
    return model;
}

ordered_json to_json(const NaiveBayesModel& model) {
    ordered_json j;
    j["likelihood"] = to_string(model.config.likelihood);
    j["prior_kind"] = to_string(model.config.prior);
    j["conditioned"] = model.config.conditioned;
    j["n_features"] = model.n_features;
    j["eta_column"] = model.eta_column;
    j["categorical_columns"] = model.categorical_columns;
    j["prior"] = model.prior;

    const bool conditioned =
        model.config.conditioned || model.config.likelihood == Likelihood::kPoisson;
    ordered_json classes = ordered_json::array();
    for (int c = 0; c < kNumClasses; ++c) {
        ordered_json entry;
        entry["n"] = c + 1;
        if (!conditioned) {
            ordered_json features = ordered_json::array();
            for (const auto& g : model.feature_gaussians[c])
                features.push_back({{"mean", g.mean}, {"var", g.var}});
            entry["features"] = std::move(features);
        } else {
            auto cell_json = [&](const NaiveBayesModel::EtaCell& cell) {
                if (model.config.likelihood == Likelihood::kPoisson)
                    return ordered_json{{"rate", cell.rate}};
                return ordered_json{{"mean", cell.mean}, {"var", cell.var}};
            };
            entry["fallback"] = cell_json(model.fallback[c]);
            ordered_json cells = ordered_json::array();
            for (const auto& [key, cell] : model.cells[c]) {
                ordered_json item;
                item["category"] = key;
                item["eta"] = cell_json(cell);
                cells.push_back(std::move(item));
            }
            entry["cells"] = std::move(cells);
        }
        classes.push_back(std::move(entry));
    }
    j["classes"] = std::move(classes);
    return j;
}

} // namespace nodecount
