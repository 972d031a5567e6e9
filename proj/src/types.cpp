#include "nodecount/types.hpp"

#include <algorithm>

#include "nodecount/errors.hpp"

namespace nodecount {

std::string to_string(TimeOfDay tod) {
    switch (tod) {
    case TimeOfDay::kMorning: return "morning";
    case TimeOfDay::kAfternoon: return "afternoon";
    case TimeOfDay::kNight: return "night";
    }
    return "morning";
}

TimeOfDay parse_time_of_day(const std::string& name) {
    if (name == "morning") return TimeOfDay::kMorning;
    if (name == "afternoon") return TimeOfDay::kAfternoon;
    if (name == "night") return TimeOfDay::kNight;
    throw DataError("unknown time_of_day value: '" + name + "'");
}

void validate(const LabeledExample& ex) {
    if (!(ex.eta_s > 0.0))
        throw DataError("eta_s must be positive, got " + std::to_string(ex.eta_s));
    if (std::find(kTxPowerLevelsDbm.begin(), kTxPowerLevelsDbm.end(), ex.tx_power_dbm) ==
        kTxPowerLevelsDbm.end())
        throw DataError("tx_power_dbm outside {0,5,10,15,20}: " +
                        std::to_string(ex.tx_power_dbm));
    if (std::find(kDistancesM.begin(), kDistancesM.end(), ex.distance_m) == kDistancesM.end())
        throw DataError("distance_m outside {1,5,10}: " + std::to_string(ex.distance_m));
    if (std::find(kChannels.begin(), kChannels.end(), ex.channel) == kChannels.end())
        throw DataError("channel outside {1,6,11}: " + std::to_string(ex.channel));
    if (ex.n_nodes < 1 || ex.n_nodes > kNumClasses)
        throw DataError("n_nodes outside 1..4: " + std::to_string(ex.n_nodes));
}

std::size_t dimension(FeatureSubset subset) {
    switch (subset) {
    case FeatureSubset::kEtaOnly: return 1;
    case FeatureSubset::kEtaPower: return 2;
    case FeatureSubset::kEtaDistance: return 2;
    case FeatureSubset::kEtaPowerDistance: return 3;
    }
    return 1;
}

bool includes_power(FeatureSubset subset) {
    return subset == FeatureSubset::kEtaPower || subset == FeatureSubset::kEtaPowerDistance;
}

bool includes_distance(FeatureSubset subset) {
    return subset == FeatureSubset::kEtaDistance || subset == FeatureSubset::kEtaPowerDistance;
}

std::string to_string(FeatureSubset subset) {
    switch (subset) {
    case FeatureSubset::kEtaOnly: return "eta";
    case FeatureSubset::kEtaPower: return "eta_power";
    case FeatureSubset::kEtaDistance: return "eta_distance";
    case FeatureSubset::kEtaPowerDistance: return "eta_power_distance";
    }
    return "eta";
}

FeatureSubset parse_feature_subset(const std::string& name) {
    for (FeatureSubset s : kAllFeatureSubsets)
        if (to_string(s) == name) return s;
    throw ConfigError("unknown feature subset: '" + name +
                      "' (expected eta, eta_power, eta_distance or eta_power_distance)");
}

FeatureLayout layout_of(FeatureSubset subset) {
    FeatureLayout layout;
    layout.eta_column = 0;
    for (std::size_t c = 1; c < dimension(subset); ++c)
        layout.categorical_columns.push_back(c);
    return layout;
}

} // namespace nodecount
