#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace nodecount {

/// The label is the number of nodes simultaneously receiving data, 1..4.
inline constexpr int kNumClasses = 4;

inline constexpr std::array<int, 5> kTxPowerLevelsDbm = {0, 5, 10, 15, 20};
inline constexpr std::array<int, 3> kDistancesM = {1, 5, 10};
inline constexpr std::array<int, 3> kChannels = {1, 6, 11};

enum class TimeOfDay { kMorning, kAfternoon, kNight };

inline constexpr std::array<TimeOfDay, 3> kTimesOfDay = {
    TimeOfDay::kMorning, TimeOfDay::kAfternoon, TimeOfDay::kNight};

std::string to_string(TimeOfDay tod);
/// Throws DataError on unknown names.
TimeOfDay parse_time_of_day(const std::string& name);

/// One experiment: the transfer duration of a 100 MB file (ETA) plus the
/// network configuration it was measured under and the true node count.
struct LabeledExample {
    double eta_s = 0.0;    // transfer duration, seconds; must be > 0
    int tx_power_dbm = 0;  // one of kTxPowerLevelsDbm
    int distance_m = 1;    // one of kDistancesM
    int channel = 1;       // one of kChannels; metadata, never a model feature
    TimeOfDay time_of_day = TimeOfDay::kMorning;  // metadata
    int n_nodes = 1;       // class label, 1..kNumClasses
};

/// Throws DataError if any field is outside its domain.
void validate(const LabeledExample& ex);

/// Which measured parameters enter the feature vector. ETA is always first;
/// remaining columns follow in (tx_power, distance) order.
enum class FeatureSubset { kEtaOnly, kEtaPower, kEtaDistance, kEtaPowerDistance };

inline constexpr std::array<FeatureSubset, 4> kAllFeatureSubsets = {
    FeatureSubset::kEtaOnly, FeatureSubset::kEtaPower,
    FeatureSubset::kEtaDistance, FeatureSubset::kEtaPowerDistance};

std::size_t dimension(FeatureSubset subset);
bool includes_power(FeatureSubset subset);
bool includes_distance(FeatureSubset subset);
std::string to_string(FeatureSubset subset);
/// Accepts "eta", "eta_power", "eta_distance", "eta_power_distance".
FeatureSubset parse_feature_subset(const std::string& name);

/// Dense row-major feature matrix, M rows by n columns.
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    FeatureMatrix() = default;
    FeatureMatrix(std::size_t r, std::size_t c)
        : rows(r), cols(c), values(r * c, 0.0) {}

    double* row(std::size_t i) { return values.data() + i * cols; }
    const double* row(std::size_t i) const { return values.data() + i * cols; }
    double& at(std::size_t i, std::size_t j) { return values[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

/// Column roles of a projected feature matrix: where the ETA column sits and
/// which columns are categorical network parameters (used by the conditional
/// Naive Bayes form).
struct FeatureLayout {
    std::size_t eta_column = 0;
    std::vector<std::size_t> categorical_columns;
};

FeatureLayout layout_of(FeatureSubset subset);

} // namespace nodecount
