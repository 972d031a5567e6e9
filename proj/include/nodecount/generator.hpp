#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <utility>

#include "nodecount/dataset.hpp"
#include "nodecount/types.hpp"

namespace nodecount {

/// Flow-level model of the measurement campaign: a star topology where one
/// AP pushes a file to N clients. Transfer time grows super-linearly with N
/// through channel contention; power and distance set the base rate; channel
/// occupancy and time of day add multiplicative log-normal noise.
struct GeneratorConfig {
    double file_size_mb = 100.0;
    /// contention(N) = N^contention_exponent; >= 1 keeps growth super-linear
    /// so the tails of adjacent classes overlap (most strongly around N=3).
    double contention_exponent = 1.1;
    int repetitions = 10;  // per (power, channel, N, distance, time-of-day) cell
    std::uint64_t seed = 42;

    /// Achievable rate in Mbit/s per (tx_power_dbm, distance_m) cell.
    std::map<std::pair<int, int>, double> rate_mbps;
    /// Log-normal sigma per (channel, time_of_day).
    std::map<std::pair<int, TimeOfDay>, double> noise_sigma;

    /// Rates decrease with distance and increase with power; channel 6 is the
    /// noisiest and afternoons are busier than nights.
    static GeneratorConfig defaults();
};

/// Throws ConfigError on invalid values (non-positive rates, negative sigma,
/// exponent below 1, missing cells).
void validate(const GeneratorConfig& config);

/// One example per (power x channel x N x distance x time_of_day x repetition)
/// combination; with defaults M = 5*3*4*3*3*10 = 5400, exactly balanced
/// across N. Deterministic given the seed.
Dataset generate(const GeneratorConfig& config);

/// Bhattacharyya overlap coefficients between per-class ETA marginals,
/// estimated from histograms in log-ETA space. `pooled` mixes all network
/// configurations; `within_cell` averages overlaps computed separately per
/// (power, distance) cell. Diagonals are 1.
struct OverlapReport {
    std::array<std::array<double, kNumClasses>, kNumClasses> pooled{};
    std::array<std::array<double, kNumClasses>, kNumClasses> within_cell{};
};

/// Throws std::invalid_argument if any class is absent from the dataset.
OverlapReport calibration_report(const Dataset& dataset);

} // namespace nodecount
