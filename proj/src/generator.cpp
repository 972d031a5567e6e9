#include "nodecount/generator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nodecount/errors.hpp"
#include "nodecount/rng.hpp"

namespace nodecount {

namespace {

constexpr int kHistogramBins = 64;

double power_factor(int power_dbm) {
    switch (power_dbm) {
    case 0: return 0.78;
    case 5: return 0.84;
    case 10: return 0.90;
    case 15: return 0.95;
    default: return 1.00;
    }
}

double distance_factor(int distance_m) {
    switch (distance_m) {
    case 1: return 1.00;
    case 5: return 0.93;
    default: return 0.86;
    }
}

double channel_sigma(int channel) {
    // the 2.4 GHz mid band sees the most cross traffic on campus
    switch (channel) {
    case 1: return 0.09;
    case 6: return 0.13;
    default: return 0.10;
    }
}

double tod_multiplier(TimeOfDay tod) {
    switch (tod) {
    case TimeOfDay::kMorning: return 1.00;
    case TimeOfDay::kAfternoon: return 1.15;
    case TimeOfDay::kNight: return 0.85;
    }
    return 1.0;
}

using Histogram = std::array<double, kHistogramBins>;

Histogram normalized_histogram(const std::vector<double>& values, double lo, double hi) {
    Histogram h{};
    if (values.empty()) return h;
    const double width = (hi > lo) ? (hi - lo) : 1.0;
    for (double v : values) {
        int bin = static_cast<int>((v - lo) / width * kHistogramBins);
        bin = std::clamp(bin, 0, kHistogramBins - 1);
        h[bin] += 1.0;
    }
    for (double& b : h) b /= static_cast<double>(values.size());
    return h;
}

double bhattacharyya(const Histogram& a, const Histogram& b) {
    double coef = 0.0;
    for (int i = 0; i < kHistogramBins; ++i) coef += std::sqrt(a[i] * b[i]);
    return std::min(coef, 1.0);
}

/// Overlap matrix for one group of log-ETA samples split by class.
void accumulate_overlaps(const std::array<std::vector<double>, kNumClasses>& samples,
                         std::array<std::array<double, kNumClasses>, kNumClasses>& out) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& v : samples)
        for (double x : v) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    std::array<Histogram, kNumClasses> hists;
    for (int c = 0; c < kNumClasses; ++c)
        hists[c] = normalized_histogram(samples[c], lo, hi);
    for (int a = 0; a < kNumClasses; ++a)
        for (int b = 0; b < kNumClasses; ++b)
            out[a][b] += (a == b) ? 1.0 : bhattacharyya(hists[a], hists[b]);
}

} // namespace

GeneratorConfig GeneratorConfig::defaults() {
    GeneratorConfig config;
    const double reference_rate = 20.0;  // Mbit/s at 20 dBm, 1 m
    for (int power : kTxPowerLevelsDbm)
        for (int dist : kDistancesM)
            config.rate_mbps[{power, dist}] =
                reference_rate * power_factor(power) * distance_factor(dist);
    for (int channel : kChannels)
        for (TimeOfDay tod : kTimesOfDay)
            config.noise_sigma[{channel, tod}] = channel_sigma(channel) * tod_multiplier(tod);
    return config;
}

void validate(const GeneratorConfig& config) {
    if (!(config.file_size_mb > 0.0))
        throw ConfigError("generator: file_size_mb must be positive");
    if (!(config.contention_exponent >= 1.0))
        throw ConfigError("generator: contention_exponent must be >= 1");
    if (config.repetitions < 1)
        throw ConfigError("generator: repetitions must be >= 1");
    for (int power : kTxPowerLevelsDbm)
        for (int dist : kDistancesM) {
            auto it = config.rate_mbps.find({power, dist});
            if (it == config.rate_mbps.end())
                throw ConfigError("generator: missing rate for power " + std::to_string(power) +
                                  " dBm, distance " + std::to_string(dist) + " m");
            if (!(it->second > 0.0))
                throw ConfigError("generator: rate_mbps must be positive for power " +
                                  std::to_string(power) + " dBm, distance " +
                                  std::to_string(dist) + " m");
        }
    for (int channel : kChannels)
        for (TimeOfDay tod : kTimesOfDay) {
            auto it = config.noise_sigma.find({channel, tod});
            if (it == config.noise_sigma.end())
                throw ConfigError("generator: missing noise sigma for channel " +
                                  std::to_string(channel) + ", " + to_string(tod));
            if (it->second < 0.0)
                throw ConfigError("generator: noise sigma must be >= 0 for channel " +
                                  std::to_string(channel) + ", " + to_string(tod));
        }
}

Dataset generate(const GeneratorConfig& config) {
    validate(config);
    Rng rng(config.seed);
    const double file_size_mbit = config.file_size_mb * 8.0;

    std::vector<LabeledExample> examples;
    examples.reserve(kTxPowerLevelsDbm.size() * kChannels.size() * kNumClasses *
                     kDistancesM.size() * kTimesOfDay.size() *
                     static_cast<std::size_t>(config.repetitions));

    for (int power : kTxPowerLevelsDbm) {
        for (int channel : kChannels) {
            for (int n = 1; n <= kNumClasses; ++n) {
                for (int dist : kDistancesM) {
                    for (TimeOfDay tod : kTimesOfDay) {
                        const double rate = config.rate_mbps.at({power, dist});
                        const double sigma = config.noise_sigma.at({channel, tod});
                        const double contention =
                            std::pow(static_cast<double>(n), config.contention_exponent);
                        const double base_eta = file_size_mbit * contention / rate;
                        for (int rep = 0; rep < config.repetitions; ++rep) {
                            LabeledExample ex;
                            ex.eta_s = base_eta * std::exp(sigma * rng.gaussian());
                            ex.tx_power_dbm = power;
                            ex.distance_m = dist;
                            ex.channel = channel;
                            ex.time_of_day = tod;
                            ex.n_nodes = n;
                            examples.push_back(ex);
                        }
                    }
                }
            }
        }
    }
    return Dataset(std::move(examples), FeatureSubset::kEtaPowerDistance);
}

OverlapReport calibration_report(const Dataset& dataset) {
    const auto counts = dataset.class_counts();
    for (int c = 0; c < kNumClasses; ++c)
        if (counts[c] == 0)
            throw std::invalid_argument("calibration_report: class N=" + std::to_string(c + 1) +
                                        " absent from dataset");

    OverlapReport report;

    std::array<std::vector<double>, kNumClasses> pooled;
    for (const LabeledExample& ex : dataset.examples())
        pooled[ex.n_nodes - 1].push_back(std::log(ex.eta_s));
    std::array<std::array<double, kNumClasses>, kNumClasses> pooled_sum{};
    accumulate_overlaps(pooled, pooled_sum);
    report.pooled = pooled_sum;

    // Average over (power, distance) cells that contain all four classes.
    std::array<std::array<double, kNumClasses>, kNumClasses> cell_sum{};
    int cells_used = 0;
    for (int power : kTxPowerLevelsDbm) {
        for (int dist : kDistancesM) {
            std::array<std::vector<double>, kNumClasses> cell;
            for (const LabeledExample& ex : dataset.examples())
                if (ex.tx_power_dbm == power && ex.distance_m == dist)
                    cell[ex.n_nodes - 1].push_back(std::log(ex.eta_s));
            const bool complete = std::all_of(cell.begin(), cell.end(),
                                              [](const auto& v) { return !v.empty(); });
            if (!complete) continue;
            accumulate_overlaps(cell, cell_sum);
            ++cells_used;
        }
    }
    if (cells_used == 0) {
        report.within_cell = report.pooled;
    } else {
        for (int a = 0; a < kNumClasses; ++a)
            for (int b = 0; b < kNumClasses; ++b)
                report.within_cell[a][b] = cell_sum[a][b] / cells_used;
    }
    return report;
}

} // namespace nodecount
