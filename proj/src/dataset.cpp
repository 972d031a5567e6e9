#include "nodecount/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nodecount/errors.hpp"
#include "nodecount/rng.hpp"

namespace nodecount {

namespace {

constexpr const char* kCsvHeader = "eta_s,tx_power_dbm,distance_m,channel,time_of_day,n_nodes";

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(current);
            current.clear();
        } else if (c != '\r') {
            current.push_back(c);
        }
    }
    fields.push_back(current);
    return fields;
}

double parse_double_field(const std::string& text, std::size_t line_no, const char* field) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw DataError("line " + std::to_string(line_no) + ": field '" + field +
                        "' is not a number: '" + text + "'");
    return value;
}

int parse_int_field(const std::string& text, std::size_t line_no, const char* field) {
    int value = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw DataError("line " + std::to_string(line_no) + ": field '" + field +
                        "' is not an integer: '" + text + "'");
    return value;
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

long long round_half_up(double x) {
    return static_cast<long long>(std::floor(x + 0.5));
}

} // namespace

Dataset::Dataset(std::vector<LabeledExample> examples, FeatureSubset subset)
    : examples_(std::move(examples)), subset_(subset) {
    for (const LabeledExample& ex : examples_) validate(ex);
}

FeatureMatrix Dataset::matrix() const {
    const std::size_t n = dimension(subset_);
    FeatureMatrix m(examples_.size(), n);
    for (std::size_t i = 0; i < examples_.size(); ++i) {
        double* row = m.row(i);
        std::size_t c = 0;
        row[c++] = examples_[i].eta_s;
        if (includes_power(subset_)) row[c++] = static_cast<double>(examples_[i].tx_power_dbm);
        if (includes_distance(subset_)) row[c++] = static_cast<double>(examples_[i].distance_m);
    }
    return m;
}

std::vector<int> Dataset::labels() const {
    std::vector<int> y(examples_.size());
    for (std::size_t i = 0; i < examples_.size(); ++i) y[i] = examples_[i].n_nodes;
    return y;
}

std::array<std::size_t, kNumClasses> Dataset::class_counts() const {
    std::array<std::size_t, kNumClasses> counts{};
    for (const LabeledExample& ex : examples_) ++counts[ex.n_nodes - 1];
    return counts;
}

Dataset load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader)
        throw DataError(path + ": unexpected header '" + line + "', expected '" +
                        std::string(kCsvHeader) + "'");

    std::vector<LabeledExample> examples;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != 6)
            throw DataError("line " + std::to_string(line_no) + ": expected 6 fields, got " +
                            std::to_string(fields.size()));
        LabeledExample ex;
        ex.eta_s = parse_double_field(fields[0], line_no, "eta_s");
        ex.tx_power_dbm = parse_int_field(fields[1], line_no, "tx_power_dbm");
        ex.distance_m = parse_int_field(fields[2], line_no, "distance_m");
        ex.channel = parse_int_field(fields[3], line_no, "channel");
        try {
            ex.time_of_day = parse_time_of_day(fields[4]);
            ex.n_nodes = parse_int_field(fields[5], line_no, "n_nodes");
            validate(ex);
        } catch (const DataError& e) {
            throw DataError("line " + std::to_string(line_no) + ": " + e.what());
        }
        examples.push_back(ex);
    }
    if (examples.empty()) throw DataError(path + ": no data rows");
    return Dataset(std::move(examples), FeatureSubset::kEtaPowerDistance);
}

void write_csv(const Dataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    out << kCsvHeader << '\n';
    for (const LabeledExample& ex : dataset.examples()) {
        out << format_double(ex.eta_s) << ',' << ex.tx_power_dbm << ',' << ex.distance_m << ','
            << ex.channel << ',' << to_string(ex.time_of_day) << ',' << ex.n_nodes << '\n';
    }
    if (!out) throw DataError("write failed: " + path);
}

Dataset project(const Dataset& dataset, FeatureSubset subset) {
    return Dataset(dataset.examples(), subset);
}

FoldPlan make_folds(const Dataset& dataset, int fold_count, std::uint64_t seed) {
    if (fold_count < 2)
        throw std::invalid_argument("fold_count must be at least 2, got " +
                                    std::to_string(fold_count));
    const auto counts = dataset.class_counts();
    for (int c = 0; c < kNumClasses; ++c) {
        if (counts[c] > 0 && counts[c] < static_cast<std::size_t>(fold_count))
            throw std::invalid_argument("class N=" + std::to_string(c + 1) + " has only " +
                                        std::to_string(counts[c]) + " examples for " +
                                        std::to_string(fold_count) + " folds");
    }

    FoldPlan plan;
    plan.fold_count = fold_count;
    plan.seed = seed;
    plan.assignment.assign(dataset.size(), 0);

    for (int c = 0; c < kNumClasses; ++c) {
        std::vector<std::size_t> indices;
        for (std::size_t i = 0; i < dataset.size(); ++i)
            if (dataset[i].n_nodes == c + 1) indices.push_back(i);
        Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(c)));
        rng.shuffle(indices);
        for (std::size_t pos = 0; pos < indices.size(); ++pos)
            plan.assignment[indices[pos]] = static_cast<int>(pos % fold_count);
    }
    return plan;
}

Dataset subsample(const Dataset& dataset, const SubsampleSpec& spec) {
    for (double f : spec.fraction)
        if (!(f > 0.0) || f > 1.0)
            throw std::invalid_argument("subsample fractions must lie in (0, 1]");

    std::vector<bool> keep(dataset.size(), false);
    for (int c = 0; c < kNumClasses; ++c) {
        std::vector<std::size_t> indices;
        for (std::size_t i = 0; i < dataset.size(); ++i)
            if (dataset[i].n_nodes == c + 1) indices.push_back(i);
        // Prefixes of one fixed per-class permutation: a smaller fraction
        // always selects a subset of a larger fraction's pick.
        Rng rng(Rng::derive(spec.seed, static_cast<std::uint64_t>(c)));
        rng.shuffle(indices);
        const auto take = static_cast<std::size_t>(
            round_half_up(static_cast<double>(indices.size()) * spec.fraction[c]));
        for (std::size_t pos = 0; pos < take && pos < indices.size(); ++pos)
            keep[indices[pos]] = true;
    }

    std::vector<LabeledExample> kept;
    for (std::size_t i = 0; i < dataset.size(); ++i)
        if (keep[i]) kept.push_back(dataset[i]);
    return Dataset(std::move(kept), dataset.subset());
}

StandardizeResult standardize(const FeatureMatrix& train, const FeatureMatrix& test) {
    if (train.rows == 0) throw std::invalid_argument("standardize: empty training matrix");
    if (test.rows > 0 && test.cols != train.cols)
        throw std::invalid_argument("standardize: train/test column mismatch");

    const std::size_t n = train.cols;
    StandardizeResult result;
    result.params.mean.assign(n, 0.0);
    result.params.stddev.assign(n, 1.0);
    result.params.zero_variance.assign(n, false);

    for (std::size_t j = 0; j < n; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < train.rows; ++i) sum += train.at(i, j);
        const double mean = sum / static_cast<double>(train.rows);
        double ss = 0.0;
        for (std::size_t i = 0; i < train.rows; ++i) {
            const double d = train.at(i, j) - mean;
            ss += d * d;
        }
        result.params.mean[j] = mean;
        if (train.rows < 2 || ss <= 0.0) {
            result.params.zero_variance[j] = true;
            result.params.stddev[j] = 1.0;
        } else {
            result.params.stddev[j] = std::sqrt(ss / static_cast<double>(train.rows - 1));
        }
    }

    auto transform = [&](const FeatureMatrix& src) {
        FeatureMatrix dst(src.rows, src.cols);
        for (std::size_t i = 0; i < src.rows; ++i)
            for (std::size_t j = 0; j < src.cols; ++j)
                dst.at(i, j) = (src.at(i, j) - result.params.mean[j]) / result.params.stddev[j];
        return dst;
    };
    result.train = transform(train);
    result.test = transform(test);
    return result;
}

void apply_scaling(const ScalingParams& params, double* x, std::size_t n) {
    for (std::size_t j = 0; j < n && j < params.mean.size(); ++j)
        x[j] = (x[j] - params.mean[j]) / params.stddev[j];
}

} // namespace nodecount
