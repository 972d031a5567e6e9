#include "nodecount/eta_error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "nodecount/errors.hpp"

namespace nodecount {

namespace {

std::vector<double> parse_numeric_row(const std::string& line, std::size_t line_no,
                                      const std::string& path) {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= line.size()) {
        std::size_t end = line.find(',', start);
        if (end == std::string::npos) end = line.size();
        std::string token = line.substr(start, end - start);
        while (!token.empty() && (token.back() == '\r' || token.back() == ' '))
            token.pop_back();
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (ec != std::errc() || ptr != token.data() + token.size())
            throw DataError(path + " line " + std::to_string(line_no) +
                            ": not a number: '" + token + "'");
        values.push_back(v);
        start = end + 1;
        if (end == line.size()) break;
    }
    return values;
}

std::vector<std::vector<double>> read_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        rows.push_back(parse_numeric_row(line, line_no, path));
    }
    if (rows.size() != kNumClasses)
        throw DataError(path + ": expected " + std::to_string(kNumClasses) +
                        " data rows, got " + std::to_string(rows.size()));
    return rows;
}

} // namespace

PredictionDistribution make_distribution(
    const std::array<std::array<double, kNumClasses>, kNumClasses>& rows, double tolerance) {
    PredictionDistribution dist;
    for (int n = 0; n < kNumClasses; ++n) {
        double sum = 0.0;
        for (int k = 0; k < kNumClasses; ++k) {
            const double v = rows[n][k];
            if (v < 0.0 || v > 1.0)
                throw std::invalid_argument("prediction distribution entry outside [0,1]");
            sum += v;
        }
        if (std::abs(sum - 1.0) > tolerance)
            throw std::invalid_argument("prediction distribution row " + std::to_string(n + 1) +
                                        " sums to " + std::to_string(sum) + ", not 1");
        for (int k = 0; k < kNumClasses; ++k) dist.p[n][k] = rows[n][k] / sum;
    }
    return dist;
}

PredictionDistribution empirical_distribution(const ConfusionMatrix& cm) {
    std::array<std::array<double, kNumClasses>, kNumClasses> rows{};
    for (int n = 0; n < kNumClasses; ++n) {
        const std::uint64_t total = cm.row_sum(n);
        if (total == 0)
            throw std::invalid_argument("empirical_distribution: true class N=" +
                                        std::to_string(n + 1) + " has no examples");
        for (int k = 0; k < kNumClasses; ++k)
            rows[n][k] = static_cast<double>(cm.counts[n][k]) / static_cast<double>(total);
    }
    return make_distribution(rows, 1e-9);
}

WeightedError weighted_error(const ErrorMatrix& err, const PredictionDistribution& dist) {
    WeightedError result;
    for (int n = 0; n < kNumClasses; ++n) {
        double row_sum = 0.0;
        for (int k = 0; k < kNumClasses; ++k) {
            if (err.mean[n][k] < 0.0)
                throw std::invalid_argument("weighted_error: negative error entry");
            if (dist.p[n][k] < 0.0 || dist.p[n][k] > 1.0)
                throw std::invalid_argument("weighted_error: distribution entry outside [0,1]");
            row_sum += dist.p[n][k];
        }
        if (std::abs(row_sum - 1.0) > 1e-6)
            throw std::invalid_argument("weighted_error: distribution row " +
                                        std::to_string(n + 1) + " is not stochastic");
        double delta = 0.0;
        for (int k = 0; k < kNumClasses; ++k) delta += dist.p[n][k] * err.mean[n][k];
        result.delta[n] = delta;
    }
    if (err.sd) {
        std::array<double, kNumClasses> sds{};
        for (int n = 0; n < kNumClasses; ++n) {
            double var = 0.0;
            for (int k = 0; k < kNumClasses; ++k) {
                const double term = dist.p[n][k] * (*err.sd)[n][k];
                var += term * term;
            }
            sds[n] = std::sqrt(var);
        }
        result.delta_sd = sds;
    }
    return result;
}

ErrorMatrix load_error_matrix(const std::string& path) {
    const auto rows = read_grid(path);
    const std::size_t width = rows.front().size();
    if (width != kNumClasses && width != 2 * kNumClasses)
        throw DataError(path + ": expected 4 or 8 columns, got " + std::to_string(width));
    ErrorMatrix matrix;
    const bool with_sd = (width == 2 * kNumClasses);
    if (with_sd) matrix.sd.emplace();
    for (int n = 0; n < kNumClasses; ++n) {
        if (rows[n].size() != width)
            throw DataError(path + ": ragged row " + std::to_string(n + 2));
        for (int k = 0; k < kNumClasses; ++k) {
            const double mean = with_sd ? rows[n][2 * k] : rows[n][k];
            if (mean < 0.0)
                throw DataError(path + ": negative error entry in row " + std::to_string(n + 2));
            matrix.mean[n][k] = mean;
            if (with_sd) {
                const double sd = rows[n][2 * k + 1];
                if (sd < 0.0)
                    throw DataError(path + ": negative sd entry in row " + std::to_string(n + 2));
                (*matrix.sd)[n][k] = sd;
            }
        }
    }
    return matrix;
}

PredictionDistribution load_prediction_distribution(const std::string& path) {
    const auto rows = read_grid(path);
    std::array<std::array<double, kNumClasses>, kNumClasses> grid{};
    for (int n = 0; n < kNumClasses; ++n) {
        if (rows[n].size() != kNumClasses)
            throw DataError(path + ": expected 4 columns in row " + std::to_string(n + 2));
        for (int k = 0; k < kNumClasses; ++k) grid[n][k] = rows[n][k];
    }
    try {
        return make_distribution(grid);
    } catch (const std::invalid_argument& e) {
        throw DataError(path + ": " + e.what());
    }
}

} // namespace nodecount
