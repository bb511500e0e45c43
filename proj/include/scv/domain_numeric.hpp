#ifndef SCV_DOMAIN_NUMERIC_HPP
#define SCV_DOMAIN_NUMERIC_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "scv/errors.hpp"

namespace scv {

struct NumericSample {
    std::vector<double> values;
    double mean = 0.0;
    double std_dev = 0.0;  // population
    double score = 1.0;
};

// SC = clamp(1 - sigma/|mu|, 0, 1). All-equal samples (including all-zero)
// score 1; near-zero mean with positive spread scores 0.
inline NumericSample sc_numerical(std::span<const double> values) {
    if (values.empty()) throw EmptySampleError("sc_numerical requires at least one value");
    NumericSample out;
    out.values.assign(values.begin(), values.end());
    double sum = 0;
    for (double v : values) sum += v;
    out.mean = sum / double(values.size());
    double var = 0;
    for (double v : values) var += (v - out.mean) * (v - out.mean);
    var /= double(values.size());
    out.std_dev = std::sqrt(var);
    if (out.std_dev == 0.0) {
        out.score = 1.0;
    } else if (std::abs(out.mean) < 1e-12) {
        out.score = 0.0;
    } else {
        out.score = std::clamp(1.0 - out.std_dev / std::abs(out.mean), 0.0, 1.0);
    }
    return out;
}

namespace detail {

inline double population_variance(std::span<const double> values) {
    double sum = 0;
    for (double v : values) sum += v;
    double mean = sum / double(values.size());
    double var = 0;
    for (double v : values) var += (v - mean) * (v - mean);
    return var / double(values.size());
}

} // namespace detail

struct VarianceReduction {
    double value = 0.0;
    bool degenerate = false;  // var(before) == 0
};

// 1 - var(after)/var(before); may be negative when variance grew.
inline VarianceReduction variance_reduction(std::span<const double> before,
                                            std::span<const double> after) {
    if (before.empty() || after.empty())
        throw EmptySampleError("variance_reduction requires non-empty samples");
    VarianceReduction out;
    double vb = detail::population_variance(before);
    double va = detail::population_variance(after);
    if (vb == 0.0) {
        out.degenerate = true;
        out.value = 0.0;
        return out;
    }
    out.value = 1.0 - va / vb;
    return out;
}

// Fraction of values within relative tolerance of the sample median.
inline double threshold_consistency(std::span<const double> values, double rel_tol = 1e-6) {
    if (values.empty()) throw EmptySampleError("threshold_consistency requires values");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    double median = sorted.size() % 2 == 1
                        ? sorted[sorted.size() / 2]
                        : 0.5 * (sorted[sorted.size() / 2 - 1] + sorted[sorted.size() / 2]);
    std::size_t within = 0;
    for (double v : values) {
        double scale = std::max(1.0, std::abs(median));
        if (std::abs(v - median) <= rel_tol * scale) ++within;
    }
    return double(within) / double(values.size());
}

} // namespace scv

#endif
