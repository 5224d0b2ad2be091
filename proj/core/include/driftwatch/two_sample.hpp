#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace driftwatch {

using Sample = std::vector<double>;

enum class Statistic {
    MannWhitney,
    CramerVonMises,
    KolmogorovSmirnov,
    StudentT,
};

std::string to_string(Statistic s);
Statistic statistic_from_string(const std::string& name);

struct TwoSampleResult {
    // Raw test statistic: MW rank-sum U (of the first sample), the two-sample
    // Cramer-von-Mises criterion, the KS sup-distance, or the pooled t.
    double statistic = 0.0;
    // Zero-mean/unit-variance version under the permutation null.
    double normalized = 0.0;
    // Two-sided p-value; only the tests used with p-value thresholds carry one.
    std::optional<double> p_value;
};

// Pooled sample size at or below which the Mann-Whitney p-value is computed by
// exact enumeration over all rank assignments (ties included via mid-ranks).
inline constexpr int kMwExactLimit = 20;

TwoSampleResult mann_whitney(std::span<const double> a, std::span<const double> b);
TwoSampleResult cramer_von_mises(std::span<const double> a, std::span<const double> b);
TwoSampleResult kolmogorov_smirnov(std::span<const double> a, std::span<const double> b);
TwoSampleResult student_t(std::span<const double> a, std::span<const double> b);

TwoSampleResult two_sample_test(Statistic s, std::span<const double> a,
                                std::span<const double> b);

} // namespace driftwatch
