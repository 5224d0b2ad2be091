#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "driftwatch/divergence.hpp"

namespace driftwatch {

// Per-window drift-class proportions defining a scenario. p[j-1] is the
// contamination in the j-th window counted from the drift start t_start, so
// the vector spans windows t_start..n_windows.
struct ContaminationSchedule {
    enum class Kind { Step, Linear, Custom };

    int n_windows = 120;
    int t_start = 60;
    int t_end = 80;
    std::vector<double> p;
    Kind kind = Kind::Step;

    // Sudden, full drift: every p_j = 1 (t_end == t_start).
    static ContaminationSchedule step(int n_windows, int t_start);
    // Constant-increase ramp p_j = j/(t_end - t_start + 1) up to t_end, then 1.
    static ContaminationSchedule linear(int n_windows, int t_start, int t_end);
    static ContaminationSchedule custom(int n_windows, int t_start, int t_end,
                                        std::vector<double> p);

    // Contamination at window t (1-based); 0 before t_start.
    double proportion_at(int t) const;

    void validate() const;
};

std::string to_string(ContaminationSchedule::Kind kind);
ContaminationSchedule::Kind schedule_kind_from_string(const std::string& name);

struct DistributionSpec {
    enum class Family { Normal, Uniform };
    Family family = Family::Normal;
    double a = 0.0; // mean (Normal) or lower bound (Uniform)
    double b = 1.0; // sd (Normal) or upper bound (Uniform)
};

struct StreamSpec {
    DistributionSpec null_dist{DistributionSpec::Family::Normal, 0.0, 1.0};
    DistributionSpec drift_dist{DistributionSpec::Family::Normal, 2.0, 1.0};
    ContaminationSchedule schedule;
    int batch_size = 16;
    std::uint64_t seed = 0;
};

struct SyntheticSeries {
    DivergenceSeries series;
    ContaminationSchedule schedule;
};

// For each window t draws batch_size values, each from the drift distribution
// with probability proportion_at(t) and from the null otherwise, and emits the
// window mean as x_t. Deterministic under the seed.
SyntheticSeries synth_divergence_series(const StreamSpec& spec);

struct PeekingRow {
    double alpha = 0.0;
    double pr_at_least_one = 0.0; // Pr(V >= 1)
    double expected_v = 0.0;      // E(V)
};

// Draws r iid N(0,1) samples of length n and tests H0: mu = 0 with a
// two-sided one-sample t-test on every nested prefix of length >= min_prefix.
// V counts the prefixes rejecting at level alpha.
std::vector<PeekingRow> peeking_experiment(int n, int r, std::span<const double> alphas,
                                           int min_prefix, std::uint64_t seed);

// Family-wise false-alarm probability 1 - (1-alpha)^w for w independent windows.
double nonoverlap_inflation(int w, double alpha);

} // namespace driftwatch
