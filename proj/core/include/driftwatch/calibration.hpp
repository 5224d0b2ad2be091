#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "driftwatch/two_sample.hpp"

namespace driftwatch {

// Calibrated critical values h_t making the conditional false-alarm
// probability alpha at every step, given no alarm before. Values are stored
// at `knots` (every t up to 200, geometrically spaced beyond) and looked up
// with linear interpolation in t; `values` carries the isotonic-smoothed
// sequence the detector uses and `raw_values` the untouched estimates.
struct CriticalValueTable {
    int format_version = 1;
    Statistic statistic = Statistic::CramerVonMises;
    double alpha = 0.05;
    int t_min = 25;
    int t_max = 0;
    int min_segment = 2;
    std::uint64_t replications = 0;
    std::uint64_t seed = 0;
    std::vector<int> knots;
    std::vector<double> values;
    std::vector<double> raw_values;
    std::vector<std::int64_t> survivors; // streams alive entering each knot step

    double threshold_at(int t) const; // throws ThresholdMissing outside range
};

// Null draws are standard uniform by default; rank statistics are
// distribution-free, so the family only matters for Student tables.
enum class NullFamily { Uniform, Normal };

struct CalibrationOptions {
    int t_min = 25;
    int min_segment = 2;
    int threads = 0;      // 0: hardware concurrency
    int dense_until = 200;
    NullFamily null_family = NullFamily::Uniform;
};

// Simulates `replications` iid null streams and walks t = t_min..t_max; h_t is
// the (1-alpha) empirical quantile of W_t among streams that have not alarmed
// at any earlier step, and streams exceeding h_t retire. Throws Starvation if
// the surviving population drops below 100/alpha.
CriticalValueTable calibrate(Statistic statistic, double alpha, int t_max,
                             std::uint64_t replications, std::uint64_t seed,
                             const CalibrationOptions& options = {});

struct ValidationStep {
    int t = 0;
    std::int64_t survivors = 0;
    std::int64_t alarms = 0;
    double rate = 0.0;
    double tolerance = 0.0; // 3 binomial standard errors
    bool pass = false;
};

struct ValidationReport {
    std::vector<ValidationStep> steps;
    bool pass = false;
    std::uint64_t replications = 0;
    std::uint64_t seed = 0;
};

// Replays fresh null streams against a table and reports the empirical
// conditional alarm rate per step; PASS iff every step is within 3 binomial
// standard errors of the table's alpha.
ValidationReport validate_table(const CriticalValueTable& table,
                                std::uint64_t replications, std::uint64_t seed,
                                int threads = 0);

// Versioned JSON with an FNV-1a checksum binding values to metadata.
void save_table(const CriticalValueTable& table, const std::filesystem::path& path);
CriticalValueTable load_table(const std::filesystem::path& path);

} // namespace driftwatch
