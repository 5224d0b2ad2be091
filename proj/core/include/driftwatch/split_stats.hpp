#pragma once

#include <span>
#include <vector>

#include "driftwatch/two_sample.hpp"

namespace driftwatch {

struct SplitScanResult {
    double w_max = 0.0; // max over k of the normalized split statistic
    int tau = 0;        // argmax k = size of the left segment; smallest k on ties
};

// Scans every admissible split k in [min_segment, t - min_segment] of the
// t observed values into X0 = values[0..k) and X1 = values[k..t) and returns
// the maximal normalized two-sample statistic with its argmax. Signed
// statistics (MW, Student) enter as absolute values; a shift either way is a
// change. Cost per call: O(t log t) for MW/CvM, O(t^2) for KS and Student.
SplitScanResult max_split_statistic(std::span<const double> values, Statistic stat,
                                    int min_segment);

// Same contract, evaluated split-by-split with the plain two-sample functions.
// Slow; kept as the independent recomputation the fast path is checked against.
SplitScanResult max_split_statistic_reference(std::span<const double> values,
                                              Statistic stat, int min_segment);

// Normalized statistic per split; index 0 corresponds to k = min_segment.
std::vector<double> all_split_statistics(std::span<const double> values,
                                         Statistic stat, int min_segment);

} // namespace driftwatch
