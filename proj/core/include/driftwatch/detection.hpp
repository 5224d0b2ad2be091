#pragma once

#include <optional>
#include <vector>

namespace driftwatch {

// Result of a detection run over a divergence series. Times are 1-based
// window indices. detection_time is empty when nothing was detected;
// estimated_changepoint is only produced by the CPM and follows the
// last-index-before-drift convention.
struct DetectionOutcome {
    std::optional<int> detection_time;
    std::optional<int> estimated_changepoint;
    std::vector<int> alarm_times;
};

} // namespace driftwatch
