#pragma once

#include <optional>
#include <span>

#include "driftwatch/detection.hpp"
#include "driftwatch/divergence.hpp"

namespace driftwatch {

struct MwConfig {
    double alpha = 0.05;
    int window = 40;               // beta; split into two halves of window/2
    int consecutive_required = 1;  // gamma

    void validate() const;
};

// Sliding-window Mann-Whitney detector. Starting at t = window, the trailing
// window splits into halves D1, D2; a p-value below alpha increments a
// consecutive-rejection counter (reset on any non-rejection), and the counter
// reaching gamma raises an alarm at t.
class MwDetector {
public:
    explicit MwDetector(MwConfig cfg);

    // Feeds x_t; returns t if this step raised an alarm. After an alarm the
    // counter resets and the window keeps sliding, so the caller decides
    // whether to stop (single-shot) or keep scanning (multi-alarm).
    std::optional<int> step(double x);

    int time() const { return time_; }

private:
    MwConfig cfg_;
    std::vector<double> buffer_; // ring of the last `window` values
    int time_ = 0;
    int streak_ = 0;
};

// Single-shot run: stops at the first alarm.
DetectionOutcome mw_detect(const DivergenceSeries& series, const MwConfig& cfg);

// Multi-alarm run: scans the whole series, recording every alarm;
// detection_time is the first alarm.
DetectionOutcome mw_detect_multi(const DivergenceSeries& series, const MwConfig& cfg);

} // namespace driftwatch
