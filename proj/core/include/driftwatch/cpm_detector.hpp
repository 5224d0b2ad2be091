#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "driftwatch/calibration.hpp"
#include "driftwatch/detection.hpp"
#include "driftwatch/divergence.hpp"
#include "driftwatch/two_sample.hpp"

namespace driftwatch {

struct CpmConfig {
    double alpha = 0.05;
    int burn_in = 25; // observe-only stabilization period
    Statistic statistic = Statistic::CramerVonMises;
    int min_segment = 2; // smallest admissible side of a split
    std::shared_ptr<const CriticalValueTable> thresholds;

    static double alpha_from_arl0(double arl0);

    void validate() const; // also cross-checks the table when present
};

struct CpmStep {
    int t = 0;
    bool testable = false; // false during burn-in; W reported as 0
    double w = 0.0;        // max over splits of the normalized statistic
    int tau_hat = 0;       // argmax split = last index before the change
    double threshold = 0.0;
    bool alarmed = false;
};

// Sequential change point detector. Each step appends one observation, scans
// every admissible split of the full history for the most significant one,
// and alarms when the maximal normalized statistic exceeds the calibrated
// critical value for the current step.
class CpmDetector {
public:
    explicit CpmDetector(CpmConfig cfg);

    CpmStep step(double x);

    int time() const { return static_cast<int>(observations_.size()); }
    std::span<const double> observations() const { return observations_; }

    // State round-trips through JSON; a restored detector continues with
    // bitwise-identical steps.
    std::string serialize_state() const;
    static CpmDetector restore(CpmConfig cfg, const std::string& state_json);

private:
    CpmConfig cfg_;
    std::vector<double> observations_;
};

// Single-shot run per the sequential protocol: stops at the first alarm and
// reports its split as the estimated changepoint.
DetectionOutcome cpm_detect(const DivergenceSeries& series, const CpmConfig& cfg);

// Evaluation-protocol variant: keeps scanning in place after an alarm and
// records every alarm time.
DetectionOutcome cpm_detect_multi(const DivergenceSeries& series, const CpmConfig& cfg);

} // namespace driftwatch
