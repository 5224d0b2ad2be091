#pragma once

#include <optional>
#include <span>
#include <vector>

#include "driftwatch/detection.hpp"
#include "driftwatch/drift_sim.hpp"

namespace driftwatch {

struct PenaltyParams {
    double c1 = -0.5;   // penalty per false alarm
    double c2 = -0.5;   // penalty for a missed (or maximally late) detection
    double kappa = 1.0; // decay control in [0,1]

    void validate() const;
};

// Penalty for one detection decision. Returns c1 for an alarm before t_start,
// c2 for no detection, and otherwise
//   c2 - kappa*c2 / prod_{j=1..m} (1+p_j)^((m-j)/m),  m = t_d - t_start + 1,
// which compounds the contamination each drifted window was observable for.
double penalty(int t_start, std::optional<int> t_detect, std::span<const double> p,
               const PenaltyParams& params);

// Loss of a full alarm history: every alarm before t_start costs c1, the first
// alarm at or after t_start contributes its penalty, later ones are ignored.
// An empty history scores as a missed detection (c2).
double total_loss(int t_start, std::span<const int> alarm_times,
                  std::span<const double> p, const PenaltyParams& params);

// theta = F / (F + I) with F the alarms before t_start and I the 0/1 indicator
// of a detection at or after it; empty when no alarm of any kind was raised.
std::optional<double> false_alarm_rate(int t_start, std::span<const int> alarm_times);

struct ScenarioScore {
    std::optional<int> delay; // t_d - t_start + 1; empty when undetected
    int false_alarm_count = 0;
    std::optional<double> theta;
    double loss = 0.0;
};

ScenarioScore score_scenario(const DetectionOutcome& outcome,
                             const ContaminationSchedule& schedule,
                             const PenaltyParams& params);

// One scenario's alarm histories, one entry per detector under comparison.
struct SweepScenario {
    ContaminationSchedule schedule;
    std::vector<std::vector<int>> alarms_per_detector;
};

struct SweepPoint {
    double c1 = 0.0;
    double c2 = 0.0;
    std::vector<double> mean_loss; // per detector, averaged over scenarios
};

// Walks c over `grid` (each in [0,1]) with C1 = -c and C2 = -(1-c), scoring
// every scenario for every detector.
std::vector<SweepPoint> c1_c2_sweep(std::span<const SweepScenario> scenarios,
                                    std::span<const double> grid, double kappa = 1.0);

} // namespace driftwatch
