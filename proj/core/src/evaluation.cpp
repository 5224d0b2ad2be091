#include "driftwatch/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "driftwatch/errors.hpp"

namespace driftwatch {

void PenaltyParams::validate() const {
    if (c1 > 0.0 || c2 > 0.0) throw DataError("penalties c1, c2 must be <= 0");
    if (!(kappa >= 0.0 && kappa <= 1.0)) throw DataError("kappa must be in [0,1]");
}

double penalty(int t_start, std::optional<int> t_detect, std::span<const double> p,
               const PenaltyParams& params) {
    params.validate();
    if (!t_detect) return params.c2;
    if (*t_detect < t_start) return params.c1;

    const int m = *t_detect - t_start + 1;
    if (static_cast<std::size_t>(m) > p.size()) {
        throw ScheduleTooShort("contamination vector is shorter than the delay");
    }
    double log_product = 0.0;
    for (int j = 1; j <= m; ++j) {
        if (!(p[j - 1] > 0.0 && p[j - 1] <= 1.0)) {
            throw DataError("proportions must lie in (0,1]");
        }
        log_product += (static_cast<double>(m - j) / m) * std::log1p(p[j - 1]);
    }
    return params.c2 - params.kappa * params.c2 / std::exp(log_product);
}

double total_loss(int t_start, std::span<const int> alarm_times,
                  std::span<const double> p, const PenaltyParams& params) {
    params.validate();
    for (std::size_t i = 1; i < alarm_times.size(); ++i) {
        if (alarm_times[i] <= alarm_times[i - 1]) {
            throw DataError("alarm times must be strictly increasing");
        }
    }
    if (alarm_times.empty()) return penalty(t_start, std::nullopt, p, params);

    double loss = 0.0;
    bool detected = false;
    for (int t : alarm_times) {
        if (t < t_start) {
            loss += params.c1;
        } else if (!detected) {
            loss += penalty(t_start, t, p, params);
            detected = true; // only the first correct decision counts
        }
    }
    return loss;
}

std::optional<double> false_alarm_rate(int t_start, std::span<const int> alarm_times) {
    int false_alarms = 0;
    int detected = 0;
    for (int t : alarm_times) {
        if (t < t_start) ++false_alarms;
        else detected = 1;
    }
    if (false_alarms + detected == 0) return std::nullopt;
    return static_cast<double>(false_alarms) / (false_alarms + detected);
}

ScenarioScore score_scenario(const DetectionOutcome& outcome,
                             const ContaminationSchedule& schedule,
                             const PenaltyParams& params) {
    schedule.validate();
    ScenarioScore score;
    for (int t : outcome.alarm_times) {
        if (t < schedule.t_start) {
            ++score.false_alarm_count;
        } else if (!score.delay) {
            score.delay = t - schedule.t_start + 1;
        }
    }
    score.theta = false_alarm_rate(schedule.t_start, outcome.alarm_times);
    score.loss = total_loss(schedule.t_start, outcome.alarm_times, schedule.p, params);
    return score;
}

std::vector<SweepPoint> c1_c2_sweep(std::span<const SweepScenario> scenarios,
                                    std::span<const double> grid, double kappa) {
    if (scenarios.empty()) throw DataError("sweep needs at least one scenario");
    const std::size_t detectors = scenarios.front().alarms_per_detector.size();
    for (const SweepScenario& s : scenarios) {
        s.schedule.validate();
        if (s.alarms_per_detector.size() != detectors) {
            throw DataError("scenarios disagree on the number of detectors");
        }
    }

    std::vector<SweepPoint> out;
    out.reserve(grid.size());
    for (double c : grid) {
        if (!(c >= 0.0 && c <= 1.0)) throw DataError("grid values must lie in [0,1]");
        SweepPoint point;
        point.c1 = -c;
        point.c2 = -(1.0 - c);
        const PenaltyParams params{point.c1, point.c2, kappa};
        point.mean_loss.assign(detectors, 0.0);
        for (const SweepScenario& s : scenarios) {
            for (std::size_t d = 0; d < detectors; ++d) {
                point.mean_loss[d] += total_loss(s.schedule.t_start,
                                                 s.alarms_per_detector[d],
                                                 s.schedule.p, params);
            }
        }
        for (double& v : point.mean_loss) v /= static_cast<double>(scenarios.size());
        out.push_back(std::move(point));
    }
    return out;
}

} // namespace driftwatch
