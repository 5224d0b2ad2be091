#include "driftwatch/cpm_detector.hpp"

#include <cmath>

#include <json.hpp>

#include "driftwatch/errors.hpp"
#include "driftwatch/split_stats.hpp"

namespace driftwatch {

double CpmConfig::alpha_from_arl0(double arl0) {
    if (!(arl0 > 1.0)) throw DataError("ARL0 must exceed 1");
    return 1.0 / arl0;
}

void CpmConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DataError("alpha must be in (0,1)");
    if (min_segment < 1) throw DataError("min_segment must be >= 1");
    if (burn_in < 2 * min_segment) {
        throw DataError("burn_in must be at least 2*min_segment");
    }
    if (thresholds) {
        if (thresholds->statistic != statistic) {
            throw DataError("threshold table was calibrated for a different statistic");
        }
        if (thresholds->min_segment != min_segment) {
            throw DataError("threshold table was calibrated with a different min_segment");
        }
        if (thresholds->alpha != alpha) {
            throw DataError("threshold table was calibrated at a different alpha");
        }
    }
}

CpmDetector::CpmDetector(CpmConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
}

CpmStep CpmDetector::step(double x) {
    if (!std::isfinite(x)) throw DataError("non-finite divergence value");
    observations_.push_back(x);

    CpmStep out;
    out.t = time();
    if (out.t < cfg_.burn_in) return out; // explicit not-yet-testable record

    if (!cfg_.thresholds) throw ThresholdMissing("no critical value table configured");
    out.threshold = cfg_.thresholds->threshold_at(out.t);
    const SplitScanResult scan =
        max_split_statistic(observations_, cfg_.statistic, cfg_.min_segment);
    out.testable = true;
    out.w = scan.w_max;
    out.tau_hat = scan.tau;
    out.alarmed = out.w > out.threshold;
    return out;
}

std::string CpmDetector::serialize_state() const {
    nlohmann::json j;
    j["format_version"] = 1;
    j["statistic"] = to_string(cfg_.statistic);
    j["min_segment"] = cfg_.min_segment;
    j["burn_in"] = cfg_.burn_in;
    j["alpha"] = cfg_.alpha;
    j["observations"] = observations_;
    return j.dump();
}

CpmDetector CpmDetector::restore(CpmConfig cfg, const std::string& state_json) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(state_json);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("bad detector state: ") + e.what());
    }
    if (j.value("format_version", 0) != 1) {
        throw DataError("unsupported detector state version");
    }
    if (statistic_from_string(j.at("statistic").get<std::string>()) != cfg.statistic ||
        j.at("min_segment").get<int>() != cfg.min_segment ||
        j.at("burn_in").get<int>() != cfg.burn_in) {
        throw DataError("detector state does not match the supplied config");
    }
    CpmDetector detector(std::move(cfg));
    detector.observations_ = j.at("observations").get<std::vector<double>>();
    return detector;
}

namespace {

DetectionOutcome run(const DivergenceSeries& series, const CpmConfig& cfg,
                     bool stop_at_first) {
    CpmDetector detector(cfg);
    DetectionOutcome out;
    for (double x : series.values) {
        const CpmStep step = detector.step(x);
        if (step.alarmed) {
            out.alarm_times.push_back(step.t);
            if (!out.detection_time) {
                out.detection_time = step.t;
                out.estimated_changepoint = step.tau_hat;
            }
            if (stop_at_first) break;
        }
    }
    return out;
}

} // namespace

DetectionOutcome cpm_detect(const DivergenceSeries& series, const CpmConfig& cfg) {
    return run(series, cfg, true);
}

DetectionOutcome cpm_detect_multi(const DivergenceSeries& series, const CpmConfig& cfg) {
    return run(series, cfg, false);
}

} // namespace driftwatch
