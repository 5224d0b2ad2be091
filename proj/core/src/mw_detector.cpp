#include "driftwatch/mw_detector.hpp"

#include <cmath>

#include "driftwatch/errors.hpp"
#include "driftwatch/two_sample.hpp"

namespace driftwatch {

void MwConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DataError("alpha must be in (0,1)");
    if (window < 4 || window % 2 != 0) throw DataError("window must be even and >= 4");
    if (consecutive_required < 1) throw DataError("gamma must be >= 1");
}

MwDetector::MwDetector(MwConfig cfg) : cfg_(cfg) {
    cfg_.validate();
    buffer_.reserve(cfg_.window);
}

std::optional<int> MwDetector::step(double x) {
    if (!std::isfinite(x)) throw DataError("non-finite divergence value");
    if (static_cast<int>(buffer_.size()) < cfg_.window) {
        buffer_.push_back(x);
    } else {
        buffer_[time_ % cfg_.window] = x;
    }
    ++time_;
    if (time_ < cfg_.window) return std::nullopt;

    // Reassemble the trailing window in time order and split into halves.
    const int half = cfg_.window / 2;
    std::vector<double> d1(half), d2(half);
    for (int i = 0; i < cfg_.window; ++i) {
        const int src = (time_ - cfg_.window + i) % cfg_.window;
        (i < half ? d1[i] : d2[i - half]) = buffer_[src];
    }

    const TwoSampleResult r = mann_whitney(d1, d2);
    if (r.p_value.value() < cfg_.alpha) {
        if (++streak_ == cfg_.consecutive_required) {
            streak_ = 0;
            return time_;
        }
    } else {
        streak_ = 0;
    }
    return std::nullopt;
}

namespace {

DetectionOutcome run(const DivergenceSeries& series, const MwConfig& cfg,
                     bool stop_at_first) {
    cfg.validate();
    if (series.length() < cfg.window) {
        throw SeriesTooShort("series shorter than the observation window");
    }
    MwDetector detector(cfg);
    DetectionOutcome out;
    for (double x : series.values) {
        if (const auto alarm = detector.step(x)) {
            out.alarm_times.push_back(*alarm);
            if (stop_at_first) break;
        }
    }
    if (!out.alarm_times.empty()) out.detection_time = out.alarm_times.front();
    return out;
}

} // namespace

DetectionOutcome mw_detect(const DivergenceSeries& series, const MwConfig& cfg) {
    return run(series, cfg, true);
}

DetectionOutcome mw_detect_multi(const DivergenceSeries& series, const MwConfig& cfg) {
    return run(series, cfg, false);
}

} // namespace driftwatch
