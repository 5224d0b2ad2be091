#include "driftwatch/drift_sim.hpp"

#include <cmath>

#include "driftwatch/errors.hpp"
#include "driftwatch/rng.hpp"
#include "detail/t_dist.hpp"

namespace driftwatch {

ContaminationSchedule ContaminationSchedule::step(int n_windows, int t_start) {
    ContaminationSchedule s;
    s.n_windows = n_windows;
    s.t_start = t_start;
    s.t_end = t_start;
    s.kind = Kind::Step;
    s.p.assign(static_cast<std::size_t>(n_windows - t_start + 1), 1.0);
    s.validate();
    return s;
}

ContaminationSchedule ContaminationSchedule::linear(int n_windows, int t_start,
                                                    int t_end) {
    ContaminationSchedule s;
    s.n_windows = n_windows;
    s.t_start = t_start;
    s.t_end = t_end;
    s.kind = Kind::Linear;
    const int ramp = t_end - t_start + 1;
    for (int j = 1; j <= n_windows - t_start + 1; ++j) {
        s.p.push_back(j <= ramp ? static_cast<double>(j) / ramp : 1.0);
    }
    s.validate();
    return s;
}

ContaminationSchedule ContaminationSchedule::custom(int n_windows, int t_start,
                                                    int t_end, std::vector<double> p) {
    ContaminationSchedule s;
    s.n_windows = n_windows;
    s.t_start = t_start;
    s.t_end = t_end;
    s.kind = Kind::Custom;
    s.p = std::move(p);
    s.validate();
    return s;
}

double ContaminationSchedule::proportion_at(int t) const {
    if (t < t_start) return 0.0;
    const auto j = static_cast<std::size_t>(t - t_start);
    if (j >= p.size()) {
        throw ScheduleTooShort("schedule has no proportion for window " +
                               std::to_string(t));
    }
    return p[j];
}

void ContaminationSchedule::validate() const {
    if (n_windows < 1 || t_start < 1 || t_start > n_windows) {
        throw DataError("schedule needs 1 <= t_start <= n_windows");
    }
    if (t_end < t_start || t_end > n_windows) {
        throw DataError("schedule needs t_start <= t_end <= n_windows");
    }
    if (p.size() != static_cast<std::size_t>(n_windows - t_start + 1)) {
        throw ScheduleTooShort("schedule must cover windows t_start..n_windows");
    }
    for (double v : p) {
        if (!(v > 0.0 && v <= 1.0)) throw DataError("proportions must lie in (0,1]");
    }
}

std::string to_string(ContaminationSchedule::Kind kind) {
    switch (kind) {
        case ContaminationSchedule::Kind::Step: return "step";
        case ContaminationSchedule::Kind::Linear: return "linear";
        case ContaminationSchedule::Kind::Custom: return "custom";
    }
    throw std::logic_error("unknown schedule kind");
}

ContaminationSchedule::Kind schedule_kind_from_string(const std::string& name) {
    if (name == "step") return ContaminationSchedule::Kind::Step;
    if (name == "linear") return ContaminationSchedule::Kind::Linear;
    if (name == "custom") return ContaminationSchedule::Kind::Custom;
    throw DataError("unknown schedule kind: " + name);
}

namespace {

double draw(const DistributionSpec& dist, rng::Generator& gen) {
    switch (dist.family) {
        case DistributionSpec::Family::Normal: return gen.normal(dist.a, dist.b);
        case DistributionSpec::Family::Uniform: return gen.uniform(dist.a, dist.b);
    }
    throw std::logic_error("unknown distribution family");
}

} // namespace

SyntheticSeries synth_divergence_series(const StreamSpec& spec) {
    spec.schedule.validate();
    if (spec.batch_size < 1) throw DataError("batch_size must be >= 1");

    rng::Generator gen(spec.seed);
    SyntheticSeries out;
    out.schedule = spec.schedule;
    out.series.values.reserve(static_cast<std::size_t>(spec.schedule.n_windows));
    for (int t = 1; t <= spec.schedule.n_windows; ++t) {
        const double proportion = spec.schedule.proportion_at(t);
        double sum = 0.0;
        for (int i = 0; i < spec.batch_size; ++i) {
            const bool drifted = proportion > 0.0 && gen.uniform01() < proportion;
            sum += draw(drifted ? spec.drift_dist : spec.null_dist, gen);
        }
        out.series.values.push_back(sum / spec.batch_size);
    }
    return out;
}

std::vector<PeekingRow> peeking_experiment(int n, int r, std::span<const double> alphas,
                                           int min_prefix, std::uint64_t seed) {
    if (min_prefix < 2) throw DataError("min_prefix must be >= 2");
    if (n < min_prefix) throw DataError("n must be >= min_prefix");
    if (r < 1) throw DataError("r must be >= 1");

    rng::Generator gen(seed);
    std::vector<std::int64_t> hit_counts(alphas.size(), 0); // draws with V >= 1
    std::vector<std::int64_t> v_totals(alphas.size(), 0);

    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int rep = 0; rep < r; ++rep) {
        for (double& x : xs) x = gen.normal();
        std::vector<int> v(alphas.size(), 0);
        double sum = 0.0, sumsq = 0.0;
        int j = 0;
        for (; j < min_prefix - 1; ++j) {
            sum += xs[j];
            sumsq += xs[j] * xs[j];
        }
        for (; j < n; ++j) {
            sum += xs[j];
            sumsq += xs[j] * xs[j];
            const int len = j + 1;
            const double mean = sum / len;
            const double var = (sumsq - sum * mean) / (len - 1);
            double p = 1.0;
            if (var > 0.0) {
                const double t = mean / std::sqrt(var / len);
                p = detail::student_two_sided_p(t, static_cast<double>(len - 1));
            }
            for (std::size_t a = 0; a < alphas.size(); ++a) {
                if (p < alphas[a]) ++v[a];
            }
        }
        for (std::size_t a = 0; a < alphas.size(); ++a) {
            if (v[a] > 0) ++hit_counts[a];
            v_totals[a] += v[a];
        }
    }

    std::vector<PeekingRow> rows;
    for (std::size_t a = 0; a < alphas.size(); ++a) {
        rows.push_back({alphas[a],
                        static_cast<double>(hit_counts[a]) / r,
                        static_cast<double>(v_totals[a]) / r});
    }
    return rows;
}

double nonoverlap_inflation(int w, double alpha) {
    if (w < 0) throw DataError("window count must be >= 0");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DataError("alpha must be in [0,1]");
    return 1.0 - std::pow(1.0 - alpha, w);
}

} // namespace driftwatch
