#include "driftwatch/divergence.hpp"

#include <cmath>

#include "driftwatch/errors.hpp"

namespace driftwatch {

namespace {

constexpr double kSmoothingEpsilon = 1e-9;

void require_same_dim(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size() || u.empty()) {
        throw DimensionMismatch("vectors must share a dimensionality >= 1");
    }
}

// Clamp negatives, normalize to the simplex, then epsilon-smooth. Normalizing
// before smoothing keeps the result invariant under a common positive scale.
std::vector<double> to_distribution(std::span<const double> v) {
    std::vector<double> p(v.begin(), v.end());
    double sum = 0.0;
    for (double& x : p) {
        if (!std::isfinite(x)) throw DataError("non-finite feature value");
        if (x < 0.0) x = 0.0;
        sum += x;
    }
    if (sum <= 0.0) {
        throw NonNormalizable("vector has no positive mass after clamping");
    }
    const double denom = 1.0 + static_cast<double>(p.size()) * kSmoothingEpsilon;
    for (double& x : p) x = (x / sum + kSmoothingEpsilon) / denom;
    return p;
}

} // namespace

std::string to_string(Metric m) {
    return m == Metric::Kld ? "kld" : "cosine";
}

Metric metric_from_string(const std::string& name) {
    if (name == "kld") return Metric::Kld;
    if (name == "cosine") return Metric::Cosine;
    throw DataError("unknown metric name: " + name);
}

std::vector<double> batch_average(const FeatureBatch& batch) {
    if (batch.vectors.empty()) throw EmptyBatch("batch has no vectors");
    const std::size_t dim = batch.vectors.front().size();
    if (dim == 0) throw DimensionMismatch("feature vectors must have dimension >= 1");
    std::vector<double> mean(dim, 0.0);
    for (const auto& vec : batch.vectors) {
        if (vec.size() != dim) {
            throw DimensionMismatch("feature vectors in a batch differ in dimension");
        }
        for (std::size_t i = 0; i < dim; ++i) {
            if (!std::isfinite(vec[i])) throw DataError("non-finite feature value");
            mean[i] += vec[i];
        }
    }
    const auto count = static_cast<double>(batch.vectors.size());
    for (double& x : mean) x /= count;
    return mean;
}

double cosine_distance(std::span<const double> u, std::span<const double> v) {
    require_same_dim(u, v);
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) throw ZeroVector("cosine distance of a zero vector");
    return 1.0 - dot / (std::sqrt(nu) * std::sqrt(nv));
}

double kl_divergence(std::span<const double> u, std::span<const double> v) {
    require_same_dim(u, v);
    const std::vector<double> p = to_distribution(u);
    const std::vector<double> q = to_distribution(v);
    double kl = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0) kl += p[i] * std::log(p[i] / q[i]);
    }
    return kl;
}

DivergenceSeries build_series(const BaselineProfile& baseline,
                              std::span<const FeatureBatch> batches,
                              const SeriesOptions& options) {
    if (batches.empty()) throw EmptyBatch("no batches supplied");
    const auto metric_of = [&](std::span<const double> ref,
                               std::span<const double> batch_mean) {
        if (options.metric == Metric::Cosine) return cosine_distance(ref, batch_mean);
        return options.kl_order == KlOrder::BatchVsBaseline
                   ? kl_divergence(batch_mean, ref)
                   : kl_divergence(ref, batch_mean);
    };

    DivergenceSeries out;
    out.metric = options.metric;
    if (options.consecutive) {
        if (batches.size() < 2) {
            throw SeriesTooShort("consecutive mode needs at least 2 batches");
        }
        std::vector<double> prev = batch_average(batches[0]);
        for (std::size_t t = 1; t < batches.size(); ++t) {
            std::vector<double> cur = batch_average(batches[t]);
            out.values.push_back(metric_of(prev, cur));
            prev = std::move(cur);
        }
        return out;
    }

    if (baseline.mean_vector.empty()) {
        throw DimensionMismatch("baseline vector must have dimension >= 1");
    }
    for (const FeatureBatch& batch : batches) {
        const std::vector<double> mean = batch_average(batch);
        if (mean.size() != baseline.mean_vector.size()) {
            throw DimensionMismatch("batch dimension does not match baseline");
        }
        out.values.push_back(metric_of(baseline.mean_vector, mean));
    }
    return out;
}

} // namespace driftwatch
