#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace driftwatch {

enum class Metric { Kld, Cosine };

std::string to_string(Metric m);
Metric metric_from_string(const std::string& name);

struct FeatureBatch {
    std::vector<std::vector<double>> vectors; // one embedding per image
    int batch_index = 0;
};

struct BaselineProfile {
    std::vector<double> mean_vector;
};

struct DivergenceSeries {
    std::vector<double> values; // x_1..x_N, 1-based time = position + 1
    std::optional<Metric> metric;

    int length() const { return static_cast<int>(values.size()); }
};

// Component-wise mean of the batch vectors; order of vectors is irrelevant.
std::vector<double> batch_average(const FeatureBatch& batch);

// 1 - cos(u, v), in [0, 2].
double cosine_distance(std::span<const double> u, std::span<const double> v);

// KL(P || Q) where P and Q are the simplex-normalized, epsilon-smoothed
// versions of u and v: negatives clamp to 0, the vector is normalized to sum
// one, then 1e-9 is added to every coordinate and the sum renormalized.
double kl_divergence(std::span<const double> u, std::span<const double> v);

enum class KlOrder { BatchVsBaseline, BaselineVsBatch };

struct SeriesOptions {
    Metric metric = Metric::Cosine;
    KlOrder kl_order = KlOrder::BatchVsBaseline;
    // When set, x_t compares batch t against batch t-1 instead of against
    // the fixed baseline (series is one shorter than the batch list).
    bool consecutive = false;
};

DivergenceSeries build_series(const BaselineProfile& baseline,
                              std::span<const FeatureBatch> batches,
                              const SeriesOptions& options);

} // namespace driftwatch
