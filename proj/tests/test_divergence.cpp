#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "driftwatch/divergence.hpp"
#include "driftwatch/errors.hpp"
#include "driftwatch/rng.hpp"

using namespace driftwatch;

TEST_CASE("batch_average is the component-wise mean") {
    FeatureBatch batch{{{1, 2}, {3, 4}}, 0};
    const std::vector<double> mean = batch_average(batch);
    CHECK(mean == std::vector<double>{2, 3});

    FeatureBatch single{{{7, 8, 9}}, 1};
    CHECK(batch_average(single) == std::vector<double>{7, 8, 9});
}

TEST_CASE("batch_average is independent of vector order within the batch") {
    rng::Generator gen(3);
    FeatureBatch batch;
    for (int i = 0; i < 16; ++i) {
        std::vector<double> v(8);
        for (double& x : v) x = gen.normal();
        batch.vectors.push_back(v);
    }
    // Oracle: recompute after sorting the vectors lexicographically.
    FeatureBatch sorted_batch = batch;
    std::sort(sorted_batch.vectors.begin(), sorted_batch.vectors.end());
    const std::vector<double> a = batch_average(batch);
    const std::vector<double> b = batch_average(sorted_batch);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
    }
}

TEST_CASE("batch_average error paths") {
    CHECK_THROWS_AS(batch_average(FeatureBatch{}), EmptyBatch);
    FeatureBatch ragged{{{1, 2}, {1, 2, 3}}, 0};
    CHECK_THROWS_AS(batch_average(ragged), DimensionMismatch);
}

TEST_CASE("cosine_distance spans [0, 2]") {
    const std::vector<double> ones{1, 1, 1};
    CHECK(cosine_distance(ones, ones) == doctest::Approx(0.0));
    CHECK(cosine_distance(std::vector<double>{1, 0}, std::vector<double>{0, 1}) ==
          doctest::Approx(1.0));
    CHECK(cosine_distance(std::vector<double>{1, 0}, std::vector<double>{-1, 0}) ==
          doctest::Approx(2.0));
    CHECK_THROWS_AS(cosine_distance(std::vector<double>{0, 0}, ones), ZeroVector);
    CHECK_THROWS_AS(cosine_distance(std::vector<double>{1}, ones), DimensionMismatch);
}

TEST_CASE("kl_divergence against hand evaluation") {
    // Identical after normalization, any positive scale.
    for (double k : {1.0, 3.5, 1e6}) {
        const std::vector<double> u{0.25 * k, 0.75 * k};
        const std::vector<double> v{0.25, 0.75};
        CHECK(kl_divergence(u, v) == doctest::Approx(0.0).epsilon(1e-9));
    }

    const std::vector<double> p{0.5, 0.5};
    const std::vector<double> q{0.9, 0.1};
    const double expected = 0.5 * std::log(0.5 / 0.9) + 0.5 * std::log(0.5 / 0.1);
    CHECK(kl_divergence(p, q) == doctest::Approx(expected).epsilon(1e-6));
    CHECK(expected == doctest::Approx(0.5108).epsilon(1e-3));

    // Asymmetry witnessed.
    CHECK(kl_divergence(p, q) != doctest::Approx(kl_divergence(q, p)).epsilon(1e-6));

    CHECK_THROWS_AS(kl_divergence(std::vector<double>{0, -1}, p), NonNormalizable);
}

TEST_CASE("build_series matches per-batch hand calculation") {
    BaselineProfile baseline{{1, 0}};
    std::vector<FeatureBatch> batches{
        {{{1, 0}, {1, 0}}, 0},
        {{{0, 1}, {0, 1}}, 1},
        {{{1, 1}, {1, 1}}, 2},
    };
    const SeriesOptions opts{Metric::Cosine, KlOrder::BatchVsBaseline, false};
    const DivergenceSeries series = build_series(baseline, batches, opts);
    REQUIRE(series.length() == 3);
    CHECK(series.values[0] == doctest::Approx(0.0));
    CHECK(series.values[1] == doctest::Approx(1.0));
    CHECK(series.values[2] == doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)));
    CHECK(series.metric == Metric::Cosine);
}

TEST_CASE("build_series on a shifted population rises after the changepoint") {
    rng::Generator gen(77);
    BaselineProfile baseline{{1.0, 1.0, 1.0, 1.0}};
    std::vector<FeatureBatch> batches;
    for (int t = 1; t <= 120; ++t) {
        FeatureBatch batch;
        batch.batch_index = t - 1;
        const bool drifted = t >= 60;
        for (int i = 0; i < 16; ++i) {
            std::vector<double> v(4);
            for (std::size_t d = 0; d < v.size(); ++d) {
                v[d] = 1.0 + 0.05 * gen.normal() + (drifted && d < 2 ? 1.0 : 0.0);
            }
            batch.vectors.push_back(v);
        }
        batches.push_back(batch);
    }
    const SeriesOptions opts{Metric::Cosine, KlOrder::BatchVsBaseline, false};
    const DivergenceSeries series = build_series(baseline, batches, opts);
    double pre_max = 0.0, post_min = 1e9;
    for (int t = 1; t <= 120; ++t) {
        const double v = series.values[t - 1];
        if (t < 60) pre_max = std::max(pre_max, v);
        else post_min = std::min(post_min, v);
    }
    CHECK(post_min > pre_max); // low before t_s, clearly higher after
}

TEST_CASE("non-negativity and KLD scale invariance of the pipeline") {
    rng::Generator gen(15);
    BaselineProfile baseline{{0.4, 0.1, 0.3, 0.2}};
    std::vector<FeatureBatch> batches;
    for (int t = 0; t < 20; ++t) {
        FeatureBatch batch{{}, t};
        for (int i = 0; i < 8; ++i) {
            std::vector<double> v(4);
            for (double& x : v) x = std::fabs(gen.normal()) + 0.01;
            batch.vectors.push_back(v);
        }
        batches.push_back(batch);
    }
    const SeriesOptions opts{Metric::Kld, KlOrder::BatchVsBaseline, false};
    const DivergenceSeries series = build_series(baseline, batches, opts);
    for (double v : series.values) CHECK(v >= -1e-12);

    // Scale every vector and the baseline by a common positive factor.
    const double factor = 37.5;
    BaselineProfile scaled_baseline = baseline;
    for (double& x : scaled_baseline.mean_vector) x *= factor;
    std::vector<FeatureBatch> scaled_batches = batches;
    for (auto& batch : scaled_batches) {
        for (auto& vec : batch.vectors) {
            for (double& x : vec) x *= factor;
        }
    }
    const DivergenceSeries scaled = build_series(scaled_baseline, scaled_batches, opts);
    for (int i = 0; i < series.length(); ++i) {
        CHECK(std::fabs(series.values[i] - scaled.values[i]) <= 1e-10);
    }
}

TEST_CASE("kl argument order switch changes the value") {
    BaselineProfile baseline{{0.9, 0.1}};
    std::vector<FeatureBatch> batches{{{{0.5, 0.5}}, 0}};
    SeriesOptions forward{Metric::Kld, KlOrder::BatchVsBaseline, false};
    SeriesOptions reverse{Metric::Kld, KlOrder::BaselineVsBatch, false};
    const double f = build_series(baseline, batches, forward).values[0];
    const double r = build_series(baseline, batches, reverse).values[0];
    CHECK(f != doctest::Approx(r).epsilon(1e-9));
    CHECK(f == doctest::Approx(kl_divergence(std::vector<double>{0.5, 0.5},
                                             std::vector<double>{0.9, 0.1}))
                   .epsilon(1e-9));
}

TEST_CASE("consecutive mode compares neighbouring batches") {
    BaselineProfile baseline{{1, 0}};
    std::vector<FeatureBatch> batches{
        {{{1, 0}}, 0},
        {{{0, 1}}, 1},
        {{{0, 1}}, 2},
    };
    SeriesOptions opts{Metric::Cosine, KlOrder::BatchVsBaseline, true};
    const DivergenceSeries series = build_series(baseline, batches, opts);
    REQUIRE(series.length() == 2);
    CHECK(series.values[0] == doctest::Approx(1.0));
    CHECK(series.values[1] == doctest::Approx(0.0));

    std::vector<FeatureBatch> single{{{{1, 0}}, 0}};
    CHECK_THROWS_AS(build_series(baseline, single, opts), SeriesTooShort);
}

TEST_CASE("build_series propagates dimension mismatches") {
    BaselineProfile baseline{{1, 0, 0}};
    std::vector<FeatureBatch> batches{{{{1, 0}}, 0}};
    SeriesOptions opts{Metric::Cosine, KlOrder::BatchVsBaseline, false};
    CHECK_THROWS_AS(build_series(baseline, batches, opts), DimensionMismatch);
}
