#include "driftwatch/two_sample.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "driftwatch/errors.hpp"
#include "detail/rank_stats.hpp"
#include "detail/t_dist.hpp"

namespace driftwatch {

namespace {

void require_samples(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) {
        throw InsufficientSample("two-sample test needs at least 2 points per sample");
    }
    for (double v : a) {
        if (!std::isfinite(v)) throw DataError("non-finite value in sample");
    }
    for (double v : b) {
        if (!std::isfinite(v)) throw DataError("non-finite value in sample");
    }
}

double normal_two_sided_p(double z) {
    return std::erfc(std::fabs(z) / std::sqrt(2.0));
}

// Exact two-sided MW p-value by enumerating every assignment of n_a of the
// pooled mid-ranks to the first sample: p = 2 * min(P(U <= u), P(U >= u)),
// capped at 1. Feasible for pooled sizes <= kMwExactLimit (C(20,10) = 184756).
double mw_exact_p(const std::vector<std::int64_t>& two_ranks, int n_a,
                  std::int64_t observed_two_u) {
    const int n = static_cast<int>(two_ranks.size());
    const std::int64_t base = static_cast<std::int64_t>(n_a) * (n_a + 1);
    std::vector<char> pick(n, 0);
    std::fill(pick.begin(), pick.begin() + n_a, 1);
    std::sort(pick.begin(), pick.end(), std::greater<char>());
    std::uint64_t count_le = 0, count_ge = 0, total = 0;
    do {
        std::int64_t two_ranksum = 0;
        for (int i = 0; i < n; ++i) {
            if (pick[i]) two_ranksum += two_ranks[i];
        }
        const std::int64_t two_u = two_ranksum - base;
        if (two_u <= observed_two_u) ++count_le;
        if (two_u >= observed_two_u) ++count_ge;
        ++total;
    } while (std::prev_permutation(pick.begin(), pick.end()));
    const double tail = static_cast<double>(std::min(count_le, count_ge)) /
                        static_cast<double>(total);
    return std::min(1.0, 2.0 * tail);
}

} // namespace

std::string to_string(Statistic s) {
    switch (s) {
        case Statistic::MannWhitney: return "mw";
        case Statistic::CramerVonMises: return "cvm";
        case Statistic::KolmogorovSmirnov: return "ks";
        case Statistic::StudentT: return "student";
    }
    throw std::logic_error("unknown statistic");
}

Statistic statistic_from_string(const std::string& name) {
    if (name == "mw") return Statistic::MannWhitney;
    if (name == "cvm") return Statistic::CramerVonMises;
    if (name == "ks") return Statistic::KolmogorovSmirnov;
    if (name == "student") return Statistic::StudentT;
    throw DataError("unknown statistic name: " + name);
}

TwoSampleResult mann_whitney(std::span<const double> a, std::span<const double> b) {
    require_samples(a, b);
    const auto n = static_cast<std::int64_t>(a.size());
    const auto m = static_cast<std::int64_t>(b.size());

    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    const detail::PooledRanks ranks = detail::pool_ranks(pooled);

    std::int64_t two_ranksum_a = 0;
    for (std::int64_t i = 0; i < n; ++i) two_ranksum_a += ranks.two_rank[i];
    const std::int64_t two_u = two_ranksum_a - n * (n + 1);
    const double u = detail::mw_u_from_two_ranksum(two_ranksum_a, n);

    TwoSampleResult out;
    out.statistic = u;
    out.normalized = detail::mw_normalized(u, n, m, ranks.tie_sum);

    if (n + m <= kMwExactLimit) {
        out.p_value = mw_exact_p(ranks.two_rank, static_cast<int>(n), two_u);
    } else {
        // Normal approximation with tie correction and continuity correction.
        const double sd = detail::mw_null_sd(n, m, ranks.tie_sum);
        if (sd == 0.0) {
            out.p_value = 1.0;
        } else {
            const double centered = u - 0.5 * static_cast<double>(n) * static_cast<double>(m);
            double z = 0.0;
            if (centered > 0.0) z = (centered - 0.5) / sd;
            else if (centered < 0.0) z = (centered + 0.5) / sd;
            out.p_value = normal_two_sided_p(z);
        }
    }
    return out;
}

TwoSampleResult cramer_von_mises(std::span<const double> a, std::span<const double> b) {
    require_samples(a, b);
    const auto n = static_cast<std::int64_t>(a.size());
    const auto m = static_cast<std::int64_t>(b.size());

    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    const detail::PooledRanks ranks = detail::pool_ranks(pooled);

    std::vector<std::int64_t> count_a(ranks.group_count(), 0);
    for (std::int64_t i = 0; i < n; ++i) ++count_a[ranks.group[i]];

    std::int64_t p1 = 0, p2 = 0, p3 = 0, cum_a = 0;
    for (int g = 0; g < ranks.group_count(); ++g) {
        cum_a += count_a[g];
        const std::int64_t size = ranks.group_size[g];
        const std::int64_t end = ranks.group_end[g];
        p1 += size * cum_a * cum_a;
        p2 += size * cum_a * end;
        p3 += size * end * end;
    }

    TwoSampleResult out;
    out.statistic = detail::cvm_statistic(p1, p2, p3, n, m);
    out.normalized = detail::cvm_normalized(out.statistic, n, m);
    return out;
}

TwoSampleResult kolmogorov_smirnov(std::span<const double> a, std::span<const double> b) {
    require_samples(a, b);
    const auto n = static_cast<std::int64_t>(a.size());
    const auto m = static_cast<std::int64_t>(b.size());
    const std::int64_t total = n + m;

    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    const detail::PooledRanks ranks = detail::pool_ranks(pooled);

    std::vector<std::int64_t> count_a(ranks.group_count(), 0);
    for (std::int64_t i = 0; i < n; ++i) ++count_a[ranks.group[i]];

    std::int64_t best = 0, cum_a = 0;
    for (int g = 0; g < ranks.group_count(); ++g) {
        cum_a += count_a[g];
        const std::int64_t diff = std::llabs(total * cum_a - n * ranks.group_end[g]);
        best = std::max(best, diff);
    }

    TwoSampleResult out;
    out.statistic = detail::ks_statistic(best, n, m);
    out.normalized = detail::ks_normalized(out.statistic, n, m);
    return out;
}

TwoSampleResult student_t(std::span<const double> a, std::span<const double> b) {
    require_samples(a, b);
    const auto n = static_cast<std::int64_t>(a.size());
    const auto m = static_cast<std::int64_t>(b.size());

    double sum_a = 0.0, sumsq_a = 0.0, sum_b = 0.0, sumsq_b = 0.0;
    for (double v : a) {
        sum_a += v;
        sumsq_a += v * v;
    }
    for (double v : b) {
        sum_b += v;
        sumsq_b += v * v;
    }
    const detail::StudentParts parts =
        detail::student_parts(sum_a, sumsq_a, n, sum_b, sumsq_b, m);

    TwoSampleResult out;
    if (parts.degenerate) {
        if (parts.means_differ) {
            const double sign = (sum_a / static_cast<double>(n) >
                                 sum_b / static_cast<double>(m))
                                    ? 1.0
                                    : -1.0;
            out.statistic = sign * std::numeric_limits<double>::infinity();
            out.normalized = out.statistic;
            out.p_value = 0.0;
        } else {
            out.statistic = 0.0;
            out.normalized = 0.0;
            out.p_value = 1.0;
        }
        return out;
    }
    out.statistic = parts.t;
    out.normalized = detail::student_normalized(parts.t, n, m);
    out.p_value = detail::student_two_sided_p(parts.t, static_cast<double>(n + m - 2));
    return out;
}

TwoSampleResult two_sample_test(Statistic s, std::span<const double> a,
                                std::span<const double> b) {
    switch (s) {
        case Statistic::MannWhitney: return mann_whitney(a, b);
        case Statistic::CramerVonMises: return cramer_von_mises(a, b);
        case Statistic::KolmogorovSmirnov: return kolmogorov_smirnov(a, b);
        case Statistic::StudentT: return student_t(a, b);
    }
    throw std::logic_error("unknown statistic");
}

} // namespace driftwatch
