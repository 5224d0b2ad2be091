#pragma once

// Shared rank bookkeeping for the two-sample statistics. Everything that can
// be carried as integers stays integral until the final division so that the
// streaming split scanner and a from-scratch recomputation agree bitwise.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

namespace driftwatch::detail {

// Mid-ranks and tie groups of a pooled sample. two_rank holds 2x the mid-rank
// so ties stay on an integer lattice; groups are indexed in ascending value
// order and group_end is the 1-based rank of a group's last member.
struct PooledRanks {
    std::vector<std::int64_t> two_rank; // per element, original order
    std::vector<std::int32_t> group;    // per element, original order
    std::vector<std::int64_t> group_end;
    std::vector<std::int64_t> group_size;
    std::int64_t tie_sum = 0; // sum of (g^3 - g) over tie-group sizes
    int n_total = 0;

    int group_count() const { return static_cast<int>(group_end.size()); }
};

inline PooledRanks pool_ranks(std::span<const double> values) {
    const int n = static_cast<int>(values.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int lhs, int rhs) {
        if (values[lhs] != values[rhs]) return values[lhs] < values[rhs];
        return lhs < rhs;
    });

    PooledRanks out;
    out.n_total = n;
    out.two_rank.resize(n);
    out.group.resize(n);
    int i = 0;
    while (i < n) {
        int j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const std::int64_t size = j - i + 1;
        const std::int64_t two_mid = i + j + 2; // (i+1) + (j+1)
        const auto gid = static_cast<std::int32_t>(out.group_end.size());
        for (int k = i; k <= j; ++k) {
            out.two_rank[order[k]] = two_mid;
            out.group[order[k]] = gid;
        }
        out.group_end.push_back(j + 1);
        out.group_size.push_back(size);
        out.tie_sum += size * size * size - size;
        i = j + 1;
    }
    return out;
}

// ---- Mann-Whitney -----------------------------------------------------------

// U of the first sample from 2x its rank sum: U = R_a - n(n+1)/2.
inline double mw_u_from_two_ranksum(std::int64_t two_ranksum_a, std::int64_t n_a) {
    return 0.5 * static_cast<double>(two_ranksum_a - n_a * (n_a + 1));
}

// Tie-corrected null standard deviation of U for sample sizes (n, m).
inline double mw_null_sd(std::int64_t n, std::int64_t m, std::int64_t tie_sum) {
    const auto total = static_cast<double>(n + m);
    const double nm = static_cast<double>(n) * static_cast<double>(m);
    const double correction =
        static_cast<double>(tie_sum) / (total * (total - 1.0));
    const double var = nm * ((total + 1.0) - correction) / 12.0;
    return var > 0.0 ? std::sqrt(var) : 0.0;
}

inline double mw_normalized(double u, std::int64_t n, std::int64_t m,
                            std::int64_t tie_sum) {
    const double sd = mw_null_sd(n, m, tie_sum);
    if (sd == 0.0) return 0.0;
    const double mean = 0.5 * static_cast<double>(n) * static_cast<double>(m);
    return (u - mean) / sd;
}

// ---- Cramer-von Mises -------------------------------------------------------

// T = sum over tie groups of size s_g ending at pooled rank b_g, with a_g
// first-sample members at or below the group value:
//   T = sum_g s_g * (N*a_g - n*b_g)^2 / (N^2 * n * m)
// Carried as the integer parts p1 = sum s_g*a_g^2, p2 = sum s_g*a_g*b_g,
// p3 = sum s_g*b_g^2 (each fits int64 up to N ~ 1e5); the final combination
// N^2*p1 - 2*N*n*p2 + n^2*p3 needs 128-bit headroom.
inline double cvm_statistic(std::int64_t p1, std::int64_t p2, std::int64_t p3,
                            std::int64_t n, std::int64_t m) {
    const std::int64_t total = n + m;
    const __int128 numerator = static_cast<__int128>(total) * total * p1 -
                               static_cast<__int128>(2) * total * n * p2 +
                               static_cast<__int128>(n) * n * p3;
    const auto total_d = static_cast<double>(total);
    return static_cast<double>(numerator) /
           (total_d * total_d * static_cast<double>(n) * static_cast<double>(m));
}

// Exact permutation-null moments of T as functions of the sample sizes.
inline double cvm_null_mean(std::int64_t n, std::int64_t m) {
    const auto total = static_cast<double>(n + m);
    return (total + 1.0) / (6.0 * total);
}

inline double cvm_null_var(std::int64_t n, std::int64_t m) {
    const auto nn = static_cast<double>(n);
    const auto mm = static_cast<double>(m);
    const double total = nn + mm;
    const double core = 4.0 * mm * nn * total - 3.0 * (mm * mm + nn * nn) - 2.0 * mm * nn;
    return (total + 1.0) * core / (45.0 * total * total * 4.0 * mm * nn);
}

inline double cvm_normalized(double t_stat, std::int64_t n, std::int64_t m) {
    const double var = cvm_null_var(n, m);
    if (var <= 0.0) return 0.0;
    return (t_stat - cvm_null_mean(n, m)) / std::sqrt(var);
}

// ---- Kolmogorov-Smirnov -----------------------------------------------------

// Null moments of the scaled statistic K = D * sqrt(n*m/(n+m)), estimated once
// by permutation Monte Carlo: 1e6 label shuffles at n = m = 100 with
// mt19937_64 seed 0x4b534d4f4d454e54.
inline constexpr double kKsScaledMean = 0.834278450864;
inline constexpr double kKsScaledSd = 0.260317059409;

// D from the integer sweep maximum max_g |N*a_g - n*b_g|.
inline double ks_statistic(std::int64_t numerator, std::int64_t n, std::int64_t m) {
    return static_cast<double>(numerator) /
           (static_cast<double>(n) * static_cast<double>(m));
}

inline double ks_normalized(double d_stat, std::int64_t n, std::int64_t m) {
    const auto total = static_cast<double>(n + m);
    const double scaled =
        d_stat * std::sqrt(static_cast<double>(n) * static_cast<double>(m) / total);
    return (scaled - kKsScaledMean) / kKsScaledSd;
}

// ---- Student ----------------------------------------------------------------

// Pooled-variance two-sample t from running sums; kept in one place so every
// caller shares the arithmetic. Returns (t, pooled variance).
struct StudentParts {
    double t = 0.0;
    double pooled_var = 0.0;
    bool degenerate = false; // pooled variance zero
    bool means_differ = false;
};

inline StudentParts student_parts(double sum_a, double sumsq_a, std::int64_t n,
                                  double sum_b, double sumsq_b, std::int64_t m) {
    StudentParts out;
    const double mean_a = sum_a / static_cast<double>(n);
    const double mean_b = sum_b / static_cast<double>(m);
    const double ss_a = sumsq_a - sum_a * mean_a;
    const double ss_b = sumsq_b - sum_b * mean_b;
    const auto dof = static_cast<double>(n + m - 2);
    double pooled = (ss_a + ss_b) / dof;
    if (pooled < 0.0) pooled = 0.0;
    out.pooled_var = pooled;
    if (pooled == 0.0) {
        out.degenerate = true;
        out.means_differ = mean_a != mean_b;
        out.t = 0.0;
        return out;
    }
    const double scale = std::sqrt(pooled * (1.0 / static_cast<double>(n) +
                                             1.0 / static_cast<double>(m)));
    out.t = (mean_a - mean_b) / scale;
    return out;
}

// A t with d degrees of freedom has null variance d/(d-2); divide it out so
// the split scanner compares like with like across unequal splits.
inline double student_normalized(double t, std::int64_t n, std::int64_t m) {
    const auto dof = static_cast<double>(n + m - 2);
    if (dof > 2.0) return t / std::sqrt(dof / (dof - 2.0));
    return t;
}

} // namespace driftwatch::detail
