#include "driftwatch/split_stats.hpp"

#include <cmath>
#include <cstdint>

#include "driftwatch/errors.hpp"
#include "detail/rank_stats.hpp"

namespace driftwatch {

namespace {

// Prefix-sum Fenwick tree over tie-group ids.
class Fenwick {
public:
    explicit Fenwick(int n) : tree_(n + 1, 0) {}

    void add(int idx, std::int64_t delta) {
        for (int i = idx + 1; i < static_cast<int>(tree_.size()); i += i & -i) {
            tree_[i] += delta;
        }
    }

    // Sum over [0, idx]; idx < 0 yields 0.
    std::int64_t prefix(int idx) const {
        std::int64_t s = 0;
        for (int i = idx + 1; i > 0; i -= i & -i) s += tree_[i];
        return s;
    }

private:
    std::vector<std::int64_t> tree_;
};

void require_scan(std::span<const double> values, int min_segment) {
    if (min_segment < 1) throw DataError("min_segment must be >= 1");
    if (static_cast<int>(values.size()) < 2 * min_segment) {
        throw SeriesTooShort("split scan needs at least 2*min_segment observations");
    }
}

struct MaxTracker {
    double best = -std::numeric_limits<double>::infinity();
    int tau = 0;

    void offer(double w, int k) {
        if (w > best) {
            best = w;
            tau = k;
        }
    }
};

SplitScanResult scan_mann_whitney(std::span<const double> values, int min_segment) {
    const int t = static_cast<int>(values.size());
    const detail::PooledRanks ranks = detail::pool_ranks(values);
    MaxTracker tracker;
    std::int64_t two_ranksum = 0;
    for (int k = 1; k <= t - min_segment; ++k) {
        two_ranksum += ranks.two_rank[k - 1];
        if (k < min_segment) continue;
        const double u = detail::mw_u_from_two_ranksum(two_ranksum, k);
        const double z = detail::mw_normalized(u, k, t - k, ranks.tie_sum);
        tracker.offer(std::fabs(z), k);
    }
    return {tracker.best, tracker.tau};
}

SplitScanResult scan_cramer_von_mises(std::span<const double> values, int min_segment) {
    const int t = static_cast<int>(values.size());
    const detail::PooledRanks ranks = detail::pool_ranks(values);
    const int groups = ranks.group_count();

    // Constant pieces over the sweep.
    std::int64_t p3 = 0;
    std::vector<std::int64_t> suffix_mb(groups + 1, 0); // sum_{h>=g} size_h * end_h
    for (int g = groups - 1; g >= 0; --g) {
        suffix_mb[g] = suffix_mb[g + 1] + ranks.group_size[g] * ranks.group_end[g];
        p3 += ranks.group_size[g] * ranks.group_end[g] * ranks.group_end[g];
    }
    const auto suffix_m = [&](int g) {
        // Groups are contiguous in rank space: members at ranks > end_g - size_g.
        return static_cast<std::int64_t>(t) - (ranks.group_end[g] - ranks.group_size[g]);
    };

    // Grow the left segment one element at a time. A_g counts left-segment
    // members with value <= the g-th group value; inserting an element of
    // group g0 increments A_g for every g >= g0.
    //   p1 = sum_g size_g*A_g^2   gains 2*S_A(g0) + suffix_m(g0)
    //   p2 = sum_g size_g*A_g*end_g gains suffix_mb[g0]
    // where S_A(q) = sum_{g>=q} size_g*A_g is answered from two Fenwicks:
    // elements inserted so far contribute suffix_m(q) each if their group < q
    // and suffix_m(own group) otherwise.
    Fenwick inserted_count(groups);
    Fenwick inserted_m(groups);
    std::int64_t total_m = 0;
    std::int64_t p1 = 0, p2 = 0;

    MaxTracker tracker;
    for (int k = 1; k <= t - min_segment; ++k) {
        const int g0 = ranks.group[k - 1];
        const std::int64_t below = inserted_count.prefix(g0 - 1);
        const std::int64_t m_at_or_above = total_m - inserted_m.prefix(g0 - 1);
        const std::int64_t s_a = m_at_or_above + below * suffix_m(g0);
        p1 += 2 * s_a + suffix_m(g0);
        p2 += suffix_mb[g0];
        inserted_count.add(g0, 1);
        const std::int64_t own_m = suffix_m(g0);
        inserted_m.add(g0, own_m);
        total_m += own_m;

        if (k < min_segment) continue;
        const double stat = detail::cvm_statistic(p1, p2, p3, k, t - k);
        tracker.offer(detail::cvm_normalized(stat, k, t - k), k);
    }
    return {tracker.best, tracker.tau};
}

SplitScanResult scan_kolmogorov_smirnov(std::span<const double> values,
                                        int min_segment) {
    const int t = static_cast<int>(values.size());
    const detail::PooledRanks ranks = detail::pool_ranks(values);
    const int groups = ranks.group_count();

    std::vector<std::int64_t> count_left(groups, 0);
    MaxTracker tracker;
    for (int k = 1; k <= t - min_segment; ++k) {
        ++count_left[ranks.group[k - 1]];
        if (k < min_segment) continue;
        std::int64_t best = 0, cum = 0;
        for (int g = 0; g < groups; ++g) {
            cum += count_left[g];
            const std::int64_t diff =
                std::llabs(static_cast<std::int64_t>(t) * cum -
                           static_cast<std::int64_t>(k) * ranks.group_end[g]);
            if (diff > best) best = diff;
        }
        const double d = detail::ks_statistic(best, k, t - k);
        tracker.offer(detail::ks_normalized(d, k, t - k), k);
    }
    return {tracker.best, tracker.tau};
}

SplitScanResult scan_student(std::span<const double> values, int min_segment) {
    const int t = static_cast<int>(values.size());
    MaxTracker tracker;
    double sum_left = 0.0, sumsq_left = 0.0;
    for (int k = 1; k <= t - min_segment; ++k) {
        sum_left += values[k - 1];
        sumsq_left += values[k - 1] * values[k - 1];
        if (k < min_segment) continue;
        double sum_right = 0.0, sumsq_right = 0.0;
        for (int i = k; i < t; ++i) {
            sum_right += values[i];
            sumsq_right += values[i] * values[i];
        }
        const detail::StudentParts parts =
            detail::student_parts(sum_left, sumsq_left, k, sum_right, sumsq_right, t - k);
        double w;
        if (parts.degenerate) {
            w = parts.means_differ ? std::numeric_limits<double>::infinity() : 0.0;
        } else {
            w = std::fabs(detail::student_normalized(parts.t, k, t - k));
        }
        tracker.offer(w, k);
    }
    return {tracker.best, tracker.tau};
}

} // namespace

SplitScanResult max_split_statistic(std::span<const double> values, Statistic stat,
                                    int min_segment) {
    require_scan(values, min_segment);
    switch (stat) {
        case Statistic::MannWhitney: return scan_mann_whitney(values, min_segment);
        case Statistic::CramerVonMises: return scan_cramer_von_mises(values, min_segment);
        case Statistic::KolmogorovSmirnov:
            return scan_kolmogorov_smirnov(values, min_segment);
        case Statistic::StudentT: return scan_student(values, min_segment);
    }
    throw std::logic_error("unknown statistic");
}

SplitScanResult max_split_statistic_reference(std::span<const double> values,
                                              Statistic stat, int min_segment) {
    require_scan(values, min_segment);
    const int t = static_cast<int>(values.size());
    MaxTracker tracker;
    for (int k = min_segment; k <= t - min_segment; ++k) {
        const TwoSampleResult r =
            two_sample_test(stat, values.subspan(0, k), values.subspan(k));
        double w = r.normalized;
        if (stat == Statistic::MannWhitney || stat == Statistic::StudentT) {
            w = std::fabs(w);
        }
        tracker.offer(w, k);
    }
    return {tracker.best, tracker.tau};
}

std::vector<double> all_split_statistics(std::span<const double> values,
                                         Statistic stat, int min_segment) {
    require_scan(values, min_segment);
    const int t = static_cast<int>(values.size());
    std::vector<double> out;
    out.reserve(t - 2 * min_segment + 1);
    for (int k = min_segment; k <= t - min_segment; ++k) {
        const TwoSampleResult r =
            two_sample_test(stat, values.subspan(0, k), values.subspan(k));
        double w = r.normalized;
        if (stat == Statistic::MannWhitney || stat == Statistic::StudentT) {
            w = std::fabs(w);
        }
        out.push_back(w);
    }
    return out;
}

} // namespace driftwatch
