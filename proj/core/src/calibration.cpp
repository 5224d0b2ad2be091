#include "driftwatch/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <thread>

#include <json.hpp>

#include "driftwatch/errors.hpp"
#include "driftwatch/rng.hpp"
#include "driftwatch/split_stats.hpp"

namespace driftwatch {

namespace {

void parallel_chunks(std::size_t count, int threads,
                     const std::function<void(std::size_t, std::size_t)>& fn) {
    int n = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (n == 1 || count < 4096) {
        fn(0, count);
        return;
    }
    const std::size_t chunk = (count + n - 1) / static_cast<std::size_t>(n);
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) {
        const std::size_t lo = static_cast<std::size_t>(i) * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(fn, lo, hi);
    }
    for (auto& t : pool) t.join();
}

struct NullStream {
    rng::SplitMix gen;
    std::vector<double> xs;
};

double null_draw(NullStream& s, NullFamily family) {
    return family == NullFamily::Uniform ? s.gen.uniform01() : s.gen.normal();
}

std::vector<NullStream> make_streams(std::uint64_t replications, std::uint64_t seed) {
    std::vector<NullStream> streams;
    streams.reserve(replications);
    for (std::uint64_t i = 0; i < replications; ++i) {
        streams.push_back({rng::SplitMix(rng::derive_stream_seed(seed, i)), {}});
    }
    return streams;
}

// Pool-adjacent-violators fit (nondecreasing, equal weights).
std::vector<double> isotonic_fit(std::span<const double> y) {
    struct Block {
        double sum;
        int count;
    };
    std::vector<Block> blocks;
    blocks.reserve(y.size());
    for (double v : y) {
        blocks.push_back({v, 1});
        while (blocks.size() >= 2) {
            const Block& b = blocks[blocks.size() - 1];
            const Block& a = blocks[blocks.size() - 2];
            if (a.sum * b.count <= b.sum * a.count) break; // means nondecreasing
            Block merged{a.sum + b.sum, a.count + b.count};
            blocks.pop_back();
            blocks.back() = merged;
        }
    }
    std::vector<double> fit;
    fit.reserve(y.size());
    for (const Block& b : blocks) {
        const double mean = b.sum / b.count;
        fit.insert(fit.end(), b.count, mean);
    }
    return fit;
}

std::vector<int> make_knots(int t_min, int t_max, int dense_until) {
    std::vector<int> knots;
    const int dense_end = std::min(t_max, dense_until);
    for (int t = t_min; t <= dense_end; ++t) knots.push_back(t);
    int t = dense_end;
    while (t < t_max) {
        t = std::max(t + 1, static_cast<int>(std::floor(t * 1.05)));
        knots.push_back(std::min(t, t_max));
    }
    if (knots.empty() || knots.back() != t_max) knots.push_back(t_max);
    return knots;
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

nlohmann::json table_to_json(const CriticalValueTable& table) {
    nlohmann::json j;
    j["format_version"] = table.format_version;
    j["statistic"] = to_string(table.statistic);
    j["alpha"] = table.alpha;
    j["t_min"] = table.t_min;
    j["t_max"] = table.t_max;
    j["min_segment"] = table.min_segment;
    j["replications"] = table.replications;
    j["seed"] = table.seed;
    j["interpolation"] = "linear";
    j["knots"] = table.knots;
    j["values"] = table.values;
    j["raw_values"] = table.raw_values;
    j["survivors"] = table.survivors;
    return j;
}

std::string checksum_of(const nlohmann::json& j) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(j.dump())));
    return buf;
}

} // namespace

double CriticalValueTable::threshold_at(int t) const {
    if (t < t_min || t > t_max || knots.empty()) {
        throw ThresholdMissing("no critical value for t=" + std::to_string(t));
    }
    const auto it = std::lower_bound(knots.begin(), knots.end(), t);
    const auto idx = static_cast<std::size_t>(it - knots.begin());
    if (it != knots.end() && *it == t) return values[idx];
    // Linear interpolation between the surrounding knots.
    const int k0 = knots[idx - 1];
    const int k1 = knots[idx];
    const double frac = static_cast<double>(t - k0) / static_cast<double>(k1 - k0);
    return values[idx - 1] + frac * (values[idx] - values[idx - 1]);
}

CriticalValueTable calibrate(Statistic statistic, double alpha, int t_max,
                             std::uint64_t replications, std::uint64_t seed,
                             const CalibrationOptions& options) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DataError("alpha must be in (0,1)");
    if (options.min_segment < 1) throw DataError("min_segment must be >= 1");
    if (options.t_min < 2 * options.min_segment) {
        throw DataError("t_min must be at least 2*min_segment");
    }
    if (t_max < options.t_min) throw DataError("t_max must be >= t_min");
    if (replications == 0) throw DataError("replications must be positive");

    std::vector<NullStream> streams = make_streams(replications, seed);
    std::vector<std::uint32_t> alive(streams.size());
    for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = static_cast<std::uint32_t>(i);

    const auto starvation_floor =
        static_cast<std::int64_t>(std::ceil(100.0 / alpha));
    std::vector<double> h_raw(static_cast<std::size_t>(t_max) + 1, 0.0);
    std::vector<std::int64_t> survivors_at(static_cast<std::size_t>(t_max) + 1, 0);
    std::vector<double> w(alive.size());

    for (int t = 1; t <= t_max; ++t) {
        parallel_chunks(alive.size(), options.threads, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                NullStream& s = streams[alive[i]];
                s.xs.push_back(null_draw(s, options.null_family));
            }
        });
        if (t < options.t_min) continue;

        const auto population = static_cast<std::int64_t>(alive.size());
        if (population < starvation_floor) {
            throw Starvation("surviving null streams (" + std::to_string(population) +
                             ") fell below 100/alpha at t=" + std::to_string(t) +
                             "; raise replications");
        }
        w.resize(alive.size());
        parallel_chunks(alive.size(), options.threads, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                w[i] = max_split_statistic(streams[alive[i]].xs, statistic,
                                           options.min_segment)
                           .w_max;
            }
        });

        // (1-alpha) conditional quantile among survivors; the 1e-9 guard keeps
        // floor() off the wrong side of an exactly-representable boundary.
        const auto retire_target = static_cast<std::int64_t>(
            std::floor(alpha * static_cast<double>(population) + 1e-9));
        const std::int64_t rank = std::max<std::int64_t>(1, population - retire_target);
        std::vector<double> sorted(w.begin(), w.end());
        std::nth_element(sorted.begin(), sorted.begin() + (rank - 1), sorted.end());
        const double h = sorted[rank - 1];

        survivors_at[t] = population;
        h_raw[t] = h;

        std::vector<std::uint32_t> next_alive;
        next_alive.reserve(alive.size());
        for (std::size_t i = 0; i < alive.size(); ++i) {
            if (w[i] > h) {
                std::vector<double>().swap(streams[alive[i]].xs); // retire, free memory
            } else {
                next_alive.push_back(alive[i]);
            }
        }
        alive = std::move(next_alive);
    }

    const std::size_t span_len = static_cast<std::size_t>(t_max - options.t_min) + 1;
    const std::vector<double> smooth = isotonic_fit(
        std::span<const double>(h_raw).subspan(options.t_min, span_len));

    CriticalValueTable table;
    table.statistic = statistic;
    table.alpha = alpha;
    table.t_min = options.t_min;
    table.t_max = t_max;
    table.min_segment = options.min_segment;
    table.replications = replications;
    table.seed = seed;
    table.knots = make_knots(options.t_min, t_max, options.dense_until);
    for (int knot : table.knots) {
        table.values.push_back(smooth[static_cast<std::size_t>(knot - options.t_min)]);
        table.raw_values.push_back(h_raw[static_cast<std::size_t>(knot)]);
        table.survivors.push_back(survivors_at[static_cast<std::size_t>(knot)]);
    }
    return table;
}

ValidationReport validate_table(const CriticalValueTable& table,
                                std::uint64_t replications, std::uint64_t seed,
                                int threads) {
    if (replications == 0) throw DataError("replications must be positive");

    std::vector<NullStream> streams = make_streams(replications, seed);
    std::vector<std::uint32_t> alive(streams.size());
    for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = static_cast<std::uint32_t>(i);

    ValidationReport report;
    report.replications = replications;
    report.seed = seed;
    const double alpha = table.alpha;
    std::vector<double> w;

    for (int t = 1; t <= table.t_max && !alive.empty(); ++t) {
        parallel_chunks(alive.size(), threads, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                NullStream& s = streams[alive[i]];
                s.xs.push_back(s.gen.uniform01());
            }
        });
        if (t < table.t_min) continue;

        w.resize(alive.size());
        parallel_chunks(alive.size(), threads, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                w[i] = max_split_statistic(streams[alive[i]].xs, table.statistic,
                                           table.min_segment)
                           .w_max;
            }
        });

        const double h = table.threshold_at(t);
        ValidationStep step;
        step.t = t;
        step.survivors = static_cast<std::int64_t>(alive.size());
        std::vector<std::uint32_t> next_alive;
        next_alive.reserve(alive.size());
        for (std::size_t i = 0; i < alive.size(); ++i) {
            if (w[i] > h) {
                ++step.alarms;
                std::vector<double>().swap(streams[alive[i]].xs);
            } else {
                next_alive.push_back(alive[i]);
            }
        }
        alive = std::move(next_alive);
        step.rate = static_cast<double>(step.alarms) / static_cast<double>(step.survivors);
        step.tolerance =
            3.0 * std::sqrt(alpha * (1.0 - alpha) / static_cast<double>(step.survivors));
        step.pass = std::fabs(step.rate - alpha) <= step.tolerance;
        report.steps.push_back(step);
    }
    report.pass = std::all_of(report.steps.begin(), report.steps.end(),
                              [](const ValidationStep& s) { return s.pass; });
    return report;
}

void save_table(const CriticalValueTable& table, const std::filesystem::path& path) {
    nlohmann::json j = table_to_json(table);
    j["checksum"] = checksum_of(j);
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw DataError("cannot write table file: " + path.string());
        out << j.dump(2) << '\n';
    }
    std::filesystem::rename(tmp, path);
}

CriticalValueTable load_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open table file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed table file " + path.string() + ": " + e.what());
    }

    CriticalValueTable table;
    try {
        const std::string stored_checksum = j.at("checksum").get<std::string>();
        j.erase("checksum");
        if (checksum_of(j) != stored_checksum) {
            throw DataError("table checksum mismatch: " + path.string());
        }
        table.format_version = j.at("format_version").get<int>();
        if (table.format_version != 1) {
            throw DataError("unsupported table format_version");
        }
        table.statistic = statistic_from_string(j.at("statistic").get<std::string>());
        table.alpha = j.at("alpha").get<double>();
        table.t_min = j.at("t_min").get<int>();
        table.t_max = j.at("t_max").get<int>();
        table.min_segment = j.at("min_segment").get<int>();
        table.replications = j.at("replications").get<std::uint64_t>();
        table.seed = j.at("seed").get<std::uint64_t>();
        table.knots = j.at("knots").get<std::vector<int>>();
        table.values = j.at("values").get<std::vector<double>>();
        table.raw_values = j.at("raw_values").get<std::vector<double>>();
        table.survivors = j.at("survivors").get<std::vector<std::int64_t>>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed table file " + path.string() + ": " + e.what());
    }
    if (table.values.size() != table.knots.size() ||
        table.raw_values.size() != table.knots.size() ||
        table.survivors.size() != table.knots.size()) {
        throw DataError("table arrays disagree in length: " + path.string());
    }
    return table;
}

} // namespace driftwatch
