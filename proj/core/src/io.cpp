#include "driftwatch/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "driftwatch/errors.hpp"

namespace driftwatch::io {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double(const std::string& text, const std::string& context) {
    try {
        std::size_t consumed = 0;
        const double v = std::stod(text, &consumed);
        if (consumed != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw DataError("cannot parse number '" + text + "' in " + context);
    }
}

long parse_int(const std::string& text, const std::string& context) {
    try {
        std::size_t consumed = 0;
        const long v = std::stol(text, &consumed);
        if (consumed != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw DataError("cannot parse integer '" + text + "' in " + context);
    }
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

nlohmann::json parse_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path.string());
    try {
        nlohmann::json j;
        in >> j;
        return j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed JSON in " + path.string() + ": " + e.what());
    }
}

} // namespace

void atomic_write_text(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write file: " + path.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

std::string format_number(double v) {
    return nlohmann::json(v).dump();
}

std::string series_to_csv(const DivergenceSeries& series) {
    std::string out = "t,value\n";
    for (int t = 1; t <= series.length(); ++t) {
        out += std::to_string(t);
        out += ',';
        out += format_number(series.values[static_cast<std::size_t>(t - 1)]);
        out += '\n';
    }
    return out;
}

void write_series_csv(const std::filesystem::path& path, const DivergenceSeries& series) {
    atomic_write_text(path, series_to_csv(series));
}

DivergenceSeries read_series_csv(const std::filesystem::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty()) throw DataError("empty series file: " + path.string());
    const auto header = split_csv_line(lines[0]);
    if (header.size() != 2 || header[0] != "t" || header[1] != "value") {
        throw DataError("series CSV must start with header 't,value': " + path.string());
    }
    DivergenceSeries series;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_csv_line(lines[i]);
        if (fields.size() != 2) {
            throw DataError("series row needs 2 fields: " + path.string());
        }
        const long t = parse_int(fields[0], path.string());
        if (t != static_cast<long>(i)) {
            throw DataError("series t column must run 1..N consecutively: " +
                            path.string());
        }
        const double v = parse_double(fields[1], path.string());
        if (!std::isfinite(v)) throw DataError("non-finite series value: " + path.string());
        series.values.push_back(v);
    }
    if (series.values.empty()) throw DataError("series has no rows: " + path.string());
    return series;
}

std::vector<FeatureBatch> read_features_csv(const std::filesystem::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.size() < 2) throw DataError("feature CSV needs a header and rows: " +
                                          path.string());
    const auto header = split_csv_line(lines[0]);
    if (header.size() < 2 || header[0] != "batch") {
        throw DataError("feature CSV header must be 'batch,<names...>': " + path.string());
    }
    const std::size_t dim = header.size() - 1;

    std::vector<FeatureBatch> batches;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_csv_line(lines[i]);
        if (fields.size() != dim + 1) {
            throw DataError("feature row has wrong arity: " + path.string());
        }
        const long index = parse_int(fields[0], path.string());
        if (index < 0) throw DataError("batch index must be >= 0: " + path.string());
        std::vector<double> vec(dim);
        for (std::size_t d = 0; d < dim; ++d) {
            vec[d] = parse_double(fields[d + 1], path.string());
        }
        if (batches.empty() || batches.back().batch_index != index) {
            if (!batches.empty() && index < batches.back().batch_index) {
                throw DataError("batch indices must be nondecreasing: " + path.string());
            }
            batches.push_back({{}, static_cast<int>(index)});
        }
        batches.back().vectors.push_back(std::move(vec));
    }
    return batches;
}

BaselineProfile read_baseline_csv(const std::filesystem::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.size() != 2) {
        throw DataError("baseline CSV needs a header and exactly one row: " +
                        path.string());
    }
    const auto header = split_csv_line(lines[0]);
    const auto fields = split_csv_line(lines[1]);
    if (fields.size() != header.size() || fields.empty()) {
        throw DataError("baseline row does not match its header: " + path.string());
    }
    BaselineProfile baseline;
    for (const std::string& f : fields) {
        baseline.mean_vector.push_back(parse_double(f, path.string()));
    }
    return baseline;
}

std::string outcome_to_json(const OutcomeEnvelope& envelope) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["method"] = envelope.method;
    if (envelope.outcome.detection_time) {
        j["detection_time"] = *envelope.outcome.detection_time;
    } else {
        j["detection_time"] = nullptr;
    }
    if (envelope.outcome.estimated_changepoint) {
        j["estimated_changepoint"] = *envelope.outcome.estimated_changepoint;
        j["changepoint_convention"] = "last-index-before-drift";
    } else {
        j["estimated_changepoint"] = nullptr;
    }
    j["alarm_times"] = envelope.outcome.alarm_times;
    return j.dump(2) + "\n";
}

void write_outcome_json(const std::filesystem::path& path, const OutcomeEnvelope& envelope) {
    atomic_write_text(path, outcome_to_json(envelope));
}

OutcomeEnvelope read_outcome_json(const std::filesystem::path& path) {
    const nlohmann::json j = parse_json_file(path);
    OutcomeEnvelope envelope;
    try {
        envelope.method = j.at("method").get<std::string>();
        if (!j.at("detection_time").is_null()) {
            envelope.outcome.detection_time = j.at("detection_time").get<int>();
        }
        if (j.contains("estimated_changepoint") && !j.at("estimated_changepoint").is_null()) {
            envelope.outcome.estimated_changepoint = j.at("estimated_changepoint").get<int>();
        }
        envelope.outcome.alarm_times = j.at("alarm_times").get<std::vector<int>>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed outcome JSON " + path.string() + ": " + e.what());
    }
    return envelope;
}

void write_ground_truth_json(const std::filesystem::path& path,
                             const ContaminationSchedule& schedule) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["kind"] = to_string(schedule.kind);
    j["n_windows"] = schedule.n_windows;
    j["t_start"] = schedule.t_start;
    j["t_end"] = schedule.t_end;
    j["p"] = schedule.p;
    atomic_write_text(path, j.dump(2) + "\n");
}

ContaminationSchedule read_ground_truth_json(const std::filesystem::path& path) {
    const nlohmann::json j = parse_json_file(path);
    try {
        ContaminationSchedule schedule = ContaminationSchedule::custom(
            j.at("n_windows").get<int>(), j.at("t_start").get<int>(),
            j.at("t_end").get<int>(), j.at("p").get<std::vector<double>>());
        schedule.kind = schedule_kind_from_string(j.at("kind").get<std::string>());
        return schedule;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed ground truth JSON " + path.string() + ": " + e.what());
    }
}

std::string scores_to_csv(const std::vector<ScoreRow>& rows) {
    std::string out = "detector,detected,delta,false_alarms,theta,loss\n";
    for (const ScoreRow& row : rows) {
        out += row.detector;
        out += row.score.delay ? ",yes," + std::to_string(*row.score.delay) : ",no,inf";
        out += ',' + std::to_string(row.score.false_alarm_count);
        out += row.score.theta ? ',' + format_number(*row.score.theta) : ",NA";
        out += ',' + format_number(row.score.loss);
        out += '\n';
    }
    return out;
}

void write_scores_csv(const std::filesystem::path& path, const std::vector<ScoreRow>& rows) {
    atomic_write_text(path, scores_to_csv(rows));
}

std::string sweep_to_csv(const std::vector<SweepPoint>& points,
                         const std::vector<std::string>& detector_labels) {
    std::string out = "c1,c2,detector,mean_loss\n";
    for (const SweepPoint& point : points) {
        for (std::size_t d = 0; d < point.mean_loss.size(); ++d) {
            out += format_number(point.c1);
            out += ',' + format_number(point.c2);
            out += ',' + (d < detector_labels.size() ? detector_labels[d]
                                                     : "detector" + std::to_string(d));
            out += ',' + format_number(point.mean_loss[d]);
            out += '\n';
        }
    }
    return out;
}

void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<SweepPoint>& points,
                     const std::vector<std::string>& detector_labels) {
    atomic_write_text(path, sweep_to_csv(points, detector_labels));
}

std::string peeking_to_csv(const std::vector<PeekingRow>& rows) {
    std::string out = "alpha,pr_v_ge_1,e_v\n";
    for (const PeekingRow& row : rows) {
        out += format_number(row.alpha);
        out += ',' + format_number(row.pr_at_least_one);
        out += ',' + format_number(row.expected_v);
        out += '\n';
    }
    return out;
}

void write_peeking_csv(const std::filesystem::path& path,
                       const std::vector<PeekingRow>& rows) {
    atomic_write_text(path, peeking_to_csv(rows));
}

std::string validation_to_csv(const ValidationReport& report) {
    std::string out = "t,survivors,alarms,rate,tolerance,pass\n";
    for (const ValidationStep& step : report.steps) {
        out += std::to_string(step.t);
        out += ',' + std::to_string(step.survivors);
        out += ',' + std::to_string(step.alarms);
        out += ',' + format_number(step.rate);
        out += ',' + format_number(step.tolerance);
        out += step.pass ? ",yes" : ",no";
        out += '\n';
    }
    return out;
}

void write_validation_csv(const std::filesystem::path& path,
                          const ValidationReport& report) {
    atomic_write_text(path, validation_to_csv(report));
}

std::string table_to_csv(const CriticalValueTable& table) {
    std::string out = "t,h,h_raw,survivors\n";
    for (std::size_t i = 0; i < table.knots.size(); ++i) {
        out += std::to_string(table.knots[i]);
        out += ',' + format_number(table.values[i]);
        out += ',' + format_number(table.raw_values[i]);
        out += ',' + std::to_string(table.survivors[i]);
        out += '\n';
    }
    return out;
}

void write_table_csv(const std::filesystem::path& path, const CriticalValueTable& table) {
    atomic_write_text(path, table_to_csv(table));
}

} // namespace driftwatch::io
