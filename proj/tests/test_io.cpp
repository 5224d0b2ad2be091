#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "driftwatch/errors.hpp"
#include "driftwatch/io.hpp"

using namespace driftwatch;

namespace {

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("series CSV round-trips exactly") {
    DivergenceSeries series;
    series.values = {0.0, 1.0 / 3.0, -2.5e-7, 3.14159265358979};
    series.metric = Metric::Cosine;
    const auto path = temp_path("driftwatch_series.csv");
    io::write_series_csv(path, series);
    const DivergenceSeries back = io::read_series_csv(path);
    CHECK(back.values == series.values); // bitwise through shortest-repr text
    std::filesystem::remove(path);
}

TEST_CASE("series CSV rejects malformed input") {
    const auto path = temp_path("driftwatch_bad_series.csv");
    write_text(path, "time,value\n1,0.5\n");
    CHECK_THROWS_AS(io::read_series_csv(path), DataError);
    write_text(path, "t,value\n1,0.5\n3,0.7\n");
    CHECK_THROWS_AS(io::read_series_csv(path), DataError);
    write_text(path, "t,value\n1,abc\n");
    CHECK_THROWS_AS(io::read_series_csv(path), DataError);
    write_text(path, "t,value\n");
    CHECK_THROWS_AS(io::read_series_csv(path), DataError);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(io::read_series_csv(path), DataError);
}

TEST_CASE("feature and baseline CSV parsing") {
    const auto features = temp_path("driftwatch_features.csv");
    write_text(features,
               "batch,f0,f1\n"
               "0,1.0,2.0\n"
               "0,3.0,4.0\n"
               "2,5.0,6.0\n");
    const auto batches = io::read_features_csv(features);
    REQUIRE(batches.size() == 2);
    CHECK(batches[0].batch_index == 0);
    CHECK(batches[0].vectors.size() == 2);
    CHECK(batches[1].batch_index == 2);
    CHECK(batches[1].vectors[0] == std::vector<double>{5.0, 6.0});

    write_text(features, "batch,f0,f1\n1,1.0,2.0\n0,3.0,4.0\n");
    CHECK_THROWS_AS(io::read_features_csv(features), DataError); // decreasing index
    write_text(features, "idx,f0\n0,1.0\n");
    CHECK_THROWS_AS(io::read_features_csv(features), DataError); // wrong header
    std::filesystem::remove(features);

    const auto baseline = temp_path("driftwatch_baseline.csv");
    write_text(baseline, "f0,f1,f2\n0.25,0.5,0.25\n");
    const BaselineProfile profile = io::read_baseline_csv(baseline);
    CHECK(profile.mean_vector == std::vector<double>{0.25, 0.5, 0.25});
    write_text(baseline, "f0,f1\n1.0,2.0\n3.0,4.0\n");
    CHECK_THROWS_AS(io::read_baseline_csv(baseline), DataError); // two rows
    std::filesystem::remove(baseline);
}

TEST_CASE("outcome JSON round-trips including null detection") {
    const auto path = temp_path("driftwatch_outcome.json");

    io::OutcomeEnvelope cpm;
    cpm.method = "cpm";
    cpm.outcome.detection_time = 64;
    cpm.outcome.estimated_changepoint = 59;
    cpm.outcome.alarm_times = {64, 65};
    io::write_outcome_json(path, cpm);
    const io::OutcomeEnvelope cpm_back = io::read_outcome_json(path);
    CHECK(cpm_back.method == "cpm");
    CHECK(cpm_back.outcome.detection_time.value() == 64);
    CHECK(cpm_back.outcome.estimated_changepoint.value() == 59);
    CHECK(cpm_back.outcome.alarm_times == std::vector<int>{64, 65});

    io::OutcomeEnvelope never;
    never.method = "mw";
    io::write_outcome_json(path, never);
    const io::OutcomeEnvelope never_back = io::read_outcome_json(path);
    CHECK(never_back.method == "mw");
    CHECK(!never_back.outcome.detection_time.has_value());
    CHECK(!never_back.outcome.estimated_changepoint.has_value());
    CHECK(never_back.outcome.alarm_times.empty());
    std::filesystem::remove(path);
}

TEST_CASE("ground truth JSON round-trips a schedule") {
    const auto path = temp_path("driftwatch_truth.json");
    const ContaminationSchedule schedule = ContaminationSchedule::linear(120, 60, 80);
    io::write_ground_truth_json(path, schedule);
    const ContaminationSchedule back = io::read_ground_truth_json(path);
    CHECK(back.kind == ContaminationSchedule::Kind::Linear);
    CHECK(back.n_windows == 120);
    CHECK(back.t_start == 60);
    CHECK(back.t_end == 80);
    CHECK(back.p == schedule.p);
    std::filesystem::remove(path);
}

TEST_CASE("score and sweep CSV formatting") {
    std::vector<io::ScoreRow> rows(2);
    rows[0].detector = "mw";
    rows[0].score.delay = 8;
    rows[0].score.false_alarm_count = 3;
    rows[0].score.theta = 0.75;
    rows[0].score.loss = -1.956;
    rows[1].detector = "cpm";
    rows[1].score.false_alarm_count = 0;
    rows[1].score.loss = -0.5;
    const std::string csv = io::scores_to_csv(rows);
    CHECK(csv.find("detector,detected,delta,false_alarms,theta,loss") == 0);
    CHECK(csv.find("mw,yes,8,3,0.75,-1.956") != std::string::npos);
    CHECK(csv.find("cpm,no,inf,0,NA,-0.5") != std::string::npos);

    std::vector<SweepPoint> points(1);
    points[0].c1 = -0.25;
    points[0].c2 = -0.75;
    points[0].mean_loss = {-1.0, -0.5};
    const std::string sweep = io::sweep_to_csv(points, {"mw", "cpm"});
    CHECK(sweep.find("c1,c2,detector,mean_loss") == 0);
    CHECK(sweep.find("-0.25,-0.75,mw,-1.0") != std::string::npos);
    CHECK(sweep.find("-0.25,-0.75,cpm,-0.5") != std::string::npos);
}

TEST_CASE("atomic writes leave no temp file behind") {
    const auto path = temp_path("driftwatch_atomic.txt");
    io::atomic_write_text(path, "payload");
    CHECK(read_text(path) == "payload");
    CHECK(!std::filesystem::exists(path.string() + ".tmp"));
    std::filesystem::remove(path);
}
