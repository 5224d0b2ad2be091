#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "driftwatch/calibration.hpp"
#include "driftwatch/detection.hpp"
#include "driftwatch/divergence.hpp"
#include "driftwatch/drift_sim.hpp"
#include "driftwatch/evaluation.hpp"

namespace driftwatch::io {

// Writes through a temp file and renames, so readers never see partial output.
void atomic_write_text(const std::filesystem::path& path, std::string_view content);

// Shortest representation that round-trips the exact double.
std::string format_number(double v);

// Divergence series: CSV with header "t,value", t = 1..N consecutive.
std::string series_to_csv(const DivergenceSeries& series);
void write_series_csv(const std::filesystem::path& path, const DivergenceSeries& series);
DivergenceSeries read_series_csv(const std::filesystem::path& path);

// Feature input: header "batch,<name>,...", one row per vector with a leading
// integer batch index; rows must arrive grouped by nondecreasing batch index.
std::vector<FeatureBatch> read_features_csv(const std::filesystem::path& path);

// Baseline: single data row under a header naming the feature columns.
BaselineProfile read_baseline_csv(const std::filesystem::path& path);

// Detection outcome JSON (detection_time nullable, alarm_times array).
struct OutcomeEnvelope {
    std::string method; // "mw" or "cpm"
    DetectionOutcome outcome;
};
std::string outcome_to_json(const OutcomeEnvelope& envelope);
void write_outcome_json(const std::filesystem::path& path, const OutcomeEnvelope& envelope);
OutcomeEnvelope read_outcome_json(const std::filesystem::path& path);

// Scenario ground truth JSON (t_start, t_end, p vector, kind).
void write_ground_truth_json(const std::filesystem::path& path,
                             const ContaminationSchedule& schedule);
ContaminationSchedule read_ground_truth_json(const std::filesystem::path& path);

// Score rows in the paper's table layout; delta prints "inf" when undetected
// and theta prints "NA" when undefined.
struct ScoreRow {
    std::string detector;
    ScenarioScore score;
};
std::string scores_to_csv(const std::vector<ScoreRow>& rows);
void write_scores_csv(const std::filesystem::path& path, const std::vector<ScoreRow>& rows);

std::string sweep_to_csv(const std::vector<SweepPoint>& points,
                         const std::vector<std::string>& detector_labels);
void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<SweepPoint>& points,
                     const std::vector<std::string>& detector_labels);

std::string peeking_to_csv(const std::vector<PeekingRow>& rows);
void write_peeking_csv(const std::filesystem::path& path,
                       const std::vector<PeekingRow>& rows);

std::string validation_to_csv(const ValidationReport& report);
void write_validation_csv(const std::filesystem::path& path,
                          const ValidationReport& report);

// Critical values as plot-ready CSV (one row per knot).
std::string table_to_csv(const CriticalValueTable& table);
void write_table_csv(const std::filesystem::path& path, const CriticalValueTable& table);

} // namespace driftwatch::io
