#pragma once

#include <string>
#include <vector>

#include "robosim/trial.hpp"

namespace robosim {

struct CampaignSpec {
  Scenario scenario;
  FuzzerKind fuzzer = FuzzerKind::None;
  FuzzTarget target = FuzzTarget::CrashRobot;
  AttackModel attack_model = AttackModel::None;
  std::optional<SensorMode> sensor_mode;
  DetectorSet detectors;
  bool mitigation = false;
  RemitConfig remit;
  ShadeConfig shade;
  const HistoricalMap* map = nullptr;
  int trials = 30;
  std::uint64_t base_seed = 1;  // trial i runs with base_seed + i
  double attack_start_s = 0.0;
  std::optional<double> attack_at_distance_cm;
  double timeout_s = 300.0;
  int jobs = 1;
  bool keep_traces = false;
};

struct CampaignAggregates {
  int trials = 0;
  int successes = 0;          // per the campaign's target notion
  double success_rate = 0.0;  // successes/trials, exact
  int detected = 0;
  double mean_reaction_s = 0.0;  // over detected trials
  double mean_cleaned_cm = 0.0;
  double mean_running_s = 0.0;
};

struct CampaignReport {
  CampaignSpec spec;
  std::vector<TrialRecord> records;
  CampaignAggregates aggregates;

  std::string to_json_string() const;
  std::uint64_t report_hash() const;
};

// Success notion: CrashRobot succeeds on a collision; ReduceEfficacy
// succeeds when the robot never crossed the door.
bool attack_succeeded(const TrialRecord& rec, FuzzTarget target);

CampaignAggregates aggregate(const std::vector<TrialRecord>& records, FuzzTarget target,
                             const std::string& reaction_label);

TrialConfig trial_config_for(const CampaignSpec& spec, int index);

CampaignReport run_campaign(const CampaignSpec& spec);

struct SweepPoint {
  double distance_cm = 0.0;
  bool reachable = true;
  double mean_reaction_s = 0.0;
  int detected = 0;
  int trials = 0;
};

// One campaign per attack distance; reproduces the reaction-time-vs-
// distance curve. Unreachable distances are reported but skipped.
std::vector<SweepPoint> detection_sweep(const CampaignSpec& spec,
                                        const std::vector<double>& distances_cm);

// ---- comparison runners used by the CLI ----

struct FuzzerComparisonRow {
  std::string fuzzer;
  int successes = 0;
  int trials = 0;
  double rate = 0.0;
};

struct FuzzerComparison {
  FuzzTarget target;
  std::vector<FuzzerComparisonRow> rows;
  std::vector<CampaignReport> reports;
};

FuzzerComparison run_fuzzer_comparison(const Scenario& scenario, FuzzTarget target,
                                       int trials, std::uint64_t base_seed, int jobs);

struct DetectionCell {
  std::string attack;    // "suspension" | "fabrication"
  std::string detector;  // "fingerprinting" | "crv" | "nid" | "shade"
  int detected = 0;
  int trials = 0;
  double mean_reaction_s = 0.0;
};

struct DetectionMatrix {
  std::vector<DetectionCell> cells;
  std::vector<CampaignReport> reports;
};

DetectionMatrix run_detection_matrix(const Scenario& scenario, const HistoricalMap& map,
                                     int trials_per_cell, std::uint64_t base_seed,
                                     int jobs);

struct MitigationRow {
  std::string label;  // "clean" | "suspension" | "fabrication"
  double mean_cleaned_cm = 0.0;
  double mean_running_s = 0.0;
  double distance_loss_pct = 0.0;  // vs clean
  double time_overhead_pct = 0.0;  // vs clean
  int collisions = 0;
  int trials = 0;
};

struct MitigationComparison {
  std::vector<MitigationRow> rows;
  std::vector<CampaignReport> reports;
};

MitigationComparison run_mitigation_comparison(const Scenario& scenario,
                                               const HistoricalMap& map, int trials,
                                               std::uint64_t base_seed,
                                               double map_resolution_cm, int jobs);

// ---- report emission ----

void write_text_file(const std::string& path, const std::string& content);
std::string fuzzer_comparison_csv(const FuzzerComparison& cmp);
std::string detection_matrix_csv(const DetectionMatrix& m);
std::string mitigation_csv(const MitigationComparison& m);
std::string sweep_csv(const std::vector<SweepPoint>& points);
std::string trial_series_csv(const CampaignReport& report);

}  // namespace robosim
