#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "robosim/campaign.hpp"
#include "test_support.hpp"

using namespace robosim;

namespace {

// A long room so an attack can fire 200 cm from the wall the robot faces.
const char* kCorridorJson = R"({
  "name": "corridor",
  "description": "test corridor",
  "tick_s": 0.1,
  "robot": {"start_x_cm": 236.3, "start_y_cm": 71.0, "heading_deg": 180.0,
            "radius_cm": 17.0, "speed_mm_s": 50.0},
  "rooms": [{"min_x": 0.0, "min_y": 0.0, "max_x": 286.0, "max_y": 98.0}],
  "walls": [
    {"ax": 0.0, "ay": 0.0, "bx": 286.0, "by": 0.0},
    {"ax": 286.0, "ay": 0.0, "bx": 286.0, "by": 98.0},
    {"ax": 286.0, "ay": 98.0, "bx": 0.0, "by": 98.0},
    {"ax": 0.0, "ay": 98.0, "bx": 0.0, "by": 0.0}
  ]
})";

}  // namespace

TEST_CASE("the same spec and seed give a bit-identical record") {
  Scenario sc = robosim::test::load_scenario("two_room");
  TrialConfig cfg;
  cfg.scenario = sc;
  cfg.attack.model = AttackModel::Fabrication;
  cfg.attack.fuzzer = FuzzerKind::RandomTime;
  cfg.attack.compromised = true;
  cfg.attack.start_time_s = 10.0;
  cfg.seed = 4242;
  const auto a = run_trial(cfg);
  const auto b = run_trial(cfg);
  CHECK(a.record_hash() == b.record_hash());
  CHECK(a.to_json_string(false) == b.to_json_string(false));
}

TEST_CASE("identical scenario and seed give a bit-identical pose trace") {
  Scenario sc = robosim::test::load_scenario("cleaning_room");
  TrialConfig cfg;
  cfg.scenario = sc;
  cfg.seed = 8;
  cfg.keep_trace = true;
  const auto a = run_trial(cfg);
  const auto b = run_trial(cfg);
  REQUIRE(a.trace.size() == b.trace.size());
  for (size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].pose.position.x == b.trace[i].pose.position.x);
    CHECK(a.trace[i].pose.position.y == b.trace[i].pose.position.y);
    CHECK(a.trace[i].pose.heading == b.trace[i].pose.heading);
  }
}

TEST_CASE("success rates are exact fractions formatted to one decimal") {
  std::vector<TrialRecord> records(30);
  for (int i = 0; i < 28; ++i) records[i].collision = true;
  auto agg = aggregate(records, FuzzTarget::CrashRobot, "shade");
  CHECK(agg.successes == 28);
  CHECK(agg.success_rate == doctest::Approx(28.0 / 30.0));

  for (auto& r : records) r.collision = false;
  for (int i = 0; i < 5; ++i) records[i].collision = true;
  agg = aggregate(records, FuzzTarget::CrashRobot, "shade");
  CHECK(agg.success_rate == doctest::Approx(5.0 / 30.0));

  for (auto& r : records) r.collision = false;
  agg = aggregate(records, FuzzTarget::CrashRobot, "shade");
  CHECK(agg.success_rate == 0.0);
}

TEST_CASE("report aggregates can be recomputed from the records") {
  Scenario sc = robosim::test::load_scenario("two_room");
  CampaignSpec spec;
  spec.scenario = sc;
  spec.fuzzer = FuzzerKind::RandomTime;
  spec.target = FuzzTarget::CrashRobot;
  spec.attack_model = AttackModel::Fabrication;
  spec.sensor_mode = SensorMode{SensorModeKind::Passive, kSafeDistanceCm, 1.0};
  spec.trials = 6;
  spec.base_seed = 500;
  spec.attack_start_s = 10.0;
  const auto report = run_campaign(spec);
  const auto again = aggregate(report.records, spec.target, "shade");
  CHECK(report.aggregates.successes == again.successes);
  CHECK(report.aggregates.success_rate == again.success_rate);
  CHECK(report.aggregates.mean_cleaned_cm == again.mean_cleaned_cm);

  // and the JSON round-trips to the same aggregate numbers
  const auto j = nlohmann::json::parse(report.to_json_string());
  CHECK(j.at("aggregates").at("successes").get<int>() == report.aggregates.successes);
  CHECK(j.at("records").size() == report.records.size());
}

TEST_CASE("parallel and serial campaigns produce identical reports") {
  Scenario sc = robosim::test::load_scenario("cleaning_room");
  CampaignSpec spec;
  spec.scenario = sc;
  spec.trials = 6;
  spec.base_seed = 900;
  spec.jobs = 1;
  const auto serial = run_campaign(spec);
  spec.jobs = 4;
  const auto parallel = run_campaign(spec);
  CHECK(serial.report_hash() == parallel.report_hash());
}

TEST_CASE("per-trial seeds are the base seed plus the index") {
  Scenario sc = robosim::test::load_scenario("cleaning_room");
  CampaignSpec spec;
  spec.scenario = sc;
  spec.trials = 3;
  spec.base_seed = 123;
  const auto report = run_campaign(spec);
  for (int i = 0; i < 3; ++i) {
    CHECK(report.records[i].seed == 123 + static_cast<std::uint64_t>(i));
  }
}

TEST_CASE("a missing map with record-based detection is a configuration error") {
  Scenario sc = robosim::test::load_scenario("cleaning_room");
  CampaignSpec spec;
  spec.scenario = sc;
  spec.detectors.composite = true;
  spec.trials = 1;
  CHECK_THROWS_AS(run_campaign(spec), std::runtime_error);
}

TEST_CASE("detection sweep follows the travel-time law and skips unreachable points") {
  const Scenario corridor = Scenario::from_json_string(kCorridorJson);
  const HistoricalMap map = learn_map(corridor, 2.5, 7);

  CampaignSpec spec;
  spec.scenario = corridor;
  spec.attack_model = AttackModel::Suspension;
  spec.sensor_mode = SensorMode{SensorModeKind::ProactiveThreshold, kSafeDistanceCm, 1.0};
  spec.detectors.composite = true;
  spec.map = &map;
  spec.trials = 2;
  spec.base_seed = 11;
  spec.shade.nid_baseline_pps = corridor.telemetry_hz;

  const auto points = detection_sweep(spec, {200.0, 100.0, 25.0, 390.0});
  REQUIRE(points.size() == 4);
  CHECK(points[0].reachable);
  CHECK(points[0].mean_reaction_s == doctest::Approx((200.0 - 20.0) / 5.0).epsilon(0.01));
  CHECK(points[1].mean_reaction_s == doctest::Approx((100.0 - 20.0) / 5.0).epsilon(0.01));
  CHECK(points[2].mean_reaction_s <= 3.0);
  CHECK(!points[3].reachable);  // never that much clearance in this room
  // non-increasing as the distance shrinks
  CHECK(points[0].mean_reaction_s >= points[1].mean_reaction_s);
  CHECK(points[1].mean_reaction_s >= points[2].mean_reaction_s);
}

TEST_CASE("csv tables have the published shapes") {
  FuzzerComparison cmp;
  cmp.target = FuzzTarget::CrashRobot;
  cmp.rows = {{"volatile", 0, 30, 0.0},
              {"random_time", 5, 30, 5.0 / 30.0},
              {"robofuzz", 30, 30, 1.0}};
  const std::string csv = fuzzer_comparison_csv(cmp);
  CHECK(csv.find("fuzzer,successful_trials,trials,success_rate_pct") == 0);
  CHECK(csv.find("random_time,5,30,16.7") != std::string::npos);
  CHECK(csv.find("robofuzz,30,30,100.0") != std::string::npos);

  DetectionMatrix m;
  m.cells = {{"suspension", "fingerprinting", 0, 10, 0.0},
             {"fabrication", "nid", 10, 10, 10.05}};
  const std::string dcsv = detection_matrix_csv(m);
  CHECK(dcsv.find("suspension,fingerprinting,0,10,nil") != std::string::npos);
  CHECK(dcsv.find("fabrication,nid,10,10,10.1") != std::string::npos);
}

TEST_CASE("trial timeout is a failure outcome") {
  Scenario sc = robosim::test::load_scenario("cleaning_room");
  TrialConfig cfg;
  cfg.scenario = sc;
  cfg.seed = 3;
  cfg.timeout_s = 10.0;  // far too short to finish
  const auto rec = run_trial(cfg);
  CHECK(rec.outcome == TrialOutcome::Timeout);
  CHECK(rec.running_time_s == doctest::Approx(10.0));
}

TEST_CASE("a random firing after the trial end leaves the run unaffected") {
  Scenario sc = robosim::test::load_scenario("cleaning_room");
  TrialConfig clean_cfg;
  clean_cfg.scenario = sc;
  clean_cfg.seed = 60;
  const auto clean = run_trial(clean_cfg);

  TrialConfig late = clean_cfg;
  late.attack.model = AttackModel::Fabrication;
  late.attack.fuzzer = FuzzerKind::RandomTime;
  late.attack.compromised = true;
  // fire window strictly beyond the clean completion time
  late.attack.start_time_s = clean.running_time_s + 5.0;
  const auto rec = run_trial(late);
  CHECK(rec.outcome == TrialOutcome::Done);
  CHECK(!rec.collision);
  CHECK(rec.cleaned_distance_cm == doctest::Approx(clean.cleaned_distance_cm));
}
