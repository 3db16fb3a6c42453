#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "robosim/campaign.hpp"

namespace fs = std::filesystem;
using namespace robosim;

namespace {

std::vector<double> parse_distances(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

FuzzTarget parse_target(const std::string& s) {
  if (s == "crash_robot") return FuzzTarget::CrashRobot;
  if (s == "reduce_efficacy") return FuzzTarget::ReduceEfficacy;
  throw CLI::ValidationError("--target must be crash_robot or reduce_efficacy");
}

void ensure_dir(const std::string& dir) { fs::create_directories(dir); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic cleaning-robot security testbed: directed sensor fuzzing, "
               "hybrid attack detection, work-retaining mitigation"};
  app.require_subcommand(1);

  std::string scenario_path, map_path, out_dir = "out", format = "csv,json";
  std::uint64_t seed = 1;
  int trials = 30, jobs = 1;
  double resolution = 2.5;

  // learn
  auto* learn = app.add_subcommand("learn", "Run clean coverage passes and record the obstacle map");
  std::string learn_out = "map.json";
  learn->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  learn->add_option("--out", learn_out, "map output path");
  learn->add_option("--resolution", resolution, "grid resolution in cm");
  learn->add_option("--seed", seed, "learn-run seed");

  // fuzz
  auto* fuzz = app.add_subcommand("fuzz", "Compare the three fuzzing methods on a target");
  std::string target_str = "both", fuzzer_str = "all";
  fuzz->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  fuzz->add_option("--target", target_str, "crash_robot | reduce_efficacy | both");
  fuzz->add_option("--fuzzer", fuzzer_str, "volatile | random_time | robofuzz | all");
  fuzz->add_option("--trials", trials, "trials per fuzzer");
  fuzz->add_option("--seed", seed, "base seed");
  fuzz->add_option("--out", out_dir, "output directory");
  fuzz->add_option("--format", format, "csv,json");
  fuzz->add_option("--jobs", jobs, "parallel trial workers");

  // detect
  auto* detect = app.add_subcommand("detect", "Detection matrix and reaction-time sweep");
  std::string sweep_str;
  detect->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  detect->add_option("--map", map_path, "learned map file")->required();
  detect->add_option("--trials", trials, "trials per matrix cell");
  detect->add_option("--seed", seed, "base seed");
  detect->add_option("--sweep", sweep_str, "comma-separated attack distances in cm");
  detect->add_option("--out", out_dir, "output directory");
  detect->add_option("--format", format, "csv,json");
  detect->add_option("--jobs", jobs, "parallel trial workers");

  // mitigate
  auto* mitigate = app.add_subcommand("mitigate", "Work-efficacy comparison with mitigation on");
  mitigate->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  mitigate->add_option("--map", map_path, "learned map file")->required();
  mitigate->add_option("--trials", trials, "trials per attack model");
  mitigate->add_option("--seed", seed, "base seed");
  mitigate->add_option("--out", out_dir, "output directory");
  mitigate->add_option("--format", format, "csv,json");
  mitigate->add_option("--jobs", jobs, "parallel trial workers");

  // replay
  auto* replay = app.add_subcommand("replay", "Re-run one seed and dump the full trace");
  std::string attack_str = "none", replay_fuzzer = "none", replay_target = "crash_robot";
  std::string mode_str, detectors_str, trace_out = "trace.json";
  bool replay_mitigation = false;
  replay->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  replay->add_option("--seed", seed, "trial seed");
  replay->add_option("--attack", attack_str, "none | suspension | fabrication");
  replay->add_option("--fuzzer", replay_fuzzer, "none | volatile | random_time | robofuzz");
  replay->add_option("--target", replay_target, "crash_robot | reduce_efficacy");
  replay->add_option("--mode", mode_str, "passive | proactive_threshold | proactive_periodic");
  replay->add_option("--detectors", detectors_str,
                     "comma list: fingerprinting,crv,nid,shade");
  replay->add_flag("--mitigation", replay_mitigation, "enable mitigation");
  replay->add_option("--map", map_path, "learned map file (for crv/shade/mitigation)");
  replay->add_option("--out", trace_out, "trace output path");

  CLI11_PARSE(app, argc, argv);

  try {
    const bool want_csv = format.find("csv") != std::string::npos;
    const bool want_json = format.find("json") != std::string::npos;

    if (*learn) {
      const Scenario sc = Scenario::load_file(scenario_path);
      const HistoricalMap map = learn_map(sc, resolution, seed);
      map.save_file(learn_out);
      std::cout << "map: " << learn_out << " cells=" << map.cells().size()
                << " resolution=" << map.resolution_cm() << "cm\n";
      return 0;
    }

    if (*fuzz) {
      const Scenario sc = Scenario::load_file(scenario_path);
      ensure_dir(out_dir);
      std::vector<FuzzTarget> targets;
      if (target_str == "both") {
        targets = {FuzzTarget::CrashRobot, FuzzTarget::ReduceEfficacy};
      } else {
        targets = {parse_target(target_str)};
      }
      for (FuzzTarget target : targets) {
        auto cmp = run_fuzzer_comparison(sc, target, trials, seed, jobs);
        const std::string tag =
            target == FuzzTarget::CrashRobot ? "target1_crash" : "target2_efficacy";
        if (want_csv) {
          write_text_file(out_dir + "/table_" + tag + ".csv", fuzzer_comparison_csv(cmp));
        }
        if (want_json) {
          for (const auto& rep : cmp.reports) {
            std::string fz = rep.spec.fuzzer == FuzzerKind::Volatile      ? "volatile"
                             : rep.spec.fuzzer == FuzzerKind::RandomTime ? "random_time"
                                                                         : "robofuzz";
            write_text_file(out_dir + "/campaign_" + tag + "_" + fz + ".json",
                            rep.to_json_string());
          }
        }
        std::cout << "== " << tag << " ==\n" << fuzzer_comparison_csv(cmp);
      }
      return 0;
    }

    if (*detect) {
      const Scenario sc = Scenario::load_file(scenario_path);
      const HistoricalMap map = HistoricalMap::load_file(map_path);
      ensure_dir(out_dir);
      auto matrix = run_detection_matrix(sc, map, trials, seed, jobs);
      if (want_csv) write_text_file(out_dir + "/detection_matrix.csv", detection_matrix_csv(matrix));
      std::cout << detection_matrix_csv(matrix);
      if (!sweep_str.empty()) {
        CampaignSpec sweep_spec;
        sweep_spec.scenario = sc;
        sweep_spec.attack_model = AttackModel::Suspension;
        sweep_spec.sensor_mode =
            SensorMode{SensorModeKind::ProactiveThreshold, kSafeDistanceCm, 1.0};
        sweep_spec.detectors.composite = true;
        sweep_spec.map = &map;
        sweep_spec.trials = std::max(1, trials / 3);
        sweep_spec.base_seed = seed;
        sweep_spec.shade.nid_baseline_pps = sc.telemetry_hz;
        sweep_spec.jobs = jobs;
        auto points = detection_sweep(sweep_spec, parse_distances(sweep_str));
        if (want_csv) write_text_file(out_dir + "/sweep_suspension.csv", sweep_csv(points));
        std::cout << sweep_csv(points);
      }
      if (want_json) {
        for (size_t i = 0; i < matrix.reports.size(); ++i) {
          const auto& cell = matrix.cells[i];
          write_text_file(out_dir + "/detect_" + cell.attack + "_" + cell.detector + ".json",
                          matrix.reports[i].to_json_string());
        }
      }
      return 0;
    }

    if (*mitigate) {
      const Scenario sc = Scenario::load_file(scenario_path);
      const HistoricalMap map = HistoricalMap::load_file(map_path);
      ensure_dir(out_dir);
      auto cmp = run_mitigation_comparison(sc, map, trials, seed, map.resolution_cm(), jobs);
      if (want_csv) write_text_file(out_dir + "/mitigation.csv", mitigation_csv(cmp));
      if (want_json) {
        for (size_t i = 0; i < cmp.reports.size(); ++i) {
          write_text_file(out_dir + "/mitigate_" + cmp.rows[i].label + ".json",
                          cmp.reports[i].to_json_string());
        }
      }
      std::cout << mitigation_csv(cmp);
      return 0;
    }

    if (*replay) {
      const Scenario sc = Scenario::load_file(scenario_path);
      TrialConfig cfg;
      cfg.scenario = sc;
      cfg.attack = sc.attack;
      if (attack_str == "suspension") cfg.attack.model = AttackModel::Suspension;
      if (attack_str == "fabrication") cfg.attack.model = AttackModel::Fabrication;
      if (cfg.attack.model != AttackModel::None) cfg.attack.compromised = true;
      if (replay_fuzzer == "volatile") cfg.attack.fuzzer = FuzzerKind::Volatile;
      if (replay_fuzzer == "random_time") cfg.attack.fuzzer = FuzzerKind::RandomTime;
      if (replay_fuzzer == "robofuzz") cfg.attack.fuzzer = FuzzerKind::RoboFuzz;
      cfg.fuzz_target = parse_target(replay_target);
      if (mode_str == "passive") cfg.sensor_mode = SensorMode{SensorModeKind::Passive, 20, 1};
      if (mode_str == "proactive_threshold")
        cfg.sensor_mode = SensorMode{SensorModeKind::ProactiveThreshold, 20, 1};
      if (mode_str == "proactive_periodic")
        cfg.sensor_mode = SensorMode{SensorModeKind::ProactivePeriodic, 20, 1};
      cfg.detectors.fingerprinting = detectors_str.find("fingerprinting") != std::string::npos;
      cfg.detectors.crv = detectors_str.find("crv") != std::string::npos;
      cfg.detectors.nid = detectors_str.find("nid") != std::string::npos;
      cfg.detectors.composite = detectors_str.find("shade") != std::string::npos;
      cfg.mitigation = replay_mitigation;
      std::optional<HistoricalMap> map;
      if (!map_path.empty()) {
        map = HistoricalMap::load_file(map_path);
        cfg.map = &*map;
      }
      cfg.seed = seed;
      cfg.keep_trace = true;
      const TrialRecord rec = run_trial(cfg);
      write_text_file(trace_out, rec.to_json_string(true));
      std::cout << "outcome=" << to_string(rec.outcome)
                << " cleaned_cm=" << rec.cleaned_distance_cm
                << " time_s=" << rec.running_time_s << " hash=" << rec.record_hash()
                << " trace=" << trace_out << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
