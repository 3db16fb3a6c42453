#include "robosim/campaign.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <future>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace robosim {

using nlohmann::json;

bool attack_succeeded(const TrialRecord& rec, FuzzTarget target) {
  if (target == FuzzTarget::CrashRobot) return rec.collision;
  return !rec.crossed_door;
}

TrialConfig trial_config_for(const CampaignSpec& spec, int index) {
  TrialConfig cfg;
  cfg.scenario = spec.scenario;
  cfg.attack = spec.scenario.attack;
  cfg.attack.model = spec.attack_model;
  cfg.attack.fuzzer = spec.fuzzer;
  cfg.attack.compromised = spec.attack_model != AttackModel::None;
  cfg.attack.start_time_s = spec.attack_start_s;
  cfg.attack.start_at_distance_cm = spec.attack_at_distance_cm;
  cfg.sensor_mode = spec.sensor_mode;
  cfg.fuzz_target = spec.target;
  cfg.detectors = spec.detectors;
  cfg.mitigation = spec.mitigation;
  cfg.remit = spec.remit;
  cfg.shade = spec.shade;
  cfg.map = spec.map;
  cfg.seed = spec.base_seed + static_cast<std::uint64_t>(index);
  cfg.timeout_s = spec.timeout_s;
  cfg.keep_trace = spec.keep_traces;
  return cfg;
}

CampaignAggregates aggregate(const std::vector<TrialRecord>& records, FuzzTarget target,
                             const std::string& reaction_label) {
  CampaignAggregates agg;
  agg.trials = static_cast<int>(records.size());
  double reaction_sum = 0.0;
  for (const auto& rec : records) {
    if (attack_succeeded(rec, target)) ++agg.successes;
    auto it = rec.first_detection_s.find(reaction_label);
    if (it != rec.first_detection_s.end()) {
      ++agg.detected;
      reaction_sum += it->second - rec.attack_engaged_at_s.value_or(0.0);
    }
    agg.mean_cleaned_cm += rec.cleaned_distance_cm;
    agg.mean_running_s += rec.running_time_s;
  }
  if (agg.trials > 0) {
    agg.success_rate = static_cast<double>(agg.successes) / agg.trials;
    agg.mean_cleaned_cm /= agg.trials;
    agg.mean_running_s /= agg.trials;
  }
  if (agg.detected > 0) agg.mean_reaction_s = reaction_sum / agg.detected;
  return agg;
}

namespace {

std::string primary_detector_label(const DetectorSet& d) {
  if (d.composite) return "shade";
  if (d.fingerprinting) return "fingerprinting";
  if (d.crv) return "crv";
  if (d.nid) return "nid";
  return "shade";
}

}  // namespace

CampaignReport run_campaign(const CampaignSpec& spec) {
  if (spec.trials < 1) throw std::runtime_error("campaign needs at least one trial");
  CampaignReport report;
  report.spec = spec;
  report.records.resize(spec.trials);

  const int jobs = std::max(1, spec.jobs);
  if (jobs == 1) {
    for (int i = 0; i < spec.trials; ++i) {
      report.records[i] = run_trial(trial_config_for(spec, i));
    }
  } else {
    // Trials are independent; results land in their slot so aggregation
    // stays order-independent.
    std::vector<std::future<void>> tasks;
    std::atomic<int> next{0};
    for (int w = 0; w < jobs; ++w) {
      tasks.push_back(std::async(std::launch::async, [&]() {
        while (true) {
          const int i = next.fetch_add(1);
          if (i >= spec.trials) return;
          report.records[i] = run_trial(trial_config_for(spec, i));
        }
      }));
    }
    for (auto& t : tasks) t.get();
  }

  report.aggregates =
      aggregate(report.records, spec.target, primary_detector_label(spec.detectors));
  return report;
}

std::vector<SweepPoint> detection_sweep(const CampaignSpec& spec,
                                        const std::vector<double>& distances_cm) {
  // The attack can only fire at distances the sensor actually passes
  // through; probe the clean trial once to find the reachable range.
  TrialConfig probe_cfg;
  probe_cfg.scenario = spec.scenario;
  probe_cfg.sensor_mode = SensorMode{SensorModeKind::Passive, kSafeDistanceCm, 1.0};
  probe_cfg.seed = spec.base_seed;
  probe_cfg.keep_trace = true;
  double max_seen = 0.0;
  for (const auto& s : run_trial(probe_cfg).trace) {
    if (s.genuine_cm) max_seen = std::max(max_seen, *s.genuine_cm);
  }

  std::vector<SweepPoint> points;
  for (double d : distances_cm) {
    SweepPoint p;
    p.distance_cm = d;
    if (d > max_seen) {
      p.reachable = false;  // skipped with a warning row in the CSV
      points.push_back(p);
      continue;
    }
    CampaignSpec at = spec;
    at.attack_at_distance_cm = d;
    at.attack_start_s = 0.0;
    const CampaignReport rep = run_campaign(at);
    p.trials = rep.aggregates.trials;
    p.detected = rep.aggregates.detected;
    p.mean_reaction_s = rep.aggregates.mean_reaction_s;
    points.push_back(p);
  }
  return points;
}

FuzzerComparison run_fuzzer_comparison(const Scenario& scenario, FuzzTarget target,
                                       int trials, std::uint64_t base_seed, int jobs) {
  FuzzerComparison cmp;
  cmp.target = target;
  const std::vector<std::pair<std::string, FuzzerKind>> fuzzers = {
      {"volatile", FuzzerKind::Volatile},
      {"random_time", FuzzerKind::RandomTime},
      {"robofuzz", FuzzerKind::RoboFuzz},
  };
  for (const auto& [name, kind] : fuzzers) {
    CampaignSpec spec;
    spec.scenario = scenario;
    spec.fuzzer = kind;
    spec.target = target;
    spec.attack_model = AttackModel::Fabrication;
    spec.sensor_mode = SensorMode{SensorModeKind::Passive, kSafeDistanceCm, 1.0};
    spec.trials = trials;
    spec.base_seed = base_seed;
    spec.attack_start_s = 10.0;  // warm-up before the channel goes hostile
    spec.jobs = jobs;
    CampaignReport rep = run_campaign(spec);
    FuzzerComparisonRow row;
    row.fuzzer = name;
    row.successes = rep.aggregates.successes;
    row.trials = rep.aggregates.trials;
    row.rate = rep.aggregates.success_rate;
    cmp.rows.push_back(row);
    cmp.reports.push_back(std::move(rep));
  }
  return cmp;
}

DetectionMatrix run_detection_matrix(const Scenario& scenario, const HistoricalMap& map,
                                     int trials_per_cell, std::uint64_t base_seed,
                                     int jobs) {
  DetectionMatrix matrix;
  const std::vector<std::pair<std::string, AttackModel>> models = {
      {"suspension", AttackModel::Suspension},
      {"fabrication", AttackModel::Fabrication},
  };
  const std::vector<std::string> detectors = {"fingerprinting", "crv", "nid", "shade"};

  for (const auto& [model_name, model] : models) {
    for (const auto& det : detectors) {
      CampaignSpec spec;
      spec.scenario = scenario;
      spec.attack_model = model;
      spec.trials = trials_per_cell;
      spec.base_seed = base_seed;
      spec.attack_start_s = 0.0;  // triggered at the startup of the robot
      spec.map = &map;
      spec.jobs = jobs;
      spec.shade.nid_baseline_pps = scenario.telemetry_hz;
      // Suspension pairs with the proactive mode, fabrication with the
      // passive one; the fabrication values come from the directed fuzzer.
      if (model == AttackModel::Suspension) {
        spec.sensor_mode = SensorMode{SensorModeKind::ProactiveThreshold, kSafeDistanceCm, 1.0};
      } else {
        spec.sensor_mode = SensorMode{SensorModeKind::Passive, kSafeDistanceCm, 1.0};
        spec.fuzzer = FuzzerKind::RoboFuzz;
        spec.target = FuzzTarget::CrashRobot;
      }
      DetectorSet set;
      if (det == "fingerprinting") set.fingerprinting = true;
      if (det == "crv") set.crv = true;
      if (det == "nid") set.nid = true;
      if (det == "shade") set.composite = true;
      spec.detectors = set;

      CampaignReport rep = run_campaign(spec);
      DetectionCell cell;
      cell.attack = model_name;
      cell.detector = det;
      cell.trials = rep.aggregates.trials;
      double reaction_sum = 0.0;
      for (const auto& rec : rep.records) {
        auto it = rec.first_detection_s.find(det);
        if (it != rec.first_detection_s.end()) {
          ++cell.detected;
          reaction_sum += it->second - rec.attack_engaged_at_s.value_or(0.0);
        }
      }
      if (cell.detected > 0) cell.mean_reaction_s = reaction_sum / cell.detected;
      matrix.cells.push_back(cell);
      matrix.reports.push_back(std::move(rep));
    }
  }
  return matrix;
}

MitigationComparison run_mitigation_comparison(const Scenario& scenario,
                                               const HistoricalMap& map, int trials,
                                               std::uint64_t base_seed,
                                               double map_resolution_cm, int jobs) {
  MitigationComparison cmp;
  struct Setup {
    std::string label;
    AttackModel model;
  };
  const std::vector<Setup> setups = {{"clean", AttackModel::None},
                                     {"suspension", AttackModel::Suspension},
                                     {"fabrication", AttackModel::Fabrication}};

  double clean_distance = 0.0;
  double clean_time = 0.0;
  for (const auto& setup : setups) {
    CampaignSpec spec;
    spec.scenario = scenario;
    spec.attack_model = setup.model;
    spec.trials = trials;
    spec.base_seed = base_seed;
    spec.attack_start_s = 0.0;
    spec.jobs = jobs;
    if (setup.model != AttackModel::None) {
      spec.map = &map;
      spec.mitigation = true;
      spec.detectors.composite = true;
      spec.shade.nid_baseline_pps = scenario.telemetry_hz;
      spec.remit.margin_cm = map_resolution_cm;
      if (setup.model == AttackModel::Suspension) {
        spec.sensor_mode =
            SensorMode{SensorModeKind::ProactiveThreshold, kSafeDistanceCm, 1.0};
      } else {
        spec.sensor_mode = SensorMode{SensorModeKind::Passive, kSafeDistanceCm, 1.0};
        spec.fuzzer = FuzzerKind::RoboFuzz;
        spec.target = FuzzTarget::CrashRobot;
      }
    }

    CampaignReport rep = run_campaign(spec);
    MitigationRow row;
    row.label = setup.label;
    row.trials = rep.aggregates.trials;
    row.mean_cleaned_cm = rep.aggregates.mean_cleaned_cm;
    row.mean_running_s = rep.aggregates.mean_running_s;
    for (const auto& rec : rep.records) {
      if (rec.collision) ++row.collisions;
    }
    if (setup.model == AttackModel::None) {
      clean_distance = row.mean_cleaned_cm;
      clean_time = row.mean_running_s;
    } else if (clean_distance > 0.0) {
      row.distance_loss_pct = 100.0 * (clean_distance - row.mean_cleaned_cm) / clean_distance;
      row.time_overhead_pct = 100.0 * (row.mean_running_s - clean_time) / clean_time;
    }
    cmp.rows.push_back(row);
    cmp.reports.push_back(std::move(rep));
  }
  return cmp;
}

// ---- emission ----

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write output file: " + path);
  out << content;
}

namespace {

std::string fmt1(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(1);
  os << v;
  return os.str();
}

}  // namespace

std::string fuzzer_comparison_csv(const FuzzerComparison& cmp) {
  std::ostringstream os;
  os << "fuzzer,successful_trials,trials,success_rate_pct\n";
  for (const auto& row : cmp.rows) {
    os << row.fuzzer << "," << row.successes << "," << row.trials << ","
       << fmt1(100.0 * row.rate) << "\n";
  }
  return os.str();
}

std::string detection_matrix_csv(const DetectionMatrix& m) {
  std::ostringstream os;
  os << "attack_model,detector,trials_detected,trials,mean_reaction_s\n";
  for (const auto& c : m.cells) {
    os << c.attack << "," << c.detector << "," << c.detected << "," << c.trials << ","
       << (c.detected > 0 ? fmt1(c.mean_reaction_s) : std::string("nil")) << "\n";
  }
  return os.str();
}

std::string mitigation_csv(const MitigationComparison& m) {
  std::ostringstream os;
  os << "run,mean_cleaned_cm,mean_running_s,distance_loss_pct,time_overhead_pct,"
        "collisions,trials\n";
  for (const auto& row : m.rows) {
    os << row.label << "," << fmt1(row.mean_cleaned_cm) << "," << fmt1(row.mean_running_s)
       << "," << fmt1(row.distance_loss_pct) << "," << fmt1(row.time_overhead_pct) << ","
       << row.collisions << "," << row.trials << "\n";
  }
  return os.str();
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
  std::ostringstream os;
  os << "attack_distance_cm,mean_reaction_s,detected,trials,note\n";
  for (const auto& p : points) {
    if (!p.reachable) {
      os << fmt1(p.distance_cm) << ",,0,0,unreachable_skipped\n";
    } else {
      os << fmt1(p.distance_cm) << "," << fmt1(p.mean_reaction_s) << "," << p.detected
         << "," << p.trials << ",\n";
    }
  }
  return os.str();
}

std::string trial_series_csv(const CampaignReport& report) {
  std::ostringstream os;
  os << "trial,t_s,genuine_cm,delivered_cm,state\n";
  for (size_t i = 0; i < report.records.size(); ++i) {
    for (const auto& s : report.records[i].trace) {
      os << i << "," << s.t_s << ",";
      if (s.genuine_cm) os << *s.genuine_cm;
      os << ",";
      if (s.delivered_cm) os << *s.delivered_cm;
      os << "," << robosim::to_string(s.state) << "\n";
    }
  }
  return os.str();
}

std::string CampaignReport::to_json_string() const {
  json j;
  j["scenario"] = spec.scenario.name;
  j["trials"] = spec.trials;
  j["base_seed"] = spec.base_seed;
  j["target"] = spec.target == FuzzTarget::CrashRobot ? "crash_robot" : "reduce_efficacy";
  json recs = json::array();
  for (const auto& r : records) recs.push_back(json::parse(r.to_json_string(false)));
  j["records"] = recs;
  j["aggregates"] = {{"trials", aggregates.trials},
                     {"successes", aggregates.successes},
                     {"success_rate", aggregates.success_rate},
                     {"detected", aggregates.detected},
                     {"mean_reaction_s", aggregates.mean_reaction_s},
                     {"mean_cleaned_cm", aggregates.mean_cleaned_cm},
                     {"mean_running_s", aggregates.mean_running_s}};
  return j.dump(2);
}

std::uint64_t CampaignReport::report_hash() const {
  std::uint64_t h = 1469598103934665603ull;
  const std::string s = to_json_string();
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace robosim
