// Acceptance suite: runs the full experiment matrix on the shipped
// scenarios and checks every published-result criterion at its stated
// tolerance. Prints one PASS/FAIL line per criterion.

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include "robosim/campaign.hpp"
#include "test_support.hpp"

using namespace robosim;

namespace {

struct Criterion {
  std::string name;
  bool pass = true;
  std::string detail;
};

std::vector<Criterion> g_results;

void report(const std::string& name, bool pass, const std::string& detail) {
  g_results.push_back({name, pass, detail});
  std::printf("[%s] %s — %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
}

int row_successes(const FuzzerComparison& cmp, const std::string& fuzzer) {
  for (const auto& r : cmp.rows) {
    if (r.fuzzer == fuzzer) return r.successes;
  }
  return -1;
}

const DetectionCell* cell(const DetectionMatrix& m, const std::string& attack,
                          const std::string& detector) {
  for (const auto& c : m.cells) {
    if (c.attack == attack && c.detector == detector) return &c;
  }
  return nullptr;
}

TrialConfig robofuzz_trial_cfg(const Scenario& sc, FuzzTarget target, std::uint64_t seed) {
  TrialConfig cfg;
  cfg.scenario = sc;
  cfg.attack.model = AttackModel::Fabrication;
  cfg.attack.fuzzer = FuzzerKind::RoboFuzz;
  cfg.attack.compromised = true;
  cfg.attack.start_time_s = 10.0;
  cfg.fuzz_target = target;
  cfg.seed = seed;
  cfg.keep_trace = true;
  return cfg;
}

}  // namespace

int main() {
  const Scenario two_room = robosim::test::load_scenario("two_room");
  const Scenario room = robosim::test::load_scenario("cleaning_room");
  const int jobs = std::max(2u, std::thread::hardware_concurrency());
  const HistoricalMap map = learn_map(room, 2.5, 7);

  // ---- 1 & 2: fuzzing-method comparison, 30 seeded trials per method ----
  {
    const auto cmp1 = run_fuzzer_comparison(two_room, FuzzTarget::CrashRobot, 30, 101, jobs);
    const int vol = row_successes(cmp1, "volatile");
    const int rnd = row_successes(cmp1, "random_time");
    const int rf = row_successes(cmp1, "robofuzz");
    std::ostringstream os;
    os << "volatile " << vol << "/30, random " << rnd << "/30, directed " << rf << "/30";
    report("criterion 1: crash-target success rates", vol == 0 && rnd <= 9 && rf >= 29,
           os.str());

    const auto cmp2 =
        run_fuzzer_comparison(two_room, FuzzTarget::ReduceEfficacy, 30, 101, jobs);
    const int vol2 = row_successes(cmp2, "volatile");
    const int rnd2 = row_successes(cmp2, "random_time");
    const int rf2 = row_successes(cmp2, "robofuzz");
    std::ostringstream os2;
    os2 << "volatile " << vol2 << "/30, random " << rnd2 << "/30, directed " << rf2 << "/30";
    report("criterion 2: efficacy-target success rates",
           vol2 == 0 && rnd2 <= 9 && rf2 >= 27, os2.str());
  }

  // ---- 3 & 4: detection matrix and reaction times ----
  {
    const auto matrix = run_detection_matrix(room, map, 10, 201, jobs);
    const auto* s_fp = cell(matrix, "suspension", "fingerprinting");
    const auto* s_crv = cell(matrix, "suspension", "crv");
    const auto* s_nid = cell(matrix, "suspension", "nid");
    const auto* s_sh = cell(matrix, "suspension", "shade");
    const auto* f_fp = cell(matrix, "fabrication", "fingerprinting");
    const auto* f_crv = cell(matrix, "fabrication", "crv");
    const auto* f_nid = cell(matrix, "fabrication", "nid");
    const auto* f_sh = cell(matrix, "fabrication", "shade");

    const bool counts_ok = s_fp->detected == 0 && s_crv->detected == 10 &&
                           s_nid->detected == 0 && s_sh->detected == 10 &&
                           f_fp->detected == 10 && f_crv->detected == 10 &&
                           f_nid->detected == 10 && f_sh->detected == 10;
    std::ostringstream os;
    os << "suspension fp/crv/nid/shade " << s_fp->detected << "/" << s_crv->detected << "/"
       << s_nid->detected << "/" << s_sh->detected << "; fabrication " << f_fp->detected
       << "/" << f_crv->detected << "/" << f_nid->detected << "/" << f_sh->detected
       << " of 10";
    report("criterion 3: detection matrix", counts_ok, os.str());

    WorldModel w = room.make_world();
    const double d0 = w.raycast(w.sensor_pose());
    const double law = (d0 - kSafeDistanceCm) / room.robot.speed_cm_s();
    const double two_ticks = 2.0 * room.tick_s + 1e-9;
    const bool reactions_ok = f_sh->mean_reaction_s <= 1.0 && f_fp->mean_reaction_s <= 1.0 &&
                              f_nid->mean_reaction_s >= 9.0 &&
                              f_nid->mean_reaction_s <= 12.0 &&
                              std::abs(s_sh->mean_reaction_s - law) <= two_ticks &&
                              std::abs(s_crv->mean_reaction_s - law) <= two_ticks;
    std::ostringstream os4;
    os4 << "fabrication shade/fp " << f_sh->mean_reaction_s << "/" << f_fp->mean_reaction_s
        << " s, nid " << f_nid->mean_reaction_s << " s; suspension shade/crv "
        << s_sh->mean_reaction_s << "/" << s_crv->mean_reaction_s << " s vs law " << law
        << " s";
    report("criterion 4: reaction times", reactions_ok, os4.str());
  }

  // ---- 5: reaction-time sweep over attack distances ----
  {
    const std::vector<double> distances = {100, 90, 80, 70, 60, 50, 35, 25};
    bool ok = true;
    std::ostringstream os;
    for (auto model : {AttackModel::Suspension, AttackModel::Fabrication}) {
      CampaignSpec spec;
      spec.scenario = room;
      spec.attack_model = model;
      spec.detectors.composite = true;
      spec.map = &map;
      spec.trials = 3;
      spec.base_seed = 401;
      spec.jobs = jobs;
      spec.shade.nid_baseline_pps = room.telemetry_hz;
      if (model == AttackModel::Suspension) {
        spec.sensor_mode =
            SensorMode{SensorModeKind::ProactiveThreshold, kSafeDistanceCm, 1.0};
      } else {
        spec.sensor_mode = SensorMode{SensorModeKind::Passive, kSafeDistanceCm, 1.0};
        spec.fuzzer = FuzzerKind::RoboFuzz;
        spec.target = FuzzTarget::CrashRobot;
      }
      const auto points = detection_sweep(spec, distances);
      double prev = 1e9;
      for (const auto& p : points) {
        if (!p.reachable || p.detected < p.trials) ok = false;
        if (p.mean_reaction_s > prev + 1e-9) ok = false;
        prev = p.mean_reaction_s;
      }
      if (points.back().mean_reaction_s > 3.0) ok = false;
      os << (model == AttackModel::Suspension ? "suspension" : "fabrication") << " 100cm->"
         << points.front().mean_reaction_s << "s, 25cm->" << points.back().mean_reaction_s
         << "s; ";
    }
    report("criterion 5: sweep non-increasing, <= 3 s at 25 cm", ok, os.str());
  }

  // ---- 6: mitigation efficacy ----
  std::vector<CampaignReport> mitigation_reports;
  {
    const auto cmp = run_mitigation_comparison(room, map, 5, 301, map.resolution_cm(), jobs);
    mitigation_reports = cmp.reports;
    bool ok = true;
    std::ostringstream os;
    for (const auto& row : cmp.rows) {
      if (row.label == "clean") continue;
      if (row.distance_loss_pct > 10.0) ok = false;
      if (row.time_overhead_pct > 15.0) ok = false;
      os << row.label << " loss " << row.distance_loss_pct << "%, time +"
         << row.time_overhead_pct << "%; ";
    }
    RemitConfig rcfg;
    Remit remit(rcfg, &map, room.robot.speed_cm_s());
    remit.enter_mitigation(0.0, DetectionVerdict{true, DetectionMethod::Composite, 0.0});
    const bool speed_exact =
        remit.state().speed_cm_s == 0.9 * room.robot.speed_cm_s();
    if (!speed_exact) ok = false;
    os << "mitigation speed " << remit.state().speed_cm_s << " cm/s";
    report("criterion 6: mitigation keeps >= 90% work at <= 1.15x time", ok, os.str());
  }

  // ---- 7: rationality of the directed stream, volatility of the baseline ----
  {
    bool all_accepted = true;
    for (auto target : {FuzzTarget::CrashRobot, FuzzTarget::ReduceEfficacy}) {
      for (std::uint64_t seed = 501; seed < 511; ++seed) {
        const auto rec = run_trial(robofuzz_trial_cfg(two_room, target, seed));
        if (!rec.fuzz_triggered) all_accepted = false;
        for (const auto& s : rec.trace) {
          if (s.delivered_cm && !s.delivered_accepted) all_accepted = false;
        }
      }
    }

    std::mt19937_64 rng(601);
    const auto stream = VolatileGenerator::stream(rng, 10005);
    int rejected_windows = 0;
    const int windows = 10000;
    for (int i = 0; i < windows; ++i) {
      VolatilityFilter f(VolatilityFilterConfig{});
      bool verdict = true;
      for (int j = 0; j < 6; ++j) verdict = f.accept(stream[i + j]);
      if (!verdict) ++rejected_windows;
    }
    std::ostringstream os;
    os << "directed streams accepted in 20/20 trials; " << rejected_windows << "/" << windows
       << " volatile windows rejected";
    report("criterion 7: rational vs volatile streams",
           all_accepted && rejected_windows == windows, os.str());
  }

  // ---- 8: physics and consistency ----
  {
    bool ok = true;
    std::ostringstream os;

    // ray bounds at random poses in both scenarios
    std::mt19937_64 rng(701);
    for (const Scenario* sc : {&room, &two_room}) {
      WorldModel w = sc->make_world();
      const Rect box = sc->bounding_box();
      std::uniform_real_distribution<double> ux(box.min.x, box.max.x);
      std::uniform_real_distribution<double> uy(box.min.y, box.max.y);
      std::uniform_real_distribution<double> uh(0.0, 2.0 * kPi);
      for (int i = 0; i < 5000; ++i) {
        Pose p{{ux(rng), uy(rng)}, uh(rng)};
        if (!w.position_in_rooms(p.position)) continue;
        const double d = w.raycast(p);
        if (d < kSensorMinCm || d > kSensorMaxCm) ok = false;
      }
    }

    // zero false positives across >= 100 seeded clean trials
    int clean_trials = 0;
    int false_positives = 0;
    for (int i = 0; i < 30; ++i) {
      for (auto mode : {SensorModeKind::Passive, SensorModeKind::ProactiveThreshold}) {
        TrialConfig cfg;
        cfg.scenario = room;
        cfg.sensor_mode = SensorMode{mode, kSafeDistanceCm, 1.0};
        cfg.map = &map;
        cfg.detectors = DetectorSet{true, true, true, true};
        cfg.shade.nid_baseline_pps = room.telemetry_hz;
        cfg.seed = 801 + i;
        const auto rec = run_trial(cfg);
        ++clean_trials;
        false_positives += static_cast<int>(rec.verdict_audit.size());
      }
    }
    for (int i = 0; i < 40; ++i) {
      TrialConfig cfg;
      cfg.scenario = two_room;
      cfg.detectors.fingerprinting = true;
      cfg.detectors.nid = true;
      cfg.shade.nid_baseline_pps = two_room.telemetry_hz;
      cfg.seed = 901 + i;
      const auto rec = run_trial(cfg);
      ++clean_trials;
      false_positives += static_cast<int>(rec.verdict_audit.size());
    }
    if (clean_trials < 100 || false_positives != 0) ok = false;
    os << clean_trials << " clean trials, " << false_positives << " false verdicts; ";

    // zero collisions in the mitigation campaigns
    int mitigation_collisions = 0;
    for (const auto& rep : mitigation_reports) {
      for (const auto& rec : rep.records) {
        if (rec.collision) ++mitigation_collisions;
      }
    }
    if (mitigation_collisions != 0) ok = false;
    os << mitigation_collisions << " mitigation collisions; ";

    // bit-identical reports for repeated seeds
    CampaignSpec spec;
    spec.scenario = two_room;
    spec.fuzzer = FuzzerKind::RandomTime;
    spec.target = FuzzTarget::CrashRobot;
    spec.attack_model = AttackModel::Fabrication;
    spec.sensor_mode = SensorMode{SensorModeKind::Passive, kSafeDistanceCm, 1.0};
    spec.attack_start_s = 10.0;
    spec.trials = 5;
    spec.base_seed = 1001;
    spec.jobs = jobs;
    const bool identical = run_campaign(spec).report_hash() == run_campaign(spec).report_hash();
    if (!identical) ok = false;
    os << (identical ? "reports bit-identical; " : "reports differ; ");

    // map prediction error on the learn trajectory
    const auto trace = collect_learn_trace(room, 2, 7);
    const double bound = std::sqrt(2.0) * map.resolution_cm() + 1e-9;
    double worst = 0.0;
    for (const auto& s : trace) {
      if (s.reading_cm >= kSensorMaxCm - 1e-6) continue;
      const auto d = map.expected_distance(s.sensor_pose);
      if (!d) continue;
      worst = std::max(worst, std::abs(*d - s.reading_cm));
    }
    if (worst > bound) ok = false;
    os << "map error " << worst << " cm (bound " << bound << ")";
    report("criterion 8: physics and consistency suite", ok, os.str());
  }

  // ---- 9: curve shapes of successful directed attacks ----
  {
    bool ok = true;
    std::ostringstream os;

    const auto crash = run_trial(robofuzz_trial_cfg(two_room, FuzzTarget::CrashRobot, 531));
    if (!crash.collision || !crash.fuzz_triggered_at_s) ok = false;
    if (crash.fuzz_triggered_at_s) {
      const double trig = *crash.fuzz_triggered_at_s;
      std::vector<double> before, after;
      for (const auto& s : crash.trace) {
        if (!s.delivered_cm) continue;
        if (s.t_s > trig - 3.0 && s.t_s < trig) before.push_back(*s.delivered_cm);
        if (s.t_s >= trig) after.push_back(*s.delivered_cm);
      }
      for (size_t i = 1; i < before.size(); ++i) {
        if (before[i] >= before[i - 1]) ok = false;
      }
      for (size_t i = 1; i < after.size(); ++i) {
        if (after[i] <= after[i - 1]) ok = false;
      }
      os << "crash curve: " << before.size() << " falling then " << after.size()
         << " rising samples; ";
    }

    const auto eff = run_trial(robofuzz_trial_cfg(two_room, FuzzTarget::ReduceEfficacy, 532));
    if (eff.crossed_door || !eff.door_blocked || !eff.fuzz_triggered_at_s) ok = false;
    auto cleaning = [](ControlStateKind k) {
      return k == ControlStateKind::Forward || k == ControlStateKind::DoorCrossing;
    };
    bool genuine_jump = false;
    bool delivered_jump = false;
    for (size_t i = 1; i < eff.trace.size(); ++i) {
      const auto& a = eff.trace[i - 1];
      const auto& b = eff.trace[i];
      if (!cleaning(a.state) || !cleaning(b.state)) continue;  // skip turn edges
      if (a.genuine_cm && b.genuine_cm && *b.genuine_cm - *a.genuine_cm > 50.0) {
        genuine_jump = true;
      }
      if (a.delivered_cm && b.delivered_cm && *b.delivered_cm - *a.delivered_cm > 50.0) {
        delivered_jump = true;
      }
    }
    if (!genuine_jump || delivered_jump) ok = false;
    os << "efficacy curve: door jump present in genuine, suppressed in delivered";
    report("criterion 9: attack curve shapes", ok, os.str());
  }

  int failures = 0;
  for (const auto& c : g_results) {
    if (!c.pass) ++failures;
  }
  std::printf("\n%zu/%zu criteria passed\n", g_results.size() - failures, g_results.size());
  return failures == 0 ? 0 : 1;
}
