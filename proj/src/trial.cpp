#include "robosim/trial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace robosim {

using nlohmann::json;

const char* to_string(TrialOutcome o) {
  switch (o) {
    case TrialOutcome::Done: return "done";
    case TrialOutcome::Crashed: return "crashed";
    case TrialOutcome::Timeout: return "timeout";
  }
  return "?";
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

FuzzTarget target_from_string(const std::string& s) {
  if (s == "crash_robot") return FuzzTarget::CrashRobot;
  if (s == "reduce_efficacy") return FuzzTarget::ReduceEfficacy;
  throw std::runtime_error("unknown fuzz target: " + s);
}

// One detector running against the trial, with its own engine state.
struct DetectorRun {
  std::string label;
  DetectionMethod kind;
  bool composite;
  Shade engine;
  bool current = false;
};

}  // namespace

TrialRecord run_trial(const TrialConfig& cfg) {
  const Scenario& sc = cfg.scenario;
  if ((cfg.detectors.crv || cfg.detectors.composite || cfg.mitigation) && !cfg.map) {
    throw std::runtime_error(
        "configuration error: CRV/composite detection and mitigation need a learned map");
  }

  TrialRecord rec;
  rec.seed = cfg.seed;
  std::mt19937_64 rng(cfg.seed);
  WorldModel world = sc.make_world();

  SensorConfig sensor_cfg = sc.sensor;
  if (cfg.sensor_mode) sensor_cfg.mode = *cfg.sensor_mode;
  Sensor sensor(sensor_cfg);

  ControllerConfig ctl_cfg = sc.controller;
  ctl_cfg.sensor_mode = sensor_cfg.mode.kind;

  const auto base_plan = build_coverage_plan(sc.rooms, sc.door, sc.robot.start,
                                             ctl_cfg.lane_width_cm, ctl_cfg.lane_margin_cm);
  std::vector<PlanLeg> plan = base_plan;
  size_t pass_boundary_leg = base_plan.size();
  size_t transit_legs = 0;
  if (cfg.plan_passes > 1) {
    if (sc.door) throw std::runtime_error("multi-pass learning supports single-room scenarios");
    if (cfg.plan_passes != 2) throw std::runtime_error("plan_passes must be 1 or 2");
    // Transit: drive to the end the first lane starts its sweep from, then
    // shift back up to the first row and sweep the room a second time.
    const double y_first = base_plan.front().cross_pos_cm;
    const double y_last = base_plan.back().cross_pos_cm;
    const double back = normalize_angle(base_plan.front().heading + kPi);
    const double up = y_first > y_last ? kPi / 2.0 : 3.0 * kPi / 2.0;
    plan.push_back({PlanLeg::Kind::Lane, back, 0.0, y_last});
    plan.push_back({PlanLeg::Kind::Shift, up, std::abs(y_first - y_last), y_last});
    transit_legs = 2;
    plan.insert(plan.end(), base_plan.begin(), base_plan.end());
  }

  std::optional<double> door_plane;
  double side_sign = 0.0;
  if (sc.door) {
    door_plane = sc.door->segment.a.x;
    side_sign = (sc.robot.start.position.x - *door_plane) > 0 ? 1.0 : -1.0;
  }
  Controller controller(ctl_cfg, plan, door_plane, side_sign);

  // Attack channel and generator.
  AttackConfig atk = cfg.attack;
  std::shared_ptr<FabricationGenerator> generator;
  DirectedFuzzer* fuzzer = nullptr;
  if (atk.model == AttackModel::Fabrication) {
    switch (atk.fuzzer) {
      case FuzzerKind::RoboFuzz: {
        const FuzzTarget target =
            cfg.fuzz_target ? *cfg.fuzz_target : target_from_string(atk.robofuzz_target);
        DirectedFuzzerConfig fcfg;
        fcfg.trend.closing_speed_cm_s = sc.robot.speed_cm_s();
        fcfg.gamma_down_rate_cm_s = sc.robot.speed_cm_s();
        fcfg.sample_step_s = sc.tick_s;
        auto df = std::make_shared<DirectedFuzzer>(FuzzPlan::for_target(target), fcfg);
        fuzzer = df.get();
        generator = df;
        break;
      }
      case FuzzerKind::Volatile:
        generator = std::make_shared<VolatileGenerator>(atk.volatile_length);
        break;
      case FuzzerKind::RandomTime: {
        const auto rplan = random_attack_plan(rng, atk.random_window_s, atk.random_delta_cm);
        generator = std::make_shared<RandomTimeAttack>(rplan, atk.random_burst_s);
        break;
      }
      default:
        break;  // bare relay, values unchanged
    }
  }
  AttackChannel channel(atk, generator);

  // Detectors, each with independent engine state.
  std::vector<DetectorRun> detectors;
  auto add_detector = [&](const std::string& label, DetectionMethod kind, bool composite) {
    detectors.push_back({label, kind, composite, Shade(cfg.shade, cfg.map), false});
  };
  if (cfg.detectors.fingerprinting)
    add_detector("fingerprinting", DetectionMethod::Fingerprinting, false);
  if (cfg.detectors.crv) add_detector("crv", DetectionMethod::CRV, false);
  if (cfg.detectors.nid) add_detector("nid", DetectionMethod::NID, false);
  if (cfg.detectors.composite) add_detector("shade", DetectionMethod::Composite, true);

  PacketLog packet_log(6.0 * cfg.shade.nid_window_s);
  double next_telemetry_s = 0.0;
  double next_bare_consult_s = cfg.shade.nid_window_s;

  Remit remit(cfg.remit, cfg.map, sc.robot.speed_cm_s());

  StepResult last_step;
  rec.outcome = TrialOutcome::Timeout;

  while (true) {
    const double t = world.clock_s;
    if (t >= cfg.timeout_s - 1e-9) break;

    const double genuine = world.raycast(world.sensor_pose());
    channel.update_engagement(t, genuine);
    if (channel.just_engaged()) {
      rec.attack_engaged_at_s = t;
      if (channel.model() == AttackModel::Suspension) {
        // Breaking in and silencing the sensor takes only a handful of
        // packets, nothing a traffic profile would notice.
        for (int i = 0; i < 3; ++i) packet_log.add(t, true, 32, "session");
      }
    }
    if (fuzzer) {
      fuzzer->observe(t, channel.engaged() ? std::optional<double>(genuine) : std::nullopt,
                      controller.state().kind);
    }

    auto reading = sensor.sample(world, rng);
    auto delivered = deliver(reading, channel, sensor_cfg.latency, t, rng);
    if (channel.last_intercept_packets() > 0) {
      packet_log.add(t, true, 48, "fetch");
      packet_log.add(t, false, 48, "push");
    }
    while (next_telemetry_s <= t + 1e-9) {
      packet_log.add(next_telemetry_s, false, 64, "telemetry");
      next_telemetry_s += 1.0 / sc.telemetry_hz;
    }

    // Detection.
    bool attack_now = false;
    if (!detectors.empty()) {
      DetectionRequest req;
      req.has_sensor_info = true;
      req.mode = sensor_cfg.mode.kind;
      req.alert_at_cm = sensor_cfg.mode.alert_at_cm;
      req.pose = world.sensor_pose();
      req.reading = delivered;
      if (sensor_cfg.mode.kind == SensorModeKind::Passive && delivered &&
          delivered->kind == ReadingKind::Numeric) {
        req.latency_ms = delivered->observed_latency_ms;
      }
      req.time_s = t;

      const bool bare_due = t + 1e-9 >= next_bare_consult_s;
      if (bare_due) next_bare_consult_s += cfg.shade.nid_window_s;

      for (auto& d : detectors) {
        bool verdict = false;
        if (d.composite) {
          verdict = d.engine.evaluate(req, packet_log).attack;
          if (bare_due) {
            DetectionRequest bare;
            bare.time_s = t;
            verdict = d.engine.evaluate(bare, packet_log).attack || verdict;
          }
        } else {
          switch (d.kind) {
            case DetectionMethod::Fingerprinting:
              verdict = req.latency_ms && d.engine.fingerprinting_check(*req.latency_ms);
              break;
            case DetectionMethod::CRV:
              verdict = d.engine.crv_check(
                  *req.pose, req.reading, req.alert_at_cm,
                  sensor_cfg.mode.kind == SensorModeKind::ProactiveThreshold, t);
              break;
            case DetectionMethod::NID:
              verdict = d.engine.nid_check(packet_log, t);
              break;
            default:
              break;
          }
        }
        if (verdict && !d.current) {
          rec.verdict_audit.push_back({t, d.kind});
          if (!rec.first_detection_s.count(d.label)) rec.first_detection_s[d.label] = t;
        }
        d.current = verdict;
        attack_now = attack_now || verdict;
      }
    }

    // Mitigation.
    ControllerInput in;
    in.t = t;
    in.pose = world.robot_pose;
    in.delivered = delivered;
    if (cfg.mitigation) {
      if (attack_now && !remit.active()) {
        DetectionVerdict cause;
        cause.attack = true;
        cause.method = rec.verdict_audit.empty() ? DetectionMethod::Composite
                                                 : rec.verdict_audit.back().method;
        cause.issued_at_s = t;
        remit.enter_mitigation(t, cause);
      }
      if (remit.active()) {
        remit.try_block_attacker(channel, rng, t);
        auto decision =
            remit.mitigation_tick(t, world.sensor_pose(), last_step.bumper_contact, controller);
        if (decision.cannot_navigate) rec.remit_cannot_navigate = true;
        in.mitigation_active = true;
        in.perceived_override = decision.perceived_cm;
        in.turn_threshold_override = decision.turn_threshold_cm;
        in.speed_factor = decision.speed_factor;
        in.hold = decision.hold;
        remit.maybe_exit(t, attack_now);
      }
    }

    const auto out = controller.tick(in);
    if (out.reading_rejected) ++rec.rejected_readings;

    if (cfg.keep_trace) {
      TickSample s;
      s.t_s = t;
      s.pose = world.robot_pose;
      s.genuine_cm = genuine;
      if (delivered && delivered->kind == ReadingKind::Numeric) s.delivered_cm = delivered->value_cm;
      s.delivered_accepted = out.reading_accepted;
      s.state = controller.state().kind;
      s.commanded_speed_cm_s =
          out.command.kind == MotionCommand::Kind::Forward ? out.command.forward_speed_cm_s : 0.0;
      // Pass index for learning; the repositioning transit between passes
      // belongs to neither sweep.
      if (controller.current_leg() < pass_boundary_leg) {
        s.pass = 0;
      } else if (controller.current_leg() < pass_boundary_leg + transit_legs) {
        s.pass = -1;
      } else {
        s.pass = 1;
      }
      rec.trace.push_back(s);
    }

    if (controller.done()) {
      rec.outcome = TrialOutcome::Done;
      if (cfg.mitigation && !remit.task_completion_signaled()) remit.signal_completion();
      break;
    }

    last_step = world.step(out.command, sc.tick_s);
    if (last_step.moved) {
      controller.on_moved(out.command.forward_speed_cm_s * sc.tick_s);
    }
    if (last_step.collision) {
      rec.collision = true;
      rec.collision_t_s = last_step.collision->time_s;
      ControllerInput spin_in;
      spin_in.t = world.clock_s;
      spin_in.pose = world.robot_pose;
      spin_in.collision = true;
      controller.tick(spin_in);
      rec.outcome = TrialOutcome::Crashed;
      break;
    }
  }

  rec.crossed_door = controller.crossed_door();
  if (controller.crossed_door_at()) rec.crossed_door_t_s = *controller.crossed_door_at();
  rec.door_blocked = controller.door_blocked();
  rec.cleaned_distance_cm = controller.state().cleaned_distance_cm;
  rec.running_time_s = world.clock_s;
  rec.sound_events = static_cast<int>(remit.state().sound_events_s.size());
  if (!remit.state().sound_events_s.empty()) {
    rec.first_sound_s = remit.state().sound_events_s.front();
  }
  rec.detours = remit.detours();
  rec.completion_events = remit.completions();
  rec.reset_requests = controller.reset_requests();
  if (fuzzer) {
    rec.fuzz_triggered = fuzzer->triggered() || fuzzer->triggered_at().has_value();
    rec.fuzz_triggered_at_s = fuzzer->triggered_at();
  }
  return rec;
}

std::vector<LearnSample> collect_learn_trace(const Scenario& scenario, int passes,
                                             std::uint64_t seed) {
  TrialConfig cfg;
  cfg.scenario = scenario;
  cfg.attack = AttackConfig{};  // clean run
  cfg.seed = seed;
  cfg.plan_passes = passes;
  cfg.keep_trace = true;
  cfg.timeout_s = 600.0;
  const TrialRecord rec = run_trial(cfg);
  if (rec.outcome != TrialOutcome::Done) {
    throw std::runtime_error("learn run did not complete cleanly");
  }
  std::vector<LearnSample> samples;
  samples.reserve(rec.trace.size());
  const double radius = scenario.robot.radius_cm;
  for (const auto& s : rec.trace) {
    if (!s.genuine_cm || s.pass < 0) continue;
    // Rotation ticks sample along the outgoing heading of the previous
    // leg; they belong to no sweep.
    if (s.state == ControlStateKind::Turning) continue;
    Pose sensor_pose = s.pose;
    sensor_pose.position = s.pose.position + heading_dir(s.pose.heading) * radius;
    samples.push_back({sensor_pose, *s.genuine_cm, s.pass});
  }
  return samples;
}

HistoricalMap learn_map(const Scenario& scenario, double resolution_cm,
                        std::uint64_t seed) {
  const auto trace = collect_learn_trace(scenario, 2, seed);
  Rect bounds = scenario.bounding_box();
  bounds.min.x -= resolution_cm;
  bounds.min.y -= resolution_cm;
  bounds.max.x += resolution_cm;
  bounds.max.y += resolution_cm;
  return HistoricalMap::learn(trace, bounds, resolution_cm,
                              {scenario.name, seed});
}

std::string TrialRecord::to_json_string(bool with_trace) const {
  json j;
  j["outcome"] = robosim::to_string(outcome);
  j["seed"] = seed;
  j["collision"] = collision;
  j["collision_t_s"] = collision_t_s;
  j["crossed_door"] = crossed_door;
  j["crossed_door_t_s"] = crossed_door_t_s;
  j["door_blocked"] = door_blocked;
  j["cleaned_distance_cm"] = cleaned_distance_cm;
  j["running_time_s"] = running_time_s;
  if (attack_engaged_at_s) j["attack_engaged_at_s"] = *attack_engaged_at_s;
  json det = json::object();
  for (const auto& [label, t] : first_detection_s) det[label] = t;
  j["first_detection_s"] = det;
  json audit = json::array();
  for (const auto& v : verdict_audit) {
    audit.push_back({{"t_s", v.t_s}, {"method", robosim::to_string(v.method)}});
  }
  j["verdict_audit"] = audit;
  j["sound_events"] = sound_events;
  if (first_sound_s) j["first_sound_s"] = *first_sound_s;
  j["detours"] = detours;
  j["completion_events"] = completion_events;
  j["reset_requests"] = reset_requests;
  j["rejected_readings"] = rejected_readings;
  j["fuzz_triggered"] = fuzz_triggered;
  if (fuzz_triggered_at_s) j["fuzz_triggered_at_s"] = *fuzz_triggered_at_s;
  j["remit_cannot_navigate"] = remit_cannot_navigate;
  if (with_trace) {
    json tr = json::array();
    for (const auto& s : trace) {
      json row = {{"t_s", s.t_s},
                  {"x_cm", s.pose.position.x},
                  {"y_cm", s.pose.position.y},
                  {"heading_rad", s.pose.heading},
                  {"state", robosim::to_string(s.state)},
                  {"speed_cm_s", s.commanded_speed_cm_s},
                  {"accepted", s.delivered_accepted}};
      if (s.genuine_cm) row["genuine_cm"] = *s.genuine_cm;
      if (s.delivered_cm) row["delivered_cm"] = *s.delivered_cm;
      tr.push_back(row);
    }
    j["trace"] = tr;
  }
  return j.dump();
}

std::uint64_t TrialRecord::record_hash() const { return fnv1a(to_json_string(false)); }

}  // namespace robosim
