#include "robosim/scenario.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace robosim {

using nlohmann::json;

namespace {

void require_keys(const json& o, const std::string& ctx,
                  const std::set<std::string>& allowed) {
  if (!o.is_object()) throw std::runtime_error("scenario: " + ctx + " must be an object");
  for (auto it = o.begin(); it != o.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw std::runtime_error("scenario: unknown key '" + it.key() + "' in " + ctx);
    }
  }
}

Segment parse_segment(const json& j, const std::string& ctx) {
  require_keys(j, ctx, {"ax", "ay", "bx", "by"});
  return {{j.at("ax").get<double>(), j.at("ay").get<double>()},
          {j.at("bx").get<double>(), j.at("by").get<double>()}};
}

Rect parse_rect(const json& j, const std::string& ctx) {
  require_keys(j, ctx, {"min_x", "min_y", "max_x", "max_y"});
  Rect r{{j.at("min_x").get<double>(), j.at("min_y").get<double>()},
         {j.at("max_x").get<double>(), j.at("max_y").get<double>()}};
  if (r.min.x > r.max.x || r.min.y > r.max.y) {
    throw std::runtime_error("scenario: degenerate rectangle in " + ctx);
  }
  return r;
}

ObstacleBehavior parse_behavior(const json& j, const std::string& ctx) {
  require_keys(j, ctx, {"type", "speed_cm_s", "start_time_s"});
  const std::string type = j.at("type").get<std::string>();
  const double speed = j.value("speed_cm_s", 0.0);
  const double start = j.value("start_time_s", 0.0);
  if (type == "static") return StaticBehavior{};
  if (speed <= 0.0 && type != "moves_out_of_path") {
    throw std::runtime_error("scenario: dynamic obstacle needs speed_cm_s > 0 in " + ctx);
  }
  if (type == "moves_away_same_direction") return MovesAwaySameDirection{speed, start};
  if (type == "moves_toward_robot") return MovesTowardRobot{speed, start};
  if (type == "moves_out_of_path") {
    MovesOutOfPath b;
    b.start_time_s = start;
    if (speed > 0.0) b.speed_cm_s = speed;
    return b;
  }
  throw std::runtime_error("scenario: unknown obstacle behavior '" + type + "'");
}

SensorModeKind parse_mode(const std::string& s) {
  if (s == "passive") return SensorModeKind::Passive;
  if (s == "proactive_threshold") return SensorModeKind::ProactiveThreshold;
  if (s == "proactive_periodic") return SensorModeKind::ProactivePeriodic;
  throw std::runtime_error("scenario: unknown sensor mode '" + s + "'");
}

AttackModel parse_attack_model(const std::string& s) {
  if (s == "none") return AttackModel::None;
  if (s == "suspension") return AttackModel::Suspension;
  if (s == "fabrication") return AttackModel::Fabrication;
  throw std::runtime_error("scenario: unknown attack model '" + s + "'");
}

FuzzerKind parse_fuzzer(const std::string& s) {
  if (s == "none") return FuzzerKind::None;
  if (s == "robofuzz") return FuzzerKind::RoboFuzz;
  if (s == "volatile") return FuzzerKind::Volatile;
  if (s == "random_time") return FuzzerKind::RandomTime;
  throw std::runtime_error("scenario: unknown fuzzer '" + s + "'");
}

}  // namespace

Scenario Scenario::from_json_string(const std::string& text) {
  const json j = json::parse(text);
  require_keys(j, "scenario",
               {"name", "description", "tick_s", "seed", "robot", "rooms", "walls",
                "obstacles", "door", "sensor", "controller", "attack", "telemetry_hz"});

  Scenario sc;
  sc.name = j.value("name", "unnamed");
  sc.description = j.value("description", "");
  sc.tick_s = j.value("tick_s", 0.1);
  if (sc.tick_s <= 0.0) throw std::runtime_error("scenario: tick_s must be positive");
  sc.seed = j.value("seed", std::uint64_t{1});
  sc.telemetry_hz = j.value("telemetry_hz", 2.0);

  const auto& rj = j.at("robot");
  require_keys(rj, "robot",
               {"start_x_cm", "start_y_cm", "heading_deg", "radius_cm", "speed_mm_s"});
  sc.robot.start.position = {rj.at("start_x_cm").get<double>(),
                             rj.at("start_y_cm").get<double>()};
  sc.robot.start.heading = normalize_angle(rj.at("heading_deg").get<double>() * kPi / 180.0);
  sc.robot.radius_cm = rj.value("radius_cm", 17.0);
  sc.robot.speed_mm_s = rj.value("speed_mm_s", 50.0);

  for (const auto& room : j.at("rooms")) sc.rooms.push_back(parse_rect(room, "rooms[]"));
  if (sc.rooms.empty()) throw std::runtime_error("scenario: needs at least one room");
  for (const auto& wall : j.at("walls")) sc.walls.push_back(parse_segment(wall, "walls[]"));

  if (j.contains("obstacles")) {
    for (const auto& oj : j.at("obstacles")) {
      require_keys(oj, "obstacles[]", {"id", "rect", "segment", "behavior", "active"});
      ObstacleSpec ob;
      ob.id = oj.at("id").get<std::string>();
      if (oj.contains("rect") == oj.contains("segment")) {
        throw std::runtime_error("scenario: obstacle needs exactly one of rect/segment");
      }
      if (oj.contains("rect")) {
        ob.shape = parse_rect(oj.at("rect"), "obstacle rect");
      } else {
        ob.shape = parse_segment(oj.at("segment"), "obstacle segment");
      }
      ob.behavior = oj.contains("behavior") ? parse_behavior(oj.at("behavior"), "behavior")
                                            : ObstacleBehavior{StaticBehavior{}};
      ob.active = oj.value("active", true);
      sc.obstacles.push_back(std::move(ob));
    }
  }

  if (j.contains("door")) {
    const auto& dj = j.at("door");
    require_keys(dj, "door", {"ax", "ay", "bx", "by", "opens_at_s"});
    SlidingDoorSpec door;
    door.segment = parse_segment(
        json{{"ax", dj.at("ax")}, {"ay", dj.at("ay")}, {"bx", dj.at("bx")}, {"by", dj.at("by")}},
        "door");
    door.opens_at_s = dj.value("opens_at_s", 0.0);
    sc.door = door;
  }

  if (j.contains("sensor")) {
    const auto& sj = j.at("sensor");
    require_keys(sj, "sensor",
                 {"mode", "alert_at_cm", "period_s", "genuine_latency_ms",
                  "network_latency_ms"});
    sc.sensor.mode.kind = parse_mode(sj.value("mode", std::string("passive")));
    sc.sensor.mode.alert_at_cm = sj.value("alert_at_cm", kSafeDistanceCm);
    sc.sensor.mode.period_s = sj.value("period_s", 1.0);
    if (sc.sensor.mode.period_s <= 0.0) {
      throw std::runtime_error("scenario: sensor period_s must be positive");
    }
    if (sc.sensor.mode.alert_at_cm < kSensorMinCm ||
        sc.sensor.mode.alert_at_cm > kSensorMaxCm) {
      throw std::runtime_error("scenario: alert_at_cm outside sensor range");
    }
    if (sj.contains("genuine_latency_ms")) {
      sc.sensor.latency.genuine_lo_ms = sj.at("genuine_latency_ms").at(0).get<double>();
      sc.sensor.latency.genuine_hi_ms = sj.at("genuine_latency_ms").at(1).get<double>();
    }
    if (sj.contains("network_latency_ms")) {
      sc.sensor.latency.network_lo_ms = sj.at("network_latency_ms").at(0).get<double>();
      sc.sensor.latency.network_hi_ms = sj.at("network_latency_ms").at(1).get<double>();
    }
    if (!sc.sensor.latency.ranges_disjoint()) {
      throw std::runtime_error("scenario: latency ranges must be disjoint");
    }
  }

  if (j.contains("controller")) {
    const auto& cj = j.at("controller");
    require_keys(cj, "controller",
                 {"safe_distance_cm", "lane_margin_cm", "lane_width_cm", "filter_window",
                  "filter_max_reversals", "filter_reversal_magnitude_cm"});
    sc.controller.safe_distance_cm = cj.value("safe_distance_cm", kSafeDistanceCm);
    sc.controller.lane_margin_cm =
        cj.value("lane_margin_cm", sc.controller.safe_distance_cm + sc.robot.radius_cm);
    sc.controller.lane_width_cm = cj.value("lane_width_cm", 2.0 * sc.robot.radius_cm);
    sc.controller.filter.window = cj.value("filter_window", 6);
    sc.controller.filter.max_reversals = cj.value("filter_max_reversals", 3);
    sc.controller.filter.reversal_magnitude_cm =
        cj.value("filter_reversal_magnitude_cm", 30.0);
    if (sc.controller.filter.window < 3) {
      throw std::runtime_error("scenario: filter window must be >= 3");
    }
  } else {
    sc.controller.lane_width_cm = 2.0 * sc.robot.radius_cm;
  }
  sc.controller.speed_cm_s = sc.robot.speed_cm_s();
  sc.controller.tick_s = sc.tick_s;

  if (j.contains("attack")) {
    const auto& aj = j.at("attack");
    require_keys(aj, "attack",
                 {"model", "fuzzer", "compromised", "start_time_s", "start_at_distance_cm",
                  "robofuzz_target", "random_delta_cm", "random_burst_s", "random_window_s",
                  "volatile_length"});
    sc.attack.model = parse_attack_model(aj.value("model", std::string("none")));
    sc.attack.fuzzer = parse_fuzzer(aj.value("fuzzer", std::string("none")));
    sc.attack.compromised = aj.value("compromised", false);
    sc.attack.start_time_s = aj.value("start_time_s", 0.0);
    if (aj.contains("start_at_distance_cm")) {
      sc.attack.start_at_distance_cm = aj.at("start_at_distance_cm").get<double>();
    }
    sc.attack.robofuzz_target = aj.value("robofuzz_target", std::string("crash_robot"));
    sc.attack.random_delta_cm = aj.value("random_delta_cm", 50.0);
    sc.attack.random_burst_s = aj.value("random_burst_s", 6.0);
    sc.attack.random_window_s = aj.value("random_window_s", 200.0);
    sc.attack.volatile_length = aj.value("volatile_length", 1006);
  }

  if (!sc.make_world().position_in_rooms(sc.robot.start.position)) {
    throw std::runtime_error("scenario: robot start pose is outside every room");
  }
  return sc;
}

Scenario Scenario::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read scenario file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json_string(text);
}

std::string Scenario::to_json_string() const {
  json j;
  j["name"] = name;
  j["description"] = description;
  j["tick_s"] = tick_s;
  j["seed"] = seed;
  j["robot"] = {{"start_x_cm", robot.start.position.x},
                {"start_y_cm", robot.start.position.y},
                {"heading_deg", robot.start.heading * 180.0 / kPi},
                {"radius_cm", robot.radius_cm},
                {"speed_mm_s", robot.speed_mm_s}};
  return j.dump(2);
}

WorldModel Scenario::make_world() const {
  WorldModel w;
  w.rooms = rooms;
  w.walls = walls;
  w.obstacles = obstacles;
  w.door = door;
  w.robot_pose = robot.start;
  w.robot_radius_cm = robot.radius_cm;
  w.clock_s = 0.0;
  return w;
}

Rect Scenario::bounding_box() const {
  Rect box = rooms.front();
  for (const auto& r : rooms) {
    box.min.x = std::min(box.min.x, r.min.x);
    box.min.y = std::min(box.min.y, r.min.y);
    box.max.x = std::max(box.max.x, r.max.x);
    box.max.y = std::max(box.max.y, r.max.y);
  }
  return box;
}

}  // namespace robosim
