#pragma once

#include <optional>
#include <string>
#include <vector>

#include "robosim/attack.hpp"
#include "robosim/controller.hpp"
#include "robosim/sensing.hpp"
#include "robosim/world.hpp"

namespace robosim {

struct RobotConfig {
  Pose start;
  double radius_cm = 17.0;
  double speed_mm_s = 50.0;

  double speed_cm_s() const { return speed_mm_s / 10.0; }
};

// A complete trial setup: geometry, robot, sensor, controller parameters
// and the default attack block. Loaded from JSON; unknown keys are
// rejected so a typo cannot silently change an experiment.
struct Scenario {
  std::string name;
  std::string description;
  double tick_s = 0.1;
  std::uint64_t seed = 1;
  RobotConfig robot;
  std::vector<Rect> rooms;
  std::vector<Segment> walls;
  std::vector<ObstacleSpec> obstacles;
  std::optional<SlidingDoorSpec> door;
  SensorConfig sensor;
  ControllerConfig controller;
  AttackConfig attack;
  double telemetry_hz = 2.0;

  WorldModel make_world() const;
  Rect bounding_box() const;

  static Scenario from_json_string(const std::string& text);
  static Scenario load_file(const std::string& path);
  std::string to_json_string() const;
};

}  // namespace robosim
