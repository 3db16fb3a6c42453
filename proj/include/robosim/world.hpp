#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "robosim/geometry.hpp"

namespace robosim {

// Sensor and safety constants, in cm.
constexpr double kSensorMinCm = 2.0;
constexpr double kSensorMaxCm = 400.0;
constexpr double kCrashThresholdCm = 5.0;
constexpr double kSafeDistanceCm = 20.0;
constexpr double kContactStopCm = 0.2;
constexpr double kBumperReachCm = 6.0;

struct Pose {
  Vec2 position;
  double heading = 0.0;  // radians, normalized to [0, 2*pi)
};

struct StaticBehavior {};
struct MovesAwaySameDirection {
  double speed_cm_s = 0.0;
  double start_time_s = 0.0;
};
struct MovesTowardRobot {
  double speed_cm_s = 0.0;
  double start_time_s = 0.0;
};
struct MovesOutOfPath {
  double start_time_s = 0.0;
  double speed_cm_s = 50.0;
};

using ObstacleBehavior =
    std::variant<StaticBehavior, MovesAwaySameDirection, MovesTowardRobot, MovesOutOfPath>;

using ObstacleShape = std::variant<Rect, Segment>;

struct ObstacleSpec {
  std::string id;
  ObstacleShape shape;
  ObstacleBehavior behavior;
  bool active = true;

  // Motion direction fixed when the behavior kicks in; dynamic behaviors
  // move relative to where the robot was at start_time.
  std::optional<Vec2> frozen_direction;

  double start_time() const;
  double speed() const;
  bool is_static() const { return std::holds_alternative<StaticBehavior>(behavior); }
  Vec2 displacement(double t) const;
  Vec2 center() const;
};

struct SlidingDoorSpec {
  Segment segment;
  double opens_at_s = 0.0;

  bool closed_at(double t) const { return t < opens_at_s; }
};

struct CollisionEvent {
  double time_s = 0.0;
  std::string obstacle_id;
  double min_separation_cm = 0.0;
};

struct MotionCommand {
  enum class Kind { Hold, Forward, Rotate };
  Kind kind = Kind::Hold;
  double forward_speed_cm_s = 0.0;  // Forward
  double target_heading = 0.0;      // Rotate (instantaneous)

  static MotionCommand hold() { return {}; }
  static MotionCommand forward(double speed_cm_s) {
    return {Kind::Forward, speed_cm_s, 0.0};
  }
  static MotionCommand rotate(double heading) {
    return {Kind::Rotate, 0.0, heading};
  }
};

struct StepResult {
  bool moved = false;
  bool stalled = false;          // forward motion refused at hard contact
  bool bumper_contact = false;   // something within bumper reach ahead
  std::optional<CollisionEvent> collision;
};

class WorldModel {
 public:
  std::vector<Rect> rooms;        // free space
  std::vector<Segment> walls;
  std::vector<ObstacleSpec> obstacles;
  std::optional<SlidingDoorSpec> door;
  Pose robot_pose;
  double robot_radius_cm = 17.0;
  double clock_s = 0.0;

  // Advances obstacles and the robot (per command) by dt and reports
  // collision/contact state. Fully deterministic.
  StepResult step(const MotionCommand& cmd, double dt);

  // Distance from `pose` along its heading to the first active surface,
  // clamped to [kSensorMinCm, kSensorMaxCm].
  double raycast(const Pose& pose) const;

  // Unclamped clearance ahead of the hull along the current heading; this
  // is what the front bumper reacts to.
  double forward_clearance() const;

  std::optional<CollisionEvent> check_collision() const;

  // Disc-boundary separation to the nearest surface; pairs the distance
  // with the id of whatever is closest ("wall" for walls/door).
  std::pair<double, std::string> min_separation() const;

  bool position_in_rooms(const Vec2& p) const;

  Pose sensor_pose() const;  // sensor face sits on the disc perimeter

 private:
  void update_obstacle_directions();
  std::vector<Segment> solid_segments(double t) const;
};

}  // namespace robosim
