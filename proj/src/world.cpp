#include "robosim/world.hpp"

#include <algorithm>
#include <limits>

namespace robosim {

double ObstacleSpec::start_time() const {
  if (auto* m = std::get_if<MovesAwaySameDirection>(&behavior)) return m->start_time_s;
  if (auto* m = std::get_if<MovesTowardRobot>(&behavior)) return m->start_time_s;
  if (auto* m = std::get_if<MovesOutOfPath>(&behavior)) return m->start_time_s;
  return 0.0;
}

double ObstacleSpec::speed() const {
  if (auto* m = std::get_if<MovesAwaySameDirection>(&behavior)) return m->speed_cm_s;
  if (auto* m = std::get_if<MovesTowardRobot>(&behavior)) return m->speed_cm_s;
  if (auto* m = std::get_if<MovesOutOfPath>(&behavior)) return m->speed_cm_s;
  return 0.0;
}

Vec2 ObstacleSpec::displacement(double t) const {
  if (is_static() || !frozen_direction) return {0.0, 0.0};
  const double dt = t - start_time();
  if (dt <= 0.0) return {0.0, 0.0};
  return *frozen_direction * (speed() * dt);
}

Vec2 ObstacleSpec::center() const {
  if (auto* r = std::get_if<Rect>(&shape)) {
    return {(r->min.x + r->max.x) * 0.5, (r->min.y + r->max.y) * 0.5};
  }
  const auto& s = std::get<Segment>(shape);
  return {(s.a.x + s.b.x) * 0.5, (s.a.y + s.b.y) * 0.5};
}

namespace {

std::vector<Segment> shape_segments(const ObstacleShape& shape, const Vec2& offset) {
  std::vector<Segment> out;
  if (auto* r = std::get_if<Rect>(&shape)) {
    Rect moved{r->min + offset, r->max + offset};
    out = moved.edges();
  } else {
    const auto& s = std::get<Segment>(shape);
    out.push_back({s.a + offset, s.b + offset});
  }
  return out;
}

}  // namespace

void WorldModel::update_obstacle_directions() {
  for (auto& ob : obstacles) {
    if (ob.is_static() || ob.frozen_direction || clock_s < ob.start_time()) continue;
    const Vec2 robot_dir = heading_dir(robot_pose.heading);
    if (std::holds_alternative<MovesAwaySameDirection>(ob.behavior)) {
      ob.frozen_direction = robot_dir;
    } else if (std::holds_alternative<MovesTowardRobot>(ob.behavior)) {
      ob.frozen_direction = (robot_pose.position - ob.center()).normalized();
    } else {
      // Out of the path: slide perpendicular to the robot's travel.
      ob.frozen_direction = Vec2{-robot_dir.y, robot_dir.x};
    }
  }
}

std::vector<Segment> WorldModel::solid_segments(double t) const {
  std::vector<Segment> segs = walls;
  if (door && door->closed_at(t)) segs.push_back(door->segment);
  for (const auto& ob : obstacles) {
    if (!ob.active) continue;
    auto s = shape_segments(ob.shape, ob.displacement(t));
    segs.insert(segs.end(), s.begin(), s.end());
  }
  return segs;
}

double WorldModel::raycast(const Pose& pose) const {
  const Vec2 dir = heading_dir(pose.heading);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& seg : solid_segments(clock_s)) {
    if (auto d = ray_segment_distance(pose.position, dir, seg)) best = std::min(best, *d);
  }
  return std::clamp(best, kSensorMinCm, kSensorMaxCm);
}

double WorldModel::forward_clearance() const {
  const Pose face = sensor_pose();
  const Vec2 dir = heading_dir(face.heading);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& seg : solid_segments(clock_s)) {
    if (auto d = ray_segment_distance(face.position, dir, seg)) best = std::min(best, *d);
  }
  return best;
}

std::pair<double, std::string> WorldModel::min_separation() const {
  double best = std::numeric_limits<double>::infinity();
  std::string id = "wall";
  auto consider = [&](double d, const std::string& who) {
    if (d < best) {
      best = d;
      id = who;
    }
  };
  for (const auto& seg : walls) {
    consider(point_segment_distance(robot_pose.position, seg) - robot_radius_cm, "wall");
  }
  if (door && door->closed_at(clock_s)) {
    consider(point_segment_distance(robot_pose.position, door->segment) - robot_radius_cm,
             "door");
  }
  for (const auto& ob : obstacles) {
    if (!ob.active) continue;
    const Vec2 off = ob.displacement(clock_s);
    double d;
    if (auto* r = std::get_if<Rect>(&ob.shape)) {
      Rect moved{r->min + off, r->max + off};
      d = point_rect_distance(robot_pose.position, moved) - robot_radius_cm;
    } else {
      const auto& s = std::get<Segment>(ob.shape);
      d = point_segment_distance(robot_pose.position, {s.a + off, s.b + off}) -
          robot_radius_cm;
    }
    consider(d, ob.id);
  }
  return {best, id};
}

std::optional<CollisionEvent> WorldModel::check_collision() const {
  auto [sep, id] = min_separation();
  if (sep < kCrashThresholdCm) return CollisionEvent{clock_s, id, sep};
  return std::nullopt;
}

bool WorldModel::position_in_rooms(const Vec2& p) const {
  for (const auto& r : rooms) {
    if (r.contains(p)) return true;
  }
  return false;
}

Pose WorldModel::sensor_pose() const {
  Pose p = robot_pose;
  p.position = p.position + heading_dir(p.heading) * robot_radius_cm;
  return p;
}

StepResult WorldModel::step(const MotionCommand& cmd, double dt) {
  StepResult res;
  clock_s += dt;
  update_obstacle_directions();

  if (cmd.kind == MotionCommand::Kind::Rotate) {
    robot_pose.heading = normalize_angle(cmd.target_heading);
  } else if (cmd.kind == MotionCommand::Kind::Forward && cmd.forward_speed_cm_s > 0.0) {
    const Vec2 dir = heading_dir(robot_pose.heading);
    const Vec2 next = robot_pose.position + dir * (cmd.forward_speed_cm_s * dt);
    const Vec2 prev = robot_pose.position;
    robot_pose.position = next;
    if (min_separation().first < kContactStopCm) {
      robot_pose.position = prev;  // hard contact, wheels stall
      res.stalled = true;
    } else {
      res.moved = true;
    }
  }

  res.bumper_contact = forward_clearance() <= kBumperReachCm;
  res.collision = check_collision();
  return res;
}

}  // namespace robosim
