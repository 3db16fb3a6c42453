#include "robosim/controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace robosim {

const char* to_string(ControlStateKind k) {
  switch (k) {
    case ControlStateKind::Idle: return "idle";
    case ControlStateKind::Forward: return "forward";
    case ControlStateKind::Turning: return "turning";
    case ControlStateKind::DoorCrossing: return "door_crossing";
    case ControlStateKind::Spinning: return "spinning";
    case ControlStateKind::Mitigation: return "mitigation";
    case ControlStateKind::Done: return "done";
  }
  return "?";
}

bool VolatilityFilter::accept(double value_cm) {
  window_.push_back(value_cm);
  while (static_cast<int>(window_.size()) > cfg_.window) window_.pop_front();
  return reversal_count() < cfg_.max_reversals;
}

int VolatilityFilter::reversal_count() const {
  int runs = 0;
  int last_sign = 0;
  for (size_t i = 1; i < window_.size(); ++i) {
    const double d = window_[i] - window_[i - 1];
    if (std::abs(d) <= cfg_.reversal_magnitude_cm) continue;
    const int sign = d > 0.0 ? 1 : -1;
    if (sign != last_sign) {
      ++runs;
      last_sign = sign;
    }
  }
  return runs;
}

namespace {

double opposite_heading(double h) { return normalize_angle(h + kPi); }

bool headings_equal(double a, double b) {
  double d = std::abs(normalize_angle(a) - normalize_angle(b));
  if (d > kPi) d = 2.0 * kPi - d;
  return d < 1e-9;
}

const Rect* room_containing(const std::vector<Rect>& rooms, const Vec2& p) {
  for (const auto& r : rooms) {
    if (r.contains(p)) return &r;
  }
  return nullptr;
}

std::vector<double> lane_positions(double from_y, double dir, double bound,
                                   double lane_width) {
  std::vector<double> ys{from_y};
  double y = from_y;
  while (true) {
    const double next = y + dir * lane_width;
    const bool past = dir > 0 ? next >= bound - 1e-9 : next <= bound + 1e-9;
    if (past) {
      if (std::abs(bound - y) > 1e-6) ys.push_back(bound);
      break;
    }
    ys.push_back(next);
    y = next;
  }
  return ys;
}

}  // namespace

std::vector<PlanLeg> build_coverage_plan(const std::vector<Rect>& rooms,
                                         const std::optional<SlidingDoorSpec>& door,
                                         const Pose& start, double lane_width_cm,
                                         double lane_margin_cm) {
  const Rect* room_a = room_containing(rooms, start.position);
  if (!room_a) throw std::invalid_argument("start pose is not inside any room");

  // Lanes run along the start heading; shifts step toward the far side.
  const bool shift_up =
      (room_a->max.y - start.position.y) > (start.position.y - room_a->min.y);
  const double dir = shift_up ? 1.0 : -1.0;
  const double shift_heading = shift_up ? kPi / 2.0 : 3.0 * kPi / 2.0;
  const double bound =
      shift_up ? room_a->max.y - lane_margin_cm : room_a->min.y + lane_margin_cm;

  std::vector<PlanLeg> legs;
  const auto ys = lane_positions(start.position.y, dir, bound, lane_width_cm);
  double heading = normalize_angle(start.heading);
  for (size_t i = 0; i < ys.size(); ++i) {
    legs.push_back({PlanLeg::Kind::Lane, heading, 0.0, ys[i]});
    if (i + 1 < ys.size()) {
      legs.push_back(
          {PlanLeg::Kind::Shift, shift_heading, std::abs(ys[i + 1] - ys[i]), ys[i]});
      heading = opposite_heading(heading);
    }
  }

  if (door) {
    const double door_x = door->segment.a.x;
    const double door_heading = door_x >= room_a->max.x - 1e-6 ? 0.0 : kPi;
    const double y_door = ys.back();
    legs.push_back({PlanLeg::Kind::DoorLane, door_heading, 0.0, y_door});

    const Vec2 probe{door_x + (door_heading == 0.0 ? 1.0 : -1.0), y_door};
    const Rect* room_b = room_containing(rooms, probe);
    if (!room_b) throw std::invalid_argument("no room on the far side of the door");

    const double dir_b = -dir;
    const double shift_heading_b = dir_b > 0 ? kPi / 2.0 : 3.0 * kPi / 2.0;
    const double bound_b =
        dir_b > 0 ? room_b->max.y - lane_margin_cm : room_b->min.y + lane_margin_cm;
    auto ybs = lane_positions(y_door, dir_b, bound_b, lane_width_cm);
    double hb = opposite_heading(door_heading);
    for (size_t i = 1; i < ybs.size(); ++i) {  // ybs[0] is the door lane itself
      legs.push_back(
          {PlanLeg::Kind::Shift, shift_heading_b, std::abs(ybs[i] - ybs[i - 1]), ybs[i - 1]});
      legs.push_back({PlanLeg::Kind::Lane, hb, 0.0, ybs[i]});
      hb = opposite_heading(hb);
    }
  }
  return legs;
}

Controller::Controller(const ControllerConfig& cfg, std::vector<PlanLeg> plan,
                       std::optional<double> door_plane_x, double start_side_sign)
    : cfg_(cfg),
      plan_(std::move(plan)),
      filter_(cfg.filter),
      door_plane_x_(door_plane_x),
      start_side_sign_(start_side_sign) {
  if (plan_.empty()) throw std::invalid_argument("empty coverage plan");
}

const PlanLeg* Controller::peek_next_lane() const {
  for (size_t i = leg_ + 1; i < plan_.size(); ++i) {
    if (plan_[i].kind != PlanLeg::Kind::Shift) return &plan_[i];
  }
  return nullptr;
}

void Controller::advance_leg() {
  counting_odometer_ = false;
  if (plan_[leg_].kind != PlanLeg::Kind::Shift) ++state_.lane_index;
  ++leg_;
  if (leg_ >= plan_.size()) state_.kind = ControlStateKind::Done;
}

void Controller::skip_current_leg() {
  if (state_.kind == ControlStateKind::Done) return;
  if (plan_[leg_].kind == PlanLeg::Kind::Lane) {
    // Abandoning a lane mid-way flips which end the following lanes start
    // from, so their headings flip with it. Door legs keep their geometry.
    for (size_t i = leg_ + 1; i < plan_.size(); ++i) {
      if (plan_[i].kind == PlanLeg::Kind::DoorLane) break;
      if (plan_[i].kind == PlanLeg::Kind::Lane) {
        plan_[i].heading = opposite_heading(plan_[i].heading);
      }
    }
  }
  advance_leg();
}

bool Controller::lane_turn_due(const ControllerInput& in, bool alert_this_tick) const {
  const double threshold = in.turn_threshold_override.value_or(cfg_.safe_distance_cm);
  if (in.mitigation_active) return perceived_ && *perceived_ <= threshold;
  if (cfg_.sensor_mode == SensorModeKind::ProactiveThreshold) return alert_this_tick;
  return perceived_ && *perceived_ <= threshold;
}

ControllerOutput Controller::tick(const ControllerInput& in) {
  ControllerOutput out;
  out.command = MotionCommand::hold();

  if (state_.kind == ControlStateKind::Done || state_.kind == ControlStateKind::Spinning)
    return out;
  if (in.collision) {
    // A successful attack forced sub-crash-threshold proximity; the robot
    // spins in place to flag it instead of really hitting the obstacle.
    state_.kind = ControlStateKind::Spinning;
    return out;
  }
  if (state_.kind == ControlStateKind::Idle) state_.kind = ControlStateKind::Forward;

  if (door_plane_x_ && !crossed_door_) {
    const double side = in.pose.position.x - *door_plane_x_;
    if (side * start_side_sign_ < 0.0) {
      crossed_door_ = true;
      crossed_at_ = in.t;
    }
  }

  // Perception: mitigation navigates off the map override and ignores the
  // channel entirely; otherwise delivered readings pass the filter first.
  bool alert = false;
  if (in.mitigation_active) {
    perceived_ = in.perceived_override;
  } else if (in.delivered) {
    const SensorReading& r = *in.delivered;
    if (r.kind == ReadingKind::Alert) {
      alert = true;
      out.reading_accepted = true;
    } else if (r.value_cm) {
      if (filter_.accept(*r.value_cm)) {
        perceived_ = r.value_cm;
        fault_streak_ = 0;
        out.reading_accepted = true;
      } else {
        out.reading_rejected = true;
        ++rejected_;
        if (fault_streak_++ == 0) {
          ++reset_requests_;
          fault_slow_until_ = in.t + cfg_.fault_slow_window_s;
        }
      }
    }
  } else if (cfg_.sensor_mode == SensorModeKind::Passive) {
    // Requested a value and got a null response: reset once, then proceed
    // cautiously on the last accepted reading.
    if (fault_streak_++ == 0) {
      ++reset_requests_;
      fault_slow_until_ = in.t + cfg_.fault_slow_window_s;
    }
  }

  // Leg completion.
  const PlanLeg* leg = &plan_[leg_];
  if (leg->kind == PlanLeg::Kind::Shift) {
    if (counting_odometer_ && leg_odometer_cm_ + 1e-9 >= leg->shift_distance_cm) {
      advance_leg();
    }
  } else if (lane_turn_due(in, alert)) {
    if (leg->kind == PlanLeg::Kind::DoorLane && !crossed_door_) {
      // The doorway reads as a wall; give up on the far room.
      door_blocked_ = true;
      state_.kind = ControlStateKind::Done;
      return out;
    }
    advance_leg();
  }
  if (state_.kind == ControlStateKind::Done) return out;

  leg = &plan_[leg_];
  if (!headings_equal(in.pose.heading, leg->heading)) {
    state_.kind = ControlStateKind::Turning;
    filter_.reset();
    out.command = MotionCommand::rotate(leg->heading);
    return out;
  }

  if (leg->kind == PlanLeg::Kind::Shift && !counting_odometer_) {
    counting_odometer_ = true;
    leg_odometer_cm_ = 0.0;
  }

  double speed = cfg_.speed_cm_s * in.speed_factor;
  if (!in.mitigation_active) {
    if (fault_streak_ >= cfg_.fault_halt_after) {
      speed = 0.0;  // sensor presumed dead, hold position
    } else if (fault_streak_ > 0 || in.t < fault_slow_until_) {
      speed *= 0.5;
    }
  }
  if (leg->kind == PlanLeg::Kind::Shift && counting_odometer_) {
    // Land the shift exactly on the next lane so the lane rows never
    // drift off the learned grid, whatever the current speed.
    const double remaining = leg->shift_distance_cm - leg_odometer_cm_;
    speed = std::min(speed, remaining / cfg_.tick_s);
  }

  if (in.mitigation_active) {
    state_.kind = ControlStateKind::Mitigation;
  } else if (leg->kind == PlanLeg::Kind::DoorLane && door_plane_x_ &&
             std::abs(in.pose.position.x - *door_plane_x_) <= cfg_.door_band_cm) {
    state_.kind = ControlStateKind::DoorCrossing;
  } else {
    state_.kind = ControlStateKind::Forward;
  }

  if (in.hold || speed <= 0.0) return out;
  out.command = MotionCommand::forward(speed);
  return out;
}

void Controller::on_moved(double distance_cm) {
  if (state_.kind == ControlStateKind::Forward ||
      state_.kind == ControlStateKind::DoorCrossing ||
      state_.kind == ControlStateKind::Mitigation) {
    state_.cleaned_distance_cm += distance_cm;
    if (counting_odometer_) leg_odometer_cm_ += distance_cm;
  }
}

}  // namespace robosim
