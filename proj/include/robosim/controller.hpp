#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "robosim/sensing.hpp"
#include "robosim/world.hpp"

namespace robosim {

enum class ControlStateKind {
  Idle,
  Forward,
  Turning,
  DoorCrossing,
  Spinning,
  Mitigation,
  Done
};

const char* to_string(ControlStateKind k);

struct ControlState {
  ControlStateKind kind = ControlStateKind::Idle;
  int lane_index = 0;
  double cleaned_distance_cm = 0.0;
};

struct VolatilityFilterConfig {
  int window = 6;                       // >= 3
  int max_reversals = 3;
  double reversal_magnitude_cm = 30.0;
};

// Plausibility filter over the delivered numeric readings. A reading is
// rejected when the recent window shows max_reversals or more alternating
// swings larger than reversal_magnitude; a single large jump (a door
// opening, an obstacle leaving) stays below that and is accepted.
class VolatilityFilter {
 public:
  explicit VolatilityFilter(const VolatilityFilterConfig& cfg) : cfg_(cfg) {}

  // Records the value in the window either way and reports the verdict.
  bool accept(double value_cm);
  void reset() { window_.clear(); }
  int reversal_count() const;  // over the current window

 private:
  VolatilityFilterConfig cfg_;
  std::deque<double> window_;
};

struct PlanLeg {
  enum class Kind { Lane, Shift, DoorLane };
  Kind kind = Kind::Lane;
  double heading = 0.0;
  double shift_distance_cm = 0.0;  // Shift only
  double cross_pos_cm = 0.0;       // lane y, for inspection/tests
};

// Boustrophedon coverage over the start room, plus a door leg and a second
// sweep when two rooms are joined by a door. Lanes run along the start
// heading; shifts step one lane width toward the far side of the room.
std::vector<PlanLeg> build_coverage_plan(const std::vector<Rect>& rooms,
                                         const std::optional<SlidingDoorSpec>& door,
                                         const Pose& start, double lane_width_cm,
                                         double lane_margin_cm);

struct ControllerConfig {
  double safe_distance_cm = kSafeDistanceCm;
  double speed_cm_s = 5.0;
  double tick_s = 0.1;
  double lane_width_cm = 34.0;
  double lane_margin_cm = 37.0;
  SensorModeKind sensor_mode = SensorModeKind::Passive;
  VolatilityFilterConfig filter;
  double fault_slow_window_s = 2.0;  // halve speed this long after a fault
  int fault_halt_after = 20;         // consecutive faults before stopping
  double door_band_cm = 40.0;        // doorway span reported as DoorCrossing
};

struct ControllerInput {
  double t = 0.0;
  Pose pose;  // odometry
  std::optional<SensorReading> delivered;
  bool collision = false;
  // Mitigation overrides, supplied by the mitigator when active.
  bool mitigation_active = false;
  std::optional<double> perceived_override;
  std::optional<double> turn_threshold_override;
  double speed_factor = 1.0;
  bool hold = false;
};

struct ControllerOutput {
  MotionCommand command;
  bool reading_accepted = false;
  bool reading_rejected = false;
};

class Controller {
 public:
  Controller(const ControllerConfig& cfg, std::vector<PlanLeg> plan,
             std::optional<double> door_plane_x, double start_side_sign);

  ControllerOutput tick(const ControllerInput& in);

  // Trial loop feedback after the world step: actual translation this tick.
  void on_moved(double distance_cm);

  const ControlState& state() const { return state_; }
  bool done() const { return state_.kind == ControlStateKind::Done; }
  bool spinning() const { return state_.kind == ControlStateKind::Spinning; }
  bool crossed_door() const { return crossed_door_; }
  std::optional<double> crossed_door_at() const { return crossed_at_; }
  bool door_blocked() const { return door_blocked_; }
  int reset_requests() const { return reset_requests_; }
  int rejected_readings() const { return rejected_; }
  std::optional<double> last_perceived() const { return perceived_; }
  bool halted_by_fault() const { return fault_streak_ >= cfg_.fault_halt_after; }

  size_t current_leg() const { return leg_; }
  const std::vector<PlanLeg>& plan() const { return plan_; }
  // Next lane leg after the current one, if any (the upcoming waypoint).
  const PlanLeg* peek_next_lane() const;
  void skip_current_leg();  // detour support

 private:
  void advance_leg();
  bool lane_turn_due(const ControllerInput& in, bool alert_this_tick) const;

  ControllerConfig cfg_;
  std::vector<PlanLeg> plan_;
  size_t leg_ = 0;
  ControlState state_;
  VolatilityFilter filter_;
  std::optional<double> perceived_;
  double leg_odometer_cm_ = 0.0;
  bool counting_odometer_ = false;

  std::optional<double> door_plane_x_;
  double start_side_sign_ = 0.0;
  bool crossed_door_ = false;
  std::optional<double> crossed_at_;
  bool door_blocked_ = false;

  int fault_streak_ = 0;
  double fault_slow_until_ = -1.0;
  int reset_requests_ = 0;
  int rejected_ = 0;
};

}  // namespace robosim
