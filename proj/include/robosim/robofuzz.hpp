#pragma once

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "robosim/attack.hpp"
#include "robosim/controller.hpp"

namespace robosim {

enum class FuzzTarget { CrashRobot, ReduceEfficacy };

enum class Trend { GradualDecrease, SharpDecrease, SuddenIncrease, JumpThenDecrease, Flat };

const char* to_string(Trend t);

struct StateSnapshot {
  ControlStateKind control_state = ControlStateKind::Idle;
  double latest_genuine_cm = 0.0;
  Trend trend = Trend::Flat;
  double time_s = 0.0;
};

struct ComponentInventory {
  std::vector<std::string> sensors{"distance_s0"};
  std::vector<std::string> actuators{"wheel_drive_a0"};
};

// One <v, gamma, f> entry. Sensor tuples are the ones exercised; actuator
// fuzzing is inventoried as an extension point.
struct FuzzTuple {
  std::string component = "distance_s0";
  std::string fuzz_function;  // tag of the gamma rule applied
  double domain_lo_cm = kSensorMinCm;
  double domain_hi_cm = kSensorMaxCm;
};

struct FuzzPlan {
  FuzzTarget target = FuzzTarget::CrashRobot;
  std::vector<ControlStateKind> states;
  ComponentInventory components;
  std::vector<FuzzTuple> tuples;

  // Every monitored state must have at least one tuple applicable to it.
  bool valid() const { return !states.empty() && !tuples.empty(); }
  static FuzzPlan for_target(FuzzTarget target);
};

struct TrendConfig {
  int window = 5;  // readings needed before classifying
  double closing_speed_cm_s = 5.0;
  double jump_threshold_cm = 50.0;
  // slope within (1 +/- 0.5) of -closing => gradual; steeper than 1.5x => sharp
  double gradual_band = 0.5;
  double sharp_factor = 1.5;
};

// Classifies the recent genuine readings into one of the obstacle-distance
// curve classes. History restarts on every commanded heading change so
// self-induced discontinuities are never mistaken for environment events.
class TrendObserver {
 public:
  explicit TrendObserver(const TrendConfig& cfg) : cfg_(cfg) {}

  void add(double t_s, double value_cm);
  void note_heading_change() { samples_.clear(); }
  Trend classify() const;
  std::optional<double> latest() const;
  std::optional<double> previous() const;
  std::optional<double> last_jump_from() const;  // value right before a jump

 private:
  TrendConfig cfg_;
  std::deque<std::pair<double, double>> samples_;
};

struct DirectedFuzzerConfig {
  TrendConfig trend;
  double crash_trigger_cm = kSafeDistanceCm;  // fuzz when v drops below this
  double gamma_up_rate_cm_s = 5.0;            // crash target: obstacle "leaves"
  double gamma_down_rate_cm_s = 5.0;          // efficacy target: wall "stays"
  double sample_step_s = 0.1;                 // first fabricated value sits one step in
};

// The directed fuzzer: watches the robot's state and the environment
// through the compromised channel and, at the proper occasion, swaps the
// genuine readings for a rational stream steering the robot into the
// target outcome.
class DirectedFuzzer : public FabricationGenerator {
 public:
  DirectedFuzzer(const FuzzPlan& plan, const DirectedFuzzerConfig& cfg)
      : plan_(plan), cfg_(cfg), observer_(cfg.trend) {}

  // Per-tick tap of the genuine value and robot state, before delivery.
  void observe(double t_s, std::optional<double> genuine_cm, ControlStateKind state);

  bool should_trigger(const StateSnapshot& snap) const;
  // Gamma as a function of time since the trigger, clamped to sensor range.
  double gamma_for(double t_since_trigger_s) const;

  std::optional<double> substitute(std::optional<double> genuine_cm, double t_s,
                                   std::mt19937_64& rng) override;

  bool triggered() const { return triggered_; }
  std::optional<double> triggered_at() const { return first_trigger_t_; }
  StateSnapshot snapshot() const;

 private:
  FuzzPlan plan_;
  DirectedFuzzerConfig cfg_;
  TrendObserver observer_;
  ControlStateKind control_state_ = ControlStateKind::Idle;
  double now_ = 0.0;
  ControlStateKind prev_state_ = ControlStateKind::Idle;
  double prev_heading_marker_ = 0.0;

  bool triggered_ = false;
  double trigger_t_ = 0.0;
  double v_trigger_ = 0.0;
  std::optional<double> first_trigger_t_;
};

}  // namespace robosim
