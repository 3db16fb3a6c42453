#pragma once

#include <optional>
#include <string>
#include <vector>

#include "robosim/attack.hpp"
#include "robosim/controller.hpp"
#include "robosim/histmap.hpp"
#include "robosim/shade.hpp"

namespace robosim {

enum class RemitMode { Normal, Mitigation };

struct ModeTransition {
  double t_s = 0.0;
  RemitMode to = RemitMode::Normal;
  std::string cause;
};

struct RemitConfig {
  double speed_factor = 0.9;
  double margin_cm = HistoricalMap::kDefaultResolutionCm;  // added to safe distance
  double p_block = 0.0;
  double blocked_wait_s = 1.0;
  int blocked_retries = 5;
};

struct MitigationState {
  RemitMode mode = RemitMode::Normal;
  double speed_cm_s = 0.0;
  int block_attempts = 0;
  std::vector<double> sound_events_s;
  std::vector<ModeTransition> transitions;
};

// Work-retaining mitigation: on a positive verdict the robot decelerates,
// stops trusting the channel and steers the remaining plan off the
// historical map. Unrecorded blockers get a sound, a wait and then a
// detour; a successful network block restores normal mode.
class Remit {
 public:
  Remit(const RemitConfig& cfg, const HistoricalMap* map, double normal_speed_cm_s);

  // Requires a positive verdict; idempotent when already mitigating.
  void enter_mitigation(double t_s, const DetectionVerdict& cause);

  struct TickDecision {
    std::optional<double> perceived_cm;
    double speed_factor = 1.0;
    std::optional<double> turn_threshold_cm;
    bool hold = false;
    bool cannot_navigate = false;  // pose left the map, stop and report
  };

  // Navigation decision for one tick while in mitigation mode.
  TickDecision mitigation_tick(double t_s, const Pose& sensor_pose, bool bumper_contact,
                               Controller& controller);

  // Returns true when the attacker was blocked; clears the compromise.
  bool try_block_attacker(AttackChannel& channel, std::mt19937_64& rng, double t_s);

  // Leaves mitigation once the attacker is blocked and the detector agrees
  // the attack is over.
  void maybe_exit(double t_s, bool shade_attack_now);

  bool active() const { return state_.mode == RemitMode::Mitigation; }
  const MitigationState& state() const { return state_; }
  bool task_completion_signaled() const { return completions_ > 0; }
  void signal_completion() { ++completions_; }
  int completions() const { return completions_; }
  int detours() const { return detours_; }

 private:
  RemitConfig cfg_;
  const HistoricalMap* map_;
  double normal_speed_cm_s_;
  MitigationState state_;
  bool block_succeeded_ = false;
  int completions_ = 0;

  // blocked-path bookkeeping
  int blocked_cycles_ = 0;
  std::optional<double> wait_until_s_;
  int detours_ = 0;
};

}  // namespace robosim
