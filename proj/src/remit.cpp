#include "robosim/remit.hpp"

namespace robosim {

Remit::Remit(const RemitConfig& cfg, const HistoricalMap* map, double normal_speed_cm_s)
    : cfg_(cfg), map_(map), normal_speed_cm_s_(normal_speed_cm_s) {
  state_.speed_cm_s = normal_speed_cm_s;
}

void Remit::enter_mitigation(double t_s, const DetectionVerdict& cause) {
  if (!cause.attack) return;
  if (state_.mode == RemitMode::Mitigation) return;
  state_.mode = RemitMode::Mitigation;
  state_.speed_cm_s = normal_speed_cm_s_ * cfg_.speed_factor;
  state_.transitions.push_back({t_s, RemitMode::Mitigation, to_string(cause.method)});
}

Remit::TickDecision Remit::mitigation_tick(double t_s, const Pose& sensor_pose,
                                           bool bumper_contact, Controller& controller) {
  TickDecision d;
  if (state_.mode != RemitMode::Mitigation || !map_) return d;

  d.speed_factor = cfg_.speed_factor;
  d.turn_threshold_cm = kSafeDistanceCm + cfg_.margin_cm;
  d.perceived_cm = map_->expected_distance(sensor_pose);
  if (!d.perceived_cm) {
    d.hold = true;
    d.cannot_navigate = true;  // off the recorded bounds, stop and report
    return d;
  }

  const bool map_clear = *d.perceived_cm > *d.turn_threshold_cm;
  const bool driving = controller.state().kind == ControlStateKind::Mitigation ||
                       controller.state().kind == ControlStateKind::Forward;
  if (bumper_contact && map_clear && driving) {
    // Something unrecorded is in the way. Hold, drive it off with a sound,
    // wait, and check again; detour if it will not leave. The robot never
    // pushes against a pressed bumper.
    d.hold = true;
    if (wait_until_s_ && t_s < *wait_until_s_) return d;
    if (blocked_cycles_ >= cfg_.blocked_retries) {
      controller.skip_current_leg();
      ++detours_;
      blocked_cycles_ = 0;
      wait_until_s_.reset();
      return d;
    }
    state_.sound_events_s.push_back(t_s);
    wait_until_s_ = t_s + cfg_.blocked_wait_s;
    ++blocked_cycles_;
    return d;
  }

  if (!bumper_contact) {
    blocked_cycles_ = 0;
    wait_until_s_.reset();
  }
  return d;
}

bool Remit::try_block_attacker(AttackChannel& channel, std::mt19937_64& rng, double t_s) {
  if (state_.mode != RemitMode::Mitigation) return false;
  if (!channel.compromised()) return false;
  ++state_.block_attempts;
  if (cfg_.p_block <= 0.0) return false;
  if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) >= cfg_.p_block) return false;
  channel.clear_compromise();
  block_succeeded_ = true;
  state_.transitions.push_back({t_s, RemitMode::Mitigation, "attacker_blocked"});
  return true;
}

void Remit::maybe_exit(double t_s, bool shade_attack_now) {
  if (state_.mode != RemitMode::Mitigation) return;
  if (!block_succeeded_ || shade_attack_now) return;
  state_.mode = RemitMode::Normal;
  state_.speed_cm_s = normal_speed_cm_s_;
  state_.transitions.push_back({t_s, RemitMode::Normal, "no_attack_any_longer"});
}

}  // namespace robosim
