#include "robosim/robofuzz.hpp"

#include <algorithm>
#include <cmath>

namespace robosim {

const char* to_string(Trend t) {
  switch (t) {
    case Trend::GradualDecrease: return "gradual_decrease";
    case Trend::SharpDecrease: return "sharp_decrease";
    case Trend::SuddenIncrease: return "sudden_increase";
    case Trend::JumpThenDecrease: return "jump_then_decrease";
    case Trend::Flat: return "flat";
  }
  return "?";
}

FuzzPlan FuzzPlan::for_target(FuzzTarget target) {
  FuzzPlan plan;
  plan.target = target;
  plan.states = {ControlStateKind::Forward, ControlStateKind::DoorCrossing};
  FuzzTuple tuple;
  tuple.component = plan.components.sensors.front();
  tuple.fuzz_function =
      target == FuzzTarget::CrashRobot ? "gamma_receding_obstacle" : "gamma_standing_wall";
  plan.tuples = {tuple};
  return plan;
}

void TrendObserver::add(double t_s, double value_cm) {
  samples_.push_back({t_s, value_cm});
  while (static_cast<int>(samples_.size()) > cfg_.window) samples_.pop_front();
}

std::optional<double> TrendObserver::latest() const {
  if (samples_.empty()) return std::nullopt;
  return samples_.back().second;
}

std::optional<double> TrendObserver::previous() const {
  if (samples_.size() < 2) return std::nullopt;
  return samples_[samples_.size() - 2].second;
}

std::optional<double> TrendObserver::last_jump_from() const {
  for (size_t i = samples_.size(); i-- > 1;) {
    if (samples_[i].second - samples_[i - 1].second > cfg_.jump_threshold_cm) {
      return samples_[i - 1].second;
    }
  }
  return std::nullopt;
}

namespace {

// Least-squares slope of (t, v), cm/s.
double slope_of(const std::deque<std::pair<double, double>>& s, size_t from, size_t to) {
  const size_t n = to - from;
  if (n < 2) return 0.0;
  double mt = 0.0, mv = 0.0;
  for (size_t i = from; i < to; ++i) {
    mt += s[i].first;
    mv += s[i].second;
  }
  mt /= n;
  mv /= n;
  double num = 0.0, den = 0.0;
  for (size_t i = from; i < to; ++i) {
    num += (s[i].first - mt) * (s[i].second - mv);
    den += (s[i].first - mt) * (s[i].first - mt);
  }
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace

Trend TrendObserver::classify() const {
  if (static_cast<int>(samples_.size()) < cfg_.window) return Trend::Flat;

  // A discontinuity larger than any physical step splits the window.
  size_t jump_at = 0;
  double jump = 0.0;
  for (size_t i = 1; i < samples_.size(); ++i) {
    const double d = samples_[i].second - samples_[i - 1].second;
    if (std::abs(d) > cfg_.jump_threshold_cm) {
      jump_at = i;
      jump = d;
    }
  }
  if (jump > 0.0) {
    // Split by the sign of the slope after the jump.
    const double post = slope_of(samples_, jump_at, samples_.size());
    const bool post_known = samples_.size() - jump_at >= 2;
    if (post_known && post < -1e-9) return Trend::JumpThenDecrease;
    return Trend::SuddenIncrease;
  }
  if (jump < 0.0) return Trend::Flat;  // downward discontinuity, unknown class

  const double s = slope_of(samples_, 0, samples_.size());
  const double c = cfg_.closing_speed_cm_s;
  if (s <= -cfg_.sharp_factor * c) return Trend::SharpDecrease;
  if (s <= -(1.0 - cfg_.gradual_band) * c) return Trend::GradualDecrease;
  if (s >= (1.0 - cfg_.gradual_band) * c) return Trend::SuddenIncrease;
  return Trend::Flat;
}

void DirectedFuzzer::observe(double t_s, std::optional<double> genuine_cm,
                             ControlStateKind state) {
  now_ = t_s;
  control_state_ = state;

  if (state == ControlStateKind::Turning) observer_.note_heading_change();
  if (genuine_cm) observer_.add(t_s, *genuine_cm);

  const bool state_in_plan =
      std::find(plan_.states.begin(), plan_.states.end(), state) != plan_.states.end();

  if (triggered_) {
    // Hold the illusion while the robot keeps driving; release once it
    // reacts, and re-arm for the next occasion.
    if (!state_in_plan) triggered_ = false;
    return;
  }

  if (!plan_.valid() || !state_in_plan || !genuine_cm) return;
  const StateSnapshot snap = snapshot();
  if (!should_trigger(snap)) return;

  triggered_ = true;
  trigger_t_ = t_s;
  if (!first_trigger_t_) first_trigger_t_ = t_s;
  if (plan_.target == FuzzTarget::CrashRobot) {
    v_trigger_ = *genuine_cm;
  } else {
    // Continue the pre-jump approach, as if the opening never happened.
    const auto from = observer_.last_jump_from();
    v_trigger_ = from ? *from : *genuine_cm;
  }
}

bool DirectedFuzzer::should_trigger(const StateSnapshot& snap) const {
  if (std::find(plan_.states.begin(), plan_.states.end(), snap.control_state) ==
      plan_.states.end()) {
    return false;
  }
  if (plan_.target == FuzzTarget::CrashRobot) {
    if (snap.trend == Trend::SharpDecrease) return true;
    return snap.trend == Trend::GradualDecrease &&
           snap.latest_genuine_cm < cfg_.crash_trigger_cm;
  }
  return snap.trend == Trend::SuddenIncrease || snap.trend == Trend::JumpThenDecrease;
}

double DirectedFuzzer::gamma_for(double t_since_trigger_s) const {
  double gamma;
  if (plan_.target == FuzzTarget::CrashRobot) {
    gamma = v_trigger_ + cfg_.gamma_up_rate_cm_s * t_since_trigger_s;
  } else {
    gamma = v_trigger_ - cfg_.gamma_down_rate_cm_s * t_since_trigger_s;
  }
  return std::clamp(gamma, kSensorMinCm, kSensorMaxCm);
}

std::optional<double> DirectedFuzzer::substitute(std::optional<double> genuine_cm,
                                                 double t_s, std::mt19937_64&) {
  if (!triggered_ || !genuine_cm) return std::nullopt;
  // First fabricated value lands one sample step past the trigger point.
  return gamma_for(t_s - trigger_t_ + cfg_.sample_step_s);
}

StateSnapshot DirectedFuzzer::snapshot() const {
  StateSnapshot snap;
  snap.control_state = control_state_;
  snap.latest_genuine_cm = observer_.latest().value_or(0.0);
  snap.trend = observer_.classify();
  snap.time_s = now_;
  return snap;
}

}  // namespace robosim
