#include "robosim/attack.hpp"

#include <algorithm>

namespace robosim {

namespace {
constexpr double kLowBandLo = 2.0;
constexpr double kLowBandHi = 110.0;
constexpr double kHighBandLo = 240.0;
constexpr double kHighBandHi = 400.0;
}  // namespace

std::optional<double> VolatileGenerator::substitute(std::optional<double> /*genuine_cm*/,
                                                    double /*t_s*/,
                                                    std::mt19937_64& rng) {
  if (remaining_ <= 0) return std::nullopt;  // series exhausted, relay genuine
  --remaining_;
  double lo = low_next_ ? kLowBandLo : kHighBandLo;
  double hi = low_next_ ? kLowBandHi : kHighBandHi;
  low_next_ = !low_next_;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::vector<double> VolatileGenerator::stream(std::mt19937_64& rng, int n) {
  VolatileGenerator gen(n);
  std::vector<double> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(*gen.substitute(std::nullopt, 0.0, rng));
  return out;
}

RandomAttackPlan random_attack_plan(std::mt19937_64& rng, double trial_length_s,
                                    double delta_cm) {
  RandomAttackPlan plan;
  plan.fire_time_s = std::uniform_real_distribution<double>(0.0, trial_length_s)(rng);
  plan.delta_cm = delta_cm;
  return plan;
}

std::optional<double> RandomTimeAttack::substitute(std::optional<double> genuine_cm,
                                                   double t_s, std::mt19937_64&) {
  if (!genuine_cm) return std::nullopt;
  if (t_s < plan_.fire_time_s || t_s > plan_.fire_time_s + burst_s_) return std::nullopt;
  return std::clamp(*genuine_cm + plan_.delta_cm, kSensorMinCm, kSensorMaxCm);
}

void AttackChannel::update_engagement(double t_s, double genuine_raycast_cm) {
  just_engaged_ = false;
  if (engaged_ || !compromised_ || model_ == AttackModel::None) return;
  if (t_s + 1e-9 < start_time_s_) return;
  if (start_at_distance_cm_ && genuine_raycast_cm > *start_at_distance_cm_) return;
  engaged_ = true;
  just_engaged_ = true;
}

std::optional<SensorReading> AttackChannel::intercept(std::optional<SensorReading> reading,
                                                      double t_s,
                                                      const LatencyModel& latency,
                                                      std::mt19937_64& rng) {
  last_packets_ = 0;
  if (!engaged_ || model_ == AttackModel::None) return reading;
  if (!active_since_) active_since_ = t_s;

  if (model_ == AttackModel::Suspension) {
    // Nothing reaches the control program: numeric readings become a null
    // response, proactive alerts are simply dropped.
    return std::nullopt;
  }

  // Fabrication: the reading takes a round trip through the attacker, who
  // may swap the value. Either way the observed latency is network-scale.
  if (!reading) return std::nullopt;
  last_packets_ = 2;  // fetch + push back
  SensorReading out = *reading;
  out.observed_latency_ms = latency.draw_network(rng);
  if (generator_ && out.kind == ReadingKind::Numeric) {
    if (auto forged = generator_->substitute(out.value_cm, t_s, rng)) {
      out.value_cm = std::clamp(*forged, kSensorMinCm, kSensorMaxCm);
    }
  }
  return out;
}

}  // namespace robosim
