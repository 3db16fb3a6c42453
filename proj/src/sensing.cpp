#include "robosim/sensing.hpp"

#include "robosim/attack.hpp"

namespace robosim {

std::optional<SensorReading> Sensor::sample(const WorldModel& world,
                                            std::mt19937_64& rng) {
  const double t = world.clock_s;
  const double distance = world.raycast(world.sensor_pose());

  switch (cfg_.mode.kind) {
    case SensorModeKind::Passive: {
      SensorReading r;
      r.value_cm = distance;
      r.kind = ReadingKind::Numeric;
      r.timestamp_s = t;
      r.observed_latency_ms = cfg_.latency.draw_genuine(rng);
      r.mode = SensorModeKind::Passive;
      return r;
    }
    case SensorModeKind::ProactiveThreshold: {
      if (distance > cfg_.mode.alert_at_cm) return std::nullopt;
      SensorReading r;
      r.value_cm = std::nullopt;  // a bare emergency flag, no numeric payload
      r.kind = ReadingKind::Alert;
      r.timestamp_s = t;
      r.observed_latency_ms = cfg_.latency.draw_genuine(rng);
      r.mode = SensorModeKind::ProactiveThreshold;
      return r;
    }
    case SensorModeKind::ProactivePeriodic: {
      if (t + 1e-9 < next_periodic_s_) return std::nullopt;
      next_periodic_s_ = t + cfg_.mode.period_s;
      SensorReading r;
      r.value_cm = distance;
      r.kind = ReadingKind::Numeric;
      r.timestamp_s = t;
      r.observed_latency_ms = cfg_.latency.draw_genuine(rng);
      r.mode = SensorModeKind::ProactivePeriodic;
      return r;
    }
  }
  return std::nullopt;
}

std::optional<SensorReading> deliver(std::optional<SensorReading> reading,
                                     AttackChannel& channel, const LatencyModel& latency,
                                     double t_s, std::mt19937_64& rng) {
  return channel.intercept(std::move(reading), t_s, latency, rng);
}

}  // namespace robosim
