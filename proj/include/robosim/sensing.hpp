#pragma once

#include <optional>
#include <random>

#include "robosim/world.hpp"

namespace robosim {

enum class SensorModeKind { Passive, ProactiveThreshold, ProactivePeriodic };

struct SensorMode {
  SensorModeKind kind = SensorModeKind::Passive;
  double alert_at_cm = kSafeDistanceCm;  // ProactiveThreshold
  double period_s = 1.0;                 // ProactivePeriodic
};

enum class ReadingKind { Numeric, Alert };

struct SensorReading {
  std::optional<double> value_cm;  // nullopt encodes a non-existent value
  ReadingKind kind = ReadingKind::Numeric;
  double timestamp_s = 0.0;
  double observed_latency_ms = 0.0;
  SensorModeKind mode = SensorModeKind::Passive;
};

// Genuine readings answer within the sensor's own latency range; anything
// relayed over the network shows up one to two orders of magnitude slower.
struct LatencyModel {
  double genuine_lo_ms = 2.0;
  double genuine_hi_ms = 12.0;
  double network_lo_ms = 200.0;
  double network_hi_ms = 250.0;

  bool ranges_disjoint() const {
    return genuine_hi_ms < network_lo_ms || network_hi_ms < genuine_lo_ms;
  }
  double draw_genuine(std::mt19937_64& rng) const {
    return std::uniform_real_distribution<double>(genuine_lo_ms, genuine_hi_ms)(rng);
  }
  double draw_network(std::mt19937_64& rng) const {
    return std::uniform_real_distribution<double>(network_lo_ms, network_hi_ms)(rng);
  }
};

struct SensorConfig {
  SensorMode mode;
  LatencyModel latency;
};

// Distance sensor model. Stateful only for the periodic emit schedule.
class Sensor {
 public:
  explicit Sensor(const SensorConfig& cfg) : cfg_(cfg) {}

  // Passive: a numeric reading on demand (the control program requests one
  // per tick). ProactiveThreshold: an alert only while the ground-truth ray
  // is at or below alert_at. ProactivePeriodic: a numeric reading every
  // period. Returns nullopt when the mode has nothing to report.
  std::optional<SensorReading> sample(const WorldModel& world, std::mt19937_64& rng);

  const SensorMode& mode() const { return cfg_.mode; }
  const LatencyModel& latency() const { return cfg_.latency; }

 private:
  SensorConfig cfg_;
  double next_periodic_s_ = 0.0;
};

class AttackChannel;

// Passes a reading through the (possibly hostile) channel. Interception
// replaces the value and stamps network-range latency; suspension swallows
// the reading entirely.
std::optional<SensorReading> deliver(std::optional<SensorReading> reading,
                                     AttackChannel& channel, const LatencyModel& latency,
                                     double t_s, std::mt19937_64& rng);

}  // namespace robosim
