#pragma once

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "robosim/histmap.hpp"
#include "robosim/sensing.hpp"

namespace robosim {

enum class DetectionMethod { Fingerprinting, CRV, NID, Composite };

const char* to_string(DetectionMethod m);

struct DetectionRequest {
  bool has_sensor_info = false;
  std::optional<SensorModeKind> mode;
  std::optional<double> latency_ms;
  std::optional<Pose> pose;
  std::optional<SensorReading> reading;
  double alert_at_cm = kSafeDistanceCm;
  double time_s = 0.0;
};

struct DetectionVerdict {
  bool attack = false;
  DetectionMethod method = DetectionMethod::Composite;
  double issued_at_s = 0.0;
};

struct PacketRecord {
  double t_s = 0.0;
  bool inbound = false;
  int size = 0;
  std::string purpose;
};

class PacketLog {
 public:
  explicit PacketLog(double window_s = 30.0) : window_s_(window_s) {}
  void add(double t_s, bool inbound, int size, const std::string& purpose);
  int count_in(double from_s, double to_s) const;
  size_t size() const { return records_.size(); }

 private:
  double window_s_;
  std::deque<PacketRecord> records_;
};

struct ShadeConfig {
  double fingerprint_threshold_ms = 100.0;
  double crv_tolerance_cm = 25.0;
  double nid_window_s = 5.0;
  double nid_factor = 2.0;
  int nid_consecutive = 2;
  // Clean packets-per-second baseline. When unset it is learned from the
  // first two scan windows of the trial.
  std::optional<double> nid_baseline_pps;
};

// The shadow detector: fingerprinting, cross-reference validation and
// network intrusion detection behind one dispatch. Passive-mode requests
// go to fingerprinting, proactive ones to CRV (NID as the double check),
// and requests without sensor information to NID alone.
class Shade {
 public:
  Shade(const ShadeConfig& cfg, const HistoricalMap* map) : cfg_(cfg), map_(map) {}

  bool fingerprinting_check(double latency_ms) const;
  // alert_mode: the sensor raises threshold alerts, so silence where the
  // record predicts a nearby obstacle is itself evidence.
  bool crv_check(const Pose& pose, const std::optional<SensorReading>& reading,
                 double alert_at_cm, bool alert_mode, double t_s);
  bool nid_check(const PacketLog& log, double t_s);

  DetectionVerdict evaluate(const DetectionRequest& request, const PacketLog& log);

  int crv_inconclusive() const { return crv_inconclusive_; }

 private:
  ShadeConfig cfg_;
  const HistoricalMap* map_ = nullptr;

  // NID scan state
  double next_scan_s_ = 0.0;
  int anomaly_streak_ = 0;
  bool nid_alarm_ = false;
  std::vector<double> learned_windows_;

  int crv_inconclusive_ = 0;
};

}  // namespace robosim
