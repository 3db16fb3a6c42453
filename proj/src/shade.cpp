#include "robosim/shade.hpp"

#include <algorithm>

namespace robosim {

const char* to_string(DetectionMethod m) {
  switch (m) {
    case DetectionMethod::Fingerprinting: return "fingerprinting";
    case DetectionMethod::CRV: return "crv";
    case DetectionMethod::NID: return "nid";
    case DetectionMethod::Composite: return "shade";
  }
  return "?";
}

void PacketLog::add(double t_s, bool inbound, int size, const std::string& purpose) {
  records_.push_back({t_s, inbound, size, purpose});
  while (!records_.empty() && records_.front().t_s < t_s - window_s_) {
    records_.pop_front();
  }
}

int PacketLog::count_in(double from_s, double to_s) const {
  int n = 0;
  for (const auto& r : records_) {
    if (r.t_s > from_s && r.t_s <= to_s) ++n;
  }
  return n;
}

bool Shade::fingerprinting_check(double latency_ms) const {
  return latency_ms > cfg_.fingerprint_threshold_ms;
}

bool Shade::crv_check(const Pose& pose, const std::optional<SensorReading>& reading,
                      double alert_at_cm, bool alert_mode, double /*t_s*/) {
  if (!map_) return false;
  const auto expected = map_->expected_distance(pose);
  if (!expected) {
    ++crv_inconclusive_;  // outside the recorded bounds, nothing to compare
    return false;
  }

  if (reading && reading->kind == ReadingKind::Numeric && reading->value_cm) {
    return std::abs(*reading->value_cm - *expected) > cfg_.crv_tolerance_cm;
  }
  if (alert_mode) {
    if (reading && reading->kind == ReadingKind::Alert) {
      // An alert where the record shows open space is as wrong as silence
      // where it shows a wall.
      return *expected > alert_at_cm + cfg_.crv_tolerance_cm;
    }
    // No alert this tick although the record says one is due here.
    return *expected <= alert_at_cm;
  }
  return false;
}

bool Shade::nid_check(const PacketLog& log, double t_s) {
  if (next_scan_s_ <= 0.0) next_scan_s_ = cfg_.nid_window_s;
  while (t_s + 1e-9 >= next_scan_s_) {
    const double scan_t = next_scan_s_;
    const int count = log.count_in(scan_t - cfg_.nid_window_s, scan_t);
    next_scan_s_ += cfg_.nid_window_s;

    double baseline;
    if (cfg_.nid_baseline_pps) {
      baseline = *cfg_.nid_baseline_pps * cfg_.nid_window_s;
    } else if (learned_windows_.size() < 2) {
      learned_windows_.push_back(count);  // clean-prefix learning
      continue;
    } else {
      baseline = std::max(learned_windows_[0], learned_windows_[1]);
    }

    if (baseline > 0.0 && count >= cfg_.nid_factor * baseline) {
      ++anomaly_streak_;
    } else {
      anomaly_streak_ = 0;
    }
    nid_alarm_ = anomaly_streak_ >= cfg_.nid_consecutive;
  }
  return nid_alarm_;
}

DetectionVerdict Shade::evaluate(const DetectionRequest& request, const PacketLog& log) {
  DetectionVerdict verdict;
  verdict.issued_at_s = request.time_s;

  if (request.has_sensor_info) {
    if (request.mode == SensorModeKind::Passive) {
      // The robot demanded the value itself, so the response latency is
      // measurable; fingerprint it.
      if (request.latency_ms && fingerprinting_check(*request.latency_ms)) {
        verdict.attack = true;
        verdict.method = DetectionMethod::Fingerprinting;
      }
      return verdict;
    }
    // Proactive/periodic: validate against the records first, fall back to
    // traffic inspection only when that stays quiet.
    const bool alert_mode = request.mode == SensorModeKind::ProactiveThreshold;
    if (request.pose && crv_check(*request.pose, request.reading, request.alert_at_cm,
                                  alert_mode, request.time_s)) {
      verdict.attack = true;
      verdict.method = DetectionMethod::CRV;
      return verdict;
    }
    if (nid_check(log, request.time_s)) {
      verdict.attack = true;
      verdict.method = DetectionMethod::NID;
    }
    return verdict;
  }

  if (nid_check(log, request.time_s)) {
    verdict.attack = true;
    verdict.method = DetectionMethod::NID;
  }
  return verdict;
}

}  // namespace robosim
