#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "robosim/attack.hpp"
#include "robosim/histmap.hpp"
#include "robosim/remit.hpp"
#include "robosim/robofuzz.hpp"
#include "robosim/scenario.hpp"
#include "robosim/shade.hpp"

namespace robosim {

struct DetectorSet {
  bool fingerprinting = false;
  bool crv = false;
  bool nid = false;
  bool composite = false;  // the full dispatch

  bool any() const { return fingerprinting || crv || nid || composite; }
};

enum class TrialOutcome { Done, Crashed, Timeout };

const char* to_string(TrialOutcome o);

struct VerdictEvent {
  double t_s = 0.0;
  DetectionMethod method = DetectionMethod::Composite;
};

struct TickSample {
  double t_s = 0.0;
  Pose pose;
  std::optional<double> genuine_cm;
  std::optional<double> delivered_cm;
  bool delivered_accepted = false;
  ControlStateKind state = ControlStateKind::Idle;
  double commanded_speed_cm_s = 0.0;
  int pass = 0;
};

struct TrialConfig {
  Scenario scenario;
  AttackConfig attack;                       // overrides scenario.attack
  std::optional<SensorMode> sensor_mode;     // overrides scenario sensor mode
  std::optional<FuzzTarget> fuzz_target;
  DetectorSet detectors;
  bool mitigation = false;
  RemitConfig remit;
  ShadeConfig shade;
  const HistoricalMap* map = nullptr;
  std::uint64_t seed = 1;
  double timeout_s = 300.0;
  int plan_passes = 1;  // learn runs sweep the room twice
  bool keep_trace = false;
};

struct TrialRecord {
  TrialOutcome outcome = TrialOutcome::Timeout;
  std::uint64_t seed = 0;
  bool collision = false;
  double collision_t_s = 0.0;
  bool crossed_door = false;
  double crossed_door_t_s = 0.0;
  bool door_blocked = false;
  double cleaned_distance_cm = 0.0;
  double running_time_s = 0.0;
  std::optional<double> attack_engaged_at_s;
  // First positive verdict per detector label ("fingerprinting", ...).
  std::map<std::string, double> first_detection_s;
  std::vector<VerdictEvent> verdict_audit;
  int sound_events = 0;
  std::optional<double> first_sound_s;
  int detours = 0;
  int completion_events = 0;
  int reset_requests = 0;
  int rejected_readings = 0;
  bool fuzz_triggered = false;
  std::optional<double> fuzz_triggered_at_s;
  bool remit_cannot_navigate = false;
  std::vector<TickSample> trace;

  std::string to_json_string(bool with_trace = false) const;
  std::uint64_t record_hash() const;
};

TrialRecord run_trial(const TrialConfig& cfg);

// Collects (sensor pose, genuine reading, pass) samples from a clean run
// for map learning. Throws if the scenario cannot complete cleanly.
std::vector<LearnSample> collect_learn_trace(const Scenario& scenario, int passes,
                                             std::uint64_t seed);

HistoricalMap learn_map(const Scenario& scenario, double resolution_cm,
                        std::uint64_t seed);

}  // namespace robosim
