#pragma once

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "robosim/sensing.hpp"

namespace robosim {

enum class AttackModel { None, Suspension, Fabrication };
enum class FuzzerKind { None, RoboFuzz, Volatile, RandomTime };

struct AttackConfig {
  AttackModel model = AttackModel::None;
  FuzzerKind fuzzer = FuzzerKind::None;
  bool compromised = false;
  double start_time_s = 0.0;
  std::optional<double> start_at_distance_cm;  // engage when ray first <= d
  std::string robofuzz_target = "crash_robot";
  double random_delta_cm = 50.0;
  double random_burst_s = 6.0;
  double random_window_s = 200.0;
  int volatile_length = 1006;
};

// Strategy the fabrication channel consults per reading. Returning nullopt
// keeps the genuine value (the man in the middle still relays it).
class FabricationGenerator {
 public:
  virtual ~FabricationGenerator() = default;
  virtual std::optional<double> substitute(std::optional<double> genuine_cm, double t_s,
                                           std::mt19937_64& rng) = 0;
};

// Mutational generator standing in for a general-purpose fuzzer: values
// jump between the low and high ends of the sensor range every step, so
// any short window shows several large alternating swings.
class VolatileGenerator : public FabricationGenerator {
 public:
  explicit VolatileGenerator(int series_length = 1006) : remaining_(series_length) {}
  std::optional<double> substitute(std::optional<double> genuine_cm, double t_s,
                                   std::mt19937_64& rng) override;
  static std::vector<double> stream(std::mt19937_64& rng, int n);

 private:
  int remaining_;
  bool low_next_ = true;
};

struct RandomAttackPlan {
  double fire_time_s = 0.0;
  double delta_cm = 50.0;
};

// One fabrication firing at a uniformly random time within the trial window.
RandomAttackPlan random_attack_plan(std::mt19937_64& rng, double trial_length_s,
                                    double delta_cm = 50.0);

class RandomTimeAttack : public FabricationGenerator {
 public:
  RandomTimeAttack(const RandomAttackPlan& plan, double burst_s)
      : plan_(plan), burst_s_(burst_s) {}
  std::optional<double> substitute(std::optional<double> genuine_cm, double t_s,
                                   std::mt19937_64& rng) override;
  const RandomAttackPlan& plan() const { return plan_; }

 private:
  RandomAttackPlan plan_;
  double burst_s_;
};

// The channel between sensor and control program. While engaged it relays
// every reading through the attacker's network hop; the two attack models
// are disjoint (suspension never fabricates, fabrication never drops).
class AttackChannel {
 public:
  AttackChannel() = default;
  AttackChannel(const AttackConfig& cfg, std::shared_ptr<FabricationGenerator> gen)
      : model_(cfg.model),
        compromised_(cfg.compromised),
        start_time_s_(cfg.start_time_s),
        start_at_distance_cm_(cfg.start_at_distance_cm),
        generator_(std::move(gen)) {}

  // Called once per tick with the ground-truth ray so distance-conditioned
  // engagement (the detection sweep) is possible.
  void update_engagement(double t_s, double genuine_raycast_cm);

  bool engaged() const { return engaged_; }
  bool just_engaged() const { return just_engaged_; }
  std::optional<double> active_since() const { return active_since_; }
  AttackModel model() const { return model_; }
  bool compromised() const { return compromised_; }
  void clear_compromise() {
    compromised_ = false;
    engaged_ = false;
  }

  std::optional<SensorReading> intercept(std::optional<SensorReading> reading, double t_s,
                                         const LatencyModel& latency,
                                         std::mt19937_64& rng);

  // Packets the attacker put on the wire during the last intercept call.
  int last_intercept_packets() const { return last_packets_; }

 private:
  AttackModel model_ = AttackModel::None;
  bool compromised_ = false;
  double start_time_s_ = 0.0;
  std::optional<double> start_at_distance_cm_;
  std::shared_ptr<FabricationGenerator> generator_;
  bool engaged_ = false;
  bool just_engaged_ = false;
  std::optional<double> active_since_;
  int last_packets_ = 0;
};

}  // namespace robosim
