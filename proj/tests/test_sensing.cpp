#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "robosim/attack.hpp"
#include "robosim/sensing.hpp"
#include "test_support.hpp"

using namespace robosim;

namespace {

WorldModel corridor(double wall_x, Pose robot) {
  WorldModel w;
  w.rooms = {Rect{{0, 0}, {500, 100}}};
  w.walls = {{{wall_x, 0}, {wall_x, 100}}};
  w.robot_pose = robot;
  return w;
}

SensorConfig passive_cfg() {
  SensorConfig cfg;
  cfg.mode.kind = SensorModeKind::Passive;
  return cfg;
}

}  // namespace

TEST_CASE("passive mode returns the ray distance with a genuine latency") {
  // sensor face 150 cm from the wall
  WorldModel w = corridor(0.0, {{150.0 + 17.0, 50}, kPi});
  Sensor sensor(passive_cfg());
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    auto r = sensor.sample(w, rng);
    REQUIRE(r);
    CHECK(r->kind == ReadingKind::Numeric);
    CHECK(*r->value_cm == doctest::Approx(150.0));
    CHECK(r->observed_latency_ms >= 2.0);
    CHECK(r->observed_latency_ms <= 12.0);
  }
}

TEST_CASE("proactive threshold alerts only at or below the alert distance") {
  SensorConfig cfg;
  cfg.mode.kind = SensorModeKind::ProactiveThreshold;
  cfg.mode.alert_at_cm = 20.0;
  Sensor sensor(cfg);
  std::mt19937_64 rng(2);

  WorldModel far = corridor(0.0, {{80.0 + 17.0, 50}, kPi});
  CHECK(!sensor.sample(far, rng));

  WorldModel near = corridor(0.0, {{19.0 + 17.0, 50}, kPi});
  auto alert = sensor.sample(near, rng);
  REQUIRE(alert);
  CHECK(alert->kind == ReadingKind::Alert);
  CHECK(!alert->value_cm);  // a bare flag, the paper's boolean value
}

TEST_CASE("first proactive alert arrives within one tick of the true crossing") {
  // Drive toward the wall and compare the alert tick with the ground-truth
  // crossing time computed from geometry and velocity.
  SensorConfig cfg;
  cfg.mode.kind = SensorModeKind::ProactiveThreshold;
  cfg.mode.alert_at_cm = 20.0;
  Sensor sensor(cfg);
  std::mt19937_64 rng(3);
  WorldModel w = corridor(0.0, {{100.3 + 17.0, 50}, kPi});
  const double crossing_t = (100.3 - 20.0) / 5.0;  // 16.06 s
  std::optional<double> first_alert;
  while (w.clock_s < 30.0 && !first_alert) {
    if (sensor.sample(w, rng)) first_alert = w.clock_s;
    w.step(MotionCommand::forward(5.0), 0.1);
  }
  REQUIRE(first_alert);
  CHECK(*first_alert >= crossing_t - 1e-9);
  CHECK(*first_alert <= crossing_t + 0.1 + 1e-9);
}

TEST_CASE("proactive periodic reports on its period") {
  SensorConfig cfg;
  cfg.mode.kind = SensorModeKind::ProactivePeriodic;
  cfg.mode.period_s = 1.0;
  Sensor sensor(cfg);
  std::mt19937_64 rng(4);
  WorldModel w = corridor(0.0, {{200, 50}, kPi});
  std::vector<double> emit_times;
  while (w.clock_s < 5.05) {
    if (sensor.sample(w, rng)) emit_times.push_back(w.clock_s);
    w.step(MotionCommand::hold(), 0.1);
  }
  REQUIRE(emit_times.size() == 6);
  for (size_t i = 0; i < emit_times.size(); ++i) {
    CHECK(emit_times[i] == doctest::Approx(1.0 * i).epsilon(1e-6));
  }
}

TEST_CASE("deliver is a bitwise passthrough without an attack") {
  WorldModel w = corridor(0.0, {{167, 50}, kPi});
  Sensor sensor(passive_cfg());
  std::mt19937_64 rng(5);
  AttackChannel channel;  // model none
  auto r = sensor.sample(w, rng);
  auto d = deliver(r, channel, passive_cfg().latency, 0.0, rng);
  REQUIRE(d);
  CHECK(d->value_cm == r->value_cm);
  CHECK(d->observed_latency_ms == r->observed_latency_ms);
  CHECK(d->timestamp_s == r->timestamp_s);
}

TEST_CASE("fabrication substitutes the value and stamps network latency") {
  // The running example: a genuine 10 cm altered to 60 cm.
  AttackConfig cfg;
  cfg.model = AttackModel::Fabrication;
  cfg.compromised = true;
  auto gen = std::make_shared<RandomTimeAttack>(RandomAttackPlan{0.0, 50.0}, 1e9);
  AttackChannel channel(cfg, gen);
  std::mt19937_64 rng(6);
  LatencyModel latency;

  channel.update_engagement(0.0, 10.0);
  SensorReading r;
  r.value_cm = 10.0;
  r.kind = ReadingKind::Numeric;
  r.observed_latency_ms = 5.0;
  auto d = channel.intercept(r, 0.0, latency, rng);
  REQUIRE(d);
  CHECK(*d->value_cm == doctest::Approx(60.0));
  CHECK(d->observed_latency_ms >= 200.0);
  CHECK(d->observed_latency_ms <= 250.0);
}

TEST_CASE("suspension swallows proactive alerts") {
  AttackConfig cfg;
  cfg.model = AttackModel::Suspension;
  cfg.compromised = true;
  AttackChannel channel(cfg, nullptr);
  std::mt19937_64 rng(7);
  LatencyModel latency;
  channel.update_engagement(0.0, 19.0);
  SensorReading alert;
  alert.kind = ReadingKind::Alert;
  CHECK(!channel.intercept(alert, 0.0, latency, rng));
}

TEST_CASE("latency ranges separate genuine from intercepted deliveries") {
  WorldModel w = corridor(0.0, {{167, 50}, kPi});
  Sensor sensor(passive_cfg());
  std::mt19937_64 rng(8);
  LatencyModel latency;
  CHECK(latency.ranges_disjoint());

  AttackConfig cfg;
  cfg.model = AttackModel::Fabrication;
  cfg.compromised = true;
  AttackChannel hostile(cfg, nullptr);  // relay without substitution
  hostile.update_engagement(0.0, 150.0);
  AttackChannel honest;

  for (int i = 0; i < 300; ++i) {
    auto genuine = deliver(sensor.sample(w, rng), honest, latency, 0.0, rng);
    REQUIRE(genuine);
    CHECK(genuine->observed_latency_ms <= 12.0);
    auto relayed = deliver(sensor.sample(w, rng), hostile, latency, 0.0, rng);
    REQUIRE(relayed);
    CHECK(relayed->observed_latency_ms >= 200.0);
  }
}
