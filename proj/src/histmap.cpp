#include "robosim/histmap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

#include <json.hpp>

namespace robosim {

using nlohmann::json;

std::pair<int, int> HistoricalMap::cell_of(const Vec2& p) const {
  return {static_cast<int>(std::floor((p.x - bounds_.min.x) / resolution_cm_)),
          static_cast<int>(std::floor((p.y - bounds_.min.y) / resolution_cm_))};
}

HistoricalMap HistoricalMap::learn(const std::vector<LearnSample>& trace, Rect bounds,
                                   double resolution_cm, const MapProvenance& provenance) {
  if (trace.empty()) throw std::invalid_argument("cannot learn a map from an empty trace");
  HistoricalMap map;
  map.resolution_cm_ = resolution_cm;
  map.bounds_ = bounds;
  map.provenance_ = provenance;

  std::map<std::pair<int, int>, std::set<int>> passes_seen;
  int max_pass = 0;
  for (const auto& s : trace) {
    max_pass = std::max(max_pass, s.pass);
    if (s.reading_cm >= kSensorMaxCm - 1e-6) continue;  // clamped, no surface hit
    const Vec2 dir = heading_dir(s.sensor_pose.heading);
    const Vec2 endpoint =
        s.sensor_pose.position + dir * (s.reading_cm + resolution_cm * 1e-3);
    passes_seen[map.cell_of(endpoint)].insert(s.pass);
  }

  // With a multi-pass trace, a cell must show up in at least two passes;
  // that drops obstacles that were only transiently in the space.
  const bool multi_pass = max_pass > 0;
  for (const auto& [cell, passes] : passes_seen) {
    if (!multi_pass || passes.size() >= 2) map.cells_.insert(cell);
  }
  return map;
}

std::optional<double> HistoricalMap::expected_distance(const Pose& pose) const {
  const Vec2 p = pose.position;
  if (!bounds_.contains(p)) return std::nullopt;

  auto [ix, iy] = cell_of(p);
  if (occupied(ix, iy)) return kSensorMinCm;

  const Vec2 dir = heading_dir(pose.heading);
  const double res = resolution_cm_;
  const int step_x = dir.x > 1e-12 ? 1 : (dir.x < -1e-12 ? -1 : 0);
  const int step_y = dir.y > 1e-12 ? 1 : (dir.y < -1e-12 ? -1 : 0);
  const double inf = std::numeric_limits<double>::infinity();

  double t_max_x = inf, t_delta_x = inf;
  if (step_x != 0) {
    const double next = bounds_.min.x + (ix + (step_x > 0 ? 1 : 0)) * res;
    t_max_x = (next - p.x) / dir.x;
    t_delta_x = res / std::abs(dir.x);
  }
  double t_max_y = inf, t_delta_y = inf;
  if (step_y != 0) {
    const double next = bounds_.min.y + (iy + (step_y > 0 ? 1 : 0)) * res;
    t_max_y = (next - p.y) / dir.y;
    t_delta_y = res / std::abs(dir.y);
  }

  double t = 0.0;
  while (t <= kSensorMaxCm) {
    if (t_max_x <= t_max_y) {
      t = t_max_x;
      ix += step_x;
      t_max_x += t_delta_x;
    } else {
      t = t_max_y;
      iy += step_y;
      t_max_y += t_delta_y;
    }
    if (occupied(ix, iy)) return std::clamp(t, kSensorMinCm, kSensorMaxCm);
  }
  return kSensorMaxCm;
}

std::string HistoricalMap::to_json_string() const {
  json j;
  j["version"] = kSchemaVersion;
  j["resolution_cm"] = resolution_cm_;
  j["bounds"] = {{"min_x", bounds_.min.x},
                 {"min_y", bounds_.min.y},
                 {"max_x", bounds_.max.x},
                 {"max_y", bounds_.max.y}};
  j["provenance"] = {{"scenario", provenance_.scenario}, {"seed", provenance_.seed}};
  json cells = json::array();
  for (const auto& [ix, iy] : cells_) cells.push_back({ix, iy});
  j["cells"] = std::move(cells);
  return j.dump(2);
}

HistoricalMap HistoricalMap::from_json_string(const std::string& text) {
  const json j = json::parse(text);
  if (j.at("version").get<int>() != kSchemaVersion) {
    throw std::runtime_error("unsupported map schema version");
  }
  HistoricalMap map;
  map.resolution_cm_ = j.at("resolution_cm").get<double>();
  const auto& b = j.at("bounds");
  map.bounds_ = Rect{{b.at("min_x").get<double>(), b.at("min_y").get<double>()},
                     {b.at("max_x").get<double>(), b.at("max_y").get<double>()}};
  map.provenance_.scenario = j.at("provenance").at("scenario").get<std::string>();
  map.provenance_.seed = j.at("provenance").at("seed").get<std::uint64_t>();
  for (const auto& c : j.at("cells")) {
    map.cells_.insert({c.at(0).get<int>(), c.at(1).get<int>()});
  }
  return map;
}

void HistoricalMap::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write map file: " + path);
  out << to_json_string() << "\n";
}

HistoricalMap HistoricalMap::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read map file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json_string(text);
}

}  // namespace robosim
