#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "robosim/world.hpp"

namespace robosim {

struct LearnSample {
  Pose sensor_pose;
  double reading_cm = 0.0;
  int pass = 0;  // coverage pass the sample was taken in
};

struct MapProvenance {
  std::string scenario;
  std::uint64_t seed = 0;
};

// Grid of obstacle positions recorded during clean runs. Immutable once
// learned; shared by cross-reference validation and by mitigation-mode
// navigation.
class HistoricalMap {
 public:
  static constexpr int kSchemaVersion = 1;
  static constexpr double kDefaultResolutionCm = 10.0;

  // Marks the cell at each ray endpoint. Cells seen in fewer than two
  // passes are dropped, which keeps transient obstacles out of the record.
  // Throws std::invalid_argument on an empty trace.
  static HistoricalMap learn(const std::vector<LearnSample>& trace, Rect bounds,
                             double resolution_cm, const MapProvenance& provenance);

  // Grid ray-cast from the pose to the first recorded cell, clamped to the
  // sensor range. nullopt when the pose is outside the map bounds.
  std::optional<double> expected_distance(const Pose& pose) const;

  bool occupied(int ix, int iy) const { return cells_.count({ix, iy}) > 0; }
  std::pair<int, int> cell_of(const Vec2& p) const;
  double resolution_cm() const { return resolution_cm_; }
  const Rect& bounds() const { return bounds_; }
  const std::set<std::pair<int, int>>& cells() const { return cells_; }
  const MapProvenance& provenance() const { return provenance_; }

  std::string to_json_string() const;
  static HistoricalMap from_json_string(const std::string& text);
  void save_file(const std::string& path) const;
  static HistoricalMap load_file(const std::string& path);

 private:
  HistoricalMap() = default;
  double resolution_cm_ = kDefaultResolutionCm;
  Rect bounds_;
  std::set<std::pair<int, int>> cells_;
  MapProvenance provenance_;
};

}  // namespace robosim
