#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "diamond/params.hpp"

namespace diamond {

// Angular tolerance (radians) for recognizing junction angles k*pi/J_b.
inline constexpr double kJunctionTolerance = 1e-11;
// i_xy marker for coincident points.
inline constexpr int kInfiniteLevel = std::numeric_limits<int>::max();

// A point of F_i: base angle plus labels w_1..w_i (1-based). Kept canonical
// by make_point: junction angles are snapped and labels from the birth level
// onward are set to 1.
struct PointAddress {
  double theta = 0.0;
  std::vector<std::uint64_t> labels;

  int level() const noexcept { return static_cast<int>(labels.size()); }
  bool operator==(const PointAddress&) const = default;
};

// Cached J_l, N_l for l = 0..depth.
struct LevelScales {
  LevelScales(const ParameterSequences& seq, int depth);
  int depth() const noexcept { return static_cast<int>(J.size()) - 1; }
  std::vector<double> J;
  std::vector<double> N;
  std::vector<double> n;  // n_l, with n_0 = 1
};

double normalize_angle(double theta);
// Circle geodesic distance on F_0.
double circle_distance(double a, double b);

// Smallest b <= max_level with theta = k*pi/J_b, or -1.
int birth_level(const LevelScales& scales, double theta, int max_level);
int birth_level(const ParameterSequences& seq, double theta, int max_level);

// Validates label ranges and returns the canonical form.
PointAddress make_point(const ParameterSequences& seq, double theta,
                        std::vector<std::uint64_t> labels = {});
PointAddress canonicalize(const LevelScales& scales, PointAddress p);

// Forgets labels beyond level k. Canonical inputs stay canonical.
PointAddress project(const PointAddress& p, int k);
// Pads with canonical labels up to `level` (truncated F_infinity points).
PointAddress extend(const PointAddress& p, int level);

// Where a point sits at one level: one interval, or two adjacent intervals
// when it is a junction of birth <= level. `fixed_labels` counts the leading
// labels that carry meaning at this level.
struct LevelPlacement {
  std::uint64_t interval = 0;
  std::uint64_t other_interval = 0;
  bool on_vertex = false;
  int fixed_labels = 0;
};
LevelPlacement placement(const LevelScales& scales, const PointAddress& p, int level);

bool same_bundle(const LevelScales& scales, const PointAddress& x, const PointAddress& y, int level);
bool same_branch(const LevelScales& scales, const PointAddress& x, const PointAddress& y, int level);

struct PairConfig {
  int i_xy = 0;  // kInfiniteLevel when the points coincide
  bool same_branch_at_top = false;
  std::vector<double> per_level_delta;  // delta_xy(n_l), l = 1..min(i_xy, level)

  bool coincident() const noexcept { return i_xy == kInfiniteLevel; }
};

PairConfig classify_pair(const ParameterSequences& seq, const PointAddress& x, const PointAddress& y);
PairConfig classify_pair(const LevelScales& scales, const PointAddress& x, const PointAddress& y);

// Geodesic distance in F_i; deeper points are projected to level i first.
double distance_level(const ParameterSequences& seq, const PointAddress& x, const PointAddress& y,
                      int i);
double distance_level(const LevelScales& scales, const PointAddress& x, const PointAddress& y, int i);

struct DistanceReport {
  double value = 0.0;
  int level = 0;
  double error_bound = 0.0;  // d_inf lies in [value, value + error_bound]
};

// d_inf via d_i at the first level whose tail sum of 2*pi/J_k is below tol.
DistanceReport distance_limit(const ParameterSequences& seq, const PointAddress& x,
                              const PointAddress& y, double tol);

}  // namespace diamond
