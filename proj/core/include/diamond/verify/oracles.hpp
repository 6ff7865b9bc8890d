#pragma once

#include <cstdint>
#include <vector>

#include "diamond/geometry.hpp"
#include "diamond/params.hpp"
#include "diamond/verify/cable.hpp"

namespace diamond::verify {

// Graph distance in F_i by Dijkstra on the junction graph of F_i with x and
// y inserted as extra vertices. Every edge length is exact, so this is the
// metric-graph geodesic up to rounding.
double oracle_distance(const ParameterSequences& seq, int level, const PointAddress& x, const PointAddress& y);

// Continuous-time walk with jump rates K_uv / M_u started at `start`; the
// empirical distribution of the position at time t over `samples` runs.
std::vector<double> oracle_walk(const CableDiscretization& disc, double t, std::size_t start,
                                std::size_t samples, std::uint64_t seed);

double total_variation(const std::vector<double>& p, const std::vector<double>& q);

// The ball of radius r = pi/J_i around a birth-i junction: its 2 n_i incident
// branches, free at the outer ends. The test function is the lowest
// Dirichlet-Neumann mode sin(pi s / 2r) on each branch, with opposite signs
// on the two sides of the junction.
struct LocalPoincareReport {
  int level = 0;
  double radius = 0.0;
  std::size_t nodes = 0;
  double mean_ratio = 0.0;       // |mean h| / ||h||
  double rayleigh = 0.0;         // E(h, h) / int h^2
  double residual = 0.0;         // ||L h + rayleigh h|| / ||h||, mass norm
  double lambda_ball = 0.0;      // smallest nonzero eigenvalue of the ball
  double constant = 0.0;         // 1 / lambda_ball
  double expected_lambda = 0.0;  // (pi / 2r)^2 = J_i^2 / 4
};
LocalPoincareReport local_poincare(const ParameterSequences& seq, int level, int m);

}  // namespace diamond::verify
