#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "diamond/geometry.hpp"
#include "diamond/kernels.hpp"
#include "diamond/params.hpp"

namespace diamond::verify {

enum class CheckStatus { kPass, kFail, kInformational };
const char* to_string(CheckStatus s);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::kPass;
  double measured = 0.0;
  double bound = 0.0;
  double tolerance = 0.0;
  std::string notes;
};

// Uniform samples that depend only on the seed (not on the standard
// library's distribution implementations).
class SampleStream {
 public:
  explicit SampleStream(std::uint64_t seed) : rng_(seed) {}
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  double log_uniform(double a, double b);
  std::uint64_t index(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n; }
  // Uniform base angle and labels; a quarter of the draws land on junctions.
  PointAddress point(const ParameterSequences& seq, int level);
  // A point near p (same labels, angle moved by up to `spread`).
  PointAddress near(const ParameterSequences& seq, const PointAddress& p, double spread);

 private:
  std::mt19937_64 rng_;
};

// Individual checks. Names in the results are stable identifiers.

// Gaussian vs Fourier circle kernel over random (t, theta, theta').
CheckResult check_representation(SampleStream& rs, int count = 1000, double t_lo = 0.05, double t_hi = 10.0,
                                 double tol = 1e-10);
// Sine series vs circle-kernel difference on random intervals.
CheckResult check_dirichlet_identity(SampleStream& rs, int count = 1000, double tol = 1e-9);
CheckResult check_closed_vs_recursive(const ParameterSequences& seq, int level, const std::vector<double>& times,
                                      SampleStream& rs, int pairs = 200, double tol = 1e-9);
CheckResult check_distance_oracle(const ParameterSequences& seq, int level, SampleStream& rs, int pairs = 200,
                                  double tol = 1e-9);

// Closed-form kernel against the spectral oracle on two grids. The error is
// the sup over rows anchored at fixed points of F_i and all grid nodes.
struct SpectralComparison {
  int level = 0;
  double t = 0.0;
  double error_coarse = 0.0;
  double error_fine = 0.0;
  double step_coarse = 0.0;
  double step_fine = 0.0;
  double order = 0.0;
};
SpectralComparison compare_spectral(const ParameterSequences& seq, int level, double t, int m_coarse, int m_fine,
                                    const KernelEvalConfig& cfg = {});
std::vector<CheckResult> check_spectral_oracle(const ParameterSequences& seq, int level, double t, int m_coarse,
                                               int m_fine, double sup_tol = 3e-3, double min_order = 1.7);

// Stochastic completeness, symmetry, positivity and Chapman-Kolmogorov.
std::vector<CheckResult> check_semigroup_axioms(const ParameterSequences& seq, int level, int m, double t,
                                                double s, SampleStream& rs, int jobs = 1);
// Lifting commutes with P_t, and fiber integration intertwines P_t^{F_i} with P_t^{F_{i-1}}.
std::vector<CheckResult> check_intertwining(const ParameterSequences& seq, int level, int m, double t,
                                            double tol = 1e-4, int jobs = 1);
CheckResult check_energy_lift(const ParameterSequences& seq, int level, int m, double tol = 1e-10);

std::vector<CheckResult> check_lipschitz(const ParameterSequences& seq, int level, const std::vector<double>& times,
                                         SampleStream& rs, int triples = 1000);
std::vector<CheckResult> check_wbe(const ParameterSequences& seq, int level, int m, const std::vector<double>& times,
                                   SampleStream& rs, int pairs = 50, int jobs = 1);
// wbe_constant unchanged when every n_l is replaced by n_l + 1.
CheckResult check_wbe_n_invariance(const ParameterSequences& seq, const std::vector<double>& times);
// Regular j-n: sqrt(t) C(t) is affine in log(1/sqrt t) up to `tol` relative
// residual, plus an informational row comparing against the printed bound.
std::vector<CheckResult> check_log_scaling(std::uint64_t j, std::uint64_t n, double t_lo = 1e-4, double t_hi = 1e-1,
                                           int points = 25, double tol = 0.05);

CheckResult check_spectral_gap(const ParameterSequences& seq, int level, int m, double tol = 5e-3);
std::vector<CheckResult> check_local_poincare(const ParameterSequences& seq, int level, int m);
std::vector<CheckResult> check_log_sobolev(const ParameterSequences& seq, int level, int m,
                                           const std::vector<double>& deltas, SampleStream& rs, int functions = 20);
// sup_x p_t(x, x) against ||P_{t/2}||_{2->inf}^2 and, for regular sequences, C(j, n) / t.
std::vector<CheckResult> check_ultracontractivity(const ParameterSequences& seq, int level, int m,
                                                  const std::vector<double>& times);
std::vector<CheckResult> check_series_probe(double a_lo = 0.01, double a_hi = 100.0, int points = 81);
CheckResult check_assumption_sweep(const ParameterSequences& seq, const std::vector<double>& times);
// Random walk against mass weights (t = 50) and the spectral oracle (t = 1).
std::vector<CheckResult> check_walk(const ParameterSequences& seq, int level, std::uint64_t seed);

struct SuiteConfig {
  int max_level = 2;
  std::vector<double> times{0.1, 0.5, 1.0};
  std::vector<double> spectral_times{0.5, 1.0};
  std::vector<double> deltas{0.5, 1.0, 2.0};
  int m = 200;
  std::uint64_t seed = 42;
  KernelEvalConfig kernel;
  int jobs = 1;
};

// Runs every check for levels 1..max_level (F_0 as well where it applies).
// An exception inside a check turns into a failed row and the rest still run.
std::vector<CheckResult> run_suite(const ParameterSequences& seq, const SuiteConfig& cfg);

bool any_failure(const std::vector<CheckResult>& results);
void write_report_json(std::ostream& os, const std::vector<CheckResult>& results, const ParameterSequences& seq,
                       const SuiteConfig& cfg);
void write_summary(std::ostream& os, const std::vector<CheckResult>& results);

}  // namespace diamond::verify
