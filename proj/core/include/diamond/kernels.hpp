#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "diamond/geometry.hpp"
#include "diamond/params.hpp"

namespace diamond {

struct KernelEvalConfig {
  double tol = 1e-12;       // absolute truncation tolerance on kernel values
  double rep_switch = 1.0;  // Gaussian sum below this effective time, Fourier above
  int max_terms = 100000;

  void validate() const;
};

struct KernelValue {
  double value = 0.0;
  double error = 0.0;  // certified truncation bound
};

enum class CircleRepresentation { kAuto, kGaussian, kFourier };

// The circle heat kernel at effective time a, truncated once for a given
// tolerance so it can be evaluated repeatedly.
//   Gaussian: (4 pi a)^{-1/2} sum_k exp(-(d - 2 pi k)^2 / 4a)
//   Fourier:  1/(2 pi) + (1/pi) sum_{k>=1} e^{-k^2 a} cos(k d)
class CircleSeries {
 public:
  CircleSeries(double a, double tol, CircleRepresentation rep, double rep_switch, int max_terms);

  double value(double delta) const;
  // p_a(u, v) - p_a(u, -v); its truncation error is at most 2 * error_bound().
  double difference(double u, double v) const;

  double error_bound() const noexcept { return error_; }
  int terms() const noexcept { return terms_; }
  CircleRepresentation representation() const noexcept { return rep_; }
  double time() const noexcept { return a_; }

 private:
  double a_;
  CircleRepresentation rep_;
  int terms_ = 0;
  double error_ = 0.0;
  double norm_ = 0.0;             // Gaussian prefactor
  std::vector<double> weights_;  // Fourier weights e^{-k^2 a}, k = 1..terms
};

KernelValue circle_kernel(double t, double theta, double theta_p, const KernelEvalConfig& cfg = {},
                          CircleRepresentation rep = CircleRepresentation::kAuto);

enum class DirichletMethod { kAuto, kSineSeries, kCircleDifference };

// Heat kernel of [0, L] with Dirichlet ends (Lebesgue measure).
KernelValue interval_kernel_dirichlet(double t, double L, double theta, double theta_p,
                                      const KernelEvalConfig& cfg = {},
                                      DirichletMethod method = DirichletMethod::kAuto);

// Level-i diamond kernel at a fixed time. Per-level circle series are built
// once, so evaluating many pairs is cheap.
class DiamondKernel {
 public:
  DiamondKernel(const ParameterSequences& seq, int level, double t, KernelEvalConfig cfg = {});

  // Closed formula: circle term plus Dirichlet corrections for l <= i_xy.
  KernelValue operator()(const PointAddress& x, const PointAddress& y) const;
  // Three-case recursion, one level at a time.
  KernelValue recursive(const PointAddress& x, const PointAddress& y) const;
  KernelValue from_config(const PairConfig& c, double theta_x, double theta_y) const;

  int level() const noexcept { return level_; }
  double time() const noexcept { return t_; }
  const LevelScales& scales() const noexcept { return scales_; }

 private:
  double correction(int l, double theta_x, double theta_y) const;

  int level_;
  double t_;
  LevelScales scales_;
  std::vector<CircleSeries> series_;  // index l: effective time J_l^2 t
  std::vector<double> term_error_;    // certified error per unit |delta| at level l
};

KernelValue diamond_kernel_level(const ParameterSequences& seq, int i, double t, const PointAddress& x,
                                 const PointAddress& y, const KernelEvalConfig& cfg = {});
KernelValue diamond_kernel_recursive(const ParameterSequences& seq, int i, double t,
                                     const PointAddress& x, const PointAddress& y,
                                     const KernelEvalConfig& cfg = {});

// Kernel on F_infinity for truncated points. Off the diagonal the series ends
// at i_xy; on the diagonal it is cut once the term bound is below tol.
KernelValue diamond_kernel_limit(const ParameterSequences& seq, double t, const PointAddress& x,
                                 const PointAddress& y, const KernelEvalConfig& cfg = {});

struct KernelPair {
  PointAddress x;
  PointAddress y;
};

struct KernelBatch {
  std::optional<int> level;  // nullopt: limit kernel
  std::vector<double> times;
  std::vector<KernelPair> pairs;
  std::vector<KernelValue> values;  // row-major: times x pairs

  const KernelValue& at(std::size_t t_index, std::size_t pair_index) const {
    return values[t_index * pairs.size() + pair_index];
  }
};

// Evaluates every (t, pair). `jobs` threads split the rows; results do not
// depend on the thread count.
KernelBatch evaluate_batch(const ParameterSequences& seq, std::optional<int> level,
                           const std::vector<double>& times, const std::vector<KernelPair>& pairs,
                           const KernelEvalConfig& cfg = {}, int jobs = 1);

// Header: t,theta_x,labels_x,theta_y,labels_y,value,certified_error.
// Labels are written as l1;l2;... so the CSV stays flat.
void write_batch_csv(std::ostream& os, const KernelBatch& batch);

}  // namespace diamond
