#include "diamond/verify/suite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "diamond/errors.hpp"
#include "diamond/estimates.hpp"
#include "diamond/grid.hpp"
#include "diamond/semigroup.hpp"
#include "diamond/verify/cable.hpp"
#include "diamond/verify/oracles.hpp"

namespace diamond::verify {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string tag(const std::string& name, int level) { return name + "[F_" + std::to_string(level) + "]"; }
std::string tag(const std::string& name, int level, double t, const char* var = "t") {
  return name + "[F_" + std::to_string(level) + "," + var + "=" + fmt("%g", t) + "]";
}

CheckResult make(std::string name, bool pass, double measured, double bound, double tol, std::string notes = {}) {
  return {std::move(name), pass ? CheckStatus::kPass : CheckStatus::kFail, measured, bound, tol, std::move(notes)};
}

template <class Row>
void for_rows(std::size_t n, int jobs, Row&& row) {
  jobs = std::max(1, jobs);
  if (jobs == 1) {
    for (std::size_t u = 0; u < n; ++u) row(u);
    return;
  }
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j)
    pool.emplace_back([&, j] {
      for (std::size_t u = static_cast<std::size_t>(j); u < n; u += static_cast<std::size_t>(jobs)) row(u);
    });
  for (auto& th : pool) th.join();
}

// P_t applied to several functions sharing one pass over the kernel.
std::vector<GridFunction> apply_kernel(const DiamondKernel& K, const std::vector<const GridFunction*>& fs, int jobs) {
  const BranchLayout& L = fs.front()->layout();
  const auto& w = L.weights();
  const std::size_t n = L.node_count(), nf = fs.size();
  std::vector<std::vector<double>> wf(nf, std::vector<double>(n));
  for (std::size_t f = 0; f < nf; ++f)
    for (std::size_t v = 0; v < n; ++v) wf[f][v] = w[v] * (*fs[f])[v];
  std::vector<std::vector<double>> out(nf, std::vector<double>(n, 0.0));
  for_rows(n, jobs, [&](std::size_t u) {
    const PointAddress& x = L.point(u);
    std::vector<double> acc(nf, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      const double k = K(x, L.point(v)).value;
      for (std::size_t f = 0; f < nf; ++f) acc[f] += k * wf[f][v];
    }
    for (std::size_t f = 0; f < nf; ++f) out[f][u] = acc[f];
  });
  std::vector<GridFunction> res;
  for (std::size_t f = 0; f < nf; ++f) res.emplace_back(fs[f]->layout_ptr(), std::move(out[f]));
  return res;
}

double sup_diff(const GridFunction& a, const GridFunction& b) { return (a - b).sup_norm(); }

// A smooth function on F_level, continuous at every junction: each label
// term carries sin(J_l theta), which vanishes where label l stops mattering.
std::function<double(const PointAddress&)> test_function(const ParameterSequences& seq, int level) {
  const LevelScales s(seq, level);
  return [s, level](const PointAddress& p) {
    double v = std::cos(p.theta) + 0.4 * std::sin(2.0 * p.theta + 0.3);
    for (int l = 1; l <= level; ++l)
      v += 0.3 * static_cast<double>(p.labels[l - 1]) / s.n[l] * std::sin(s.J[l] * p.theta);
    return v;
  };
}

std::vector<PointAddress> anchor_points(const ParameterSequences& seq, int level) {
  const double J = seq.J(level);
  std::vector<PointAddress> out;
  for (double theta : {0.0, kPi / J, 0.3, 1.1, 2.5, 4.0, 5.5}) {
    std::vector<std::uint64_t> low(level, 1), high(level);
    for (int l = 1; l <= level; ++l) high[l - 1] = seq.n(l);
    out.push_back(make_point(seq, theta, low));
    if (level > 0) out.push_back(make_point(seq, theta, high));
  }
  return out;
}

std::optional<RegularTail> regular_parameters(const ParameterSequences& seq) {
  if (!seq.tail()) return std::nullopt;
  const RegularTail t = *seq.tail();
  for (int l = 1; l <= seq.prefix_depth(); ++l)
    if (!seq.j_factor(l).representable() || !seq.n_factor(l).representable() || seq.j(l) != t.j ||
        seq.n(l) != t.n)
      return std::nullopt;
  return t;
}

ParameterSequences with_more_copies(const ParameterSequences& seq) {
  std::vector<std::uint64_t> j, n;
  for (int l = 1; l <= seq.prefix_depth(); ++l) {
    j.push_back(seq.j(l));
    n.push_back(seq.n(l) + 1);
  }
  std::optional<RegularTail> tail;
  if (seq.tail()) tail = RegularTail{seq.tail()->j, seq.tail()->n + 1};
  return ParameterSequences(j, n, tail);
}

}  // namespace

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::kPass:
      return "pass";
    case CheckStatus::kFail:
      return "fail";
    case CheckStatus::kInformational:
      return "informational";
  }
  return "?";
}

double SampleStream::log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }

PointAddress SampleStream::point(const ParameterSequences& seq, int level) {
  const double J = seq.J(level);
  double theta;
  if (uniform() < 0.25)
    theta = static_cast<double>(index(static_cast<std::uint64_t>(2.0 * J))) * kPi / J;
  else
    theta = uniform(0.0, 2.0 * kPi);
  std::vector<std::uint64_t> labels(level);
  for (int l = 1; l <= level; ++l) labels[l - 1] = 1 + index(seq.n(l));
  return make_point(seq, theta, labels);
}

PointAddress SampleStream::near(const ParameterSequences& seq, const PointAddress& p, double spread) {
  return make_point(seq, normalize_angle(p.theta + uniform(-spread, spread)), p.labels);
}

CheckResult check_representation(SampleStream& rs, int count, double t_lo, double t_hi, double tol) {
  KernelEvalConfig cfg;
  cfg.tol = 1e-14;
  double worst = 0.0;
  for (int k = 0; k < count; ++k) {
    const double t = rs.log_uniform(t_lo, t_hi);
    const double a = rs.uniform(0.0, 2.0 * kPi), b = rs.uniform(0.0, 2.0 * kPi);
    const double g = circle_kernel(t, a, b, cfg, CircleRepresentation::kGaussian).value;
    const double f = circle_kernel(t, a, b, cfg, CircleRepresentation::kFourier).value;
    worst = std::max(worst, std::abs(g - f));
  }
  return make("representation_agreement", worst <= tol, worst, 0.0, tol,
              std::to_string(count) + " samples, t in [" + fmt("%g", t_lo) + ", " + fmt("%g", t_hi) + "]");
}

CheckResult check_dirichlet_identity(SampleStream& rs, int count, double tol) {
  KernelEvalConfig cfg;
  cfg.tol = 1e-14;
  double worst = 0.0;
  for (int k = 0; k < count; ++k) {
    const double t = rs.log_uniform(0.01, 5.0);
    const double L = rs.uniform(0.2, 2.0 * kPi);
    const double a = rs.uniform(0.0, L), b = rs.uniform(0.0, L);
    const double s = interval_kernel_dirichlet(t, L, a, b, cfg, DirichletMethod::kSineSeries).value;
    const double c = interval_kernel_dirichlet(t, L, a, b, cfg, DirichletMethod::kCircleDifference).value;
    worst = std::max(worst, std::abs(s - c));
  }
  return make("dirichlet_identity", worst <= tol, worst, 0.0, tol, std::to_string(count) + " samples");
}

CheckResult check_closed_vs_recursive(const ParameterSequences& seq, int level, const std::vector<double>& times,
                                      SampleStream& rs, int pairs, double tol) {
  double worst = 0.0;
  for (double t : times) {
    const DiamondKernel K(seq, level, t);
    for (int k = 0; k < pairs; ++k) {
      const PointAddress x = rs.point(seq, level);
      const double mode = rs.uniform();
      const PointAddress y = mode < 0.1 ? x : mode < 0.55 ? rs.near(seq, x, 0.5) : rs.point(seq, level);
      worst = std::max(worst, std::abs(K(x, y).value - K.recursive(x, y).value));
    }
  }
  return make(tag("closed_vs_recursive", level), worst <= tol, worst, 0.0, tol,
              std::to_string(pairs) + " pairs per time");
}

CheckResult check_distance_oracle(const ParameterSequences& seq, int level, SampleStream& rs, int pairs,
                                  double tol) {
  double worst = 0.0;
  for (int k = 0; k < pairs; ++k) {
    const PointAddress x = rs.point(seq, level);
    const PointAddress y = rs.uniform() < 0.5 ? rs.near(seq, x, 1.0) : rs.point(seq, level);
    worst = std::max(worst, std::abs(distance_level(seq, x, y, level) - oracle_distance(seq, level, x, y)));
  }
  return make(tag("distance_vs_dijkstra", level), worst <= tol, worst, 0.0, tol, std::to_string(pairs) + " pairs");
}

SpectralComparison compare_spectral(const ParameterSequences& seq, int level, double t, int m_coarse, int m_fine,
                                    const KernelEvalConfig& cfg) {
  const std::vector<PointAddress> anchors = anchor_points(seq, level);
  const DiamondKernel K(seq, level, t, cfg);
  auto sup_error = [&](int m, double& step) {
    const LayoutPtr L = make_layout(seq, level, m);
    step = L->step();
    const CableDiscretization disc(L);
    const Spectrum spec = spectrum_for_time(disc, t);
    double err = 0.0;
    for (const PointAddress& a : anchors) {
      const std::size_t u = nearest_node(*L, a);
      const Eigen::VectorXd row = oracle_kernel_row(spec, t, u);
      const PointAddress& x = L->point(u);
      for (std::size_t v = 0; v < L->node_count(); ++v)
        err = std::max(err, std::abs(K(x, L->point(v)).value - row[static_cast<Eigen::Index>(v)]));
    }
    return err;
  };
  SpectralComparison c;
  c.level = level;
  c.t = t;
  c.error_coarse = sup_error(m_coarse, c.step_coarse);
  c.error_fine = sup_error(m_fine, c.step_fine);
  c.order = std::log(c.error_coarse / c.error_fine) / std::log(c.step_coarse / c.step_fine);
  return c;
}

std::vector<CheckResult> check_spectral_oracle(const ParameterSequences& seq, int level, double t, int m_coarse,
                                               int m_fine, double sup_tol, double min_order) {
  const SpectralComparison c = compare_spectral(seq, level, t, m_coarse, m_fine);
  const std::string grids = "m=" + std::to_string(m_coarse) + " error " + fmt("%.3e", c.error_coarse) +
                            ", m=" + std::to_string(m_fine) + " error " + fmt("%.3e", c.error_fine);
  return {make(tag("spectral_sup_error", level, t), c.error_fine <= sup_tol, c.error_fine, sup_tol, 0.0, grids),
          make(tag("spectral_order", level, t), c.order >= min_order, c.order, min_order, 0.0, grids)};
}

std::vector<CheckResult> check_semigroup_axioms(const ParameterSequences& seq, int level, int m, double t,
                                                double s, SampleStream& rs, int jobs) {
  const LayoutPtr L = make_layout(seq, level, m);
  const std::size_t n = L->node_count();
  const auto& w = L->weights();
  const DiamondKernel Kt(seq, level, t), Ks(seq, level, s), Kst(seq, level, s + t);

  std::vector<double> mass_err(n), row_min(n);
  for_rows(n, jobs, [&](std::size_t u) {
    double acc = 0.0, lo = std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < n; ++v) {
      const double k = Kt(L->point(u), L->point(v)).value;
      acc += w[v] * k;
      lo = std::min(lo, k);
    }
    mass_err[u] = std::abs(acc - 1.0);
    row_min[u] = lo;
  });
  const double completeness = *std::max_element(mass_err.begin(), mass_err.end());
  const double positivity = *std::min_element(row_min.begin(), row_min.end());

  double symmetry = 0.0;
  for (int k = 0; k < 200; ++k) {
    const PointAddress x = rs.point(seq, level), y = rs.point(seq, level);
    symmetry = std::max(symmetry, std::abs(Kt(x, y).value - Kt(y, x).value));
  }

  // Chapman-Kolmogorov on a spread of (row, column) node pairs.
  const std::size_t stride = n <= 2000 ? 1 : (n + 299) / 300;
  std::vector<std::size_t> pick;
  for (std::size_t u = 0; u < n; u += stride) pick.push_back(u);
  const auto r = static_cast<Eigen::Index>(pick.size());
  Eigen::MatrixXd A(r, n), B(n, r), C(r, r);
  for_rows(pick.size(), jobs, [&](std::size_t a) {
    const PointAddress& x = L->point(pick[a]);
    for (std::size_t z = 0; z < n; ++z) {
      A(a, z) = w[z] * Ks(x, L->point(z)).value;
      B(z, a) = Kt(L->point(z), x).value;
    }
    for (std::size_t b = 0; b < pick.size(); ++b) C(a, b) = Kst(x, L->point(pick[b])).value;
  });
  const double ck = (A * B - C).cwiseAbs().maxCoeff();
  const std::string grid = "m=" + std::to_string(m) + ", " + std::to_string(n) + " nodes";
  return {make(tag("stochastic_completeness", level, t), completeness <= 1e-5, completeness, 0.0, 1e-5, grid),
          make(tag("symmetry", level, t), symmetry <= 1e-9, symmetry, 0.0, 1e-9, "200 random pairs"),
          make(tag("positivity", level, t), positivity >= -1e-12, positivity, 0.0, 1e-12, grid),
          make(tag("chapman_kolmogorov", level, t), ck <= 1e-4, ck, 0.0, 1e-4,
               grid + ", " + std::to_string(pick.size()) + "^2 pairs, s=" + fmt("%g", s))};
}

std::vector<CheckResult> check_intertwining(const ParameterSequences& seq, int level, int m, double t, double tol,
                                            int jobs) {
  if (level < 1) throw InvalidArgument("intertwining needs level >= 1");
  const LayoutPtr fine = make_layout(seq, level, m);
  const LayoutPtr coarse = coarser_layout(*fine);
  const GridFunction f = GridFunction::sample(coarse, test_function(seq, level - 1));
  const GridFunction g = GridFunction::sample(fine, test_function(seq, level));
  const GridFunction lifted = lift(f, level);
  const GridFunction lifted_on_fine(fine, lifted.values());
  const GridFunction g_fibers = integrate_fibers(g);
  const GridFunction g_fibers_on_coarse(coarse, g_fibers.values());

  const DiamondKernel Kf(seq, level, t), Kc(seq, level - 1, t);
  const auto pf = apply_kernel(Kf, {&lifted_on_fine, &g}, jobs);
  const auto pc = apply_kernel(Kc, {&f, &g_fibers_on_coarse}, jobs);

  const GridFunction lhs1 = pf[0];
  const GridFunction rhs1(fine, lift(pc[0], level).values());
  const double r1 = sup_diff(lhs1, rhs1);
  const GridFunction lhs2(coarse, integrate_fibers(pf[1]).values());
  const double r2 = sup_diff(lhs2, pc[1]);
  const std::string grid = "F_" + std::to_string(level) + " m=" + std::to_string(m) + ", F_" +
                           std::to_string(level - 1) + " m=" + std::to_string(coarse->points_per_branch());
  return {make(tag("intertwining_lift", level, t), r1 <= tol, r1, 0.0, tol, grid),
          make(tag("fiber_decomposition", level, t), r2 <= tol, r2, 0.0, tol, grid)};
}

CheckResult check_energy_lift(const ParameterSequences& seq, int level, int m, double tol) {
  if (level < 1) throw InvalidArgument("energy lift needs level >= 1");
  const std::uint64_t j = seq.j(level);
  const LayoutPtr coarse = make_layout(seq, level - 1, static_cast<int>(j * (m - 1) + 1));
  const GridFunction f = GridFunction::sample(coarse, test_function(seq, level - 1));
  const double e0 = dirichlet_energy(f);
  const double e1 = dirichlet_energy(lift(f, level));
  const double rel = std::abs(e1 - e0) / e0;
  return make(tag("energy_lift", level), rel <= tol, rel, 0.0, tol, "relative difference E_i(f o Phi) vs E_{i-1}(f)");
}

std::vector<CheckResult> check_lipschitz(const ParameterSequences& seq, int level, const std::vector<double>& times,
                                         SampleStream& rs, int triples) {
  std::vector<CheckResult> out;
  for (double t : times) {
    const double bound = lipschitz_bound(seq, t).value;
    const DiamondKernel K(seq, level, t);
    double worst = 0.0;
    for (int k = 0; k < triples; ++k) {
      const PointAddress y = rs.point(seq, level);
      const PointAddress x = rs.uniform() < 0.4 ? rs.near(seq, y, 2.0 * std::sqrt(t)) : rs.point(seq, level);
      const PointAddress y2 =
          rs.uniform() < 0.7 ? rs.near(seq, y, std::pow(10.0, rs.uniform(-3.0, -1.0))) : rs.point(seq, level);
      const double d = distance_level(seq, y, y2, level);
      if (d < 1e-12) continue;
      worst = std::max(worst, std::abs(K(x, y).value - K(x, y2).value) / d);
    }
    out.push_back(make(tag("lipschitz", level, t), worst <= bound, worst, bound, 0.0,
                       std::to_string(triples) + " triples"));
  }
  return out;
}

std::vector<CheckResult> check_wbe(const ParameterSequences& seq, int level, int m, const std::vector<double>& times,
                                   SampleStream& rs, int pairs, int jobs) {
  const LayoutPtr L = make_layout(seq, level, m);
  const auto& w = L->weights();
  std::vector<CheckResult> out;
  for (double t : times) {
    const double bound = wbe_constant(seq, t).value;
    const DiamondKernel K(seq, level, t);
    std::vector<PointAddress> xs, ys;
    for (int k = 0; k < pairs; ++k) {
      xs.push_back(rs.point(seq, level));
      ys.push_back(rs.uniform() < 0.5 ? rs.near(seq, xs.back(), 0.3) : rs.point(seq, level));
    }
    std::vector<double> ratio(pairs, 0.0);
    for_rows(static_cast<std::size_t>(pairs), jobs, [&](std::size_t k) {
      const double d = distance_level(seq, xs[k], ys[k], level);
      if (d < 1e-12) return;
      double s = 0.0;
      for (std::size_t v = 0; v < L->node_count(); ++v)
        s += w[v] * std::abs(K(xs[k], L->point(v)).value - K(ys[k], L->point(v)).value);
      ratio[k] = s / d;
    });
    const double worst = *std::max_element(ratio.begin(), ratio.end());
    out.push_back(make(tag("wbe_kernel_form", level, t), worst <= bound, worst, bound, 0.0,
                       std::to_string(pairs) + " pairs, m=" + std::to_string(m)));
  }
  return out;
}

CheckResult check_wbe_n_invariance(const ParameterSequences& seq, const std::vector<double>& times) {
  const ParameterSequences other = with_more_copies(seq);
  double worst = 0.0;
  for (double t : times) worst = std::max(worst, std::abs(wbe_constant(seq, t).value - wbe_constant(other, t).value));
  return make("wbe_n_invariance", worst == 0.0, worst, 0.0, 0.0, "n_l replaced by n_l + 1; exact equality required");
}

std::vector<CheckResult> check_log_scaling(std::uint64_t j, std::uint64_t n, double t_lo, double t_hi, int points,
                                           double tol) {
  const ParameterSequences seq = ParameterSequences::regular(j, n);
  std::vector<double> ts, xs, ys;
  for (int k = 0; k < points; ++k) {
    const double t = std::exp(std::log(t_lo) + (std::log(t_hi) - std::log(t_lo)) * k / (points - 1));
    ts.push_back(t);
    xs.push_back(-0.5 * std::log(t));
    ys.push_back(std::sqrt(t) * wbe_constant(seq, t).value);
  }
  // Least squares y = a + b x.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = 0; k < points; ++k) {
    sx += xs[k];
    sy += ys[k];
    sxx += xs[k] * xs[k];
    sxy += xs[k] * ys[k];
  }
  const double b = (points * sxy - sx * sy) / (points * sxx - sx * sx);
  const double a = (sy - b * sx) / points;
  double resid = 0.0;
  for (int k = 0; k < points; ++k) resid = std::max(resid, std::abs(ys[k] - (a + b * xs[k])) / std::abs(ys[k]));

  // The printed bound should dominate C(t) d wherever its regime applies.
  double min_ratio = std::numeric_limits<double>::infinity();
  int probed = 0, violations = 0;
  for (double d : {0.5, 1.0, kPi / 2.0, kPi}) {
    for (double t : ts) {
      if (!(t < d / 2.0) || !(d / std::sqrt(t) > 2.0)) continue;
      const double printed = regular_log_bound(static_cast<double>(j), kPi, t, d).value;
      const double ratio = printed / (wbe_constant(seq, t).value * d);
      min_ratio = std::min(min_ratio, ratio);
      ++probed;
      if (ratio < 1.0) ++violations;
    }
  }
  const std::string jn = "j=" + std::to_string(j) + " n=" + std::to_string(n);
  CheckResult info{"regular_log_printed_bound", CheckStatus::kInformational, min_ratio, 1.0, 0.0,
                   jn + ": min printed/(C(t) d) over " + std::to_string(probed) + " (d,t) probes, " +
                       std::to_string(violations) + " below 1"};
  return {make("regular_log_scaling", resid <= tol, resid, tol, 0.0,
               jn + ", fit sqrt(t) C(t) = " + fmt("%.6g", a) + " + " + fmt("%.6g", b) + " log(1/sqrt t)"),
          info};
}

CheckResult check_spectral_gap(const ParameterSequences& seq, int level, int m, double tol) {
  const CableDiscretization disc(make_layout(seq, level, m));
  const Spectrum s = compute_spectrum(disc, 6);
  const double lambda1 = s.values[1];
  return make(tag("spectral_gap", level), std::abs(lambda1 - 1.0) <= tol, lambda1, 1.0, tol,
              "m=" + std::to_string(m) + ", " + std::to_string(disc.size()) + " nodes, lambda_2 = " +
                  fmt("%.6f", s.values[2]));
}

std::vector<CheckResult> check_local_poincare(const ParameterSequences& seq, int level, int m) {
  const LocalPoincareReport r = local_poincare(seq, level, m);
  const double J = seq.J(level);
  const double expected = 4.0 / (J * J);
  const double measured = 1.0 / r.rayleigh;
  const double optimal = r.constant;
  const bool close = std::abs(measured - expected) <= 0.02 * expected && std::abs(optimal - expected) <= 0.02 * expected;
  return {
      make(tag("local_poincare_mean", level), r.mean_ratio <= 1e-6, r.mean_ratio, 0.0, 1e-6, "|mean h| / ||h||"),
      make(tag("local_poincare_residual", level), r.residual <= 1e-2, r.residual, 0.0, 1e-2,
           "||L h + lambda h|| / ||h||"),
      make(tag("local_poincare_lambda", level), std::abs(r.rayleigh - r.expected_lambda) <= 0.02 * r.expected_lambda,
           r.rayleigh, r.expected_lambda, 0.02, "relative tolerance, expected (pi/(2r))^2"),
      make(tag("local_poincare_constant", level), close, measured, expected, 0.02,
           "int h^2 / E(h,h); optimal ball constant 1/lambda = " + fmt("%.6g", optimal)),
      CheckResult{tag("local_poincare_printed", level), CheckStatus::kInformational, measured, 2.0 / J, 0.0,
                  "printed constant 2/J_i; ratio measured/printed = " + fmt("%.4g", measured * J / 2.0)}};
}

std::vector<CheckResult> check_log_sobolev(const ParameterSequences& seq, int level, int m,
                                           const std::vector<double>& deltas, SampleStream& rs, int functions) {
  const LayoutPtr L = make_layout(seq, level, m);
  const LevelScales s(seq, level);
  double worst = -std::numeric_limits<double>::infinity();
  double worst_prob = -std::numeric_limits<double>::infinity();
  int positive = 0;
  for (int k = 0; k < functions; ++k) {
    // Even draws: small smooth perturbations of 1. Odd draws: bumps
    // exp(kappa cos(theta - c)), whose entropy is positive for large kappa.
    const bool bump = k % 2 == 1;
    const double scale = bump ? rs.log_uniform(1.0, 40.0) : rs.log_uniform(0.05, 2.0);
    const double centre = rs.uniform(0.0, 2.0 * kPi);
    double amp[3], phase[3];
    for (int c = 0; c < 3; ++c) {
      amp[c] = rs.uniform(-1.0, 1.0) / (c + 1);
      phase[c] = rs.uniform(0.0, 2.0 * kPi);
    }
    std::vector<std::vector<double>> label_amp(level + 1);
    for (int l = 1; l <= level; ++l)
      for (std::uint64_t w = 0; w < seq.n(l); ++w) label_amp[l].push_back(rs.uniform(-0.5, 0.5));
    const GridFunction f = GridFunction::sample(L, [&](const PointAddress& p) {
      double v = bump ? std::exp(0.5 * scale * std::cos(p.theta - centre)) : 1.0;
      double wiggle = 0.0;
      for (int c = 0; c < 3; ++c) wiggle += amp[c] * std::cos((c + 1) * p.theta + phase[c]);
      for (int l = 1; l <= level; ++l) wiggle += label_amp[l][p.labels[l - 1] - 1] * std::sin(s.J[l] * p.theta);
      return bump ? v * (1.0 + 0.3 * wiggle) : v + scale * wiggle;
    });
    std::vector<double> sq(f.values());
    for (double& v : sq) v *= v;
    const GridFunction f2(L, sq);
    const double ent = entropy(f2, std::nullopt, EntropyNormalization::kLiteral);
    const double energy = dirichlet_energy(f);
    if (ent > 0.0) ++positive;
    worst = std::max(worst, ent / energy);
    worst_prob = std::max(worst_prob, entropy(f2, std::nullopt, EntropyNormalization::kProbability) / energy);
  }
  std::vector<CheckResult> out;
  const std::string sample = std::to_string(functions) + " functions, " + std::to_string(positive) +
                             " with positive entropy";
  for (double delta : deltas) {
    const double M = logsob_constant(seq, delta).value;
    out.push_back(make(tag("log_sobolev", level, delta, "delta"), worst <= M, worst, M, 0.0,
                       "max Ent(f^2)/E(f,f), " + sample));
  }
  const double M1 = logsob_constant(seq, 1.0).value;
  out.push_back(CheckResult{tag("log_sobolev_probability_entropy", level), CheckStatus::kInformational, worst_prob,
                            M1, 0.0,
                            "entropy against mu/mu(F) instead of mu; bound shown is M(1)"});
  return out;
}

std::vector<CheckResult> check_ultracontractivity(const ParameterSequences& seq, int level, int m,
                                                  const std::vector<double>& times) {
  const LayoutPtr L = make_layout(seq, level, m);
  const auto regular = regular_parameters(seq);
  std::vector<CheckResult> out;
  for (double t : times) {
    const DiamondKernel K(seq, level, t);
    double sup = 0.0;
    for (std::size_t u = 0; u < L->node_count(); ++u) sup = std::max(sup, K(L->point(u), L->point(u)).value);
    const double b2 = ultracontractivity_bound(seq, t / 2.0).value;
    out.push_back(make(tag("ultracontractivity_2inf", level, t), sup <= b2 * b2, sup, b2 * b2, 0.0,
                       "sup p_t(x,x) vs ||P_{t/2}||_{2->inf}^2"));
    if (regular && t < 1.0) {
      const OneToInfConstant c = regular_1_to_inf_constant(static_cast<double>(regular->j),
                                                           static_cast<double>(regular->n));
      if (c.valid)
        out.push_back(make(tag("ultracontractivity_1inf", level, t), sup <= c.value / t, sup, c.value / t, 0.0,
                           "C(j,n)/t, " + c.branch + " branch"));
    }
  }
  return out;
}

std::vector<CheckResult> check_series_probe(double a_lo, double a_hi, int points) {
  int printed_fail = 0;
  double worst_corrected = 0.0;
  for (int k = 0; k < points; ++k) {
    const double a = std::exp(std::log(a_lo) + (std::log(a_hi) - std::log(a_lo)) * k / (points - 1));
    const double s = theta_tail_sum(a);
    if (s > printed_series_bound(a)) ++printed_fail;
    worst_corrected = std::max(worst_corrected, s / corrected_series_bound(a));
  }
  const double s1 = theta_tail_sum(1.0), p1 = printed_series_bound(1.0);
  return {CheckResult{"series_printed_a1", CheckStatus::kInformational, s1, p1, 0.0,
                      s1 > p1 ? "printed bound fails at a=1" : "printed bound holds at a=1"},
          CheckResult{"series_printed_grid", CheckStatus::kInformational, static_cast<double>(printed_fail),
                      static_cast<double>(points), 0.0, "grid points where the printed bound fails"},
          make("series_corrected_grid", worst_corrected <= 1.0, worst_corrected, 1.0, 0.0,
               "max sum / corrected bound over a in [" + fmt("%g", a_lo) + ", " + fmt("%g", a_hi) + "]")};
}

CheckResult check_assumption_sweep(const ParameterSequences& seq, const std::vector<double>& times) {
  const int depth = std::min(seq.max_level().value_or(40), 40);
  const AssumptionReport r = check_assumption(seq, times, depth);
  double sup = -std::numeric_limits<double>::infinity();
  std::string notes;
  for (const AssumptionProbe& p : r.probes) {
    sup = std::max(sup, p.sup_log);
    notes += (notes.empty() ? "" : ", ") + ("t=" + fmt("%g", p.t) + " " + to_string(p.verdict));
  }
  CheckResult c{"assumption_sweep", CheckStatus::kPass, sup, 0.0, 0.0, notes};
  if (r.overall() == Verdict::kFail) c.status = CheckStatus::kFail;
  if (r.overall() == Verdict::kInconclusive) c.status = CheckStatus::kInformational;
  return c;
}

std::vector<CheckResult> check_walk(const ParameterSequences& seq, int level, std::uint64_t seed) {
  const LayoutPtr L = make_layout(seq, level, 5);
  const CableDiscretization disc(L);
  std::vector<std::uint64_t> labels(level, 1);
  const std::size_t start = nearest_node(*L, make_point(seq, 0.3, labels));
  const Eigen::VectorXd& M = disc.mass();

  std::vector<double> stationary(M.data(), M.data() + M.size());
  for (double& v : stationary) v /= M.sum();
  const double tv_stat = total_variation(oracle_walk(disc, 50.0, start, 100000, seed), stationary);

  const Spectrum spec = compute_spectrum(disc, 0);
  const Eigen::VectorXd row = oracle_kernel_row(spec, 1.0, start);
  std::vector<double> target(disc.size());
  for (std::size_t v = 0; v < target.size(); ++v) target[v] = M[v] * row[v];
  double tv[3];
  std::size_t samples = 1000;
  for (int k = 0; k < 3; ++k, samples *= 10)
    tv[k] = total_variation(oracle_walk(disc, 1.0, start, samples, seed + 1 + k), target);
  return {make(tag("walk_stationarity", level, 50.0), tv_stat < 0.02, tv_stat, 0.02, 0.0, "TV at 1e5 samples"),
          make(tag("walk_vs_spectral", level, 1.0), tv[2] < tv[1] && tv[1] < tv[0], tv[2], tv[0], 0.0,
               "TV at 1e3/1e4/1e5 samples: " + fmt("%.4f", tv[0]) + " " + fmt("%.4f", tv[1]) + " " +
                   fmt("%.4f", tv[2]))};
}

std::vector<CheckResult> run_suite(const ParameterSequences& seq, const SuiteConfig& cfg) {
  std::vector<CheckResult> out;
  auto guard = [&](const std::string& name, auto&& body) {
    try {
      using R = decltype(body());
      if constexpr (std::is_same_v<R, CheckResult>)
        out.push_back(body());
      else
        for (auto& r : body()) out.push_back(std::move(r));
    } catch (const std::exception& e) {
      out.push_back({name, CheckStatus::kFail, std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0,
                     std::string("aborted: ") + e.what()});
    }
  };
  SampleStream rs(cfg.seed);
  const int top = cfg.max_level;
  const auto regular = regular_parameters(seq);

  guard("representation_agreement", [&] { return check_representation(rs); });
  guard("dirichlet_identity", [&] { return check_dirichlet_identity(rs); });
  for (int l = 1; l <= top; ++l) {
    guard(tag("closed_vs_recursive", l), [&] { return check_closed_vs_recursive(seq, l, cfg.times, rs); });
    guard(tag("distance_vs_dijkstra", l), [&] { return check_distance_oracle(seq, l, rs); });
  }
  for (int l = 0; l <= top; ++l)
    for (double t : cfg.spectral_times)
      guard(tag("spectral", l, t), [&] { return check_spectral_oracle(seq, l, t, cfg.m, 2 * cfg.m); });
  for (int l = 1; l <= top; ++l) {
    guard(tag("semigroup_axioms", l), [&] { return check_semigroup_axioms(seq, l, cfg.m, 0.5, 0.5, rs, cfg.jobs); });
    guard(tag("intertwining", l), [&] { return check_intertwining(seq, l, cfg.m, 0.5, 1e-4, cfg.jobs); });
    guard(tag("energy_lift", l), [&] { return check_energy_lift(seq, l, cfg.m); });
    guard(tag("lipschitz", l), [&] { return check_lipschitz(seq, l, cfg.times, rs); });
    guard(tag("wbe_kernel_form", l), [&] { return check_wbe(seq, l, cfg.m, cfg.times, rs, 50, cfg.jobs); });
  }
  guard("wbe_n_invariance", [&] { return check_wbe_n_invariance(seq, cfg.times); });
  if (regular) guard("regular_log_scaling", [&] { return check_log_scaling(regular->j, regular->n); });
  for (int l = 1; l <= top; ++l) {
    guard(tag("spectral_gap", l), [&] { return check_spectral_gap(seq, l, cfg.m); });
    guard(tag("local_poincare", l), [&] { return check_local_poincare(seq, l, cfg.m); });
    guard(tag("log_sobolev", l), [&] { return check_log_sobolev(seq, l, cfg.m, cfg.deltas, rs); });
    guard(tag("ultracontractivity", l), [&] { return check_ultracontractivity(seq, l, cfg.m, cfg.times); });
  }
  guard("series_probe", [&] { return check_series_probe(); });
  guard("assumption_sweep", [&] { return check_assumption_sweep(seq, cfg.times); });
  guard("walk", [&] { return check_walk(seq, 1, cfg.seed); });
  return out;
}

bool any_failure(const std::vector<CheckResult>& results) {
  return std::any_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.status == CheckStatus::kFail; });
}

void write_report_json(std::ostream& os, const std::vector<CheckResult>& results, const ParameterSequences& seq,
                       const SuiteConfig& cfg) {
  nlohmann::ordered_json j;
  j["seed"] = cfg.seed;
  j["sequence"] = seq.describe();
  j["max_level"] = cfg.max_level;
  j["m"] = cfg.m;
  j["times"] = cfg.times;
  j["spectral_times"] = cfg.spectral_times;
  j["deltas"] = cfg.deltas;
  j["kernel_tol"] = cfg.kernel.tol;
  auto& arr = j["checks"] = nlohmann::ordered_json::array();
  int counts[3] = {0, 0, 0};
  for (const CheckResult& r : results) {
    nlohmann::ordered_json c;
    c["name"] = r.name;
    c["status"] = to_string(r.status);
    c["measured"] = r.measured;
    c["bound"] = r.bound;
    c["tolerance"] = r.tolerance;
    c["notes"] = r.notes;
    arr.push_back(std::move(c));
    ++counts[static_cast<int>(r.status)];
  }
  j["summary"] = {{"pass", counts[0]}, {"fail", counts[1]}, {"informational", counts[2]}};
  os << j.dump(2) << "\n";
}

void write_summary(std::ostream& os, const std::vector<CheckResult>& results) {
  char buf[512];
  for (const CheckResult& r : results) {
    std::snprintf(buf, sizeof buf, "%-44s %-13s measured=%-12.6g bound=%-12.6g %s\n", r.name.c_str(),
                  to_string(r.status), r.measured, r.bound, r.notes.c_str());
    os << buf;
  }
}

}  // namespace diamond::verify
