#include "diamond/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "diamond/errors.hpp"

namespace diamond {

namespace {

constexpr std::size_t kMaxMatrixEntries = 120'000'000;

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

}  // namespace

double integrate(const GridFunction& f, Quadrature rule) {
  const auto& w = f.layout().weights(rule);
  double s = 0.0;
  for (std::size_t u = 0; u < w.size(); ++u) s += w[u] * f[u];
  return s;
}

double inner(const GridFunction& f, const GridFunction& g, Quadrature rule) {
  if (!(f.layout() == g.layout())) throw InvalidArgument("inner product needs a common layout");
  const auto& w = f.layout().weights(rule);
  double s = 0.0;
  for (std::size_t u = 0; u < w.size(); ++u) s += w[u] * f[u] * g[u];
  return s;
}

double l2_norm(const GridFunction& f, Quadrature rule) { return std::sqrt(inner(f, f, rule)); }

double total_measure(const BranchLayout& layout, Quadrature rule) {
  double s = 0.0;
  for (double w : layout.weights(rule)) s += w;
  return s;
}

GridFunction apply_semigroup(const GridFunction& f, double t, const KernelEvalConfig& cfg,
                             Quadrature rule, int jobs) {
  const BranchLayout& L = f.layout();
  const DiamondKernel kernel(L.seq(), L.level(), t, cfg);
  const auto& w = L.weights(rule);
  const std::size_t n = L.node_count();
  std::vector<double> out(n, 0.0);
  for_rows(n, jobs, [&](std::size_t u) {
    const PointAddress& x = L.point(u);
    double s = 0.0;
    for (std::size_t v = 0; v < n; ++v) s += w[v] * kernel(x, L.point(v)).value * f[v];
    out[u] = s;
  });
  return GridFunction(f.layout_ptr(), std::move(out));
}

SemigroupOperator::SemigroupOperator(LayoutPtr layout, double t, const KernelEvalConfig& cfg,
                                     Quadrature rule)
    : layout_(std::move(layout)), n_(layout_->node_count()), weights_(layout_->weights(rule)) {
  if (n_ * n_ > kMaxMatrixEntries) throw InvalidArgument("kernel matrix too large to store");
  const DiamondKernel kernel(layout_->seq(), layout_->level(), t, cfg);
  matrix_.assign(n_ * n_, 0.0);
  for (std::size_t u = 0; u < n_; ++u) {
    const PointAddress& x = layout_->point(u);
    for (std::size_t v = u; v < n_; ++v) {
      const double k = kernel(x, layout_->point(v)).value;
      matrix_[u * n_ + v] = k;
      matrix_[v * n_ + u] = k;
    }
  }
}

GridFunction SemigroupOperator::apply(const GridFunction& f) const {
  if (!(f.layout() == *layout_)) throw InvalidArgument("function does not live on the operator's layout");
  std::vector<double> wf(n_), out(n_, 0.0);
  for (std::size_t v = 0; v < n_; ++v) wf[v] = weights_[v] * f[v];
  for (std::size_t u = 0; u < n_; ++u) {
    const double* row = &matrix_[u * n_];
    double s = 0.0;
    for (std::size_t v = 0; v < n_; ++v) s += row[v] * wf[v];
    out[u] = s;
  }
  return GridFunction(layout_, std::move(out));
}

LayoutPtr coarser_layout(const BranchLayout& layout) {
  if (layout.level() < 1) throw InvalidArgument("no coarser level below F_0");
  const std::uint64_t j = layout.seq().j(layout.level());
  const std::uint64_t q = static_cast<std::uint64_t>(layout.intervals_per_branch()) * j;
  return make_layout(layout.seq(), layout.level() - 1, static_cast<int>(q + 1));
}

LayoutPtr finer_layout(const BranchLayout& layout, int target_level) {
  if (target_level < layout.level()) throw InvalidArgument("lift target must not be coarser than the source");
  const LevelProducts from = cumulative_products(layout.seq(), layout.level());
  const LevelProducts to = cumulative_products(layout.seq(), target_level);
  const std::uint64_t ratio = to.J / from.J;
  const auto q = static_cast<std::uint64_t>(layout.intervals_per_branch());
  if (q % ratio != 0)
    throw InvalidArgument("intervals per branch must be divisible by J_target / J_source to keep the step");
  return make_layout(layout.seq(), target_level, static_cast<int>(q / ratio + 1));
}

GridFunction integrate_fibers(const GridFunction& f) {
  const BranchLayout& L = f.layout();
  LayoutPtr C = coarser_layout(L);
  const int i = L.level();
  const std::uint64_t n = L.seq().n(i);
  std::vector<double> out(C->node_count());
  for (std::size_t u = 0; u < out.size(); ++u) {
    PointAddress p = extend(C->point(u), i);
    double s = 0.0;
    for (std::uint64_t w = 1; w <= n; ++w) {
      p.labels[i - 1] = w;
      s += f.at(p);
    }
    out[u] = s / static_cast<double>(n);
  }
  return GridFunction(std::move(C), std::move(out));
}

GridFunction lift(const GridFunction& f, int target_level) {
  LayoutPtr T = finer_layout(f.layout(), target_level);
  const int k = f.level();
  std::vector<double> out(T->node_count());
  for (std::size_t u = 0; u < out.size(); ++u) out[u] = f.at(project(T->point(u), k));
  return GridFunction(std::move(T), std::move(out));
}

GridFunction project_sym(const GridFunction& f) {
  GridFunction s = lift(integrate_fibers(f), f.level());
  return GridFunction(f.layout_ptr(), s.values());
}

GridFunction project_antisym(const GridFunction& f) { return f - project_sym(f); }

GridFunction apply_dirichlet_branches(const GridFunction& f, double t, const KernelEvalConfig& cfg) {
  cfg.validate();
  if (!(t > 0.0)) throw InvalidArgument("t must be > 0");
  const BranchLayout& L = f.layout();
  const double J = L.scales().J[L.level()];
  const int m = L.points_per_branch();
  const int q = m - 1;
  const double h = L.step();
  // Branch kernel J (p_a(J s, J s') - p_a(J s, -J s')) in local coordinates, a = J^2 t.
  const CircleSeries series(J * J * t, cfg.tol / (2.0 * J), CircleRepresentation::kAuto, cfg.rep_switch,
                            cfg.max_terms);
  std::vector<double> D(static_cast<std::size_t>(m) * m, 0.0);
  for (int s = 1; s < q; ++s)
    for (int r = 1; r < q; ++r) D[s * m + r] = J * series.difference(J * s * h, J * r * h) * h;

  std::vector<double> out(L.node_count(), 0.0);
  std::vector<double> g(m);
  for (std::size_t b = 0; b < L.branch_count(); ++b) {
    for (int s = 0; s < m; ++s) g[s] = f[L.node(b, s)];
    for (int s = 1; s < q; ++s) {
      double acc = 0.0;
      for (int r = 1; r < q; ++r) acc += D[s * m + r] * g[r];
      out[L.node(b, s)] = acc;
    }
  }
  return GridFunction(f.layout_ptr(), std::move(out));
}

double dirichlet_energy(const GridFunction& f) {
  const BranchLayout& L = f.layout();
  if (L.points_per_branch() < 3) throw InvalidArgument("energy needs at least 3 points per branch");
  const double h = L.step();
  const double weight = 1.0 / L.scales().N[L.level()];
  double e = 0.0;
  for (std::size_t b = 0; b < L.branch_count(); ++b) {
    double eb = 0.0;
    for (int s = 0; s + 1 < L.points_per_branch(); ++s) {
      const double d = f[L.node(b, s + 1)] - f[L.node(b, s)];
      eb += d * d;
    }
    e += eb;
  }
  return weight * e / h;
}

double entropy(const GridFunction& f, std::optional<double> floor, EntropyNormalization norm,
               Quadrature rule) {
  double fmax = 0.0;
  for (double v : f.values()) fmax = std::max(fmax, v);
  const double fl = floor.value_or(1e-12 * fmax);
  if (!(fl > 0.0) && !floor) return 0.0;  // f vanishes identically
  if (!(fl > 0.0)) throw InvalidArgument("entropy floor must be > 0");
  const auto& w = f.layout().weights(rule);
  double mass = 0.0, flogf = 0.0, mu = 0.0;
  for (std::size_t u = 0; u < w.size(); ++u) {
    const double v = f[u];
    if (v < -fl) throw InvalidArgument("entropy needs a nonnegative function");
    mu += w[u];
    mass += w[u] * v;
    if (v < fl) continue;
    flogf += w[u] * v * std::log(v);
  }
  if (mass <= 0.0) return 0.0;
  const double ref = norm == EntropyNormalization::kLiteral ? mass : mass / mu;
  return flogf - mass * std::log(ref);
}

}  // namespace diamond
