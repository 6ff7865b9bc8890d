#pragma once

#include <optional>
#include <vector>

#include "diamond/grid.hpp"
#include "diamond/kernels.hpp"

namespace diamond {

double integrate(const GridFunction& f, Quadrature rule = Quadrature::kTrapezoid);
double inner(const GridFunction& f, const GridFunction& g, Quadrature rule = Quadrature::kTrapezoid);
double l2_norm(const GridFunction& f, Quadrature rule = Quadrature::kTrapezoid);
// mu_i(F_i) under the quadrature rule (2 pi up to rounding).
double total_measure(const BranchLayout& layout, Quadrature rule = Quadrature::kTrapezoid);

// (P_t f)(x) = sum_y w_y p_t(x, y) f(y) at every node, matrix-free. Each row
// is summed in node order, so the result does not depend on `jobs`.
GridFunction apply_semigroup(const GridFunction& f, double t, const KernelEvalConfig& cfg = {},
                             Quadrature rule = Quadrature::kTrapezoid, int jobs = 1);

// The same operator with the kernel matrix stored, for repeated application.
class SemigroupOperator {
 public:
  SemigroupOperator(LayoutPtr layout, double t, const KernelEvalConfig& cfg = {},
                    Quadrature rule = Quadrature::kTrapezoid);

  GridFunction apply(const GridFunction& f) const;
  double kernel(std::size_t u, std::size_t v) const { return matrix_[u * n_ + v]; }
  const LayoutPtr& layout() const noexcept { return layout_; }

 private:
  LayoutPtr layout_;
  std::size_t n_;
  std::vector<double> matrix_;
  std::vector<double> weights_;
};

// Layout of the same step one level up or down (intervals per branch scale by j).
LayoutPtr coarser_layout(const BranchLayout& layout);
LayoutPtr finer_layout(const BranchLayout& layout, int target_level);

// (1/n_i) sum_w f(x w), a function on F_{i-1} with the same step.
GridFunction integrate_fibers(const GridFunction& f);
// f o Phi: copies values onto all descendant branches at `target_level`.
GridFunction lift(const GridFunction& f, int target_level);
GridFunction project_sym(const GridFunction& f);
GridFunction project_antisym(const GridFunction& f);

// Per-branch Dirichlet heat evolution with Lebesgue measure on each branch.
GridFunction apply_dirichlet_branches(const GridFunction& f, double t, const KernelEvalConfig& cfg = {});

// sum_b (1/N_i) sum_segments ((f_{s+1} - f_s)/h)^2 h.
double dirichlet_energy(const GridFunction& f);

enum class EntropyNormalization {
  kLiteral,      // int f log f - (int f) log(int f)
  kProbability,  // int f log f - (int f) log(int f / mu(F))
};

// floor defaults to 1e-12 * max f; f log f is dropped below the floor.
double entropy(const GridFunction& f, std::optional<double> floor = std::nullopt,
               EntropyNormalization norm = EntropyNormalization::kLiteral,
               Quadrature rule = Quadrature::kTrapezoid);

}  // namespace diamond
