#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "diamond/grid.hpp"

namespace diamond::verify {

// One segment of a cable system: an interval of the given length carrying
// measure density `density` (1/N_i on F_i).
struct CableEdge {
  std::size_t u = 0;
  std::size_t v = 0;
  double length = 0.0;
  double density = 1.0;
};

// Finite-difference quantum graph. The energy is sum density (f_u - f_v)^2 / length
// and the mass is lumped: each node gets half of density * length from every
// incident segment. At junctions this is the Kirchhoff flux balance.
class CableDiscretization {
 public:
  CableDiscretization(std::size_t nodes, const std::vector<CableEdge>& edges);
  // Segments between consecutive samples of every branch of the layout.
  explicit CableDiscretization(LayoutPtr layout);

  std::size_t size() const noexcept { return static_cast<std::size_t>(mass_.size()); }
  const Eigen::SparseMatrix<double>& stiffness() const noexcept { return stiffness_; }
  const Eigen::VectorXd& mass() const noexcept { return mass_; }
  double total_length() const noexcept { return total_length_; }
  // Null for hand-built graphs.
  const LayoutPtr& layout() const noexcept { return layout_; }

  // Discrete generator: (L f)_u = -(K f)_u / M_u.
  Eigen::VectorXd generator(const Eigen::VectorXd& f) const;
  double energy(const Eigen::VectorXd& f) const;

 private:
  void build(std::size_t nodes, const std::vector<CableEdge>& edges);

  LayoutPtr layout_;
  Eigen::SparseMatrix<double> stiffness_;
  Eigen::VectorXd mass_;
  double total_length_ = 0.0;
};

// Eigenpairs of K psi = lambda M psi, ascending, psi orthonormal in the mass
// inner product. `complete` means the whole spectrum is present.
struct Spectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // column k is psi_k
  bool complete = false;

  double largest() const { return values.size() ? values[values.size() - 1] : 0.0; }
};

// Graphs up to this many nodes are diagonalized densely.
inline constexpr std::size_t kDenseSpectrumLimit = 2000;

// The `count` lowest eigenpairs (all of them when count <= 0 or the graph is
// small). Large graphs use Lanczos in shift-invert mode. Throws OracleFailure
// on non-convergence.
Spectrum compute_spectrum(const CableDiscretization& disc, int count = 0);

// Enough of the spectrum that e^{-lambda t} beyond the last eigenvalue is
// below e^{-cutoff}.
Spectrum spectrum_for_time(const CableDiscretization& disc, double t, double cutoff = 30.0);

// sum_k e^{-lambda_k t} psi_k(u) psi_k(v).
double oracle_kernel_spectral(const Spectrum& spec, double t, std::size_t u, std::size_t v);
// The whole row u at once.
Eigen::VectorXd oracle_kernel_row(const Spectrum& spec, double t, std::size_t u);
// Snaps x and y to their nearest nodes of disc.layout().
double oracle_kernel_spectral(const CableDiscretization& disc, double t, const PointAddress& x,
                              const PointAddress& y);

// Nearest node of the layout; deeper or shallower points are projected or
// extended to the layout's level first.
std::size_t nearest_node(const BranchLayout& layout, const PointAddress& p);

}  // namespace diamond::verify
