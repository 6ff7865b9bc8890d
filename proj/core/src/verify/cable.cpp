#include "diamond/verify/cable.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/SparseCholesky>
#include <arpack.hpp>

#include "diamond/errors.hpp"

namespace diamond::verify {

namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos on the symmetric form A = M^{-1/2} K M^{-1/2} with operator
// (A - sigma I)^{-1}; the largest Ritz values nu give lambda = sigma + 1/nu.
Spectrum lanczos_lowest(const CableDiscretization& disc, int nev) {
  const auto n = static_cast<a_int>(disc.size());
  const Eigen::VectorXd inv_sqrt_mass = disc.mass().cwiseSqrt().cwiseInverse();
  const double sigma = -0.05;
  Eigen::SparseMatrix<double> A = inv_sqrt_mass.asDiagonal() * disc.stiffness() * inv_sqrt_mass.asDiagonal();
  Eigen::SparseMatrix<double> shift(n, n);
  shift.setIdentity();
  A -= sigma * shift;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
  if (solver.info() != Eigen::Success) throw OracleFailure("sparse factorization of the shifted Laplacian failed");

  const a_int ncv = std::min<a_int>(n, std::max<a_int>(2 * nev + 1, nev + 20));
  const a_int lworkl = ncv * (ncv + 8);
  const double tol = 1e-12;
  std::vector<double> resid(n), v(static_cast<std::size_t>(n) * ncv), workd(3 * static_cast<std::size_t>(n)),
      workl(lworkl);
  a_int iparam[11] = {}, ipntr[14] = {};
  iparam[0] = 1;     // exact shifts
  iparam[2] = 5000;  // max restarts
  iparam[6] = 1;     // regular mode on the inverted operator
  a_int ido = 0, info = 0;
  for (;;) {
    arpack::saupd(ido, arpack::bmat::identity, n, arpack::which::largest_magnitude, nev, tol, resid.data(), ncv,
                  v.data(), n, iparam, ipntr, workd.data(), workl.data(), lworkl, info);
    if (ido != -1 && ido != 1) break;
    Eigen::Map<const Eigen::VectorXd> x(&workd[ipntr[0] - 1], n);
    Eigen::Map<Eigen::VectorXd> y(&workd[ipntr[1] - 1], n);
    y = solver.solve(x);
  }
  if (info != 0) {
    std::ostringstream os;
    os << "Lanczos iteration did not converge (info " << info << ", " << iparam[4] << " of " << nev
       << " eigenpairs)";
    throw OracleFailure(os.str());
  }
  std::vector<a_int> select(ncv);
  std::vector<double> d(nev), z(static_cast<std::size_t>(n) * nev);
  arpack::seupd(1, arpack::howmny::ritz_vectors, select.data(), d.data(), z.data(), n, 0.0,
                arpack::bmat::identity, n, arpack::which::largest_magnitude, nev, tol, resid.data(), ncv, v.data(),
                n, iparam, ipntr, workd.data(), workl.data(), lworkl, info);
  if (info != 0) throw OracleFailure("eigenvector extraction failed (info " + std::to_string(info) + ")");

  std::vector<int> order(nev);
  for (int k = 0; k < nev; ++k) order[k] = k;
  std::vector<double> lambda(nev);
  for (int k = 0; k < nev; ++k) lambda[k] = sigma + 1.0 / d[k];
  std::sort(order.begin(), order.end(), [&](int a, int b) { return lambda[a] < lambda[b]; });
  Spectrum s;
  s.values.resize(nev);
  s.vectors.resize(n, nev);
  for (int k = 0; k < nev; ++k) {
    s.values[k] = lambda[order[k]];
    Eigen::Map<const Eigen::VectorXd> col(&z[static_cast<std::size_t>(order[k]) * n], n);
    s.vectors.col(k) = inv_sqrt_mass.cwiseProduct(col);
  }
  s.complete = nev == n;
  return s;
}

Spectrum dense_spectrum(const CableDiscretization& disc) {
  const Eigen::VectorXd inv_sqrt_mass = disc.mass().cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd A =
      inv_sqrt_mass.asDiagonal() * Eigen::MatrixXd(disc.stiffness()) * inv_sqrt_mass.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success) throw OracleFailure("dense eigensolver did not converge");
  Spectrum s;
  s.values = es.eigenvalues();
  s.vectors = inv_sqrt_mass.asDiagonal() * es.eigenvectors();
  s.complete = true;
  return s;
}

}  // namespace

CableDiscretization::CableDiscretization(std::size_t nodes, const std::vector<CableEdge>& edges) {
  build(nodes, edges);
}

CableDiscretization::CableDiscretization(LayoutPtr layout) : layout_(std::move(layout)) {
  if (!layout_) throw InvalidArgument("cable discretization needs a layout");
  const BranchLayout& L = *layout_;
  const double density = 1.0 / L.scales().N[L.level()];
  std::vector<CableEdge> edges;
  edges.reserve(L.branch_count() * L.intervals_per_branch());
  for (std::size_t b = 0; b < L.branch_count(); ++b)
    for (int s = 0; s + 1 < L.points_per_branch(); ++s)
      edges.push_back({L.node(b, s), L.node(b, s + 1), L.step(), density});
  build(L.node_count(), edges);
}

void CableDiscretization::build(std::size_t nodes, const std::vector<CableEdge>& edges) {
  mass_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nodes));
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(4 * edges.size());
  total_length_ = 0.0;
  for (const CableEdge& e : edges) {
    if (e.u >= nodes || e.v >= nodes || e.u == e.v) throw InvalidArgument("cable edge has invalid endpoints");
    if (!(e.length > 0.0) || !(e.density > 0.0)) throw InvalidArgument("cable edge needs positive length and density");
    const double c = e.density / e.length;
    const auto u = static_cast<Eigen::Index>(e.u), v = static_cast<Eigen::Index>(e.v);
    trip.emplace_back(u, u, c);
    trip.emplace_back(v, v, c);
    trip.emplace_back(u, v, -c);
    trip.emplace_back(v, u, -c);
    mass_[u] += 0.5 * e.density * e.length;
    mass_[v] += 0.5 * e.density * e.length;
    total_length_ += e.length;
  }
  for (Eigen::Index u = 0; u < mass_.size(); ++u)
    if (!(mass_[u] > 0.0)) throw InvalidArgument("cable graph has an isolated node");
  stiffness_.resize(static_cast<Eigen::Index>(nodes), static_cast<Eigen::Index>(nodes));
  stiffness_.setFromTriplets(trip.begin(), trip.end());
}

Eigen::VectorXd CableDiscretization::generator(const Eigen::VectorXd& f) const {
  return -(stiffness_ * f).cwiseQuotient(mass_);
}

double CableDiscretization::energy(const Eigen::VectorXd& f) const { return f.dot(stiffness_ * f); }

Spectrum compute_spectrum(const CableDiscretization& disc, int count) {
  const std::size_t n = disc.size();
  if (n <= kDenseSpectrumLimit || count <= 0 || static_cast<std::size_t>(count) >= n - 1) {
    if (n > 20000) throw InvalidArgument("full spectrum requested for a graph that is too large");
    return dense_spectrum(disc);
  }
  return lanczos_lowest(disc, count);
}

Spectrum spectrum_for_time(const CableDiscretization& disc, double t, double cutoff) {
  if (!(t > 0.0)) throw InvalidArgument("t must be > 0");
  if (disc.size() <= kDenseSpectrumLimit) return compute_spectrum(disc, 0);
  // Weyl: about L sqrt(lambda) / pi eigenvalues below lambda on a graph of total length L.
  int count = static_cast<int>(std::ceil(1.2 * disc.total_length() * std::sqrt(cutoff / t) / kPi)) + 10;
  for (;;) {
    Spectrum s = compute_spectrum(disc, count);
    if (s.complete || s.largest() * t >= cutoff) return s;
    count = static_cast<int>(std::ceil(1.5 * count));
  }
}

double oracle_kernel_spectral(const Spectrum& spec, double t, std::size_t u, std::size_t v) {
  if (!(t > 0.0)) throw InvalidArgument("t must be > 0");
  double s = 0.0;
  for (Eigen::Index k = 0; k < spec.values.size(); ++k)
    s += std::exp(-std::max(spec.values[k], 0.0) * t) * spec.vectors(static_cast<Eigen::Index>(u), k) *
         spec.vectors(static_cast<Eigen::Index>(v), k);
  return s;
}

Eigen::VectorXd oracle_kernel_row(const Spectrum& spec, double t, std::size_t u) {
  if (!(t > 0.0)) throw InvalidArgument("t must be > 0");
  const Eigen::VectorXd decay = (-spec.values.cwiseMax(0.0) * t).array().exp().matrix();
  const Eigen::VectorXd coeff = decay.cwiseProduct(spec.vectors.row(static_cast<Eigen::Index>(u)).transpose());
  return spec.vectors * coeff;
}

double oracle_kernel_spectral(const CableDiscretization& disc, double t, const PointAddress& x,
                              const PointAddress& y) {
  if (!disc.layout()) throw InvalidArgument("point lookup needs a layout-backed discretization");
  const Spectrum s = spectrum_for_time(disc, t);
  return oracle_kernel_spectral(s, t, nearest_node(*disc.layout(), x), nearest_node(*disc.layout(), y));
}

std::size_t nearest_node(const BranchLayout& L, const PointAddress& raw) {
  const int level = L.level();
  PointAddress p = raw.level() > level ? project(raw, level) : extend(raw, level);
  p = canonicalize(L.scales(), p);
  if (auto u = L.locate(p)) return *u;
  const double J = L.scales().J[level];
  const double x = normalize_angle(p.theta) * J / kPi;
  const auto k = static_cast<std::uint64_t>(std::min(std::floor(x), 2.0 * J - 1.0));
  const double offset = p.theta - static_cast<double>(k) * kPi / J;
  const int q = L.intervals_per_branch();
  const int s = static_cast<int>(std::clamp<long long>(std::llround(offset / L.step()), 0, q));
  std::uint64_t code = 0, radix = 1;
  for (int l = 1; l <= level; ++l) {
    code += (p.labels[l - 1] - 1) * radix;
    radix *= L.seq().n(l);
  }
  return L.node(k * radix + code, s);
}

}  // namespace diamond::verify
