#include "diamond/verify/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <random>

#include "diamond/errors.hpp"
#include "diamond/grid.hpp"

namespace diamond::verify {

namespace {

constexpr double kPi = std::numbers::pi;

struct Arc {
  std::size_t to;
  double length;
};

// Branch and offset along it for a non-junction point of the layout's level.
struct OnBranch {
  std::size_t branch;
  double offset;
};

OnBranch branch_of(const BranchLayout& L, const PointAddress& p) {
  const double J = L.scales().J[L.level()];
  const double x = p.theta * J / kPi;
  const auto k = static_cast<std::uint64_t>(std::min(std::floor(x), 2.0 * J - 1.0));
  std::uint64_t code = 0, radix = 1;
  for (int l = 1; l <= L.level(); ++l) {
    code += (p.labels[l - 1] - 1) * radix;
    radix *= L.seq().n(l);
  }
  return {static_cast<std::size_t>(k * radix + code), p.theta - static_cast<double>(k) * kPi / J};
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

double oracle_distance(const ParameterSequences& seq, int level, const PointAddress& xr, const PointAddress& yr) {
  const BranchLayout L(seq, level, 2);
  const auto fit = [&](const PointAddress& p) {
    return canonicalize(L.scales(), p.level() > level ? project(p, level) : extend(p, level));
  };
  const PointAddress ends[2] = {fit(xr), fit(yr)};

  // Junction nodes keep their layout index; inserted points come after.
  std::vector<std::vector<Arc>> adj(L.node_count() + 2);
  std::size_t id[2];
  std::vector<std::vector<std::pair<double, std::size_t>>> extra(L.branch_count());
  for (int e = 0; e < 2; ++e) {
    if (auto u = L.locate(ends[e])) {
      id[e] = *u;
      continue;
    }
    id[e] = L.node_count() + e;
    const OnBranch ob = branch_of(L, ends[e]);
    extra[ob.branch].push_back({ob.offset, id[e]});
  }
  const double len = L.branch_length();
  for (std::size_t b = 0; b < L.branch_count(); ++b) {
    auto& pts = extra[b];
    std::sort(pts.begin(), pts.end());
    std::size_t prev = L.node(b, 0);
    double at = 0.0;
    for (const auto& [offset, node] : pts) {
      adj[prev].push_back({node, offset - at});
      adj[node].push_back({prev, offset - at});
      prev = node;
      at = offset;
    }
    const std::size_t last = L.node(b, 1);
    adj[prev].push_back({last, len - at});
    adj[last].push_back({prev, len - at});
  }

  std::vector<double> dist(adj.size(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[id[0]] = 0.0;
  heap.push({0.0, id[0]});
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    if (u == id[1]) return d;
    for (const Arc& a : adj[u]) {
      if (d + a.length < dist[a.to]) {
        dist[a.to] = d + a.length;
        heap.push({dist[a.to], a.to});
      }
    }
  }
  throw OracleFailure("shortest-path oracle found no path");
}

std::vector<double> oracle_walk(const CableDiscretization& disc, double t, std::size_t start,
                                std::size_t samples, std::uint64_t seed) {
  if (!(t >= 0.0)) throw InvalidArgument("t must be >= 0");
  if (start >= disc.size()) throw InvalidArgument("start node out of range");
  if (samples == 0) throw InvalidArgument("need at least one sample");
  const std::size_t n = disc.size();
  // Per node: total rate and cumulative jump probabilities.
  std::vector<double> rate(n, 0.0);
  std::vector<std::vector<std::pair<double, std::size_t>>> jumps(n);
  const auto& K = disc.stiffness();
  for (Eigen::Index col = 0; col < K.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(K, col); it; ++it)
      if (it.row() != it.col()) {
        const auto u = static_cast<std::size_t>(it.col());
        const double r = -it.value() / disc.mass()[it.col()];
        rate[u] += r;
        jumps[u].push_back({r, static_cast<std::size_t>(it.row())});
      }
  for (std::size_t u = 0; u < n; ++u) {
    double c = 0.0;
    for (auto& jp : jumps[u]) jp.first = (c += jp.first) / rate[u];
    if (!jumps[u].empty()) jumps[u].back().first = 1.0;
  }

  std::mt19937_64 rng(seed);
  std::vector<double> hist(n, 0.0);
  for (std::size_t k = 0; k < samples; ++k) {
    std::size_t u = start;
    double clock = 0.0;
    for (;;) {
      if (rate[u] <= 0.0) break;
      clock += -std::log1p(-uniform01(rng)) / rate[u];
      if (clock > t) break;
      const double pick = uniform01(rng);
      const auto& out = jumps[u];
      u = std::lower_bound(out.begin(), out.end(), std::make_pair(pick, std::size_t{0}))->second;
    }
    hist[u] += 1.0;
  }
  for (double& h : hist) h /= static_cast<double>(samples);
  return hist;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw InvalidArgument("distributions have different supports");
  double s = 0.0;
  for (std::size_t u = 0; u < p.size(); ++u) s += std::abs(p[u] - q[u]);
  return 0.5 * s;
}

LocalPoincareReport local_poincare(const ParameterSequences& seq, int level, int m) {
  if (level < 1) throw InvalidArgument("local Poincare needs level >= 1");
  if (m < 3) throw InvalidArgument("need at least 3 points per branch");
  const LevelScales s(seq, level);
  const double J = s.J[level];
  const auto copies = static_cast<std::size_t>(seq.n(level));
  const int q = m - 1;
  const double r = kPi / J;
  const double h = r / q;
  const double density = 1.0 / s.N[level];

  // Node 0 is the junction; branch c holds nodes 1 + c q + (0..q-1) at distance h..r.
  const std::size_t branches = 2 * copies;
  const std::size_t nodes = 1 + branches * static_cast<std::size_t>(q);
  std::vector<CableEdge> edges;
  Eigen::VectorXd f(static_cast<Eigen::Index>(nodes));
  f[0] = 0.0;
  for (std::size_t c = 0; c < branches; ++c) {
    const double sign = c < copies ? 1.0 : -1.0;
    std::size_t prev = 0;
    for (int k = 1; k <= q; ++k) {
      const std::size_t u = 1 + c * q + (k - 1);
      edges.push_back({prev, u, h, density});
      f[static_cast<Eigen::Index>(u)] = sign * std::sin(kPi * k * h / (2.0 * r));
      prev = u;
    }
  }
  const CableDiscretization disc(nodes, edges);
  const Eigen::VectorXd& M = disc.mass();

  LocalPoincareReport rep;
  rep.level = level;
  rep.radius = r;
  rep.nodes = nodes;
  const double norm2 = f.dot(M.cwiseProduct(f));
  rep.mean_ratio = std::abs(M.dot(f)) / M.sum() / std::sqrt(norm2);
  rep.rayleigh = disc.energy(f) / norm2;
  const Eigen::VectorXd res = disc.generator(f) + rep.rayleigh * f;
  rep.residual = std::sqrt(res.dot(M.cwiseProduct(res)) / norm2);
  const Spectrum spec = compute_spectrum(disc, 0);
  rep.lambda_ball = spec.values.size() > 1 ? spec.values[1] : 0.0;
  rep.constant = 1.0 / rep.lambda_ball;
  rep.expected_lambda = (kPi / (2.0 * r)) * (kPi / (2.0 * r));
  return rep;
}

}  // namespace diamond::verify
