#include "diamond/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "diamond/errors.hpp"

namespace diamond {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t label_at(const PointAddress& p, int position) {
  return position <= p.level() ? p.labels[position - 1] : 1;
}

bool intervals_meet(const LevelPlacement& a, const LevelPlacement& b) {
  auto has = [](const LevelPlacement& p, std::uint64_t k) {
    return p.interval == k || (p.on_vertex && p.other_interval == k);
  };
  return has(b, a.interval) || (a.on_vertex && has(b, a.other_interval));
}

bool labels_agree(const PointAddress& x, const PointAddress& y, int upto) {
  for (int q = 1; q <= upto; ++q)
    if (label_at(x, q) != label_at(y, q)) return false;
  return true;
}

struct Candidate {
  PointAddress point;
  double cost;
};

void merge_into(std::vector<Candidate>& set, Candidate c) {
  for (auto& e : set) {
    if (e.point == c.point) {
      e.cost = std::min(e.cost, c.cost);
      return;
    }
  }
  set.push_back(std::move(c));
}

// Replaces every interior candidate by the two endpoints of its level-l
// branch, then projects everything to level l-1.
std::vector<Candidate> exit_and_project(const LevelScales& s, const std::vector<Candidate>& in, int l) {
  std::vector<Candidate> out;
  const double width = kPi / s.J[l];
  for (const auto& c : in) {
    const LevelPlacement pl = placement(s, c.point, l);
    if (pl.on_vertex) {
      merge_into(out, {canonicalize(s, project(c.point, l - 1)), c.cost});
      continue;
    }
    const double a = static_cast<double>(pl.interval) * width;
    const double da = std::max(0.0, c.point.theta - a);
    const double db = std::max(0.0, a + width - c.point.theta);
    PointAddress left{normalize_angle(a), c.point.labels};
    PointAddress right{normalize_angle(a + width), c.point.labels};
    left = canonicalize(s, std::move(left));
    right = canonicalize(s, std::move(right));
    merge_into(out, {canonicalize(s, project(left, l - 1)), c.cost + da});
    merge_into(out, {canonicalize(s, project(right, l - 1)), c.cost + db});
  }
  return out;
}

PointAddress at_level(const PointAddress& p, int i) {
  return p.level() >= i ? project(p, i) : extend(p, i);
}

}  // namespace

LevelScales::LevelScales(const ParameterSequences& seq, int depth) {
  if (depth < 0) throw InvalidArgument("depth must be >= 0");
  J.assign(depth + 1, 1.0);
  N.assign(depth + 1, 1.0);
  n.assign(depth + 1, 1.0);
  for (int l = 1; l <= depth; ++l) {
    const Factor fj = seq.j_factor(l);
    const Factor fn = seq.n_factor(l);
    const double jl = fj.representable() ? static_cast<double>(fj.exact) : std::exp(fj.log_value);
    const double nl = fn.representable() ? static_cast<double>(fn.exact) : std::exp(fn.log_value);
    J[l] = J[l - 1] * jl;
    N[l] = N[l - 1] * nl;
    n[l] = nl;
  }
}

double normalize_angle(double theta) {
  if (!std::isfinite(theta)) throw InvalidArgument("angle must be finite");
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi - kJunctionTolerance) r = 0.0;
  return r;
}

double circle_distance(double a, double b) {
  const double d = std::fmod(std::abs(a - b), kTwoPi);
  return std::min(d, kTwoPi - d);
}

int birth_level(const LevelScales& scales, double theta, int max_level) {
  max_level = std::min(max_level, scales.depth());
  for (int b = 0; b <= max_level; ++b) {
    const double x = theta * scales.J[b] / kPi;
    const double r = std::round(x);
    if (std::abs(x - r) * kPi / scales.J[b] <= kJunctionTolerance) return b;
  }
  return -1;
}

int birth_level(const ParameterSequences& seq, double theta, int max_level) {
  return birth_level(LevelScales(seq, max_level), theta, max_level);
}

PointAddress canonicalize(const LevelScales& scales, PointAddress p) {
  p.theta = normalize_angle(p.theta);
  const int b = birth_level(scales, p.theta, p.level());
  if (b >= 0) {
    const double k = std::round(p.theta * scales.J[b] / kPi);
    p.theta = normalize_angle(k * kPi / scales.J[b]);
    for (int q = std::max(b, 1); q <= p.level(); ++q) p.labels[q - 1] = 1;
  }
  return p;
}

PointAddress make_point(const ParameterSequences& seq, double theta, std::vector<std::uint64_t> labels) {
  const int level = static_cast<int>(labels.size());
  const LevelScales scales(seq, level);
  for (int q = 1; q <= level; ++q) {
    if (labels[q - 1] < 1 || static_cast<double>(labels[q - 1]) > scales.n[q]) {
      std::ostringstream os;
      os << "label w_" << q << " = " << labels[q - 1] << " is outside 1.." << scales.n[q];
      throw InvalidArgument(os.str());
    }
  }
  return canonicalize(scales, PointAddress{theta, std::move(labels)});
}

PointAddress project(const PointAddress& p, int k) {
  if (k < 0 || k > p.level()) throw InvalidArgument("projection level must lie in 0..level");
  PointAddress q{p.theta, {}};
  q.labels.assign(p.labels.begin(), p.labels.begin() + k);
  return q;
}

PointAddress extend(const PointAddress& p, int level) {
  if (level < p.level()) throw InvalidArgument("extend cannot shorten an address");
  PointAddress q = p;
  q.labels.resize(level, 1);
  return q;
}

LevelPlacement placement(const LevelScales& s, const PointAddress& p, int level) {
  LevelPlacement pl;
  const double total = 2.0 * s.J[level];
  const double x = p.theta * s.J[level] / kPi;
  const int b = birth_level(s, p.theta, level);
  if (b >= 0) {
    double k = std::round(x);
    if (k >= total) k -= total;
    pl.interval = static_cast<std::uint64_t>(k);
    pl.other_interval = static_cast<std::uint64_t>(k == 0.0 ? total - 1.0 : k - 1.0);
    pl.on_vertex = true;
    pl.fixed_labels = std::max(b - 1, 0);
  } else {
    pl.interval = static_cast<std::uint64_t>(std::min(std::floor(x), total - 1.0));
    pl.fixed_labels = level;
  }
  return pl;
}

bool same_bundle(const LevelScales& s, const PointAddress& x, const PointAddress& y, int level) {
  if (level == 0) return true;
  const LevelPlacement px = placement(s, x, level);
  const LevelPlacement py = placement(s, y, level);
  if (!intervals_meet(px, py)) return false;
  return labels_agree(x, y, std::min({level - 1, px.fixed_labels, py.fixed_labels}));
}

bool same_branch(const LevelScales& s, const PointAddress& x, const PointAddress& y, int level) {
  const LevelPlacement px = placement(s, x, level);
  const LevelPlacement py = placement(s, y, level);
  if (!intervals_meet(px, py)) return false;
  return labels_agree(x, y, std::min({level, px.fixed_labels, py.fixed_labels}));
}

PairConfig classify_pair(const LevelScales& s, const PointAddress& x, const PointAddress& y) {
  if (x.level() != y.level()) throw InvalidArgument("classify_pair needs points at the same level");
  const int level = x.level();
  PairConfig c;
  if (x == y) {
    c.i_xy = kInfiniteLevel;
    c.same_branch_at_top = true;
    for (int l = 1; l <= level; ++l) c.per_level_delta.push_back(s.n[l] - 1.0);
    return c;
  }
  int i = 0;
  while (i < level && same_bundle(s, x, y, i + 1)) ++i;
  c.i_xy = i;
  c.same_branch_at_top = same_branch(s, x, y, i);
  for (int l = 1; l <= i; ++l)
    c.per_level_delta.push_back(l < i || c.same_branch_at_top ? s.n[l] - 1.0 : -1.0);
  return c;
}

PairConfig classify_pair(const ParameterSequences& seq, const PointAddress& x, const PointAddress& y) {
  return classify_pair(LevelScales(seq, x.level()), x, y);
}

double distance_level(const LevelScales& s, const PointAddress& x, const PointAddress& y, int i) {
  if (i < 0 || i > s.depth()) throw InvalidArgument("distance level out of range");
  std::vector<Candidate> xs{{canonicalize(s, at_level(x, i)), 0.0}};
  std::vector<Candidate> ys{{canonicalize(s, at_level(y, i)), 0.0}};
  double best = std::numeric_limits<double>::infinity();
  for (int l = i; l >= 1; --l) {
    for (const auto& u : xs) {
      for (const auto& v : ys) {
        if (u.point == v.point)
          best = std::min(best, u.cost + v.cost);
        else if (same_branch(s, u.point, v.point, l))
          best = std::min(best, u.cost + v.cost + circle_distance(u.point.theta, v.point.theta));
      }
    }
    xs = exit_and_project(s, xs, l);
    ys = exit_and_project(s, ys, l);
  }
  for (const auto& u : xs)
    for (const auto& v : ys)
      best = std::min(best, u.cost + v.cost + circle_distance(u.point.theta, v.point.theta));
  return best;
}

double distance_level(const ParameterSequences& seq, const PointAddress& x, const PointAddress& y,
                      int i) {
  return distance_level(LevelScales(seq, i), x, y, i);
}

DistanceReport distance_limit(const ParameterSequences& seq, const PointAddress& x,
                              const PointAddress& y, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("tol must be > 0");
  const auto max_level = seq.max_level();
  // Sum of 2*pi/J_k over k > i. Past the prefix the tail ratio is 1/j*, or
  // at most 1/2 when no tail is declared.
  auto tail = [&](int i) {
    const int p = seq.prefix_depth();
    double s = 0.0;
    for (int k = i + 1; k <= p; ++k) s += kTwoPi / seq.J(k);
    const int from = std::max(i, p);
    const double ratio_sum = seq.tail() ? 1.0 / (static_cast<double>(seq.tail()->j) - 1.0) : 1.0;
    return s + kTwoPi / seq.J(from) * ratio_sum;
  };
  for (int i = 0;; ++i) {
    if (max_level && i > *max_level) {
      std::ostringstream os;
      os << "cannot certify tol " << tol << " within the " << *max_level << "-level prefix";
      throw InsufficientDepth(os.str());
    }
    const double bound = tail(i);
    if (bound < tol) {
      DistanceReport r;
      r.level = i;
      r.value = distance_level(seq, x, y, i);
      r.error_bound = bound;
      return r;
    }
  }
}

}  // namespace diamond
