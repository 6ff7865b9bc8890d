#include "diamond/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "diamond/errors.hpp"

namespace diamond {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMaxNodes = 50'000'000;

}  // namespace

BranchLayout::BranchLayout(const ParameterSequences& seq, int level, int m)
    : seq_(seq), scales_(seq, level), level_(level), m_(m) {
  if (level < 0) throw InvalidArgument("level must be >= 0");
  if (m < 2) throw InvalidArgument("need at least 2 points per branch");
  const LevelProducts p = cumulative_products(seq, level);
  J_ = p.J;
  N_ = p.N;
  branches_ = 2 * J_ * N_;
  if (branches_ * static_cast<std::size_t>(m) > kMaxNodes)
    throw InvalidArgument("grid too large for an in-memory layout");
  const int q = m - 1;
  step_ = kPi / (static_cast<double>(J_) * q);

  // Exact J_l for divisibility tests and N_l for label prefixes.
  std::vector<std::uint64_t> Jl(level + 1, 1), Nl(level + 1, 1);
  for (int l = 1; l <= level; ++l) {
    Jl[l] = Jl[l - 1] * seq.j(l);
    Nl[l] = Nl[l - 1] * seq.n(l);
  }
  const std::uint64_t angles = 2 * J_;
  vertex_birth_.resize(angles);
  vertex_offset_.resize(angles);
  prefix_modulus_.resize(angles);
  std::size_t vertices = 0;
  for (std::uint64_t a = 0; a < angles; ++a) {
    int b = 0;
    while (a % (J_ / Jl[b]) != 0) ++b;
    vertex_birth_[a] = b;
    vertex_offset_[a] = vertices;
    prefix_modulus_[a] = b == 0 ? 1 : Nl[b - 1];
    vertices += prefix_modulus_[a];
  }

  points_.reserve(interior_count() + vertices);
  const double unit = kPi / (static_cast<double>(J_) * q);
  for (std::size_t br = 0; br < branches_; ++br) {
    const std::uint64_t k = branch_interval(br);
    const std::vector<std::uint64_t> labels = branch_labels(br);
    for (int s = 1; s < q; ++s)
      points_.push_back({static_cast<double>(k * q + s) * unit, labels});
  }
  for (std::uint64_t a = 0; a < angles; ++a) {
    for (std::uint64_t c = 0; c < prefix_modulus_[a]; ++c) {
      PointAddress v{static_cast<double>(a) * kPi / static_cast<double>(J_),
                     std::vector<std::uint64_t>(level, 1)};
      for (int l = 1; l < vertex_birth_[a]; ++l) v.labels[l - 1] = (c / Nl[l - 1]) % seq.n(l) + 1;
      points_.push_back(canonicalize(scales_, std::move(v)));
    }
  }

  trapezoid_.assign(points_.size(), 0.0);
  const double w = step_ / static_cast<double>(N_);
  for (std::size_t br = 0; br < branches_; ++br)
    for (int s = 0; s <= q; ++s) trapezoid_[node(br, s)] += (s == 0 || s == q) ? 0.5 * w : w;
  if (q % 2 == 0) {
    simpson_.assign(points_.size(), 0.0);
    for (std::size_t br = 0; br < branches_; ++br)
      for (int s = 0; s <= q; ++s)
        simpson_[node(br, s)] += w / 3.0 * ((s == 0 || s == q) ? 1.0 : (s % 2 ? 4.0 : 2.0));
  }
}

std::vector<std::uint64_t> BranchLayout::branch_labels(std::size_t branch) const {
  std::uint64_t r = branch % N_;
  std::vector<std::uint64_t> labels(level_);
  for (int l = 1; l <= level_; ++l) {
    const std::uint64_t n = seq_.n(l);
    labels[l - 1] = r % n + 1;
    r /= n;
  }
  return labels;
}

std::size_t BranchLayout::vertex_node(std::uint64_t angle_index, std::uint64_t label_code) const {
  return interior_count() + vertex_offset_[angle_index] + label_code % prefix_modulus_[angle_index];
}

std::size_t BranchLayout::node(std::size_t branch, int s) const {
  const int q = m_ - 1;
  const std::uint64_t k = branch_interval(branch);
  if (s == 0) return vertex_node(k, branch % N_);
  if (s == q) return vertex_node((k + 1) % (2 * J_), branch % N_);
  return branch * (m_ - 2) + (s - 1);
}

const std::vector<double>& BranchLayout::weights(Quadrature rule) const {
  if (rule == Quadrature::kTrapezoid) return trapezoid_;
  if (simpson_.empty()) throw InvalidArgument("Simpson quadrature needs an even number of intervals per branch");
  return simpson_;
}

std::optional<std::size_t> BranchLayout::locate(const PointAddress& raw) const {
  if (raw.level() != level_) return std::nullopt;
  const PointAddress p = canonicalize(scales_, raw);
  std::uint64_t code = 0, radix = 1;
  for (int l = 1; l <= level_; ++l) {
    code += (p.labels[l - 1] - 1) * radix;
    radix *= seq_.n(l);
  }
  const double x = p.theta * static_cast<double>(J_) / kPi;
  if (birth_level(scales_, p.theta, level_) >= 0) {
    const auto a = static_cast<std::uint64_t>(std::llround(x)) % (2 * J_);
    return vertex_node(a, code);
  }
  const auto k = static_cast<std::uint64_t>(std::min(std::floor(x), 2.0 * J_ - 1.0));
  const double s = (p.theta - static_cast<double>(k) * kPi / static_cast<double>(J_)) / step_;
  const double sr = std::round(s);
  if (std::abs(s - sr) > 1e-6) return std::nullopt;
  const int si = static_cast<int>(sr);
  if (si <= 0 || si >= m_ - 1) return std::nullopt;
  return node(k * N_ + code, si);
}

LayoutPtr make_layout(const ParameterSequences& seq, int level, int m) {
  return std::make_shared<const BranchLayout>(seq, level, m);
}

GridFunction::GridFunction(LayoutPtr layout, std::vector<double> node_values)
    : layout_(std::move(layout)), values_(std::move(node_values)) {
  if (!layout_) throw InvalidArgument("grid function needs a layout");
  if (values_.size() != layout_->node_count()) throw InvalidArgument("value count does not match layout");
}

GridFunction GridFunction::constant(LayoutPtr layout, double c) {
  const std::size_t n = layout->node_count();
  return GridFunction(std::move(layout), std::vector<double>(n, c));
}

GridFunction GridFunction::sample(LayoutPtr layout, const std::function<double(const PointAddress&)>& f) {
  std::vector<double> v(layout->node_count());
  for (std::size_t u = 0; u < v.size(); ++u) v[u] = f(layout->point(u));
  return GridFunction(std::move(layout), std::move(v));
}

GridFunction GridFunction::from_branch_samples(LayoutPtr layout,
                                               const std::vector<std::vector<double>>& samples,
                                               double tol) {
  const BranchLayout& L = *layout;
  if (samples.size() != L.branch_count()) throw InvalidArgument("one sample array per branch expected");
  std::vector<double> v(L.node_count(), 0.0);
  std::vector<char> seen(L.node_count(), 0);
  for (std::size_t b = 0; b < samples.size(); ++b) {
    if (samples[b].size() != static_cast<std::size_t>(L.points_per_branch()))
      throw InvalidArgument("branch sample array has the wrong length");
    for (int s = 0; s < L.points_per_branch(); ++s) {
      const std::size_t u = L.node(b, s);
      if (seen[u] && std::abs(v[u] - samples[b][s]) > tol) {
        std::ostringstream os;
        os << "samples disagree at the junction shared by branch " << b << " index " << s;
        throw InvalidArgument(os.str());
      }
      v[u] = samples[b][s];
      seen[u] = 1;
    }
  }
  return GridFunction(std::move(layout), std::move(v));
}

double GridFunction::at(const PointAddress& p) const {
  const auto u = layout_->locate(p);
  if (!u) throw InvalidArgument("point is not a node of the grid");
  return values_[*u];
}

std::vector<double> GridFunction::branch_samples(std::size_t branch) const {
  std::vector<double> out(layout_->points_per_branch());
  for (int s = 0; s < layout_->points_per_branch(); ++s) out[s] = values_[layout_->node(branch, s)];
  return out;
}

double GridFunction::sup_norm() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

void GridFunction::require_same_layout(const GridFunction& o) const {
  if (layout_ != o.layout_ && !(*layout_ == *o.layout_))
    throw InvalidArgument("grid functions live on different layouts");
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
  require_same_layout(o);
  for (std::size_t u = 0; u < values_.size(); ++u) values_[u] += o.values_[u];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
  require_same_layout(o);
  for (std::size_t u = 0; u < values_.size(); ++u) values_[u] -= o.values_[u];
  return *this;
}

GridFunction& GridFunction::operator*=(double c) {
  for (double& v : values_) v *= c;
  return *this;
}

void write_csv(std::ostream& os, const GridFunction& f) {
  const BranchLayout& L = f.layout();
  os << "branch,index,theta,value\n";
  char buf[96];
  for (std::size_t b = 0; b < L.branch_count(); ++b) {
    for (int s = 0; s < L.points_per_branch(); ++s) {
      const std::size_t u = L.node(b, s);
      // The right end of the last interval sits at 2*pi, stored canonically as 0.
      const double theta = static_cast<double>(L.branch_interval(b)) * L.branch_length() + s * L.step();
      std::snprintf(buf, sizeof buf, "%zu,%d,%.17g,%.17g\n", b, s, theta, f[u]);
      os << buf;
    }
  }
}

GridFunction read_csv(std::istream& is, LayoutPtr layout) {
  const BranchLayout& L = *layout;
  std::vector<std::vector<double>> samples(L.branch_count(), std::vector<double>(L.points_per_branch()));
  std::vector<std::vector<char>> seen(L.branch_count(), std::vector<char>(L.points_per_branch(), 0));
  std::string line;
  if (!std::getline(is, line) || line.rfind("branch,index,theta,value", 0) != 0)
    throw InvalidArgument("grid CSV must start with the header branch,index,theta,value");
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string fb, fs, ft, fv;
    if (!std::getline(ls, fb, ',') || !std::getline(ls, fs, ',') || !std::getline(ls, ft, ',') ||
        !std::getline(ls, fv))
      throw InvalidArgument("malformed grid CSV row " + std::to_string(row));
    std::size_t b;
    int s;
    double v;
    try {
      b = std::stoull(fb);
      s = std::stoi(fs);
      v = std::stod(fv);
    } catch (const std::exception&) {
      throw InvalidArgument("malformed grid CSV row " + std::to_string(row));
    }
    if (b >= L.branch_count() || s < 0 || s >= L.points_per_branch())
      throw InvalidArgument("grid CSV row " + std::to_string(row) + " is outside the layout");
    samples[b][s] = v;
    seen[b][s] = 1;
  }
  for (const auto& br : seen)
    for (char c : br)
      if (!c) throw InvalidArgument("grid CSV does not cover every branch sample");
  return GridFunction::from_branch_samples(std::move(layout), samples, 1e-12);
}

}  // namespace diamond
