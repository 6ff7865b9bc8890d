#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "diamond/geometry.hpp"
#include "diamond/params.hpp"

namespace diamond {

enum class Quadrature { kTrapezoid, kSimpson };

// Uniform grids of m points on each of the 2 J_i N_i branches of F_i.
// Junction samples are shared, so every node is a distinct point of F_i.
// Branch b covers interval k = b / N_i with labels encoded in r = b % N_i
// (w_1 is the least significant mixed-radix digit).
class BranchLayout {
 public:
  BranchLayout(const ParameterSequences& seq, int level, int m);

  const ParameterSequences& seq() const noexcept { return seq_; }
  const LevelScales& scales() const noexcept { return scales_; }
  int level() const noexcept { return level_; }
  int points_per_branch() const noexcept { return m_; }
  int intervals_per_branch() const noexcept { return m_ - 1; }
  double step() const noexcept { return step_; }
  double branch_length() const noexcept { return step_ * (m_ - 1); }
  std::size_t branch_count() const noexcept { return branches_; }
  std::size_t node_count() const noexcept { return points_.size(); }
  std::size_t interior_count() const noexcept { return branches_ * (m_ - 2); }

  // Node index of sample s (0..m-1) on branch b.
  std::size_t node(std::size_t branch, int s) const;
  bool is_vertex(std::size_t node) const noexcept { return node >= interior_count(); }
  const PointAddress& point(std::size_t node) const { return points_[node]; }
  std::uint64_t branch_interval(std::size_t branch) const noexcept { return branch / N_; }
  std::vector<std::uint64_t> branch_labels(std::size_t branch) const;

  // Quadrature weights per node, for the measure with density 1/N_i.
  const std::vector<double>& weights(Quadrature rule = Quadrature::kTrapezoid) const;

  // Node at a grid-aligned point, or nullopt.
  std::optional<std::size_t> locate(const PointAddress& p) const;

  bool operator==(const BranchLayout& o) const {
    return level_ == o.level_ && m_ == o.m_ && seq_ == o.seq_;
  }

 private:
  std::size_t vertex_node(std::uint64_t angle_index, std::uint64_t label_code) const;

  ParameterSequences seq_;
  LevelScales scales_;
  int level_;
  int m_;
  double step_;
  std::uint64_t J_ = 1, N_ = 1;
  std::size_t branches_ = 0;
  std::vector<int> vertex_birth_;              // per angle index
  std::vector<std::size_t> vertex_offset_;     // per angle index
  std::vector<std::uint64_t> prefix_modulus_;  // N_{b-1}, or 1 for b = 0
  std::vector<PointAddress> points_;
  std::vector<double> trapezoid_;
  std::vector<double> simpson_;
};

using LayoutPtr = std::shared_ptr<const BranchLayout>;
LayoutPtr make_layout(const ParameterSequences& seq, int level, int m);

// A sampled function on F_i. Values are stored per node.
class GridFunction {
 public:
  GridFunction(LayoutPtr layout, std::vector<double> node_values);

  static GridFunction constant(LayoutPtr layout, double c);
  static GridFunction sample(LayoutPtr layout, const std::function<double(const PointAddress&)>& f);
  // Rejects samples that disagree at shared junctions by more than tol.
  static GridFunction from_branch_samples(LayoutPtr layout,
                                          const std::vector<std::vector<double>>& samples,
                                          double tol = 1e-12);

  const BranchLayout& layout() const noexcept { return *layout_; }
  const LayoutPtr& layout_ptr() const noexcept { return layout_; }
  int level() const noexcept { return layout_->level(); }
  const std::vector<double>& values() const noexcept { return values_; }
  double operator[](std::size_t node) const { return values_[node]; }
  double at(const PointAddress& p) const;  // grid-aligned points only
  std::vector<double> branch_samples(std::size_t branch) const;
  double sup_norm() const;

  GridFunction& operator+=(const GridFunction& o);
  GridFunction& operator-=(const GridFunction& o);
  GridFunction& operator*=(double c);
  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(double c, GridFunction a) { return a *= c; }

 private:
  void require_same_layout(const GridFunction& o) const;

  LayoutPtr layout_;
  std::vector<double> values_;
};

// CSV rows: branch,index,theta,value (junction samples repeat per branch).
void write_csv(std::ostream& os, const GridFunction& f);
GridFunction read_csv(std::istream& is, LayoutPtr layout);

}  // namespace diamond
