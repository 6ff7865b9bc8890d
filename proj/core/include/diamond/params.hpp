#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace diamond {

// A per-level subdivision or copy count. Exact when it fits in 64 bits; the
// natural log is always available so that huge counts can still be probed.
struct Factor {
  std::uint64_t exact = 0;  // 0 when the value is not representable
  double log_value = 0.0;

  static Factor from_integer(std::uint64_t value);
  static Factor from_log(double log_value);
  bool representable() const noexcept { return exact != 0; }
};

struct RegularTail {
  std::uint64_t j = 2;
  std::uint64_t n = 2;
};

// The sequences {j_l}, {n_l} for l >= 1, given as an explicit prefix plus an
// optional regular tail. Level 0 always has j_0 = n_0 = 1.
class ParameterSequences {
 public:
  ParameterSequences(std::vector<std::uint64_t> j, std::vector<std::uint64_t> n,
                     std::optional<RegularTail> tail = std::nullopt);

  static ParameterSequences regular(std::uint64_t j, std::uint64_t n);
  static ParameterSequences from_log_factors(const std::vector<double>& log_j,
                                             const std::vector<double>& log_n,
                                             std::optional<RegularTail> tail = std::nullopt);

  int prefix_depth() const noexcept { return static_cast<int>(j_.size()); }
  const std::optional<RegularTail>& tail() const noexcept { return tail_; }
  // Deepest defined level, or nullopt when a regular tail makes it unbounded.
  std::optional<int> max_level() const;
  bool defined_at(int level) const;

  Factor j_factor(int level) const;
  Factor n_factor(int level) const;
  // Exact per-level values; throw ArithmeticOverflow for unrepresentable counts.
  std::uint64_t j(int level) const;
  std::uint64_t n(int level) const;

  // Cumulative products as doubles (exact below 2^53) and as logs.
  double J(int i) const;
  double N(int i) const;
  double log_J(int i) const;
  double log_N(int i) const;

  std::string describe() const;
  bool operator==(const ParameterSequences& other) const;

 private:
  ParameterSequences() = default;
  void validate() const;
  void require_level(int level) const;

  std::vector<Factor> j_;
  std::vector<Factor> n_;
  std::optional<RegularTail> tail_;
};

struct LevelProducts {
  std::uint64_t J = 1;
  std::uint64_t N = 1;
};

// Exact (J_i, N_i); throws ArithmeticOverflow instead of wrapping.
LevelProducts cumulative_products(const ParameterSequences& seq, int i);

enum class Verdict { kPass, kFail, kInconclusive };
std::string to_string(Verdict v);

struct AssumptionProbe {
  double t = 0.0;
  std::vector<double> log_terms;  // log N_i - J_i^2 t for i = 0..depth
  double sup_log = 0.0;
  int argmax_level = 0;
  Verdict verdict = Verdict::kInconclusive;
};

struct AssumptionReport {
  int depth = 0;  // levels 0..depth were probed
  std::vector<AssumptionProbe> probes;
  Verdict overall() const;
};

// Probes N_i e^{-J_i^2 t} in log space for each t. The verdict looks at the
// last three increments: all negative is a pass, all positive a fail.
AssumptionReport check_assumption(const ParameterSequences& seq, const std::vector<double>& t_grid,
                                  int depth);

}  // namespace diamond
