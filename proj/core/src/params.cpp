#include "diamond/params.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "diamond/errors.hpp"

namespace diamond {

namespace {

constexpr double kLog2 = 0.69314718055994530942;
// e^43 is about 4.7e18, safely below 2^63.
constexpr double kMaxExactLog = 43.0;

void check_factor(const Factor& f, const char* name, int level) {
  if (!(f.log_value >= kLog2 - 1e-12) || (f.representable() && f.exact < 2)) {
    std::ostringstream os;
    os << name << "_" << level << " must be >= 2";
    throw InvalidArgument(os.str());
  }
}

}  // namespace

Factor Factor::from_integer(std::uint64_t value) {
  Factor f;
  f.exact = value;
  f.log_value = value == 0 ? -std::numeric_limits<double>::infinity()
                           : std::log(static_cast<double>(value));
  return f;
}

Factor Factor::from_log(double log_value) {
  Factor f;
  f.log_value = log_value;
  if (std::isfinite(log_value) && log_value < kMaxExactLog) {
    const double v = std::exp(log_value);
    const double r = std::round(v);
    if (std::abs(v - r) <= 1e-9 * r) f.exact = static_cast<std::uint64_t>(r);
  }
  return f;
}

ParameterSequences::ParameterSequences(std::vector<std::uint64_t> j, std::vector<std::uint64_t> n,
                                       std::optional<RegularTail> tail)
    : tail_(tail) {
  if (j.size() != n.size()) throw InvalidArgument("j and n prefixes must have equal length");
  for (std::size_t k = 0; k < j.size(); ++k) {
    j_.push_back(Factor::from_integer(j[k]));
    n_.push_back(Factor::from_integer(n[k]));
  }
  validate();
}

ParameterSequences ParameterSequences::regular(std::uint64_t j, std::uint64_t n) {
  return ParameterSequences({}, {}, RegularTail{j, n});
}

ParameterSequences ParameterSequences::from_log_factors(const std::vector<double>& log_j,
                                                        const std::vector<double>& log_n,
                                                        std::optional<RegularTail> tail) {
  if (log_j.size() != log_n.size()) throw InvalidArgument("j and n prefixes must have equal length");
  ParameterSequences s;
  s.tail_ = tail;
  for (std::size_t k = 0; k < log_j.size(); ++k) {
    s.j_.push_back(Factor::from_log(log_j[k]));
    s.n_.push_back(Factor::from_log(log_n[k]));
  }
  s.validate();
  return s;
}

void ParameterSequences::validate() const {
  for (std::size_t k = 0; k < j_.size(); ++k) {
    check_factor(j_[k], "j", static_cast<int>(k) + 1);
    check_factor(n_[k], "n", static_cast<int>(k) + 1);
  }
  if (tail_) {
    if (tail_->j < 2) throw InvalidArgument("tail j* must be >= 2");
    if (tail_->n < 2) throw InvalidArgument("tail n* must be >= 2");
  }
  if (j_.empty() && !tail_) throw InvalidArgument("parameter sequences must define at least level 1");
}

std::optional<int> ParameterSequences::max_level() const {
  if (tail_) return std::nullopt;
  return prefix_depth();
}

bool ParameterSequences::defined_at(int level) const {
  return level >= 0 && (tail_ || level <= prefix_depth());
}

void ParameterSequences::require_level(int level) const {
  if (level < 0) throw InvalidArgument("level must be >= 0");
  if (!defined_at(level)) {
    std::ostringstream os;
    os << "level " << level << " is beyond the explicit prefix (depth " << prefix_depth()
       << ") and no regular tail is declared";
    throw InsufficientDepth(os.str());
  }
}

Factor ParameterSequences::j_factor(int level) const {
  require_level(level);
  if (level == 0) return Factor::from_integer(1);
  if (level <= prefix_depth()) return j_[level - 1];
  return Factor::from_integer(tail_->j);
}

Factor ParameterSequences::n_factor(int level) const {
  require_level(level);
  if (level == 0) return Factor::from_integer(1);
  if (level <= prefix_depth()) return n_[level - 1];
  return Factor::from_integer(tail_->n);
}

std::uint64_t ParameterSequences::j(int level) const {
  const Factor f = j_factor(level);
  if (!f.representable()) throw ArithmeticOverflow("j value is not representable as a 64-bit integer");
  return f.exact;
}

std::uint64_t ParameterSequences::n(int level) const {
  const Factor f = n_factor(level);
  if (!f.representable()) throw ArithmeticOverflow("n value is not representable as a 64-bit integer");
  return f.exact;
}

double ParameterSequences::J(int i) const {
  require_level(i);
  double p = 1.0;
  for (int l = 1; l <= i; ++l) {
    const Factor f = j_factor(l);
    p *= f.representable() ? static_cast<double>(f.exact) : std::exp(f.log_value);
  }
  return p;
}

double ParameterSequences::N(int i) const {
  require_level(i);
  double p = 1.0;
  for (int l = 1; l <= i; ++l) {
    const Factor f = n_factor(l);
    p *= f.representable() ? static_cast<double>(f.exact) : std::exp(f.log_value);
  }
  return p;
}

double ParameterSequences::log_J(int i) const {
  require_level(i);
  double s = 0.0;
  for (int l = 1; l <= i; ++l) s += j_factor(l).log_value;
  return s;
}

double ParameterSequences::log_N(int i) const {
  require_level(i);
  double s = 0.0;
  for (int l = 1; l <= i; ++l) s += n_factor(l).log_value;
  return s;
}

std::string ParameterSequences::describe() const {
  std::ostringstream os;
  auto put = [&os](const std::vector<Factor>& v) {
    os << "(";
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (k) os << ",";
      if (v[k].representable())
        os << v[k].exact;
      else
        os << "exp(" << v[k].log_value << ")";
    }
    os << ")";
  };
  os << "j=";
  put(j_);
  os << " n=";
  put(n_);
  if (tail_) os << " tail=(" << tail_->j << "," << tail_->n << ")";
  return os.str();
}

bool ParameterSequences::operator==(const ParameterSequences& o) const {
  auto same = [](const std::vector<Factor>& a, const std::vector<Factor>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k)
      if (a[k].exact != b[k].exact || a[k].log_value != b[k].log_value) return false;
    return true;
  };
  const bool tails = tail_.has_value() == o.tail_.has_value() &&
                     (!tail_ || (tail_->j == o.tail_->j && tail_->n == o.tail_->n));
  return tails && same(j_, o.j_) && same(n_, o.n_);
}

LevelProducts cumulative_products(const ParameterSequences& seq, int i) {
  if (i < 0) throw InvalidArgument("level must be >= 0");
  LevelProducts p;
  for (int l = 1; l <= i; ++l) {
    const Factor fj = seq.j_factor(l);
    const Factor fn = seq.n_factor(l);
    if (!fj.representable() || !fn.representable() ||
        __builtin_mul_overflow(p.J, fj.exact, &p.J) || __builtin_mul_overflow(p.N, fn.exact, &p.N)) {
      std::ostringstream os;
      os << "cumulative product at level " << l << " exceeds the 64-bit range";
      throw ArithmeticOverflow(os.str());
    }
  }
  return p;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kPass:
      return "pass";
    case Verdict::kFail:
      return "fail";
    case Verdict::kInconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

Verdict AssumptionReport::overall() const {
  bool all_pass = !probes.empty();
  for (const auto& p : probes) {
    if (p.verdict == Verdict::kFail) return Verdict::kFail;
    if (p.verdict != Verdict::kPass) all_pass = false;
  }
  return all_pass ? Verdict::kPass : Verdict::kInconclusive;
}

AssumptionReport check_assumption(const ParameterSequences& seq, const std::vector<double>& t_grid,
                                  int depth) {
  if (t_grid.empty()) throw InvalidArgument("t_grid must not be empty");
  if (depth < 1) throw InvalidArgument("depth must be >= 1");
  for (double t : t_grid)
    if (!(t > 0.0)) throw InvalidArgument("t_grid entries must be > 0");

  if (auto max = seq.max_level()) depth = std::min(depth, *max);

  std::vector<double> log_n(depth + 1), log_j(depth + 1);
  for (int i = 0; i <= depth; ++i) {
    log_n[i] = seq.log_N(i);
    log_j[i] = seq.log_J(i);
  }

  AssumptionReport report;
  report.depth = depth;
  const double neg_inf = -std::numeric_limits<double>::infinity();
  for (double t : t_grid) {
    AssumptionProbe probe;
    probe.t = t;
    probe.sup_log = neg_inf;
    for (int i = 0; i <= depth; ++i) {
      // exp overflows to +inf for deep levels, which correctly sends the term to -inf.
      const double v = log_n[i] - std::exp(2.0 * log_j[i] + std::log(t));
      probe.log_terms.push_back(v);
      if (v > probe.sup_log) {
        probe.sup_log = v;
        probe.argmax_level = i;
      }
    }
    const int count = depth + 1;
    if (count >= 4) {
      int down = 0, up = 0;
      for (int i = count - 3; i < count; ++i) {
        const double a = probe.log_terms[i - 1];
        const double b = probe.log_terms[i];
        if (b == neg_inf || b < a) ++down;
        if (b > a && b != neg_inf) ++up;
      }
      if (down == 3)
        probe.verdict = Verdict::kPass;
      else if (up == 3)
        probe.verdict = Verdict::kFail;
    }
    report.probes.push_back(std::move(probe));
  }
  return report;
}

}  // namespace diamond
