#include "diamond/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "diamond/errors.hpp"

namespace diamond {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;
constexpr int kMaxLevels = 400;

double log_sum_exp(double a, double b) {
  const double m = std::max(a, b);
  if (m == -std::numeric_limits<double>::infinity()) return m;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// a = J^2 t from logs; overflows to +inf, which sends e^{-a} terms to zero.
double effective_time(double log_J, double t) { return std::exp(2.0 * log_J + std::log(t)); }

struct Sum {
  double value = 0.0;
  int terms = 0;
  double tail = 0.0;
};

// Sums exp(log_term(l, log J_l, log N_l)) from l = start. Without a level cap
// the sum stops at the first term below tol that is also below half of its
// predecessor; the remaining tail is then at most that term.
template <class LogTerm>
Sum certified_sum(const ParameterSequences& seq, int start, double tol, std::optional<int> level,
                  const char* what, LogTerm log_term) {
  Sum s;
  double log_J = 0.0, log_N = 0.0;
  for (int l = 1; l < start; ++l) {
    log_J += seq.j_factor(l).log_value;
    log_N += seq.n_factor(l).log_value;
  }
  double prev = std::numeric_limits<double>::infinity();
  for (int l = start;; ++l) {
    if (level && l > *level) return s;
    if (!level && l > kMaxLevels) {
      std::ostringstream os;
      os << what << " did not converge within " << kMaxLevels << " levels";
      throw AssumptionViolation(os.str());
    }
    if (!seq.defined_at(l)) {
      std::ostringstream os;
      os << what << ": level " << l << " is beyond the parameter sequences";
      throw InsufficientDepth(os.str());
    }
    if (l >= 1) {
      log_J += seq.j_factor(l).log_value;
      log_N += seq.n_factor(l).log_value;
    }
    const double term = std::exp(log_term(l, log_J, log_N));
    if (!std::isfinite(term)) {
      std::ostringstream os;
      os << what << " diverges at level " << l;
      throw AssumptionViolation(os.str());
    }
    s.value += term;
    ++s.terms;
    if (!level && term < tol && (term == 0.0 || term < prev / 2.0)) {
      s.tail = term;
      return s;
    }
    prev = term;
  }
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw InvalidArgument(std::string(name) + " must be > 0");
}

void require_not_failing(const ParameterSequences& seq, double t, const char* what) {
  const int depth = std::min(seq.max_level().value_or(40), 40);
  if (depth < 1) return;
  const AssumptionReport r = check_assumption(seq, {t}, depth);
  if (r.overall() == Verdict::kFail) {
    std::ostringstream os;
    os << what << ": the summability assumption lim N_i e^{-J_i^2 t} < inf fails at t=" << t;
    throw AssumptionViolation(os.str());
  }
}

}  // namespace

double theta_tail_sum(double a) {
  require_positive(a, "a");
  long double s = 0.0L;
  for (long k = 1;; ++k) {
    const long double term = std::exp(-static_cast<long double>(a) * k * k);
    s += term;
    if (term < 1e-22L * s) break;
  }
  return static_cast<double>(s);
}

double printed_series_bound(double a) {
  require_positive(a, "a");
  return std::min(std::sqrt(kPi) / (2.0 * std::sqrt(a)), std::exp(-a) / a);
}

double corrected_series_bound(double a) {
  require_positive(a, "a");
  return std::exp(-a) * (1.0 + 0.5 / a);
}

BoundReport lipschitz_bound(const ParameterSequences& seq, double t, double tol, std::optional<int> level) {
  require_positive(t, "t");
  require_positive(tol, "tol");
  if (!level) require_not_failing(seq, t, "lipschitz_bound");
  const Sum s = certified_sum(seq, 0, tol / (2.0 / kPi), level, "lipschitz_bound",
                              [t](int, double lj, double ln) {
                                return ln + log_sum_exp(2.0 * lj, -std::log(2.0 * t)) -
                                       effective_time(lj, t);
                              });
  BoundReport r;
  r.name = level ? "lipschitz_level" : "lipschitz";
  r.parameter = t;
  r.value = 2.0 / kPi * s.value;
  r.terms_used = s.terms;
  r.tail_bound = 2.0 / kPi * s.tail;
  r.formula_source = "(2/pi) sum_{l>=0} N_l (J_l^2 + 1/(2t)) exp(-J_l^2 t)";
  return r;
}

BoundReport uniform_bound(const ParameterSequences& seq, double t, double tol, bool corrected,
                          std::optional<int> level) {
  require_positive(t, "t");
  require_positive(tol, "tol");
  const double base = 1.0 / (2.0 * kPi) + 1.0 / std::sqrt(4.0 * kPi * t);
  const double first = -0.5 * std::log(kPi * t);
  auto variant = [&](bool fixed) {
    return certified_sum(seq, 1, tol, level, "uniform_bound", [&](int, double lj, double ln) {
      const double a = effective_time(lj, t);
      const double second = fixed ? std::log(2.0 / kPi) + lj - a + std::log1p(0.5 / a)
                                  : std::log(2.0 / kPi) - lj - std::log(t) - a;
      return ln + std::min(first, second);
    });
  };
  const Sum mine = variant(corrected);
  const Sum other = variant(!corrected);
  BoundReport r;
  r.name = corrected ? "uniform_corrected" : "uniform_printed";
  r.parameter = t;
  r.value = base + mine.value;
  r.terms_used = mine.terms;
  r.tail_bound = mine.tail;
  r.formula_source = corrected
                         ? "1/(2pi) + 1/sqrt(4 pi t) + sum N_l min{1/sqrt(pi t), (2J_l/pi) e^{-J_l^2 t}(1 + 1/(2J_l^2 t))}"
                         : "1/(2pi) + 1/sqrt(4 pi t) + sum N_l min{1/sqrt(pi t), 2/(J_l pi t) e^{-J_l^2 t}}";
  const double alt = base + other.value;
  if (std::abs(alt - r.value) > tol) {
    r.alternate_value = alt;
    r.note = corrected ? "printed bound differs" : "corrected bound differs";
  }
  return r;
}

BoundReport wbe_constant(const ParameterSequences& seq, double t, double tol, std::optional<int> level) {
  require_positive(t, "t");
  require_positive(tol, "tol");
  const double cap = std::log(2.0 / std::sqrt(kPi * t));
  const Sum s = certified_sum(seq, 0, tol / 2.0, level, "wbe_constant", [&](int, double lj, double) {
    return std::min(cap, log_sum_exp(lj, -std::log(2.0) - lj - std::log(t)) - effective_time(lj, t));
  });
  BoundReport r;
  r.name = level ? "wbe_level" : "wbe";
  r.parameter = t;
  r.value = 2.0 * s.value;
  r.terms_used = s.terms;
  r.tail_bound = 2.0 * s.tail;
  r.formula_source = "2 sum_{l>=0} min{2/sqrt(pi t), (J_l + 1/(2 J_l t)) exp(-J_l^2 t)}";
  return r;
}

RegularLogBound regular_log_bound(double j, double diam, double t, double d) {
  if (!(j >= 2.0)) throw InvalidArgument("regular_log_bound: j must be >= 2");
  require_positive(diam, "diam");
  require_positive(d, "d");
  if (!(t > 0.0 && t < d / 2.0)) throw InvalidArgument("regular_log_bound: need 0 < t < d/2");
  const double r = d / std::sqrt(t);
  if (!(r > 2.0)) throw InvalidArgument("regular_log_bound: need d/sqrt(t) > 2");
  const double lj = std::log(j);
  const double l2 = std::log(2.0);
  RegularLogBound b;
  b.constant = 6.0 / lj + std::sqrt(kPi) * diam / (lj * l2) + 2.0 * diam / (kE * lj * l2);
  b.value = b.constant * r * std::log(r);
  b.intermediate = 6.0 / (std::sqrt(t) * lj) * std::log(r) + std::sqrt(kPi) / lj * r + 2.0 / (kE * lj) * r;
  return b;
}

BoundReport ultracontractivity_bound(const ParameterSequences& seq, double t, double tol) {
  require_positive(t, "t");
  require_positive(tol, "tol");
  const double scale = 1.0 / std::sqrt(2.0 * t);
  const Sum s = certified_sum(seq, 1, tol / scale, std::nullopt, "ultracontractivity_bound",
                              [&](int, double lj, double ln) {
                                const double second = std::log(2.0) - lj - 0.5 * std::log(kPi * t) -
                                                      effective_time(lj, t);
                                return std::log(2.0) + ln + std::min(0.0, second);
                              });
  BoundReport r;
  r.name = "ultracontractivity_2_inf";
  r.parameter = t;
  r.value = 1.0 / std::sqrt(2.0 * kPi) + scale * (1.0 + s.value);
  r.terms_used = s.terms;
  r.tail_bound = scale * s.tail;
  r.formula_source = "1/sqrt(2pi) + (1/sqrt(2t)) (1 + sum 2 N_l min{1, 2/(J_l sqrt(pi t)) e^{-J_l^2 t}})";
  return r;
}

OneToInfConstant regular_1_to_inf_constant(double j, double n) {
  if (!(j >= 2.0) || !(n >= 2.0)) throw InvalidArgument("regular_1_to_inf_constant: j, n must be >= 2");
  OneToInfConstant c;
  const double base = 1.0 / (2.0 * kPi) + 1.0 / std::sqrt(4.0 * kPi);
  if (j == n) {
    c.value = base + 2.0 / kPi + 2.0 / (kPi * j * std::log(j));
    c.branch = "j=n";
  } else {
    c.value = base + 2.0 * n / (kPi * j) + 2.0 * j / (kPi * n * std::log(j / n));
    c.branch = "j!=n";
    c.valid = j > n;
  }
  return c;
}

BoundReport logsob_constant(const ParameterSequences& seq, double delta, double tol) {
  require_positive(delta, "delta");
  require_positive(tol, "tol");
  require_not_failing(seq, delta, "logsob_constant");
  const double base = 1.0 / (2.0 * kPi) + 1.0 / std::sqrt(4.0 * kPi * delta);
  // d log(x) <= dx / base, so a series tail below tol * base / pi keeps M within tol.
  const Sum s = certified_sum(seq, 1, tol * base / kPi, std::nullopt, "logsob_constant",
                              [&](int, double lj, double ln) {
                                const double second = std::log(2.0) - lj - 0.5 * std::log(kPi * delta) -
                                                      effective_time(lj, delta);
                                return ln + std::min(0.0, second);
                              });
  BoundReport r;
  r.name = "logsob_M";
  r.parameter = delta;
  const double arg = base + kPi * s.value;
  r.value = 2.0 * delta + std::log(arg);
  r.terms_used = s.terms;
  r.tail_bound = kPi * s.tail / arg;
  r.formula_source =
      "2 delta + log(1/(2pi) + 1/sqrt(4 pi delta) + pi sum N_l min{1, 2/(J_l sqrt(pi delta)) e^{-J_l^2 delta}})";
  return r;
}

LogSobMinimum logsob_minimizer(const ParameterSequences& seq, const std::vector<double>& grid, double tol) {
  if (grid.empty()) throw InvalidArgument("logsob_minimizer needs a nonempty grid");
  LogSobMinimum best{grid.front(), std::numeric_limits<double>::infinity()};
  for (double d : grid) {
    const double v = logsob_constant(seq, d, tol).value;
    if (v < best.value) best = {d, v};
  }
  return best;
}

PoincareConstants poincare_constants(const ParameterSequences& seq, int i) {
  if (i < 1) throw InvalidArgument("poincare_constants needs level i >= 1");
  const double J = seq.J(i);
  PoincareConstants c;
  c.lambda1 = 1.0;
  c.psi_printed = 2.0 / J;
  c.psi_dimensional = 4.0 / (J * J);
  c.note = "psi_printed is the printed 2/J_i; the measured local constant is reported by verify";
  return c;
}

}  // namespace diamond
