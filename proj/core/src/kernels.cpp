#include "diamond/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>

#include "diamond/errors.hpp"

namespace diamond {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Tail of the Fourier sum after k = K, by comparison with the Gaussian integral.
double fourier_tail(double a, int K) {
  return std::erfc(K * std::sqrt(a)) / (2.0 * std::sqrt(kPi * a));
}

// Tail of the image sum beyond |k| = K: the first omitted exponent is at least
// pi^2 (2K+1)^2 / 4a and consecutive ratios are below exp(-2 pi^2 (K+1) / a).
double gaussian_tail(double a, int K) {
  const double first = std::exp(-kPi * kPi * (2.0 * K + 1.0) * (2.0 * K + 1.0) / (4.0 * a));
  const double ratio = std::exp(-2.0 * kPi * kPi * (K + 1.0) / a);
  return 2.0 * first / ((1.0 - ratio) * std::sqrt(4.0 * kPi * a));
}

double reduce(double angle) { return std::remainder(angle, kTwoPi); }

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_labels(const PointAddress& p) {
  std::string s;
  for (std::size_t k = 0; k < p.labels.size(); ++k) {
    if (k) s += ';';
    s += std::to_string(p.labels[k]);
  }
  return s;
}

// log of the bound N_l (2 J_l / pi) sum_k e^{-a k^2} with a = J_l^2 t, using
// sum_k e^{-a k^2} <= min(sqrt(pi) / (2 sqrt a), e^{-a} (1 + 1/(2a))).
double log_term_bound(double log_N, double log_J, double t) {
  const double a = std::exp(2.0 * log_J + std::log(t));
  const double s1 = 0.5 * std::log(kPi) - std::log(2.0) - 0.5 * std::log(a);
  const double s2 = -a + std::log1p(0.5 / a);
  return log_N + std::log(2.0 / kPi) + log_J + std::min(s1, s2);
}

}  // namespace

void KernelEvalConfig::validate() const {
  if (!(tol > 0.0)) throw InvalidArgument("kernel tol must be > 0");
  if (!(rep_switch > 0.0)) throw InvalidArgument("rep_switch must be > 0");
  if (max_terms < 1) throw InvalidArgument("max_terms must be >= 1");
}

CircleSeries::CircleSeries(double a, double tol, CircleRepresentation rep, double rep_switch,
                           int max_terms)
    : a_(a), rep_(rep) {
  if (!(a > 0.0)) throw InvalidArgument("heat kernel time must be > 0");
  if (rep_ == CircleRepresentation::kAuto)
    rep_ = a < rep_switch ? CircleRepresentation::kGaussian : CircleRepresentation::kFourier;
  auto tail = [&](int K) { return rep_ == CircleRepresentation::kGaussian ? gaussian_tail(a, K) : fourier_tail(a, K); };
  int K = 0;
  double err = tail(K);
  while (err > tol) {
    if (K >= max_terms) {
      std::ostringstream os;
      os << "circle series at a=" << a << " needs more than " << max_terms << " terms";
      throw PrecisionFailure(os.str(), err);
    }
    err = tail(++K);
  }
  terms_ = K;
  error_ = err;
  if (rep_ == CircleRepresentation::kGaussian) {
    norm_ = 1.0 / std::sqrt(4.0 * kPi * a);
  } else {
    weights_.resize(K);
    for (int k = 1; k <= K; ++k) weights_[k - 1] = std::exp(-static_cast<double>(k) * k * a);
  }
}

double CircleSeries::value(double delta) const {
  if (rep_ == CircleRepresentation::kGaussian) {
    const double d = reduce(delta);
    const double inv = 1.0 / (4.0 * a_);
    double s = std::exp(-d * d * inv);
    for (int k = 1; k <= terms_; ++k) {
      const double p = d - kTwoPi * k;
      const double m = d + kTwoPi * k;
      s += std::exp(-p * p * inv) + std::exp(-m * m * inv);
    }
    return norm_ * s;
  }
  const double c1 = std::cos(delta);
  double prev = 1.0, cur = c1, s = 0.0;
  for (int k = 1; k <= terms_; ++k) {
    s += weights_[k - 1] * cur;
    const double next = 2.0 * c1 * cur - prev;
    prev = cur;
    cur = next;
  }
  return 1.0 / kTwoPi + s / kPi;
}

double CircleSeries::difference(double u, double v) const {
  if (rep_ == CircleRepresentation::kGaussian) return value(u - v) - value(u + v);
  // (1/pi) sum w_k [cos k(u-v) - cos k(u+v)], two Chebyshev recurrences.
  const double ca = std::cos(u - v);
  const double cb = std::cos(u + v);
  double pa = 1.0, a = ca, pb = 1.0, b = cb, s = 0.0;
  for (int k = 1; k <= terms_; ++k) {
    s += weights_[k - 1] * (a - b);
    const double na = 2.0 * ca * a - pa;
    const double nb = 2.0 * cb * b - pb;
    pa = a;
    a = na;
    pb = b;
    b = nb;
  }
  return s / kPi;
}

KernelValue circle_kernel(double t, double theta, double theta_p, const KernelEvalConfig& cfg,
                          CircleRepresentation rep) {
  cfg.validate();
  if (!(t > 0.0)) throw InvalidArgument("t must be > 0");
  const CircleSeries s(t, cfg.tol, rep, cfg.rep_switch, cfg.max_terms);
  return {s.value(theta - theta_p), s.error_bound()};
}

KernelValue interval_kernel_dirichlet(double t, double L, double theta, double theta_p,
                                      const KernelEvalConfig& cfg, DirichletMethod method) {
  cfg.validate();
  if (!(t > 0.0)) throw InvalidArgument("t must be > 0");
  if (!(L > 0.0)) throw InvalidArgument("interval length must be > 0");
  const double slack = 1e-12 * L;
  if (theta < -slack || theta > L + slack || theta_p < -slack || theta_p > L + slack)
    throw InvalidArgument("interval coordinates must lie in [0, L]");
  theta = std::clamp(theta, 0.0, L);
  theta_p = std::clamp(theta_p, 0.0, L);
  if (theta == 0.0 || theta == L || theta_p == 0.0 || theta_p == L) return {0.0, 0.0};

  // Rescale to [0, pi]: p^{[0,L]}_t = (pi/L) (p_a(u,v) - p_a(u,-v)), a = pi^2 t / L^2.
  const double scale = kPi / L;
  const double a = scale * scale * t;
  CircleRepresentation rep = CircleRepresentation::kAuto;
  if (method == DirichletMethod::kSineSeries) rep = CircleRepresentation::kFourier;
  if (method == DirichletMethod::kCircleDifference) rep = CircleRepresentation::kGaussian;
  const CircleSeries s(a, cfg.tol / (2.0 * scale), rep, cfg.rep_switch, cfg.max_terms);
  return {scale * s.difference(scale * theta, scale * theta_p), 2.0 * scale * s.error_bound()};
}

DiamondKernel::DiamondKernel(const ParameterSequences& seq, int level, double t, KernelEvalConfig cfg)
    : level_(level), t_(t), scales_(seq, level) {
  cfg.validate();
  if (!(t > 0.0)) throw InvalidArgument("t must be > 0");
  const double share = cfg.tol / (level + 1.0);
  series_.emplace_back(t, share, CircleRepresentation::kAuto, cfg.rep_switch, cfg.max_terms);
  term_error_.push_back(series_[0].error_bound());
  for (int l = 1; l <= level; ++l) {
    const double coef = scales_.N[l - 1] * scales_.J[l];
    const double worst = std::max(scales_.n[l] - 1.0, 1.0) * coef;
    const double a = scales_.J[l] * scales_.J[l] * t;
    series_.emplace_back(a, share / (2.0 * worst), CircleRepresentation::kAuto, cfg.rep_switch,
                         cfg.max_terms);
    term_error_.push_back(2.0 * coef * series_[l].error_bound());
  }
}

double DiamondKernel::correction(int l, double theta_x, double theta_y) const {
  const double J = scales_.J[l];
  return scales_.N[l - 1] * J * series_[l].difference(reduce(J * theta_x), reduce(J * theta_y));
}

KernelValue DiamondKernel::from_config(const PairConfig& c, double theta_x, double theta_y) const {
  KernelValue r{series_[0].value(theta_x - theta_y), term_error_[0]};
  const int top = std::min(c.i_xy, level_);
  for (int l = 1; l <= top; ++l) {
    const double delta = c.per_level_delta[l - 1];
    r.value += delta * correction(l, theta_x, theta_y);
    r.error += std::abs(delta) * term_error_[l];
  }
  return r;
}

KernelValue DiamondKernel::operator()(const PointAddress& x, const PointAddress& y) const {
  if (x.level() != level_ || y.level() != level_)
    throw InvalidArgument("kernel points must be at the kernel's level");
  return from_config(classify_pair(scales_, x, y), x.theta, y.theta);
}

KernelValue DiamondKernel::recursive(const PointAddress& x, const PointAddress& y) const {
  if (x.level() != level_ || y.level() != level_)
    throw InvalidArgument("kernel points must be at the kernel's level");
  KernelValue r{0.0, 0.0};
  PointAddress xl = x, yl = y;
  for (int l = level_; l >= 1; --l) {
    double factor = 0.0;
    if (xl == yl || (same_bundle(scales_, xl, yl, l) && same_branch(scales_, xl, yl, l)))
      factor = scales_.n[l] - 1.0;
    else if (same_bundle(scales_, xl, yl, l))
      factor = -1.0;
    if (factor != 0.0) {
      r.value += factor * correction(l, x.theta, y.theta);
      r.error += std::abs(factor) * term_error_[l];
    }
    xl = project(xl, l - 1);
    yl = project(yl, l - 1);
  }
  r.value += series_[0].value(x.theta - y.theta);
  r.error += term_error_[0];
  return r;
}

KernelValue diamond_kernel_level(const ParameterSequences& seq, int i, double t, const PointAddress& x,
                                 const PointAddress& y, const KernelEvalConfig& cfg) {
  return DiamondKernel(seq, i, t, cfg)(x, y);
}

KernelValue diamond_kernel_recursive(const ParameterSequences& seq, int i, double t,
                                     const PointAddress& x, const PointAddress& y,
                                     const KernelEvalConfig& cfg) {
  return DiamondKernel(seq, i, t, cfg).recursive(x, y);
}

KernelValue diamond_kernel_limit(const ParameterSequences& seq, double t, const PointAddress& x,
                                 const PointAddress& y, const KernelEvalConfig& cfg) {
  cfg.validate();
  if (!(t > 0.0)) throw InvalidArgument("t must be > 0");
  constexpr int kDefaultDepth = 200;
  const int depth = seq.max_level().value_or(kDefaultDepth);
  const LevelScales s(seq, depth);

  const int base = std::max(x.level(), y.level());
  if (base > depth) throw InsufficientDepth("point address is deeper than the parameter sequences");
  const PointAddress xb = canonicalize(s, extend(x, base));
  const PointAddress yb = canonicalize(s, extend(y, base));
  const bool diagonal = xb == yb;
  if (diagonal) {
    const AssumptionReport rep = check_assumption(seq, {t}, std::min(depth, 60));
    if (rep.overall() != Verdict::kPass) {
      std::ostringstream os;
      os << "the summability assumption is not certified at t=" << t << " (verdict "
         << to_string(rep.overall()) << " over levels 0.." << rep.depth << ")";
      throw AssumptionViolation(os.str());
    }
  }

  const CircleSeries circle(t, cfg.tol / 4.0, CircleRepresentation::kAuto, cfg.rep_switch,
                            cfg.max_terms);
  KernelValue r{circle.value(x.theta - y.theta), circle.error_bound()};
  std::vector<double> log_J(depth + 1, 0.0), log_N(depth + 1, 0.0);
  for (int l = 1; l <= depth; ++l) {
    log_J[l] = log_J[l - 1] + seq.j_factor(l).log_value;
    log_N[l] = log_N[l - 1] + seq.n_factor(l).log_value;
  }

  PointAddress xl = xb, yl = yb;
  for (int l = 1;; ++l) {
    if (l > depth) throw InsufficientDepth("kernel series not certified within the available levels");
    const double bound = std::exp(log_term_bound(log_N[l], log_J[l], t));
    if (l < depth) {
      const double next = std::exp(log_term_bound(log_N[l + 1], log_J[l + 1], t));
      if (bound < cfg.tol / 8.0 && next < bound / 2.0) {
        r.error += 2.0 * bound;
        break;
      }
    }
    if (l > base) {
      xl = extend(xl, l);
      yl = extend(yl, l);
    } else {
      xl = project(xb, l);
      yl = project(yb, l);
    }
    double delta;
    if (xl == yl || (same_bundle(s, xl, yl, l) && same_branch(s, xl, yl, l)))
      delta = s.n[l] - 1.0;
    else if (same_bundle(s, xl, yl, l))
      delta = -1.0;
    else
      break;  // separated at level l: the series has ended
    const double coef = s.N[l - 1] * s.J[l];
    const double tol_l = cfg.tol / (8.0 * std::ldexp(1.0, std::min(l, 1000)) * coef * std::abs(delta));
    const CircleSeries sl(s.J[l] * s.J[l] * t, std::max(tol_l, 1e-300), CircleRepresentation::kAuto,
                          cfg.rep_switch, cfg.max_terms);
    r.value += delta * coef * sl.difference(reduce(s.J[l] * x.theta), reduce(s.J[l] * y.theta));
    r.error += 2.0 * std::abs(delta) * coef * sl.error_bound();
  }
  return r;
}

KernelBatch evaluate_batch(const ParameterSequences& seq, std::optional<int> level,
                           const std::vector<double>& times, const std::vector<KernelPair>& pairs,
                           const KernelEvalConfig& cfg, int jobs) {
  KernelBatch batch;
  batch.level = level;
  batch.times = times;
  batch.pairs = pairs;
  batch.values.resize(times.size() * pairs.size());
  jobs = std::max(1, jobs);
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    std::optional<DiamondKernel> kernel;
    if (level) kernel.emplace(seq, *level, times[ti], cfg);
    auto work = [&](std::size_t start) {
      for (std::size_t p = start; p < pairs.size(); p += static_cast<std::size_t>(jobs)) {
        const auto& pr = pairs[p];
        batch.values[ti * pairs.size() + p] =
            kernel ? (*kernel)(pr.x, pr.y) : diamond_kernel_limit(seq, times[ti], pr.x, pr.y, cfg);
      }
    };
    if (jobs == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (int j = 0; j < jobs; ++j) pool.emplace_back(work, static_cast<std::size_t>(j));
      for (auto& th : pool) th.join();
    }
  }
  return batch;
}

void write_batch_csv(std::ostream& os, const KernelBatch& batch) {
  os << "t,theta_x,labels_x,theta_y,labels_y,value,certified_error\n";
  for (std::size_t ti = 0; ti < batch.times.size(); ++ti) {
    for (std::size_t p = 0; p < batch.pairs.size(); ++p) {
      const auto& pr = batch.pairs[p];
      const auto& v = batch.at(ti, p);
      os << format_double(batch.times[ti]) << ',' << format_double(pr.x.theta) << ','
         << format_labels(pr.x) << ',' << format_double(pr.y.theta) << ',' << format_labels(pr.y)
         << ',' << format_double(v.value) << ',' << format_double(v.error) << '\n';
    }
  }
}

}  // namespace diamond
