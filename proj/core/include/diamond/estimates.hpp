#pragma once

#include <optional>
#include <string>
#include <vector>

#include "diamond/params.hpp"

namespace diamond {

struct BoundReport {
  std::string name;
  double parameter = 0.0;  // t or delta
  double value = 0.0;
  int terms_used = 0;
  double tail_bound = 0.0;
  std::string formula_source;
  // The other reading when a bound exists in a printed and a corrected form.
  std::optional<double> alternate_value;
  std::string note;
};

// Brute-force sum_{k>=1} e^{-a k^2} (to machine precision) and the two bounds on it.
double theta_tail_sum(double a);
double printed_series_bound(double a);    // min{sqrt(pi)/(2 sqrt a), e^{-a}/a}
double corrected_series_bound(double a);  // e^{-a} (1 + 1/(2a))

// (2/pi) sum_{l>=0} N_l (J_l^2 + 1/(2t)) e^{-J_l^2 t}. With `level`, the
// finite-level partial sum up to l = level.
BoundReport lipschitz_bound(const ParameterSequences& seq, double t, double tol = 1e-12,
                            std::optional<int> level = std::nullopt);

// 1/(2 pi) + 1/sqrt(4 pi t) + sum_{l>=1} N_l min{1/sqrt(pi t), B_l}, with B_l
// the printed 2/(J_l pi t) e^{-J_l^2 t} or the corrected
// (2 J_l/pi) e^{-J_l^2 t} (1 + 1/(2 J_l^2 t)).
BoundReport uniform_bound(const ParameterSequences& seq, double t, double tol = 1e-12,
                          bool corrected = true, std::optional<int> level = std::nullopt);

// 2 sum_{l>=0} min{2/sqrt(pi t), (J_l + 1/(2 J_l t)) e^{-J_l^2 t}}; uses j only.
BoundReport wbe_constant(const ParameterSequences& seq, double t, double tol = 1e-12,
                         std::optional<int> level = std::nullopt);

struct RegularLogBound {
  double value = 0.0;         // C_F (d/sqrt t) log(d/sqrt t)
  double constant = 0.0;      // C_F
  double intermediate = 0.0;  // three-term bound on C(t)
};

// Regular j-n case. Requires 0 < t < d/2 and d/sqrt(t) > 2.
RegularLogBound regular_log_bound(double j, double diam, double t, double d);

// 1/sqrt(2 pi) + (1/sqrt(2t)) (1 + sum_{l>=1} 2 N_l min{1, 2/(J_l sqrt(pi t)) e^{-J_l^2 t}}).
BoundReport ultracontractivity_bound(const ParameterSequences& seq, double t, double tol = 1e-12);

struct OneToInfConstant {
  double value = 0.0;
  bool valid = true;  // the j != n branch is meaningless for j < n
  std::string branch;
};
OneToInfConstant regular_1_to_inf_constant(double j, double n);

// 2 delta + log(1/(2 pi) + 1/sqrt(4 pi delta) + pi sum_{l>=1} N_l min{1, 2/(J_l sqrt(pi delta)) e^{-J_l^2 delta}}).
BoundReport logsob_constant(const ParameterSequences& seq, double delta, double tol = 1e-12);

struct LogSobMinimum {
  double delta = 0.0;
  double value = 0.0;
};
LogSobMinimum logsob_minimizer(const ParameterSequences& seq, const std::vector<double>& grid,
                               double tol = 1e-12);

struct PoincareConstants {
  double lambda1 = 1.0;
  double psi_printed = 0.0;      // 2 / J_i as printed
  double psi_dimensional = 0.0;  // 4 / J_i^2 from the eigenvalue (pi/(2 r_i))^2
  std::string note;
};
PoincareConstants poincare_constants(const ParameterSequences& seq, int i);

}  // namespace diamond
