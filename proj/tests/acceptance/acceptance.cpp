// Acceptance run: one PASS/FAIL line per criterion. A criterion passes when
// none of its rows fail and it finishes inside its time budget.
// `acceptance -v` also prints every row.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "diamond/estimates.hpp"
#include "diamond/verify/suite.hpp"

using namespace diamond;
using namespace diamond::verify;

namespace {

using Rows = std::vector<CheckResult>;

void append(Rows& out, Rows more) {
  for (auto& r : more) out.push_back(std::move(r));
}

CheckResult near_value(const std::string& name, double measured, double expected, double tol) {
  const bool ok = std::abs(measured - expected) <= tol;
  return {name, ok ? CheckStatus::kPass : CheckStatus::kFail, measured, expected, tol, ""};
}

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<Rows()> run;
};

const std::vector<ParameterSequences>& small_regular() {
  static const std::vector<ParameterSequences> all{ParameterSequences::regular(2, 2), ParameterSequences::regular(2, 3),
                                                   ParameterSequences::regular(3, 2), ParameterSequences::regular(3, 3)};
  return all;
}

std::vector<Criterion> criteria() {
  const auto r22 = ParameterSequences::regular(2, 2);
  std::vector<Criterion> c;
  c.push_back({1, "circle kernel: Gaussian vs Fourier representation", 5.0, [] {
                 SampleStream rs(101);
                 return Rows{check_representation(rs, 1000, 0.05, 10.0, 1e-10)};
               }});
  c.push_back({2, "Dirichlet identity: sine series vs circle difference", 5.0, [] {
                 SampleStream rs(102);
                 return Rows{check_dirichlet_identity(rs, 1000, 1e-9)};
               }});
  c.push_back({3, "closed form vs recursion on F_1, F_2, j,n in {2,3}", 30.0, [] {
                 SampleStream rs(103);
                 Rows out;
                 for (const auto& seq : small_regular())
                   for (int l = 1; l <= 2; ++l) {
                     auto r = check_closed_vs_recursive(seq, l, {0.1, 1.0}, rs, 200, 1e-9);
                     r.name += " " + seq.describe();
                     out.push_back(std::move(r));
                   }
                 return out;
               }});
  c.push_back({4, "spectral oracle on F_0, F_1, F_2 (m = 200, 400)", 300.0, [r22] {
                 Rows out;
                 for (int l = 0; l <= 2; ++l)
                   for (double t : {0.5, 1.0}) append(out, check_spectral_oracle(r22, l, t, 200, 400, 3e-3, 1.7));
                 return out;
               }});
  c.push_back({5, "semigroup axioms on F_1 (m = 200, t = s = 0.5)", 120.0, [r22] {
                 SampleStream rs(105);
                 return check_semigroup_axioms(r22, 1, 200, 0.5, 0.5, rs);
               }});
  c.push_back({6, "intertwining and decomposition F_0->F_1, F_1->F_2 (m = 200)", 120.0, [r22] {
                 Rows out;
                 for (int l = 1; l <= 2; ++l) append(out, check_intertwining(r22, l, 200, 0.5, 1e-4));
                 return out;
               }});
  c.push_back({7, "Lipschitz bound on F_2 and its value at t = 1", 120.0, [r22] {
                 SampleStream rs(107);
                 Rows out = check_lipschitz(r22, 2, {0.1, 0.5, 1.0}, rs, 1000);
                 out.push_back(near_value("lipschitz_bound(1)", lipschitz_bound(r22, 1.0).value, 0.45624, 1e-5));
                 return out;
               }});
  c.push_back({8, "wBE kernel form on F_2 and n-invariance", 180.0, [r22] {
                 SampleStream rs(108);
                 Rows out = check_wbe(r22, 2, 200, {0.1, 0.5, 1.0}, rs, 50);
                 out.push_back(check_wbe_n_invariance(r22, {0.001, 0.01, 0.1, 0.5, 1.0}));
                 return out;
               }});
  c.push_back({9, "regular 2-2 log scaling of sqrt(t) C(t)", 60.0, [] { return check_log_scaling(2, 2, 1e-4, 1e-1, 25, 0.05); }});
  c.push_back({10, "spectral gap on F_1, F_2 for j,n in {2,3}", 180.0, [] {
                 Rows out;
                 for (const auto& seq : small_regular())
                   for (int l = 1; l <= 2; ++l) {
                     auto r = check_spectral_gap(seq, l, 200, 5e-3);
                     r.name += " " + seq.describe();
                     out.push_back(std::move(r));
                   }
                 return out;
               }});
  c.push_back({11, "local Poincare eigenfunction on F_1, F_2", 120.0, [r22] {
                 Rows out;
                 for (int l = 1; l <= 2; ++l) append(out, check_local_poincare(r22, l, 200));
                 return out;
               }});
  c.push_back({12, "log-Sobolev constant and entropy inequality on F_1", 120.0, [r22] {
                 SampleStream rs(112);
                 Rows out{near_value("logsob_constant(1)", logsob_constant(r22, 1.0).value, 1.3192, 1e-3)};
                 append(out, check_log_sobolev(r22, 1, 200, {0.5, 1.0, 2.0}, rs, 20));
                 return out;
               }});
  c.push_back({13, "ultracontractivity: C(2,2) and sup kernel on F_2", 60.0, [r22] {
                 Rows out{near_value("C(2,2)", regular_1_to_inf_constant(2, 2).value, 1.5371, 1e-4)};
                 append(out, check_ultracontractivity(r22, 2, 200, {0.1, 0.5, 0.9}));
                 return out;
               }});
  c.push_back({14, "series bound probe (informational finding)", 1.0, [] { return check_series_probe(0.01, 100.0, 81); }});
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  const bool verbose = argc > 1 && std::strcmp(argv[1], "-v") == 0;
  int failures = 0;
  for (const Criterion& c : criteria()) {
    const auto start = std::chrono::steady_clock::now();
    Rows rows;
    std::string error;
    try {
      rows = c.run();
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    int failed = error.empty() ? 0 : 1, info = 0;
    const CheckResult* first_fail = nullptr;
    for (const auto& r : rows) {
      if (r.status == CheckStatus::kFail) {
        ++failed;
        if (!first_fail) first_fail = &r;
      }
      if (r.status == CheckStatus::kInformational) ++info;
    }
    const bool slow = secs > c.budget_s;
    const bool pass = failed == 0 && !slow;
    if (!pass) ++failures;
    std::printf("%s %2d %-62s %8.2fs (budget %gs) rows=%zu failed=%d info=%d", pass ? "PASS" : "FAIL", c.id, c.title,
                secs, c.budget_s, rows.size(), failed, info);
    if (!error.empty()) std::printf(" error: %s", error.c_str());
    if (first_fail) std::printf(" first failure: %s measured=%.6g bound=%.6g", first_fail->name.c_str(),
                                first_fail->measured, first_fail->bound);
    if (slow) std::printf(" over budget");
    std::printf("\n");
    std::fflush(stdout);
    if (verbose) {
      for (const auto& r : rows)
        std::printf("     %-40s %-13s measured=%-12.6g bound=%-12.6g tol=%-8.2g %s\n", r.name.c_str(),
                    to_string(r.status), r.measured, r.bound, r.tolerance, r.notes.c_str());
    }
  }
  std::printf("%d of 14 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
