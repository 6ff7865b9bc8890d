#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "diamond/verify/cable.hpp"
#include "diamond/verify/oracles.hpp"
#include "diamond/verify/suite.hpp"

using namespace diamond;
using namespace diamond::verify;
constexpr double kPi = std::numbers::pi;

TEST_CASE("cable spectrum of the circle") {
  // Ring of n equal segments: lambda_k = (2 - 2 cos(2 pi k / n)) / h^2.
  const std::size_t n = 60;
  const double h = 2 * kPi / n;
  std::vector<CableEdge> edges;
  for (std::size_t u = 0; u < n; ++u) edges.push_back({u, (u + 1) % n, h});
  const CableDiscretization disc(n, edges);
  const auto s = compute_spectrum(disc);
  CHECK(s.values[0] == Catch::Approx(0.0).margin(1e-10));
  CHECK(s.values[1] == Catch::Approx((2 - 2 * std::cos(2 * kPi / n)) / (h * h)).epsilon(1e-10));
  CHECK(s.values[2] == Catch::Approx(s.values[1]).epsilon(1e-10));
}

TEST_CASE("sparse and dense spectra agree") {
  const auto seq = ParameterSequences::regular(2, 2);
  const CableDiscretization disc(make_layout(seq, 2, 150));
  REQUIRE(disc.size() > kDenseSpectrumLimit);
  const auto low = compute_spectrum(disc, 6);
  CHECK(low.values[0] == Catch::Approx(0.0).margin(1e-9));
  CHECK(low.values[1] == Catch::Approx(1.0).margin(5e-3));
}

TEST_CASE("spectral oracle converges to the closed form on F_1") {
  const auto seq = ParameterSequences::regular(2, 2);
  const auto c = compare_spectral(seq, 1, 1.0, 50, 100);
  CHECK(c.error_fine < c.error_coarse);
  CHECK(c.order > 1.7);
}

TEST_CASE("random walk settles on the mass distribution") {
  const auto seq = ParameterSequences::regular(2, 2);
  const CableDiscretization disc(make_layout(seq, 1, 5));
  const auto p = oracle_walk(disc, 50.0, 0, 20000, 3);
  std::vector<double> mass(disc.mass().data(), disc.mass().data() + disc.size());
  const double total = 2 * kPi;
  for (double& m : mass) m /= total;
  CHECK(total_variation(p, mass) < 0.03);
}

TEST_CASE("local Poincare test function on F_1") {
  const auto seq = ParameterSequences::regular(2, 2);
  const auto r = local_poincare(seq, 1, 200);
  CHECK(r.mean_ratio < 1e-12);
  CHECK(r.rayleigh == Catch::Approx(r.expected_lambda).epsilon(1e-3));
  CHECK(r.constant == Catch::Approx(4.0 / (2.0 * 2.0)).epsilon(2e-2));
}

TEST_CASE("sample stream depends only on the seed") {
  SampleStream a(9), b(9);
  for (int k = 0; k < 10; ++k) CHECK(a.uniform() == b.uniform());
  const auto seq = ParameterSequences::regular(3, 2);
  for (int k = 0; k < 50; ++k) {
    const auto p = a.point(seq, 2);
    CHECK(p.level() == 2);
    CHECK(p == b.point(seq, 2));
  }
}

TEST_CASE("report is deterministic and lists every check") {
  std::vector<CheckResult> rows{{"a[F_1]", CheckStatus::kPass, 1e-3, 1e-2, 0, ""},
                                {"b[F_1]", CheckStatus::kFail, 2.0, 1.0, 0, "too big"}};
  const auto seq = ParameterSequences::regular(2, 2);
  std::ostringstream one, two;
  write_report_json(one, rows, seq, {});
  write_report_json(two, rows, seq, {});
  CHECK(one.str() == two.str());
  CHECK(one.str().find("\"b[F_1]\"") != std::string::npos);
  CHECK(any_failure(rows));
}

TEST_CASE("checks on small grids pass") {
  const auto seq = ParameterSequences::regular(2, 2);
  SampleStream rs(42);
  CHECK(check_representation(rs, 100).status == CheckStatus::kPass);
  CHECK(check_dirichlet_identity(rs, 100).status == CheckStatus::kPass);
  CHECK(check_closed_vs_recursive(seq, 2, {0.1, 1.0}, rs, 50).status == CheckStatus::kPass);
  CHECK(check_energy_lift(seq, 1, 40).status == CheckStatus::kPass);
  for (const auto& r : check_semigroup_axioms(seq, 1, 60, 0.5, 0.5, rs)) CHECK(r.status == CheckStatus::kPass);
}
