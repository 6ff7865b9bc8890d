#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "diamond/estimates.hpp"

using namespace diamond;
constexpr double kPi = std::numbers::pi;

TEST_CASE("Lipschitz bound for the regular 2-2 diamond at t = 1") {
  const auto seq = ParameterSequences::regular(2, 2);
  double oracle = 0.0;
  for (int l = 0; l < 8; ++l) {
    const double J = std::pow(2.0, l), N = std::pow(2.0, l);
    oracle += N * (J * J + 0.5) * std::exp(-J * J);
  }
  oracle *= 2.0 / kPi;
  CHECK(oracle == Catch::Approx(0.45624).margin(1e-5));
  CHECK(lipschitz_bound(seq, 1.0).value == Catch::Approx(oracle).margin(1e-12));
  // Finite level: partial sum through l = 1.
  const double partial = (2.0 / kPi) * (1.5 * std::exp(-1.0) + 2.0 * 4.5 * std::exp(-4.0));
  CHECK(lipschitz_bound(seq, 1.0, 1e-12, 1).value == Catch::Approx(partial).margin(1e-14));
}

TEST_CASE("level-zero uniform bound dominates the circle kernel") {
  const auto seq = ParameterSequences::regular(2, 2);
  const double base = 1.0 / (2 * kPi) + 1.0 / std::sqrt(4 * kPi);
  CHECK(base == Catch::Approx(0.44125).margin(1e-5));
  CHECK(uniform_bound(seq, 1.0, 1e-12, true, 0).value == Catch::Approx(base).margin(1e-14));
  CHECK(uniform_bound(seq, 1.0).value > base);
}

TEST_CASE("wBE constant uses j only") {
  const auto a = ParameterSequences::regular(2, 2);
  const auto b = ParameterSequences::regular(2, 3);
  for (double t : {0.01, 0.1, 1.0}) CHECK(wbe_constant(a, t).value == wbe_constant(b, t).value);
  double oracle = 0.0;
  for (int l = 0; l < 8; ++l) {
    const double J = std::pow(2.0, l);
    oracle += std::min(2.0 / std::sqrt(kPi), (J + 1.0 / (2 * J)) * std::exp(-J * J));
  }
  CHECK(wbe_constant(a, 1.0).value == Catch::Approx(2 * oracle).margin(1e-12));
}

TEST_CASE("regular one-to-infinity constant") {
  const double ln2 = std::log(2.0);
  const double c22 = 1 / (2 * kPi) + 1 / std::sqrt(4 * kPi) + 2 / kPi + 2 / (kPi * 2 * ln2);
  CHECK(c22 == Catch::Approx(1.5371).margin(1e-4));
  CHECK(regular_1_to_inf_constant(2, 2).value == Catch::Approx(c22).margin(1e-12));
  const double c42 = 1 / (2 * kPi) + 1 / std::sqrt(4 * kPi) + 2.0 * 2 / (4 * kPi) + 2.0 * 4 / (kPi * 2 * ln2);
  CHECK(regular_1_to_inf_constant(4, 2).value == Catch::Approx(c42).margin(1e-12));
  CHECK_FALSE(regular_1_to_inf_constant(2, 4).valid);
}

TEST_CASE("log-Sobolev constant at delta = 1") {
  const auto seq = ParameterSequences::regular(2, 2);
  double s = 0.0;
  for (int l = 1; l < 8; ++l) {
    const double J = std::pow(2.0, l), N = std::pow(2.0, l);
    s += N * std::min(1.0, 2.0 / (J * std::sqrt(kPi)) * std::exp(-J * J));
  }
  const double oracle = 2.0 + std::log(1 / (2 * kPi) + 1 / std::sqrt(4 * kPi) + kPi * s);
  CHECK(oracle == Catch::Approx(1.3192).margin(1e-3));
  CHECK(logsob_constant(seq, 1.0).value == Catch::Approx(oracle).margin(1e-12));
}

TEST_CASE("series bounds against brute force") {
  for (double a : {0.01, 0.5, 1.0, 3.0, 50.0}) {
    double s = 0.0;
    for (int k = 1; k < 2000; ++k) s += std::exp(-a * k * k);
    CHECK(theta_tail_sum(a) == Catch::Approx(s).epsilon(1e-12));
    CHECK(corrected_series_bound(a) >= s);
  }
  // The printed bound undershoots at a = 1.
  CHECK(theta_tail_sum(1.0) == Catch::Approx(0.3863186).margin(1e-7));
  CHECK(printed_series_bound(1.0) < theta_tail_sum(1.0));
}

TEST_CASE("printed and dimensional local Poincare constants") {
  const auto seq = ParameterSequences::regular(2, 2);
  const auto c = poincare_constants(seq, 2);
  CHECK(c.lambda1 == 1.0);
  CHECK(c.psi_printed == Catch::Approx(0.5));
  CHECK(c.psi_dimensional == Catch::Approx(0.25));
}
