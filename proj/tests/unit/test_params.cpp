#include <catch_amalgamated.hpp>

#include "diamond/errors.hpp"
#include "diamond/params.hpp"

using namespace diamond;

TEST_CASE("level zero is the circle for any sequence") {
  const auto seq = ParameterSequences({3, 2}, {3, 3});
  const auto p = cumulative_products(seq, 0);
  CHECK(p.J == 1);
  CHECK(p.N == 1);
}

TEST_CASE("cumulative products of an explicit prefix") {
  const auto seq = ParameterSequences({3, 2}, {3, 3});
  const auto p = cumulative_products(seq, 2);
  CHECK(p.J == 6);
  CHECK(p.N == 9);
  CHECK(seq.J(2) == 6.0);
  CHECK(seq.log_N(2) == Catch::Approx(std::log(9.0)));
}

TEST_CASE("regular tail continues the prefix") {
  const auto seq = ParameterSequences({3}, {2}, RegularTail{2, 5});
  CHECK(seq.j(4) == 2);
  CHECK(seq.n(4) == 5);
  CHECK(cumulative_products(seq, 3).N == 2 * 25);
  CHECK_FALSE(seq.max_level().has_value());
}

TEST_CASE("sequences reject degenerate or short input") {
  CHECK_THROWS_AS(ParameterSequences({1}, {2}), InvalidArgument);
  CHECK_THROWS_AS(ParameterSequences({2, 2}, {2}), InvalidArgument);
  const auto seq = ParameterSequences({2}, {2});
  CHECK_THROWS_AS(seq.j(2), InsufficientDepth);
}

TEST_CASE("products that leave 64 bits raise instead of wrapping") {
  const auto seq = ParameterSequences::regular(1u << 20, 2);
  CHECK(cumulative_products(seq, 3).J == (std::uint64_t{1} << 60));
  CHECK_THROWS_AS(cumulative_products(seq, 4), ArithmeticOverflow);
  CHECK(seq.log_J(10) == Catch::Approx(200.0 * std::log(2.0)));
}

TEST_CASE("assumption probe on fast-growing copy counts fails") {
  // n_l = 2^(4^l): log N_i - J_i^2 t = 4^i ((4/3) log 2 - t) + const, divergent for t = 0.5.
  std::vector<double> lj, ln;
  for (int l = 1; l <= 8; ++l) {
    lj.push_back(std::log(2.0));
    ln.push_back(std::pow(4.0, l) * std::log(2.0));
  }
  const auto seq = ParameterSequences::from_log_factors(lj, ln);
  const auto r = check_assumption(seq, {0.5}, 8);
  CHECK(r.overall() == Verdict::kFail);
  // Independent evaluation of the last log term.
  double logN = 0.0;
  for (int l = 1; l <= 8; ++l) logN += std::pow(4.0, l) * std::log(2.0);
  CHECK(r.probes[0].log_terms[8] == Catch::Approx(logN - std::pow(4.0, 8) * 0.5).epsilon(1e-12));
}

TEST_CASE("assumption probe on a prefix with regular tail passes") {
  const auto seq = ParameterSequences({3}, {2}, RegularTail{3, 3});
  CHECK(check_assumption(seq, {0.05}, 15).overall() == Verdict::kPass);
}
