#include <catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "diamond/errors.hpp"
#include "diamond/geometry.hpp"
#include "diamond/verify/oracles.hpp"

using namespace diamond;
constexpr double kPi = std::numbers::pi;

TEST_CASE("junction angles are born at their first level") {
  const auto seq = ParameterSequences({2, 3}, {2, 2});
  CHECK(birth_level(seq, 0.0, 2) == 0);
  CHECK(birth_level(seq, kPi, 2) == 0);
  CHECK(birth_level(seq, kPi / 2, 2) == 1);
  CHECK(birth_level(seq, kPi / 6, 2) == 2);
  CHECK(birth_level(seq, 0.3, 2) == -1);
}

TEST_CASE("canonical form resets labels from the birth level on") {
  const auto seq = ParameterSequences::regular(2, 2);
  const auto p = make_point(seq, kPi / 2 + 1e-13, {2, 2});
  CHECK(p.theta == kPi / 2);
  CHECK(p.labels == std::vector<std::uint64_t>{1, 1});
  CHECK_THROWS_AS(make_point(seq, 0.3, {3}), InvalidArgument);
}

TEST_CASE("distance on a single branch is the angle difference") {
  const auto seq = ParameterSequences::regular(3, 2);
  const auto x = make_point(seq, 0.1, {1});
  const auto y = make_point(seq, 0.2, {1});
  CHECK(distance_level(seq, x, y, 1) == Catch::Approx(0.1).margin(1e-15));
}

TEST_CASE("distance across branches of one bundle goes through the bundle end") {
  const auto seq = ParameterSequences::regular(3, 2);
  const auto x = make_point(seq, 0.1, {1});
  const auto y = make_point(seq, 0.2, {2});
  CHECK(distance_level(seq, x, y, 1) == Catch::Approx(0.3).margin(1e-14));
  CHECK(verify::oracle_distance(seq, 1, x, y) == Catch::Approx(0.3).margin(1e-12));
}

TEST_CASE("distances grow with the level and match the graph oracle") {
  const auto seq = ParameterSequences({2, 3}, {3, 2});
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
  for (int k = 0; k < 200; ++k) {
    const auto x = make_point(seq, ang(rng), {rng() % 3 + 1, rng() % 2 + 1});
    const auto y = make_point(seq, ang(rng), {rng() % 3 + 1, rng() % 2 + 1});
    const double d0 = distance_level(seq, x, y, 0);
    const double d1 = distance_level(seq, x, y, 1);
    const double d2 = distance_level(seq, x, y, 2);
    CHECK(d0 <= d1 + 1e-14);
    CHECK(d1 <= d2 + 1e-14);
    CHECK(d2 == Catch::Approx(verify::oracle_distance(seq, 2, x, y)).margin(1e-9));
  }
}

TEST_CASE("pair classification finds the first separating level") {
  const auto seq = ParameterSequences::regular(2, 2);
  // Different halves of the circle: separated already at level 0.
  const auto a = make_point(seq, 0.3, {1, 1});
  const auto b = make_point(seq, 4.0, {2, 1});
  CHECK(classify_pair(seq, a, b).i_xy == 0);
  CHECK(classify_pair(seq, a, a).coincident());
}

TEST_CASE("limit distance carries a certified gap") {
  const auto seq = ParameterSequences::regular(2, 2);
  const auto x = make_point(seq, 0.3, {1});
  const auto y = make_point(seq, 0.9, {2});
  const auto r = distance_limit(seq, x, y, 1e-10);
  CHECK(r.error_bound <= 1e-10);
  CHECK(r.value == Catch::Approx(1.2).margin(1e-9));
}
