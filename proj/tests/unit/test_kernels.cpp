#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "diamond/errors.hpp"
#include "diamond/kernels.hpp"

using namespace diamond;
constexpr double kPi = std::numbers::pi;

namespace {

// Independent image sum in long double.
long double gaussian_images(long double t, long double d) {
  long double s = 0.0L;
  for (int k = -60; k <= 60; ++k) s += std::exp(-(d - 2.0L * kPi * k) * (d - 2.0L * kPi * k) / (4.0L * t));
  return s / std::sqrt(4.0L * kPi * t);
}

}  // namespace

TEST_CASE("circle kernel at large time is the uniform density") {
  CHECK(circle_kernel(50.0, 0.4, 2.9).value == Catch::Approx(1.0 / (2 * kPi)).margin(1e-10));
}

TEST_CASE("circle kernel diagonal at t = 1") {
  const double oracle = static_cast<double>(gaussian_images(1.0L, 0.0L));
  CHECK(oracle == Catch::Approx(0.2821240).margin(1e-6));
  CHECK(circle_kernel(1.0, 0.0, 0.0).value == Catch::Approx(oracle).margin(1e-12));
}

TEST_CASE("both circle representations agree") {
  for (double t : {0.05, 0.2, 1.0, 5.0})
    for (double d : {0.0, 0.7, 2.0, kPi}) {
      const double g = circle_kernel(t, 0.0, d, {}, CircleRepresentation::kGaussian).value;
      const double f = circle_kernel(t, 0.0, d, {}, CircleRepresentation::kFourier).value;
      CHECK(std::abs(g - f) <= 2e-12);
      CHECK(g == Catch::Approx(static_cast<double>(gaussian_images(t, d))).margin(1e-12));
    }
}

TEST_CASE("Dirichlet interval kernel at the midpoint") {
  long double oracle = 0.0L;
  for (int k = 1; k < 40; k += 2) oracle += std::exp(-static_cast<long double>(k) * k);
  oracle *= 2.0L / kPi;
  CHECK(static_cast<double>(oracle) == Catch::Approx(0.2342779).margin(1e-6));
  for (auto m : {DirichletMethod::kSineSeries, DirichletMethod::kCircleDifference})
    CHECK(interval_kernel_dirichlet(1.0, kPi, kPi / 2, kPi / 2, {}, m).value ==
          Catch::Approx(static_cast<double>(oracle)).margin(1e-12));
}

TEST_CASE("level-1 diagonal on the 2-2 diamond") {
  const auto seq = ParameterSequences::regular(2, 2);
  const auto x = make_point(seq, kPi / 4, {1});
  const double circle = static_cast<double>(gaussian_images(1.0L, 0.0L));
  const double corr = static_cast<double>(gaussian_images(4.0L, 0.0L) - gaussian_images(4.0L, kPi));
  const double oracle = circle + 2.0 * corr;
  CHECK(oracle == Catch::Approx(0.30544).margin(1e-5));
  CHECK(diamond_kernel_level(seq, 1, 1.0, x, x).value == Catch::Approx(oracle).margin(1e-11));
  CHECK(diamond_kernel_recursive(seq, 1, 1.0, x, x).value == Catch::Approx(oracle).margin(1e-11));
}

TEST_CASE("points in different bundles see only the circle") {
  const auto seq = ParameterSequences::regular(2, 2);
  const auto x = make_point(seq, 0.3, {1, 2});
  const auto y = make_point(seq, 4.1, {2, 1});
  CHECK(diamond_kernel_level(seq, 2, 0.5, x, y).value == Catch::Approx(circle_kernel(0.5, 0.3, 4.1).value).margin(1e-13));
}

TEST_CASE("limit kernel off the diagonal stops at the separating level") {
  const auto seq = ParameterSequences::regular(2, 3);
  const auto x = make_point(seq, 0.2, {1, 2});
  const auto y = make_point(seq, 0.5, {1, 3});
  const double lim = diamond_kernel_limit(seq, 0.7, x, y).value;
  for (int level = 2; level <= 4; ++level)
    CHECK(diamond_kernel_level(seq, level, 0.7, extend(x, level), extend(y, level)).value ==
          Catch::Approx(lim).margin(1e-12));
}

TEST_CASE("batch results do not depend on the thread count") {
  const auto seq = ParameterSequences::regular(3, 2);
  std::vector<KernelPair> pairs;
  for (int k = 0; k < 30; ++k)
    pairs.push_back({make_point(seq, 0.1 * k, {1u + k % 2}), make_point(seq, 0.17 * k, {1u + (k / 2) % 2})});
  const auto a = evaluate_batch(seq, 1, {0.1, 1.0}, pairs, {}, 1);
  const auto b = evaluate_batch(seq, 1, {0.1, 1.0}, pairs, {}, 4);
  for (std::size_t k = 0; k < a.values.size(); ++k) CHECK(a.values[k].value == b.values[k].value);
}

TEST_CASE("kernel rejects non-positive time") {
  CHECK_THROWS_AS(circle_kernel(0.0, 0.0, 0.0), InvalidArgument);
}
