#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "diamond/semigroup.hpp"

using namespace diamond;
constexpr double kPi = std::numbers::pi;

TEST_CASE("grid measure is 2 pi at every level") {
  const auto seq = ParameterSequences::regular(2, 3);
  for (int level = 0; level <= 2; ++level) {
    const auto L = make_layout(seq, level, 21);
    CHECK(total_measure(*L) == Catch::Approx(2 * kPi).margin(1e-12));
    CHECK(total_measure(*L, Quadrature::kSimpson) == Catch::Approx(2 * kPi).margin(1e-12));
  }
}

TEST_CASE("constants are preserved by the semigroup") {
  const auto seq = ParameterSequences::regular(2, 2);
  const auto L = make_layout(seq, 1, 101);
  const auto one = apply_semigroup(GridFunction::constant(L, 1.0), 0.5);
  for (double v : one.values()) CHECK(v == Catch::Approx(1.0).margin(1e-4));
}

TEST_CASE("Chapman-Kolmogorov on F_1 at t = s = 0.5") {
  const auto seq = ParameterSequences::regular(2, 2);
  const auto L = make_layout(seq, 1, 200);
  const auto f = GridFunction::sample(L, [](const PointAddress& p) {
    return std::cos(p.theta) + 0.5 * std::sin(2 * p.theta) * (p.labels[0] == 1 ? 1.0 : -1.0);
  });
  const auto a = apply_semigroup(f, 1.0);
  const auto b = apply_semigroup(apply_semigroup(f, 0.5), 0.5);
  CHECK((a - b).sup_norm() <= 1e-4);
}

TEST_CASE("stored operator matches the matrix-free one") {
  const auto seq = ParameterSequences::regular(2, 2);
  const auto L = make_layout(seq, 1, 31);
  const auto f = GridFunction::sample(L, [](const PointAddress& p) { return std::sin(p.theta); });
  const SemigroupOperator op(L, 0.3);
  CHECK((op.apply(f) - apply_semigroup(f, 0.3)).sup_norm() <= 1e-14);
  CHECK(op.kernel(3, 17) == Catch::Approx(op.kernel(17, 3)).margin(1e-15));
}

TEST_CASE("fiber integration inverts lifting and lifting keeps the L2 norm") {
  const auto seq = ParameterSequences::regular(2, 3);
  const auto L0 = make_layout(seq, 0, 41);
  const auto g = GridFunction::sample(L0, [](const PointAddress& p) { return 1.0 + std::cos(3 * p.theta); });
  const auto up = lift(g, 1);
  CHECK((integrate_fibers(up) - g).sup_norm() <= 1e-15);
  CHECK(l2_norm(up) == Catch::Approx(l2_norm(g)).epsilon(1e-12));
}

TEST_CASE("lifting commutes with the semigroup from F_0 to F_1") {
  const auto seq = ParameterSequences::regular(2, 2);
  const auto L0 = make_layout(seq, 0, 201);
  const auto g = GridFunction::sample(L0, [](const PointAddress& p) { return std::exp(std::sin(p.theta)); });
  const auto lhs = apply_semigroup(lift(g, 1), 1.0);
  const auto rhs = lift(apply_semigroup(g, 1.0), 1);
  CHECK((lhs - rhs).sup_norm() <= 1e-4);
}

TEST_CASE("decomposition into symmetric and fiber-antisymmetric parts on F_1") {
  const auto seq = ParameterSequences::regular(2, 2);
  const auto L1 = make_layout(seq, 1, 201);
  const auto f = GridFunction::sample(L1, [](const PointAddress& p) {
    return std::cos(p.theta) + (p.labels[0] == 1 ? 1.0 : -1.0) * std::sin(2 * p.theta);
  });
  const double t = 0.5;
  const auto whole = apply_semigroup(f, t);
  const auto sym = lift(apply_semigroup(integrate_fibers(f), t), 1);
  const auto anti = apply_dirichlet_branches(project_antisym(f), t);
  CHECK((whole - (sym + anti)).sup_norm() <= 1e-4);
}

TEST_CASE("energy telescopes under lifting") {
  const auto seq = ParameterSequences::regular(3, 2);
  const auto L1 = make_layout(seq, 1, 31);
  const auto f = GridFunction::sample(L1, [](const PointAddress& p) {
    return std::sin(p.theta) * (p.labels[0] == 1 ? 1.0 : 0.5);
  });
  CHECK(dirichlet_energy(lift(f, 2)) == Catch::Approx(dirichlet_energy(f)).epsilon(1e-10));
}

TEST_CASE("entropy of a two-valued simple function") {
  // f = 2 on half the mass, 0 elsewhere: int f log f = pi * 2 log 2, int f = 2 pi.
  const auto seq = ParameterSequences::regular(2, 2);
  const auto L = make_layout(seq, 0, 4001);
  const auto f = GridFunction::sample(L, [](const PointAddress& p) { return p.theta < kPi ? 2.0 : 0.0; });
  const double mass = integrate(f);
  const double flogf = 2.0 * std::log(2.0) * (mass / 2.0);
  CHECK(entropy(f, std::nullopt, EntropyNormalization::kLiteral) ==
        Catch::Approx(flogf - mass * std::log(mass)).margin(1e-9));
  CHECK(entropy(f, std::nullopt, EntropyNormalization::kProbability) ==
        Catch::Approx(flogf - mass * std::log(mass / (2 * kPi))).margin(1e-9));
}
