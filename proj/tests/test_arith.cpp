// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qflat/arith.hpp"
#include "qflat/interval.hpp"

using namespace qflat;

TEST_CASE("bernoulli numbers") {
  CHECK(bernoulli(0) == 1);
  CHECK(bernoulli(1) == Rational(-1, 2));
  CHECK(bernoulli(2) == Rational(1, 6));
  CHECK(bernoulli(4) == Rational(-1, 30));
  CHECK(bernoulli(6) == Rational(1, 42));
  CHECK(bernoulli(7) == 0);
  for (int k = 0; k <= 40; ++k) CHECK(bernoulli(k) == oracle::bernoulli(k));
}

TEST_CASE("von Staudt-Clausen denominators") {
  for (int k = 1; k <= 30; ++k) {
    Integer expected = 1;
    for (auto p : primes_up_to(2 * k + 1))
      if ((2 * k) % (p - 1) == 0) expected *= static_cast<long>(p);
    CHECK(bernoulli(2 * k).get_den() == expected);
  }
}

TEST_CASE("zeta at negative odd integers") {
  CHECK(zeta_special(1) == Rational(-1, 12));
  CHECK(zeta_special(2) == Rational(1, 120));
  CHECK(zeta_special(3) == Rational(-1, 252));
  for (int k = 1; k <= 15; ++k) {
    CHECK(zeta_special(k) == -bernoulli(2 * k) / (2 * k));
    CHECK(sgn(zeta_special(k)) == (k % 2 ? -1 : 1));
  }
}

TEST_CASE("kronecker symbol and fundamental discriminants") {
  CHECK(QuadraticCharacter::is_fundamental_discriminant(-4));
  CHECK(QuadraticCharacter::is_fundamental_discriminant(-3));
  CHECK(QuadraticCharacter::is_fundamental_discriminant(8));
  CHECK(QuadraticCharacter::is_fundamental_discriminant(-8));
  CHECK(QuadraticCharacter::is_fundamental_discriminant(12));
  CHECK_FALSE(QuadraticCharacter::is_fundamental_discriminant(-1));
  CHECK_FALSE(QuadraticCharacter::is_fundamental_discriminant(9));
  CHECK_FALSE(QuadraticCharacter::is_fundamental_discriminant(-16));
  CHECK_THROWS(QuadraticCharacter::from_discriminant(-7 * 4));

  auto chi = QuadraticCharacter::from_discriminant(-4);
  CHECK(chi(1) == 1);
  CHECK(chi(3) == -1);
  CHECK(chi(2) == 0);
  CHECK(chi(-1) == -1);
  CHECK(chi.conductor() == 4);
  CHECK(chi.parity() == -1);

  // Quadratic characters are periodic mod the conductor and multiplicative.
  for (std::int64_t D = -40; D <= 40; ++D) {
    if (!QuadraticCharacter::is_fundamental_discriminant(D)) continue;
    auto c = QuadraticCharacter::from_discriminant(D);
    const auto q = c.conductor();
    CHECK(c(-1) == (D < 0 ? -1 : 1));
    for (std::int64_t m = 1; m < 60; ++m) {
      CHECK(c(m) == c(m + q));
      for (std::int64_t l = 1; l < 12; ++l) CHECK(c(m * l) == c(m) * c(l));
    }
    // Odd primes: Legendre symbol (D/p).
    for (auto p : primes_up_to(60))
      if (p > 2) CHECK(c(p) == legendre(Integer(static_cast<long>(D)), p));
  }
}

TEST_CASE("generalized bernoulli numbers") {
  const auto m4 = QuadraticCharacter::from_discriminant(-4);
  const auto m3 = QuadraticCharacter::from_discriminant(-3);
  CHECK(generalized_bernoulli(1, m3) == Rational(-1, 3));
  CHECK(generalized_bernoulli(1, m4) == Rational(-1, 2));
  // B_2(x) = B_2(1-x) kills the odd character at k = 2.
  CHECK(generalized_bernoulli(2, m4) == 0);
  CHECK(generalized_bernoulli(3, m4) == Rational(3, 2));

  // Direct Bernoulli-polynomial route agrees with the power-sum route.
  for (std::int64_t D = -40; D <= 40; ++D) {
    if (!QuadraticCharacter::is_fundamental_discriminant(D)) continue;
    auto c = QuadraticCharacter::from_discriminant(D);
    const auto q = c.conductor();
    for (int k = 1; k <= 6; ++k) {
      Rational direct = 0;
      for (std::int64_t a = 1; a <= q; ++a)
        direct += c(a) * bernoulli_polynomial(k, Rational(a, q));
      direct *= pow(Rational(static_cast<long>(q)), k - 1);
      CHECK(generalized_bernoulli(k, c) == direct);
      const bool parity_match = c.parity() == (k % 2 ? -1 : 1);
      if (!parity_match) CHECK(generalized_bernoulli(k, c) == 0);
    }
  }
  // Trivial character reproduces B_k for k >= 2.
  for (int k = 2; k <= 12; ++k) CHECK(generalized_bernoulli(k, QuadraticCharacter()) == bernoulli(k));
}

TEST_CASE("dirichlet L special values") {
  const auto m4 = QuadraticCharacter::from_discriminant(-4);
  const auto m3 = QuadraticCharacter::from_discriminant(-3);
  CHECK(dirichlet_L_special(1, m4) == Rational(1, 2));
  CHECK(dirichlet_L_special(1, m3) == Rational(1, 3));
  CHECK(dirichlet_L_special(3, m4) == Rational(-1, 2));
  CHECK_THROWS_AS(dirichlet_L_special(2, m4), Error);
  CHECK(dirichlet_L_special(2, QuadraticCharacter()) == Rational(-1, 12));
}

TEST_CASE("L values agree with the functional equation numerically") {
  const double tol = std::ldexp(1.0, -20);
  for (std::int64_t D = -40; D <= 40; ++D) {
    if (!QuadraticCharacter::is_fundamental_discriminant(D)) continue;
    auto c = QuadraticCharacter::from_discriminant(D);
    const int a = c.parity() > 0 ? 0 : 1;
    for (int k = 1; k <= 5; ++k) {
      if (k % 2 != a) continue;
      const Rational exact = dirichlet_L_special(k, c);
      CHECK(k * abs(exact) == abs(generalized_bernoulli(k, c)));
      const double approx = oracle::L_negative_via_functional_equation(k, c, c.conductor(), a);
      CHECK(std::abs(exact.get_d() - approx) <= tol * std::max(1.0, std::abs(approx)));
    }
  }
}

TEST_CASE("interval evaluation") {
  const auto g = eval_interval(Expr::gamma(4), 64);
  CHECK(g.lower() == 6);
  CHECK(g.upper() == 6);

  const Rational tiny(1, 1 << 30);
  const auto pi = eval_interval(Expr::pi(), 64);
  CHECK(pi.width() <= tiny);
  CHECK(pi.lower() < Rational(314159266, 100000000));
  CHECK(pi.upper() > Rational(314159265, 100000000));

  const auto pi2 = eval_interval(Expr::pi().pow(2), 64);
  CHECK(pi2.width() <= tiny);
  CHECK(pi2.lower() > Rational(98696043, 10000000));
  CHECK(pi2.upper() < Rational(98696045, 10000000));

  const auto z2 = eval_interval(Expr::zeta(2), 64);
  CHECK(z2.width() <= tiny);
  // zeta(2) = pi^2/6
  const auto ratio = eval_interval(Expr::pi().pow(2) / Expr::constant(6), 96);
  CHECK(z2.lower() <= ratio.upper());
  CHECK(ratio.lower() <= z2.upper());
  CHECK(std::abs(z2.lower().get_d() - M_PI * M_PI / 6) < 1e-12);

  // zeta(4) = pi^4/90, zeta(6) = pi^6/945
  for (auto [r, den] : {std::pair{4, 90}, std::pair{6, 945}}) {
    const auto z = eval_interval(Expr::zeta(r), 80);
    const auto ref = eval_interval(Expr::pi().pow(r) / Expr::constant(den), 80);
    CHECK(z.lower() <= ref.upper());
    CHECK(ref.lower() <= z.upper());
  }

  // Widths shrink with precision; containment survives roots.
  const auto lo = eval_interval(Expr::zeta(3).root(3), 40);
  const auto hi = eval_interval(Expr::zeta(3).root(3), 120);
  CHECK(hi.width() < lo.width());
  CHECK(lo.lower() <= hi.lower());
  CHECK(hi.upper() <= lo.upper());
  const auto two = eval_interval(Expr::constant(8).root(3), 64);
  CHECK(two.contains(2));
}

TEST_CASE("outward rounding keeps containment") {
  const Rational x(1, 3), y(-2, 7);
  const auto X = RealInterval::exact(x, 20), Y = RealInterval::exact(y, 20);
  CHECK(X.contains(x));
  CHECK((X + Y).contains(x + y));
  CHECK((X * Y).contains(x * y));
  CHECK((X / Y).contains(x / y));
  CHECK(X.pow(5).contains(pow(x, 5)));
  CHECK(Y.pow(2).contains(pow(y, 2)));
  CHECK(round_down(x, 10) <= x);
  CHECK(round_up(x, 10) >= x);
  CHECK(round_up(y, 10) >= y);
}
