// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "qflat/lattice.hpp"
#include "qflat/mass.hpp"

using namespace qflat;

namespace {

Rational q(long a, long b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

bool is_exception(std::int64_t p, int n, MassType t) {
  if (t == MassType::EvenIII) return true;
  if (p != 2) return false;
  if (n == 3) return t == MassType::OddI || t == MassType::OddIIminus;
  if (n == 4) return t == MassType::EvenI;
  return false;
}

const std::vector<MassType> odd_types{MassType::Generic, MassType::OddI, MassType::OddIIplus, MassType::OddIIminus};
const std::vector<MassType> even_types{MassType::Generic, MassType::EvenI, MassType::EvenII, MassType::EvenIII};

}  // namespace

TEST_CASE("lambda factor examples") {
  CHECK(lambda_factor(2, 3, MassType::OddIIminus) == q(1, 2));
  CHECK(lambda_factor(2, 3, MassType::OddI) == q(1, 2));
  CHECK(lambda_factor(3, 4, MassType::EvenIII) == q(1, 2));
  CHECK(lambda_factor(2, 4, MassType::EvenI) == q(1, 2));
  CHECK(lambda_factor(3, 3, MassType::OddIIplus) == 2);
  CHECK(lambda_factor(5, 6, MassType::EvenII) == q(26 * 126, 12));
  CHECK(lambda_factor(7, 5, MassType::Generic) == 1);
  CHECK_THROWS_AS(lambda_factor(2, 4, MassType::OddI), Error);
  CHECK_THROWS_AS(lambda_factor(2, 3, MassType::EvenII), Error);
}

TEST_CASE("lambda is at least 1/2, below 1 only in the listed cases") {
  for (auto p : primes_up_to(100))
    for (int n = 3; n <= 12; ++n)
      for (MassType t : n % 2 ? odd_types : even_types) {
        const Rational l = lambda_factor(p, n, t);
        CHECK(l >= q(1, 2));
        if (l < 1) {
          CHECK(is_exception(p, n, t));
          CHECK(l == q(1, 2));
        } else {
          CHECK_FALSE(is_exception(p, n, t));
        }
      }
}

TEST_CASE("mass from profile") {
  const auto f3 = IntegralForm::diagonal({1, 1, 1});
  const auto m3 = mass_from_profile(local_profile(f3));
  CHECK(m3.proper_mass == q(1, 24));
  CHECK(m3.proper_mass == Rational(2) / Rational(automorphism_order(f3)));

  const auto e8 = make_profile(8, 1, {});
  const auto m8 = mass_from_profile(e8, QuadraticCharacter());
  CHECK(m8.proper_mass == q(2, 696729600));
  CHECK(m8.character->is_trivial());
  CHECK_THROWS_AS(mass_from_profile(e8, QuadraticCharacter::from_discriminant(5)), Error);

  // x^2 + xy + y^2 + z^2 + zw + w^2 (A2 + A2): Delta = 1, chi trivial.
  const auto a2a2 = IntegralForm::from_coeffs({{1, 1, 0, 0}, {1, 0, 0}, {1, 1}, {1}});
  const auto pa = local_profile(a2a2);
  CHECK(character_of_profile(pa).is_trivial());
  CHECK(mass_from_profile(pa).proper_mass > 0);
}

TEST_CASE("prime power cutoff") {
  const auto c = prime_power_cutoff(1, 2);
  CHECK(c >= 10);
  CHECK(c <= 99);
  for (int r = 2; r <= 10; ++r) CHECK(prime_power_cutoff(1, r, 64) == prime_power_cutoff(1, r, 200));
  for (int r = 2; r <= 6; ++r) {
    std::int64_t last = 0;
    for (long K : {1, 2, 10, 100, 1000}) {
      const auto v = prime_power_cutoff(K, r);
      CHECK(v >= last);
      last = v;
    }
  }
  for (int r = 3; r <= 10; ++r) CHECK(prime_power_cutoff(1, r) <= prime_power_cutoff(1, r - 1));
}

TEST_CASE("divisor condition") {
  const Rational K = 48;
  CHECK_FALSE(divisor_condition_holds(1, K, 2));
  const auto cutoff = prime_power_cutoff(K, 2);
  const std::int64_t p = next_prime(cutoff);
  CHECK(divisor_condition_holds(p, K, 2));
  CHECK(divisor_condition_holds(3 * p, K, 2));
  for (std::int64_t m = 1; m <= 400; ++m)
    if (divisor_condition_holds(m, K, 2))
      for (std::int64_t k = 2; k <= 5; ++k) CHECK(divisor_condition_holds(k * m, K, 2));
}

TEST_CASE("twist bound and B''") {
  CHECK(twist_bound_rhs(4, 1) == 48);
  CHECK(twist_bound_rhs(6, 1) == 5760);
  CHECK(twist_bound_rhs(6, 3) == 3 * 5760);
  CHECK_THROWS_AS(twist_bound_rhs(5, 1), Error);

  const auto b3 = bound_Bpp(3, std::nullopt, 1);
  CHECK(b3.Bpp == 12);
  CHECK(b3.epsilon == 2);
  const auto b5 = bound_Bpp(5, std::nullopt, 1);
  CHECK(b5.Bpp == 2880);
  CHECK(b5.epsilon == 1);
  CHECK(bound_Bpp(5, std::nullopt, q(1, 2)).Bpp == 1440);
  CHECK_THROWS_AS(bound_Bpp(4, std::nullopt, 1), Error);
}

TEST_CASE("character enumeration is exact on its search box") {
  for (int n : {4, 6, 8}) {
    const int r = n / 2;
    const Rational K = twist_bound_rhs(n, 1);
    const auto cutoff = prime_power_cutoff(K, r);
    const auto chars = enumerate_characters(n, 1);
    std::set<std::int64_t> got;
    for (const auto& c : chars) {
      got.insert(c.discriminant());
      CHECK(c.parity() == (r % 2 ? -1 : 1));
      const int t = static_cast<int>(c.conductor_primes().size());
      CHECK(abs(dirichlet_L_special(r, c)) / pow(Rational(2), t) <= K);
      for (const auto& f : factorize(c.conductor()))
        CHECK(pow(Integer(static_cast<long>(f.prime)), f.exponent) <= cutoff);
    }
    // Independent sweep over every discriminant of the right sign up to 2000.
    const int sign = r % 2 ? -1 : 1;
    for (std::int64_t a = 1; a <= 2000; ++a) {
      const std::int64_t D = sign * a;
      if (!QuadraticCharacter::is_fundamental_discriminant(D) && D != 1) continue;
      const auto chi = D == 1 ? QuadraticCharacter() : QuadraticCharacter::from_discriminant(D);
      const int t = static_cast<int>(chi.conductor_primes().size());
      const bool pass = abs(dirichlet_L_special(r, chi)) / pow(Rational(2), t) <= K;
      CHECK(pass == static_cast<bool>(got.count(D)));
    }
  }
}

TEST_CASE("tuple enumeration") {
  const auto t3 = enumerate_tuples(3, 1, std::nullopt);
  const Rational pre3 = zeta_product(3);
  bool has_empty = false;
  std::int64_t max_prime = 0;
  for (const auto& t : t3) {
    CHECK(pre3 * t.lambda_product() <= 1);
    if (t.assignments.empty()) has_empty = true;
    for (const auto& [p, type] : t.assignments) {
      max_prime = std::max(max_prime, p);
      CHECK(type != MassType::Generic);
      // Dropping a slot with lambda >= 1 keeps the tuple eligible.
      if (lambda_factor(p, 3, type) >= 1) {
        auto smaller = t.assignments;
        smaller.erase(p);
        Rational prod = 1;
        for (const auto& [p2, t2] : smaller) prod *= lambda_factor(p2, 3, t2);
        CHECK(pre3 * prod <= 1);
      }
    }
  }
  CHECK(has_empty);
  // Tuples alone only bound primes by the mass: {2: I, 47: II+} has Mass+ = 1.
  CHECK(max_prime == 47);
  EligibleTuple edge{3, std::nullopt, {{2, MassType::OddI}, {47, MassType::OddIIplus}}, 1};
  CHECK(pre3 * edge.lambda_product() == 1);

  for (const auto& chi : enumerate_characters(6, 1)) {
    const auto ts = enumerate_tuples(6, 1, chi);
    const auto cp = chi.conductor_primes();
    const Rational pre = zeta_product(6) * abs(dirichlet_L_special(3, chi)) / 4;
    for (const auto& t : ts) {
      CHECK(pre * t.lambda_product() <= 1);
      for (auto p : cp) CHECK(t.assignments.at(p) == MassType::EvenIII);
      for (const auto& [p, type] : t.assignments)
        if (type == MassType::EvenIII) CHECK(std::find(cp.begin(), cp.end(), p) != cp.end());
    }
  }
}

TEST_CASE("profiles from tuples") {
  EligibleTuple t{3, std::nullopt, {{2, MassType::OddI}}, 1};
  const auto profs = profiles_from_tuple(t);
  const auto target = local_profile(IntegralForm::diagonal({1, 1, 1}));
  CHECK(std::find(profs.begin(), profs.end(), target) != profs.end());

  EligibleTuple empty{3, std::nullopt, {}, 1};
  CHECK(profiles_from_tuple(empty).empty());  // the product formula fails with no -1 at 2

  for (int n = 3; n <= 10; ++n) {
    std::vector<EligibleTuple> ts;
    if (n % 2)
      ts = enumerate_tuples(n, 1, std::nullopt);
    else
      for (const auto& chi : enumerate_characters(n, 1))
        for (auto& x : enumerate_tuples(n, 1, chi)) ts.push_back(x);
    for (const auto& tp : ts)
      for (const auto& prof : profiles_from_tuple(tp)) {
        CHECK(check_product_formula(prof));
        const auto m = mass_from_profile(prof);
        CHECK(m.proper_mass == zeta_product(n) * tp.lambda_product() *
                                   (n % 2 ? pow(Rational(2), (3 - n) / 2)
                                          : pow(Rational(2), (2 - n) / 2) *
                                                abs(dirichlet_L_special(n / 2, *tp.character))));
        CHECK(m.proper_mass <= 1);
      }
  }
}

TEST_CASE("mass lower bound") {
  CHECK(min_mass_lower_bound(3) == q(1, 24));
  CHECK(min_mass_lower_bound(11) == zeta_product(11) / 16);
  // Certified lower bound on random ternary and quaternary spaces.
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> d(1, 30);
  for (int i = 0; i < 100; ++i) {
    const int n = 3 + i % 4;
    std::vector<std::int64_t> a;
    for (int j = 0; j < n; ++j) a.push_back(d(rng));
    const auto f = maximalize_form(IntegralForm::diagonal(a)).form;
    CHECK(mass_from_profile(local_profile(f)).proper_mass >= min_mass_lower_bound(n));
  }
  // From the crossover on, the bound grows with the rank.
  int crossover = 0;
  for (int n = 3; n <= 60; ++n)
    if (min_mass_lower_bound(n) > 1 && crossover == 0) crossover = n;
  CHECK(crossover == 29);
  for (int n = crossover; n + 2 <= 60; ++n) {
    CHECK(min_mass_lower_bound(n) > 1);
    CHECK(min_mass_lower_bound(n + 2) > min_mass_lower_bound(n));
  }
}
