// SPDX-License-Identifier: Apache-2.0
#include "qflat/mass.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <tuple>

#include "qflat/interval.hpp"

namespace qflat {

namespace {

Rational power(std::int64_t p, int e) { return Rational(pow(Integer(static_cast<long>(p)), static_cast<unsigned long>(e))); }

Rational canon(Rational x) {
  x.canonicalize();
  return x;
}

Rational pow2(int e) { return pow(Rational(2), e); }

std::int64_t fundamental_discriminant(std::int64_t m) {
  const std::int64_t r = ((m % 4) + 4) % 4;
  return r == 1 ? m : 4 * m;
}

// K (2 pi)^r zeta(r) / (Gamma(r) zeta(2r))
Expr lemma_constant(const Rational& K, int r) {
  return Expr::constant(K) * (Expr::constant(2) * Expr::pi()).pow(r) * Expr::zeta(r) /
         (Expr::gamma(r) * Expr::zeta(2 * r));
}

Integer floor_of(const Rational& x) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

std::vector<MassType> nongeneric_types(int n) {
  if (n % 2) return {MassType::OddI, MassType::OddIIplus, MassType::OddIIminus};
  return {MassType::EvenI, MassType::EvenII, MassType::EvenIII};
}

}  // namespace

Rational lambda_factor(std::int64_t p, int n, MassType t) {
  if (n < 3) throw Error("lambda_factor: rank must be at least 3");
  if (!is_prime(p)) throw Error("lambda_factor: p must be prime");
  const bool odd = n % 2;
  const Rational P(static_cast<long>(p));
  switch (t) {
    case MassType::Generic:
      return 1;
    case MassType::OddI:
    case MassType::OddIIplus:
    case MassType::OddIIminus:
      if (!odd) throw Error("lambda_factor: odd mass type for even rank");
      if (t == MassType::OddI) return canon((power(p, n - 1) - 1) / (2 * (P + 1)));
      return canon((power(p, (n - 1) / 2) + (t == MassType::OddIIplus ? 1 : -1)) / 2);
    case MassType::EvenI:
    case MassType::EvenII:
    case MassType::EvenIII: {
      if (odd) throw Error("lambda_factor: even mass type for odd rank");
      const int r = n / 2;
      if (t == MassType::EvenIII) return Rational(1, 2);
      const int s = t == MassType::EvenI ? -1 : 1;
      return canon((power(p, r - 1) + s) * (power(p, r) + s) / (2 * (P + 1)));
    }
  }
  throw Error("lambda_factor: unknown mass type");
}

Rational zeta_product(int n) {
  Rational out = 1;
  for (int k = 1; k <= (n - 1) / 2; ++k) out *= abs(zeta_special(k));
  return canon(out);
}

QuadraticCharacter character_of_profile(const GlobalProfile& prof) {
  if (prof.n % 2) throw Error("character_of_profile: rank must be even");
  const std::int64_t m = (prof.n / 2 % 2 ? -1 : 1) * prof.Delta;
  if (m == 1) return QuadraticCharacter();
  return QuadraticCharacter::from_discriminant(fundamental_discriminant(m));
}

GenusMassStatement mass_from_profile(const GlobalProfile& prof, const std::optional<QuadraticCharacter>& chi) {
  const int n = prof.n;
  if (n < 3) throw Error("mass_from_profile: rank must be at least 3");
  if (!check_product_formula(prof)) throw Error("mass_from_profile: profile violates the product formula");
  GenusMassStatement out{prof, std::nullopt, 0};
  Rational m = zeta_product(n);
  if (n % 2) {
    if (chi) throw Error("mass_from_profile: no character for odd rank");
    m *= pow2((3 - n) / 2);
  } else {
    const QuadraticCharacter own = character_of_profile(prof);
    if (chi && *chi != own) throw Error("mass_from_profile: character does not match the profile");
    m *= pow2((2 - n) / 2) * abs(dirichlet_L_special(n / 2, own));
    out.character = own;
  }
  for (const auto& [p, e] : prof.local) m *= lambda_factor(p, n, prof.mass_type(p));
  out.proper_mass = canon(m);
  return out;
}

std::int64_t prime_power_cutoff(const Rational& K, int r, int precision_bits) {
  if (K <= 0 || r < 2) throw Error("prime_power_cutoff: need K > 0 and r >= 2");
  const RealInterval x = eval_interval(lemma_constant(K, r).pow(2).root(2 * r - 1), precision_bits);
  return to_int64(floor_of(x.upper()));
}

bool divisor_condition_holds(std::int64_t q, const Rational& K, int r, int precision_bits) {
  if (q < 1) throw Error("divisor_condition_holds: q must be positive");
  if (q == 1) return false;
  // Each p^{e(r-1/2)}/2 exceeds 1, so q' = q maximizes the left side; compare
  // q^{2r-1} against 4^t (K (2 pi)^r zeta(r) / (2 Gamma(r) zeta(2r)))^2.
  static std::mutex mu;
  static std::map<std::tuple<std::string, int, int>, Rational> memo;
  Rational upper;
  {
    const auto key = std::make_tuple(to_string(K), r, precision_bits);
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(key);
    if (it == memo.end()) {
      const auto half = Expr::constant(Rational(1, 2)) * lemma_constant(K, r);
      it = memo.emplace(key, eval_interval(half.pow(2), precision_bits).upper()).first;
    }
    upper = it->second;
  }
  const int t = static_cast<int>(factorize(q).size());
  return Rational(pow(Integer(static_cast<long>(q)), static_cast<unsigned long>(2 * r - 1))) > pow(Rational(4), t) * upper;
}

Rational twist_bound_rhs(int n, const Rational& B) {
  if (n < 4 || n % 2) throw Error("twist_bound_rhs: rank must be even and at least 4");
  Rational out = B * pow2((n - 2) / 2) / zeta_product(n);
  if (n == 4) out *= 2;
  return canon(out);
}

std::vector<QuadraticCharacter> enumerate_characters(int n, const Rational& B) {
  if (n < 4 || n % 2) throw Error("enumerate_characters: rank must be even and at least 4");
  const int r = n / 2;
  const int sign = r % 2 ? -1 : 1;
  const Rational K = twist_bound_rhs(n, B);
  const std::int64_t cutoff = prime_power_cutoff(K, r);

  auto passes = [&](const QuadraticCharacter& chi) {
    const int t = static_cast<int>(chi.conductor_primes().size());
    return abs(dirichlet_L_special(r, chi)) / pow2(t) <= K;
  };

  std::vector<QuadraticCharacter> out;
  if (sign == 1 && passes(QuadraticCharacter())) out.push_back(QuadraticCharacter());

  // Odd squarefree parts m, grown prime by prime; the divisor condition is
  // inherited by multiples, so a failing m prunes its subtree.
  std::vector<std::int64_t> odd_primes;
  for (auto p : primes_up_to(cutoff))
    if (p > 2) odd_primes.push_back(p);
  std::vector<std::int64_t> parts{1};
  auto grow = [&](auto&& self, std::int64_t m, std::size_t from) -> void {
    for (std::size_t i = from; i < odd_primes.size(); ++i) {
      const std::int64_t p = odd_primes[i];
      if (m > INT64_MAX / p) break;
      const std::int64_t next = m * p;
      if (divisor_condition_holds(next, K, r)) break;  // p^{r-1/2} grows with p
      parts.push_back(next);
      self(self, next, i + 1);
    }
  };
  grow(grow, 1, 0);

  for (auto m : parts)
    for (int a : {0, 2, 3}) {
      const std::int64_t two = std::int64_t{1} << a;
      if (a && two > cutoff) continue;
      const std::int64_t sm = sign * m;
      const std::int64_t res = ((sm % 4) + 4) % 4;
      if (a == 0 && res != 1) continue;
      if (a == 2 && res != 3) continue;
      const std::int64_t q = two * m;
      if (q == 1) continue;
      if (divisor_condition_holds(q, K, r)) continue;
      std::int64_t D = sign * q;
      if (a == 3 && !QuadraticCharacter::is_fundamental_discriminant(D)) continue;
      const auto chi = QuadraticCharacter::from_discriminant(D);
      if (passes(chi)) out.push_back(chi);
    }
  std::sort(out.begin(), out.end(), [](const QuadraticCharacter& a, const QuadraticCharacter& b) {
    if (a.conductor() != b.conductor()) return a.conductor() < b.conductor();
    return a.discriminant() < b.discriminant();
  });
  return out;
}

LambdaBounds bound_Bpp(int n, const std::optional<QuadraticCharacter>& chi, const Rational& B) {
  if (n < 3) throw Error("bound_Bpp: rank must be at least 3");
  if ((n % 2 == 0) != chi.has_value()) throw Error("bound_Bpp: a character is required exactly for even rank");
  Rational Bpp;
  if (n % 2)
    Bpp = B * pow2((n - 3) / 2) / zeta_product(n);
  else
    Bpp = B * pow2((n - 2) / 2) / (abs(dirichlet_L_special(n / 2, *chi)) * zeta_product(n));
  return {canon(Bpp), Rational(n <= 4 ? 2 : 1)};
}

Rational EligibleTuple::lambda_product() const {
  Rational out = 1;
  for (const auto& [p, t] : assignments) out *= lambda_factor(p, n, t);
  return canon(out);
}

std::string EligibleTuple::to_string() const {
  std::ostringstream os;
  os << "n=" << n;
  if (character) os << " D=" << character->discriminant();
  os << " {";
  bool first = true;
  for (const auto& [p, t] : assignments) {
    os << (first ? "" : ", ") << p << ":" << qflat::to_string(t);
    first = false;
  }
  os << "}";
  return os.str();
}

std::vector<EligibleTuple> enumerate_tuples(int n, const Rational& B, const std::optional<QuadraticCharacter>& chi) {
  const Rational Bpp = bound_Bpp(n, chi, B).Bpp;
  EligibleTuple base{n, chi, {}, B};
  if (chi)
    for (auto p : chi->conductor_primes()) base.assignments[p] = MassType::EvenIII;
  std::vector<EligibleTuple> out;
  const Rational start = base.lambda_product();
  if (start > Bpp) return out;

  // Smallest non-generic, non-III factor at p; increasing in p.
  auto lambda_min = [n](std::int64_t p) {
    return lambda_factor(p, n, n % 2 ? MassType::OddIIminus : MassType::EvenI);
  };
  auto allowed = [&](std::int64_t p) -> std::vector<MassType> {
    if (n % 2) return nongeneric_types(n);
    if (base.assignments.count(p)) return {};
    return {(*chi)(p) == 1 ? MassType::EvenI : MassType::EvenII};
  };

  auto dfs = [&](auto&& self, EligibleTuple& cur, const Rational& prod, std::int64_t p) -> void {
    out.push_back(cur);
    for (std::int64_t q = p; ; q = next_prime(q)) {
      if (prod * lambda_min(q) > Bpp) break;
      for (MassType t : allowed(q)) {
        const Rational next = canon(prod * lambda_factor(q, n, t));
        if (next > Bpp) continue;
        cur.assignments[q] = t;
        self(self, cur, next, next_prime(q));
        cur.assignments.erase(q);
      }
    }
  };
  EligibleTuple cur = base;
  dfs(dfs, cur, start, 2);
  return out;
}

std::vector<GlobalProfile> profiles_from_tuple(const EligibleTuple& t) {
  const int n = t.n;
  std::vector<GlobalProfile> out;
  auto matches = [&](const GlobalProfile& prof) {
    for (const auto& [p, e] : prof.local) {
      const auto it = t.assignments.find(p);
      const MassType want = it == t.assignments.end() ? MassType::Generic : it->second;
      if (prof.mass_type(p) != want) return false;
    }
    for (const auto& [p, type] : t.assignments)
      if (prof.mass_type(p) != type) return false;
    return true;
  };
  if (n % 2) {
    std::int64_t Delta = 1;
    std::vector<std::int64_t> wm;
    for (const auto& [p, type] : t.assignments) {
      if (type == MassType::OddIIplus || type == MassType::OddIIminus) Delta *= p;
      if (type == MassType::OddI || type == MassType::OddIIminus) wm.push_back(p);
    }
    const auto prof = make_profile(n, Delta, wm);
    if (check_product_formula(prof)) {
      if (!matches(prof)) throw Error("profiles_from_tuple: profile does not realize " + t.to_string());
      out.push_back(prof);
    }
    return out;
  }
  if (!t.character) throw Error("profiles_from_tuple: even rank needs a character");
  const std::int64_t D = t.character->discriminant();
  const std::int64_t Delta = D == 1 ? 1 : to_int64(abs(squarefree_part(Integer(static_cast<long>(D)))));
  std::vector<std::int64_t> wm, ramified;
  for (const auto& [p, type] : t.assignments) {
    if (type == MassType::EvenIII)
      ramified.push_back(p);
    else
      wm.push_back(p);
  }
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << ramified.size()); ++mask) {
    std::vector<std::int64_t> w = wm;
    for (std::size_t i = 0; i < ramified.size(); ++i)
      if (mask >> i & 1) w.push_back(ramified[i]);
    std::sort(w.begin(), w.end());
    const auto prof = make_profile(n, Delta, w);
    if (!check_product_formula(prof)) continue;
    if (!matches(prof)) throw Error("profiles_from_tuple: profile does not realize " + t.to_string());
    if (character_of_profile(prof) != *t.character)
      throw Error("profiles_from_tuple: character mismatch for " + t.to_string());
    out.push_back(prof);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Rational min_mass_lower_bound(int n) {
  if (n < 3) throw Error("min_mass_lower_bound: rank must be at least 3");
  if (n % 2) {
    Rational out = pow2((3 - n) / 2) * zeta_product(n);
    if (n == 3) out /= 2;
    return canon(out);
  }
  // |L(1-r, chi)| / 2^t >= 2 Gamma(r) zeta(2r) / ((2 pi)^r zeta(r)),
  // bounded below with pi <= 22/7, zeta(r) <= 5/3 and zeta(2r) >= 1.
  const int r = n / 2;
  Rational fact = 1;
  for (int i = 2; i < r; ++i) fact *= i;
  const Rational twist = canon(Rational(3, 5) * 2 * fact / pow(Rational(44, 7), r));
  Rational out = pow2((2 - n) / 2) * zeta_product(n) * twist;
  if (n == 4) out /= 2;
  return canon(out);
}

}  // namespace qflat
