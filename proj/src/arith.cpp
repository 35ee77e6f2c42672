// SPDX-License-Identifier: Apache-2.0
#include "qflat/arith.hpp"

#include <algorithm>
#include <limits>
#include <mutex>

namespace qflat {

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::int64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

std::int64_t next_prime(std::int64_t n) {
  std::int64_t p = std::max<std::int64_t>(n + 1, 2);
  while (!is_prime(p)) ++p;
  return p;
}

std::vector<std::int64_t> primes_up_to(std::int64_t bound) {
  std::vector<std::int64_t> out;
  if (bound < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(bound) + 1, false);
  for (std::int64_t i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::int64_t j = i * i; j <= bound; j += i) composite[j] = true;
  }
  return out;
}

std::vector<Factor> factorize(std::int64_t n) {
  if (n == 0) throw Error("factorize: zero");
  return factorize(Integer(static_cast<long>(n)));
}

std::vector<Factor> factorize(const Integer& n) {
  if (n == 0) throw Error("factorize: zero");
  Integer m = abs(n);
  std::vector<Factor> out;
  auto strip = [&](std::int64_t p) {
    int e = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(p))) {
      m /= static_cast<unsigned long>(p);
      ++e;
    }
    if (e) out.push_back({p, e});
  };
  strip(2);
  for (std::int64_t d = 3; m > 1; d += 2) {
    if (Integer(static_cast<long>(d)) * d > m) {
      out.push_back({to_int64(m), 1});
      break;
    }
    if (d > 100'000'000) throw Error("factorize: cofactor too large");
    strip(d);
  }
  return out;
}

int valuation(const Integer& n, std::int64_t p) {
  if (n == 0) throw Error("valuation: zero");
  Integer m = n;
  int e = 0;
  while (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(p))) {
    m /= static_cast<unsigned long>(p);
    ++e;
  }
  return e;
}

int valuation(const Rational& x, std::int64_t p) {
  return valuation(x.get_num(), p) - valuation(x.get_den(), p);
}

Integer squarefree_part(const Integer& n) {
  if (n == 0) throw Error("squarefree_part: zero");
  Integer out = n < 0 ? -1 : 1;
  for (const auto& f : factorize(n))
    if (f.exponent % 2) out *= static_cast<long>(f.prime);
  return out;
}

Integer squarefree_part(const Rational& x) {
  return squarefree_part(Integer(x.get_num() * x.get_den()));
}

std::int64_t to_int64(const Integer& n) {
  if (!n.fits_slong_p()) throw Error("integer overflow: " + n.get_str());
  return n.get_si();
}

Integer pow(const Integer& base, unsigned long e) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

Rational pow(const Rational& base, long e) {
  if (e < 0) {
    if (base == 0) throw Error("pow: zero to negative power");
    return pow(Rational(1) / base, -e);
  }
  const auto ue = static_cast<unsigned long>(e);
  Rational out(pow(Integer(base.get_num()), ue), pow(Integer(base.get_den()), ue));
  out.canonicalize();
  return out;
}

int legendre(const Integer& a, std::int64_t p) {
  Integer pp = static_cast<long>(p);
  return mpz_legendre(a.get_mpz_t(), pp.get_mpz_t());
}

namespace {

int jacobi(std::int64_t a, std::int64_t m) {
  // m odd positive
  a %= m;
  if (a < 0) a += m;
  int result = 1;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      std::int64_t r = m % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, m);
    if (a % 4 == 3 && m % 4 == 3) result = -result;
    a %= m;
  }
  return m == 1 ? result : 0;
}

}  // namespace

int kronecker(std::int64_t D, std::int64_t m) {
  if (m < 1) throw Error("kronecker: m must be positive");
  int result = 1;
  while (m % 2 == 0) {
    m /= 2;
    if (D % 2 == 0) return 0;
    std::int64_t r = ((D % 8) + 8) % 8;
    if (r == 3 || r == 5) result = -result;
  }
  if (m == 1) return result;
  return result * jacobi(D, m);
}

Rational bernoulli(int k) {
  if (k < 0) throw Error("bernoulli: negative index");
  static std::mutex mu;
  static std::vector<Rational> table{Rational(1)};
  std::lock_guard<std::mutex> lock(mu);
  while (static_cast<int>(table.size()) <= k) {
    const int m = static_cast<int>(table.size());
    // sum_{j<=m} C(m+1, j) B_j = 0
    Rational acc = 0;
    Integer binom = 1;  // C(m+1, j)
    for (int j = 0; j < m; ++j) {
      acc += binom * table[j];
      binom = binom * (m + 1 - j) / (j + 1);
    }
    Rational b = -acc / (m + 1);
    b.canonicalize();
    table.push_back(b);
  }
  return table[k];
}

Rational bernoulli_polynomial(int k, const Rational& x) {
  Rational acc = 0;
  Integer binom = 1;
  for (int j = 0; j <= k; ++j) {
    acc += binom * bernoulli(j) * pow(x, k - j);
    binom = binom * (k - j) / (j + 1);
  }
  acc.canonicalize();
  return acc;
}

Rational zeta_special(int k) {
  if (k < 1) throw Error("zeta_special: k must be positive");
  Rational out = -bernoulli(2 * k) / (2 * k);
  out.canonicalize();
  return out;
}

bool QuadraticCharacter::is_fundamental_discriminant(std::int64_t D) {
  if (D == 0 || D == 1) return false;
  auto squarefree = [](std::int64_t m) {
    for (const auto& f : factorize(m))
      if (f.exponent > 1) return false;
    return true;
  };
  const std::int64_t r = ((D % 4) + 4) % 4;
  if (r == 1) return squarefree(D);
  if (r != 0) return false;
  const std::int64_t m = D / 4;
  const std::int64_t s = ((m % 4) + 4) % 4;
  return (s == 2 || s == 3) && squarefree(m);
}

QuadraticCharacter QuadraticCharacter::from_discriminant(std::int64_t D) {
  if (D != 1 && !is_fundamental_discriminant(D))
    throw Error("not a fundamental discriminant: " + std::to_string(D));
  QuadraticCharacter chi;
  chi.disc_ = D;
  return chi;
}

std::vector<std::int64_t> QuadraticCharacter::conductor_primes() const {
  std::vector<std::int64_t> out;
  if (disc_ == 1) return out;
  for (const auto& f : factorize(disc_)) out.push_back(f.prime);
  return out;
}

int QuadraticCharacter::operator()(std::int64_t m) const {
  if (disc_ == 1) return 1;
  if (m == 0) return 0;
  if (m < 0) return parity() * kronecker(disc_, -m);
  return kronecker(disc_, m);
}

Rational generalized_bernoulli(int k, const QuadraticCharacter& chi) {
  if (k < 1) throw Error("generalized_bernoulli: k must be positive");
  const std::int64_t q = chi.conductor();
  // Power sums S_m = sum_a chi(a) a^m turn the polynomial sum into
  // sum_j C(k,j) B_j q^{j-1} S_{k-j}.
  std::vector<Integer> S(k + 1, Integer(0));
  for (std::int64_t a = 1; a <= q; ++a) {
    const int c = chi(a);
    if (c == 0) continue;
    Integer power = 1;
    for (int m = 0; m <= k; ++m) {
      if (c > 0)
        S[m] += power;
      else
        S[m] -= power;
      power *= static_cast<long>(a);
    }
  }
  Rational acc = 0;
  Integer binom = 1;
  for (int j = 0; j <= k; ++j) {
    acc += Rational(binom * S[k - j]) * bernoulli(j) * pow(Rational(static_cast<long>(q)), j - 1);
    binom = binom * (k - j) / (j + 1);
  }
  acc.canonicalize();
  return acc;
}

Rational dirichlet_L_special(int k, const QuadraticCharacter& chi) {
  if (k < 1) throw Error("dirichlet_L_special: k must be positive");
  if (chi.parity() != (k % 2 == 0 ? 1 : -1))
    throw Error("dirichlet_L_special: parity of chi does not match k");
  Rational out = -generalized_bernoulli(k, chi) / k;
  out.canonicalize();
  return out;
}

std::string to_string(const Rational& x) { return x.get_str(); }

Rational parse_rational(const std::string& text) {
  Rational out;
  if (out.set_str(text, 10) != 0) throw Error("cannot parse rational: " + text);
  if (out.get_den() == 0) throw Error("zero denominator: " + text);
  out.canonicalize();
  return out;
}

}  // namespace qflat
