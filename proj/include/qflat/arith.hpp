// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <gmpxx.h>

namespace qflat {

using Integer = mpz_class;
using Rational = mpq_class;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a completeness or mass certificate cannot be established.
struct CertificationError : Error {
  using Error::Error;
};

struct Factor {
  std::int64_t prime;
  int exponent;
  bool operator==(const Factor&) const = default;
};

bool is_prime(std::int64_t n);
std::int64_t next_prime(std::int64_t n);  // least prime > n
std::vector<std::int64_t> primes_up_to(std::int64_t bound);

// Factorization of |n|; n must be nonzero.
std::vector<Factor> factorize(std::int64_t n);
std::vector<Factor> factorize(const Integer& n);

// p-adic valuation of a nonzero integer or rational.
int valuation(const Integer& n, std::int64_t p);
int valuation(const Rational& x, std::int64_t p);

// Sign times the squarefree kernel: squarefree_part(-12) = -3.
Integer squarefree_part(const Integer& n);
Integer squarefree_part(const Rational& x);

std::int64_t to_int64(const Integer& n);  // throws on overflow
Integer pow(const Integer& base, unsigned long e);
Rational pow(const Rational& base, long e);

// Legendre symbol (a/p) for an odd prime p.
int legendre(const Integer& a, std::int64_t p);
// Kronecker symbol (D/m) for m >= 1.
int kronecker(std::int64_t D, std::int64_t m);

// B_k with B_1 = -1/2. Memoized; safe for concurrent callers.
Rational bernoulli(int k);
// Bernoulli polynomial B_k(x).
Rational bernoulli_polynomial(int k, const Rational& x);
// zeta(1 - 2k) = -B_{2k} / 2k.
Rational zeta_special(int k);

class QuadraticCharacter {
 public:
  // The trivial character (discriminant 1).
  QuadraticCharacter() = default;
  // D must be a fundamental discriminant or 1.
  static QuadraticCharacter from_discriminant(std::int64_t D);
  static bool is_fundamental_discriminant(std::int64_t D);

  std::int64_t discriminant() const { return disc_; }
  std::int64_t conductor() const { return disc_ < 0 ? -disc_ : disc_; }
  int parity() const { return disc_ < 0 ? -1 : 1; }
  bool is_trivial() const { return disc_ == 1; }
  // Primes dividing the conductor, ascending.
  std::vector<std::int64_t> conductor_primes() const;
  int operator()(std::int64_t m) const;  // chi(m) for any integer m

  bool operator==(const QuadraticCharacter&) const = default;
  auto operator<=>(const QuadraticCharacter&) const = default;

 private:
  std::int64_t disc_ = 1;
};

// B_{k,chi} = q^{k-1} sum_{a=1}^{q} chi(a) B_k(a/q).
Rational generalized_bernoulli(int k, const QuadraticCharacter& chi);
// L(1 - k, chi) = -B_{k,chi} / k. Throws when chi(-1) != (-1)^k.
Rational dirichlet_L_special(int k, const QuadraticCharacter& chi);

std::string to_string(const Rational& x);
Rational parse_rational(const std::string& text);

}  // namespace qflat

namespace Eigen {
template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  using Real = mpq_class;
  using NonInteger = mpq_class;
  using Nested = mpq_class;
  using Literal = mpq_class;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100
  };
};
template <>
struct NumTraits<mpz_class> : GenericNumTraits<mpz_class> {
  using Real = mpz_class;
  using NonInteger = mpq_class;
  using Nested = mpz_class;
  using Literal = mpz_class;
  enum {
    IsComplex = 0,
    IsInteger = 1,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100
  };
};
}  // namespace Eigen
