// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qflat/space.hpp"

namespace qflat {

// Local adjustment factor lambda_p of the mass formula.
Rational lambda_factor(std::int64_t p, int n, MassType t);

// prod_{k=1}^{floor((n-1)/2)} |zeta(1 - 2k)|
Rational zeta_product(int n);

// Character of (-1)^{n/2} Delta for even n (trivial when that is a square).
QuadraticCharacter character_of_profile(const GlobalProfile& prof);

struct GenusMassStatement {
  GlobalProfile profile;
  std::optional<QuadraticCharacter> character;
  Rational proper_mass;  // Mass+ = 2 Mass
};

// Exact proper mass of the genus of maximal lattices on the space with this
// profile. For even n a supplied character must match the profile.
GenusMassStatement mass_from_profile(const GlobalProfile& prof,
                                     const std::optional<QuadraticCharacter>& chi = std::nullopt);

// Largest N such that some prime power <= N may divide an eligible conductor;
// every prime power above N is certifiably excluded.
std::int64_t prime_power_cutoff(const Rational& K, int r, int precision_bits = 128);
// True when q is certifiably too large: |L(1-r, chi)| / 2^t > K for every chi of conductor q.
bool divisor_condition_holds(std::int64_t q, const Rational& K, int r, int precision_bits = 128);

// Upper bound for |L(1 - n/2, chi)| / 2^t forced by h <= B.
Rational twist_bound_rhs(int n, const Rational& B);

// Characters chi with chi(-1) = (-1)^{n/2} passing the exact twist bound, by discriminant.
std::vector<QuadraticCharacter> enumerate_characters(int n, const Rational& B);

struct LambdaBounds {
  Rational Bpp;      // bound on prod_p lambda_p, already multiplied by B
  Rational epsilon;  // 2 for n <= 4, else 1
};
LambdaBounds bound_Bpp(int n, const std::optional<QuadraticCharacter>& chi, const Rational& B);

struct EligibleTuple {
  int n = 0;
  std::optional<QuadraticCharacter> character;
  std::map<std::int64_t, MassType> assignments;  // Generic entries omitted
  Rational bound_B;

  Rational lambda_product() const;
  std::string to_string() const;
};

// All assignments with prod lambda <= B'' (conductor primes fixed to III),
// primes ascending in depth-first order.
std::vector<EligibleTuple> enumerate_tuples(int n, const Rational& B,
                                            const std::optional<QuadraticCharacter>& chi);

// Profiles realizing the tuple that satisfy the product formula.
std::vector<GlobalProfile> profiles_from_tuple(const EligibleTuple& t);

// Certified lower bound for Mass+ over all rank-n spaces.
Rational min_mass_lower_bound(int n);

}  // namespace qflat
