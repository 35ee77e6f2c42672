// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qflat/local.hpp"

namespace qflat {

struct RationalSpace {
  std::vector<Rational> diagonal;

  int dim() const { return static_cast<int>(diagonal.size()); }
  bool is_positive_definite() const;
};

struct LocalEntry {
  SquareClass delta;
  int w = 1;
  bool operator==(const LocalEntry&) const = default;
  auto operator<=>(const LocalEntry&) const = default;
};

// Global invariants of a positive definite rational space. Delta is the
// squarefree kernel of the determinant, so delta_p = (-1)^{floor(n/2)} Delta
// locally. The map holds every prime in {2} u primes(Delta) u {p : w_p = -1}
// and nothing else; outside it, data is generic.
struct GlobalProfile {
  int n = 0;
  std::int64_t Delta = 1;
  std::map<std::int64_t, LocalEntry> local;
  bool definite = true;

  // Local data at any prime, generic entries filled in.
  LocalEntry at(std::int64_t p) const;
  MassType mass_type(std::int64_t p) const;
  std::string to_string() const;

  bool operator==(const GlobalProfile&) const = default;
  auto operator<=>(const GlobalProfile&) const = default;
};

// Canonical profile from (n, Delta, primes with w = -1); validates admissibility.
GlobalProfile make_profile(int n, std::int64_t Delta, const std::vector<std::int64_t>& w_minus_primes);

GlobalProfile profile_of_space(const RationalSpace& s);
bool check_product_formula(const GlobalProfile& p);

struct AssembleOptions {
  std::int64_t aux_prime_cap = 10'000;
};

RationalSpace assemble_space(const GlobalProfile& p, const AssembleOptions& opts = {});
bool spaces_equivalent(const RationalSpace& a, const RationalSpace& b);

}  // namespace qflat
