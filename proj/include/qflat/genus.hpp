// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "qflat/lattice.hpp"

namespace qflat {

// Smallest prime p not dividing 2 det_H(f) and not excluded.
std::int64_t neighbor_prime(const IntegralForm& f, const std::set<std::int64_t>& exclude = {});

// One representative per isotropic line of Q mod p, first nonzero entry 1.
std::vector<VectorZ> isotropic_lines_mod_p(const IntegralForm& f, std::int64_t p);

// Kneser p-neighbor along the line, LLL-reduced.
IntegralForm p_neighbor(const IntegralForm& f, std::int64_t p, const VectorZ& line);

struct GenusRecord {
  std::vector<IntegralForm> representatives;
  std::vector<Integer> aut_orders;
  Rational accumulated_mass = 0;  // sum of 1 / |Aut|
  std::optional<Rational> target_mass;
  std::vector<std::int64_t> neighbor_primes_used;
  bool stopped_early = false;  // traversal cut off by stop_above

  bool complete() const { return target_mass && accumulated_mass == *target_mass; }
  std::size_t class_number() const { return representatives.size(); }
};

struct GenusOptions {
  int prime_cap = 25;                      // neighbor primes tried before giving up
  std::optional<std::size_t> stop_above;   // stop once more classes than this are known
  int fingerprint_bound = 2;               // theta terms compared before a full isometry test
  int stable_primes = 2;                   // untargeted mode: primes without new classes before stopping
};

// Classes in the genus of f. With a target mass, traversal adds neighbor
// primes until the accumulated mass reaches it exactly; overshoot is an error.
GenusRecord genus_representatives(const IntegralForm& f, const Rational& target_mass, const GenusOptions& opts = {});

// Target taken from the mass formula when f is maximal. Otherwise neighbor
// closure runs until opts.stable_primes consecutive primes add nothing, and the
// record carries no target.
GenusRecord genus_representatives(const IntegralForm& f, const GenusOptions& opts = {});

std::size_t class_number(const IntegralForm& f);

}  // namespace qflat
