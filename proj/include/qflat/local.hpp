// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qflat/arith.hpp"

namespace qflat {

// A place of Q: prime == 0 is the real place.
struct Place {
  std::int64_t prime = 0;

  static Place real() { return Place{0}; }
  static Place finite(std::int64_t p);
  bool is_real() const { return prime == 0; }

  bool operator==(const Place&) const = default;
  auto operator<=>(const Place&) const = default;
};

// Canonical element of Q_v^x / (Q_v^x)^2.
//   odd p: unit in {1, least nonresidue}, val_parity in {0, 1}
//   p = 2: unit in {1, 3, 5, 7},          val_parity in {0, 1}
//   real:  unit in {1, -1},               val_parity = 0
struct SquareClass {
  Place place;
  std::int64_t unit = 1;
  int val_parity = 0;

  bool is_square() const { return unit == 1 && val_parity == 0; }
  Rational representative() const;
  std::string to_string() const;

  bool operator==(const SquareClass&) const = default;
  auto operator<=>(const SquareClass&) const = default;
};

std::int64_t least_nonresidue(std::int64_t p);
SquareClass squareclass_of(const Rational& t, Place v);
SquareClass operator*(const SquareClass& a, const SquareClass& b);
// All classes at a place: 4 for odd p, 8 for p = 2, 2 for the real place.
std::vector<SquareClass> all_squareclasses(Place v);

int hilbert_symbol(const Rational& a, const Rational& b, Place v);
int hilbert_symbol(const SquareClass& a, const SquareClass& b);

struct LocalStdInvariants {
  Place place;
  int n = 0;
  SquareClass d;
  int c = 1;
  bool operator==(const LocalStdInvariants&) const = default;
};

LocalStdInvariants std_invariants_of_diagonal(std::span<const Rational> coeffs, Place v);
LocalStdInvariants direct_sum_invariants(const LocalStdInvariants& a, const LocalStdInvariants& b);
// Dimension of the maximal anisotropic subspace. Throws if no space has these invariants.
int anisotropic_dimension(const LocalStdInvariants& inv);

enum class MassType { Generic, OddI, OddIIplus, OddIIminus, EvenI, EvenII, EvenIII };
std::string to_string(MassType t);

struct GHYLocalData {
  Place place;
  int n = 0;
  SquareClass delta;
  int w = 1;
  MassType mass_type = MassType::Generic;
  bool operator==(const GHYLocalData&) const = default;
};

// Q_p(sqrt(delta)) ramified over Q_p; false for square delta.
bool is_ramified_quadratic_ext(const SquareClass& delta);
MassType classify_mass_type(int n, const SquareClass& delta, int w);
// Hasse invariant of the reference space of dimension n with GHY data (delta, w = +1).
int reference_hasse(int n, const SquareClass& delta);
// Whether (n, delta, w) is realized by some nondegenerate space over Q_p.
bool ghy_admissible(int n, const SquareClass& delta, int w);

GHYLocalData ghy_from_std(const LocalStdInvariants& inv);
LocalStdInvariants std_from_ghy(const GHYLocalData& data);

}  // namespace qflat
