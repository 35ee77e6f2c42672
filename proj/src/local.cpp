// SPDX-License-Identifier: Apache-2.0
#include "qflat/local.hpp"

#include <sstream>

namespace qflat {

Place Place::finite(std::int64_t p) {
  if (!is_prime(p)) throw Error("Place::finite: not a prime: " + std::to_string(p));
  return Place{p};
}

std::int64_t least_nonresidue(std::int64_t p) {
  if (p == 2) throw Error("least_nonresidue: p must be odd");
  for (std::int64_t a = 2;; ++a)
    if (legendre(Integer(static_cast<long>(a)), p) == -1) return a;
}

Rational SquareClass::representative() const {
  Rational r = static_cast<long>(unit);
  if (val_parity) r *= static_cast<long>(place.prime);
  return r;
}

std::string SquareClass::to_string() const {
  std::ostringstream os;
  if (place.is_real()) {
    os << (unit > 0 ? "+" : "-");
  } else {
    os << unit;
    if (val_parity) os << "*" << place.prime;
  }
  return os.str();
}

SquareClass squareclass_of(const Rational& t, Place v) {
  if (t == 0) throw Error("squareclass_of: zero");
  SquareClass out{v, 1, 0};
  if (v.is_real()) {
    out.unit = t > 0 ? 1 : -1;
    return out;
  }
  const std::int64_t p = v.prime;
  const int e = valuation(t, p);
  out.val_parity = ((e % 2) + 2) % 2;
  const Rational u = t / pow(Rational(static_cast<long>(p)), e);
  // num/den is congruent to num*den up to a square unit.
  const Integer m = u.get_num() * u.get_den();
  if (p == 2) {
    Integer r;
    mpz_fdiv_r_ui(r.get_mpz_t(), m.get_mpz_t(), 8);
    out.unit = r.get_si();
  } else {
    out.unit = legendre(m, p) == 1 ? 1 : least_nonresidue(p);
  }
  return out;
}

SquareClass operator*(const SquareClass& a, const SquareClass& b) {
  if (a.place != b.place) throw Error("squareclass product: place mismatch");
  return squareclass_of(a.representative() * b.representative(), a.place);
}

std::vector<SquareClass> all_squareclasses(Place v) {
  if (v.is_real()) return {{v, 1, 0}, {v, -1, 0}};
  std::vector<SquareClass> out;
  std::vector<std::int64_t> units;
  if (v.prime == 2)
    units = {1, 3, 5, 7};
  else
    units = {1, least_nonresidue(v.prime)};
  for (int e = 0; e < 2; ++e)
    for (auto u : units) out.push_back({v, u, e});
  return out;
}

int hilbert_symbol(const SquareClass& a, const SquareClass& b) {
  if (a.place != b.place) throw Error("hilbert_symbol: place mismatch");
  if (a.place.is_real()) return (a.unit < 0 && b.unit < 0) ? -1 : 1;
  const std::int64_t p = a.place.prime;
  const int al = a.val_parity, be = b.val_parity;
  const std::int64_t u = a.unit, v = b.unit;
  if (p == 2) {
    auto eps = [](std::int64_t x) { return ((x - 1) / 2) % 2; };
    auto omega = [](std::int64_t x) { return ((x * x - 1) / 8) % 2; };
    const auto e = eps(u) * eps(v) + al * omega(v) + be * omega(u);
    return e % 2 ? -1 : 1;
  }
  int s = 1;
  if (al && be && ((p - 1) / 2) % 2) s = -s;
  if (be && u != 1) s = -s;  // (u/p) = -1 exactly for the nonresidue unit
  if (al && v != 1) s = -s;
  return s;
}

int hilbert_symbol(const Rational& a, const Rational& b, Place v) {
  return hilbert_symbol(squareclass_of(a, v), squareclass_of(b, v));
}

LocalStdInvariants std_invariants_of_diagonal(std::span<const Rational> coeffs, Place v) {
  if (coeffs.empty()) throw Error("std_invariants_of_diagonal: empty list");
  std::vector<SquareClass> cls;
  cls.reserve(coeffs.size());
  for (const auto& a : coeffs) cls.push_back(squareclass_of(a, v));
  LocalStdInvariants out{v, static_cast<int>(coeffs.size()), SquareClass{v, 1, 0}, 1};
  for (std::size_t i = 0; i < cls.size(); ++i) {
    for (std::size_t j = i + 1; j < cls.size(); ++j) out.c *= hilbert_symbol(cls[i], cls[j]);
    out.d = out.d * cls[i];
  }
  return out;
}

LocalStdInvariants direct_sum_invariants(const LocalStdInvariants& a, const LocalStdInvariants& b) {
  if (a.place != b.place) throw Error("direct_sum_invariants: place mismatch");
  return {a.place, a.n + b.n, a.d * b.d, a.c * b.c * hilbert_symbol(a.d, b.d)};
}

std::string to_string(MassType t) {
  switch (t) {
    case MassType::Generic: return "Generic";
    case MassType::OddI: return "I";
    case MassType::OddIIplus: return "II+";
    case MassType::OddIIminus: return "II-";
    case MassType::EvenI: return "I";
    case MassType::EvenII: return "II";
    case MassType::EvenIII: return "III";
  }
  return "?";
}

bool is_ramified_quadratic_ext(const SquareClass& delta) {
  if (delta.place.is_real()) throw Error("is_ramified_quadratic_ext: finite place required");
  if (delta.is_square()) return false;
  if (delta.place.prime == 2) return !(delta.val_parity == 0 && delta.unit == 5);
  return delta.val_parity == 1;
}

namespace {

SquareClass minus_one(Place v) { return squareclass_of(Rational(-1), v); }

int sign_pow(int r) { return r % 2 ? -1 : 1; }

}  // namespace

int reference_hasse(int n, const SquareClass& delta) {
  const Place v = delta.place;
  const int hm = hilbert_symbol(minus_one(v), minus_one(v));
  if (n % 2) {
    const int r = (n - 1) / 2;
    const SquareClass s = squareclass_of(Rational(sign_pow(r)), v);
    return ((r / 2) % 2 ? hm : 1) * hilbert_symbol(s, delta);
  }
  const int r = n / 2;
  const SquareClass s = squareclass_of(Rational(sign_pow(r - 1)), v);
  return (((r - 1) / 2) % 2 ? hm : 1) * hilbert_symbol(s, minus_one(v) * delta);
}

bool ghy_admissible(int n, const SquareClass& delta, int w) {
  if (n < 1 || (w != 1 && w != -1)) return false;
  if (n == 1) return w == 1;
  if (n == 2 && delta.is_square()) return w == 1;
  return true;
}

MassType classify_mass_type(int n, const SquareClass& delta, int w) {
  if (n % 2) {
    if (delta.val_parity == 0) return w == 1 ? MassType::Generic : MassType::OddI;
    return w == 1 ? MassType::OddIIplus : MassType::OddIIminus;
  }
  if (delta.is_square()) return w == 1 ? MassType::Generic : MassType::EvenI;
  if (is_ramified_quadratic_ext(delta)) return MassType::EvenIII;
  return w == 1 ? MassType::Generic : MassType::EvenII;
}

int anisotropic_dimension(const LocalStdInvariants& inv) {
  if (inv.place.is_real()) throw Error("anisotropic_dimension: finite place required");
  const GHYLocalData g = ghy_from_std(inv);
  if (inv.n % 2) return g.w == 1 ? 1 : 3;
  if (!g.delta.is_square()) return 2;
  return g.w == 1 ? 0 : 4;
}

GHYLocalData ghy_from_std(const LocalStdInvariants& inv) {
  if (inv.place.is_real()) throw Error("ghy_from_std: finite place required");
  const SquareClass sign = squareclass_of(Rational(sign_pow(inv.n / 2)), inv.place);
  GHYLocalData out;
  out.place = inv.place;
  out.n = inv.n;
  out.delta = sign * inv.d;
  out.w = inv.c * reference_hasse(inv.n, out.delta);
  if (!ghy_admissible(inv.n, out.delta, out.w))
    throw Error("ghy_from_std: no quadratic space has these invariants");
  out.mass_type = classify_mass_type(inv.n, out.delta, out.w);
  return out;
}

LocalStdInvariants std_from_ghy(const GHYLocalData& data) {
  if (data.place.is_real() || data.delta.place != data.place)
    throw Error("std_from_ghy: finite place required");
  if (!ghy_admissible(data.n, data.delta, data.w))
    throw Error("std_from_ghy: inconsistent (delta, w) for dimension " + std::to_string(data.n));
  if (classify_mass_type(data.n, data.delta, data.w) != data.mass_type)
    throw Error("std_from_ghy: mass type does not match (delta, w)");
  const SquareClass sign = squareclass_of(Rational(sign_pow(data.n / 2)), data.place);
  return {data.place, data.n, sign * data.delta, data.w * reference_hasse(data.n, data.delta)};
}

}  // namespace qflat
