// SPDX-License-Identifier: Apache-2.0
#include "qflat/space.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace qflat {

namespace {

int sign_pow(int r) { return r % 2 ? -1 : 1; }

std::set<std::int64_t> primes_of(const Integer& n) {
  std::set<std::int64_t> out;
  if (n == 0) return out;
  for (const auto& f : factorize(n)) out.insert(f.prime);
  return out;
}

void check_squarefree_positive(std::int64_t Delta) {
  if (Delta < 1) throw Error("profile: Delta must be positive");
  for (const auto& f : factorize(Delta))
    if (f.exponent > 1) throw Error("profile: Delta must be squarefree");
}

}  // namespace

bool RationalSpace::is_positive_definite() const {
  return !diagonal.empty() &&
         std::all_of(diagonal.begin(), diagonal.end(), [](const Rational& a) { return a > 0; });
}

LocalEntry GlobalProfile::at(std::int64_t p) const {
  auto it = local.find(p);
  if (it != local.end()) return it->second;
  const Rational delta = Rational(sign_pow(n / 2)) * Rational(static_cast<long>(Delta));
  return {squareclass_of(delta, Place::finite(p)), 1};
}

MassType GlobalProfile::mass_type(std::int64_t p) const {
  const LocalEntry e = at(p);
  return classify_mass_type(n, e.delta, e.w);
}

std::string GlobalProfile::to_string() const {
  std::ostringstream os;
  os << "n=" << n << " Delta=" << Delta;
  for (const auto& [p, e] : local)
    os << " [" << p << ": delta=" << e.delta.to_string() << " w=" << (e.w > 0 ? "+" : "-") << " "
       << qflat::to_string(classify_mass_type(n, e.delta, e.w)) << "]";
  return os.str();
}

GlobalProfile make_profile(int n, std::int64_t Delta, const std::vector<std::int64_t>& w_minus_primes) {
  check_squarefree_positive(Delta);
  GlobalProfile out;
  out.n = n;
  out.Delta = Delta;
  std::set<std::int64_t> keys = primes_of(Integer(static_cast<long>(Delta)));
  keys.insert(2);
  for (auto p : w_minus_primes) keys.insert(p);
  const Rational delta = Rational(sign_pow(n / 2)) * Rational(static_cast<long>(Delta));
  for (auto p : keys) {
    LocalEntry e{squareclass_of(delta, Place::finite(p)), 1};
    if (std::find(w_minus_primes.begin(), w_minus_primes.end(), p) != w_minus_primes.end()) e.w = -1;
    if (!ghy_admissible(n, e.delta, e.w))
      throw Error("make_profile: inadmissible local data at p=" + std::to_string(p));
    out.local.emplace(p, e);
  }
  return out;
}

GlobalProfile profile_of_space(const RationalSpace& s) {
  if (!s.is_positive_definite()) throw Error("profile_of_space: space is not positive definite");
  const int n = s.dim();
  Rational det = 1;
  std::set<std::int64_t> primes{2};
  for (const auto& a : s.diagonal) {
    det *= a;
    for (auto p : primes_of(a.get_num())) primes.insert(p);
    for (auto p : primes_of(a.get_den())) primes.insert(p);
  }
  GlobalProfile out;
  out.n = n;
  out.Delta = to_int64(squarefree_part(det));
  const std::set<std::int64_t> delta_primes = primes_of(Integer(static_cast<long>(out.Delta)));
  for (auto p : primes) {
    const GHYLocalData g = ghy_from_std(std_invariants_of_diagonal(s.diagonal, Place::finite(p)));
    if (p == 2 || delta_primes.count(p) || g.w == -1) out.local.emplace(p, LocalEntry{g.delta, g.w});
  }
  return out;
}

bool check_product_formula(const GlobalProfile& prof) {
  int lhs = 1;
  int rhs = (prof.n / 4) % 2 ? -1 : 1;
  for (const auto& [p, e] : prof.local) {
    lhs *= e.w;
    if (prof.n % 2) rhs *= hilbert_symbol(squareclass_of(Rational(-1), Place::finite(p)), e.delta);
  }
  // Odd primes outside the map have unit delta and contribute (-1, delta)_p = 1.
  return lhs == rhs;
}

namespace {

// Primes where the Hasse invariant is -1; +1 elsewhere (including the real place).
using HasseMap = std::set<std::int64_t>;

int hasse_at(const HasseMap& c, std::int64_t p) { return c.count(p) ? -1 : 1; }

// Squarefree positive candidates supported on `support` (ascending), then on
// support + one auxiliary prime, in increasing auxiliary prime order.
template <class Accept>
Integer search_entry(const std::set<std::int64_t>& support, std::int64_t aux_cap, Accept accept) {
  const std::vector<std::int64_t> base(support.begin(), support.end());
  std::vector<Integer> subsets{Integer(1)};
  for (auto p : base) {
    const std::size_t m = subsets.size();
    for (std::size_t i = 0; i < m; ++i) subsets.push_back(subsets[i] * static_cast<long>(p));
  }
  std::sort(subsets.begin(), subsets.end());
  for (const auto& a : subsets)
    if (accept(a)) return a;
  for (std::int64_t q = 2; q <= aux_cap; q = next_prime(q)) {
    if (support.count(q)) continue;
    for (const auto& a : subsets)
      if (accept(Integer(a * static_cast<long>(q)))) return a * static_cast<long>(q);
  }
  throw Error("assemble_space: auxiliary prime search exceeded cap " + std::to_string(aux_cap));
}

std::set<std::int64_t> relevant_primes(const HasseMap& c, const Integer& d, const Integer& a) {
  std::set<std::int64_t> out{2};
  out.insert(c.begin(), c.end());
  for (auto p : primes_of(d)) out.insert(p);
  for (auto p : primes_of(a)) out.insert(p);
  return out;
}

// Binary space <a, a*d> with Hasse invariants c: need (a, -d)_p = c_p everywhere.
std::vector<Integer> assemble_binary(const Integer& d, const HasseMap& c, std::int64_t aux_cap) {
  std::set<std::int64_t> support{2};
  support.insert(c.begin(), c.end());
  for (auto p : primes_of(d)) support.insert(p);
  const Integer a = search_entry(support, aux_cap, [&](const Integer& a) {
    for (auto p : relevant_primes(c, d, a))
      if (hilbert_symbol(Rational(a), Rational(-d), Place::finite(p)) != hasse_at(c, p)) return false;
    return true;
  });
  return {a, squarefree_part(Integer(a * d))};
}

// Residual Hasse map after splitting off <a>: c'_p = c_p * (a, d')_p with d' = a*d.
HasseMap residual_hasse(const HasseMap& c, const Integer& d, const Integer& a, Integer& d_out) {
  d_out = squarefree_part(Integer(a * d));
  HasseMap out;
  for (auto p : relevant_primes(c, d_out, a)) {
    const int v = hasse_at(c, p) * hilbert_symbol(Rational(a), Rational(d_out), Place::finite(p));
    if (v == -1) out.insert(p);
  }
  return out;
}

bool binary_realizable(const Integer& d, const HasseMap& c) {
  // Locally a binary space with -d a square is hyperbolic and has c = +1.
  for (auto p : relevant_primes(c, d, Integer(1))) {
    if (hasse_at(c, p) == 1) continue;
    if (squareclass_of(Rational(-d), Place::finite(p)).is_square()) return false;
  }
  return true;
}

}  // namespace

RationalSpace assemble_space(const GlobalProfile& prof, const AssembleOptions& opts) {
  const int n = prof.n;
  if (n < 3) throw Error("assemble_space: dimension must be at least 3");
  check_squarefree_positive(prof.Delta);
  const Rational delta = Rational(sign_pow(n / 2)) * Rational(static_cast<long>(prof.Delta));
  HasseMap c;
  for (const auto& [p, e] : prof.local) {
    const Place v = Place::finite(p);
    if (e.delta != squareclass_of(delta, v))
      throw Error("assemble_space: delta at p=" + std::to_string(p) + " is not coherent with Delta");
    if (!ghy_admissible(n, e.delta, e.w))
      throw Error("assemble_space: inadmissible local data at p=" + std::to_string(p));
    if (e.w * reference_hasse(n, e.delta) == -1) c.insert(p);
  }
  if (!check_product_formula(prof)) throw Error("assemble_space: product formula fails");

  // Global determinant is Delta; Hasse invariants c (and +1 at the real place).
  RationalSpace out;
  Integer d = static_cast<long>(prof.Delta);
  for (int m = n; m > 3; --m) out.diagonal.push_back(1);

  std::set<std::int64_t> support{2};
  support.insert(c.begin(), c.end());
  for (auto p : primes_of(d)) support.insert(p);
  const Integer a1 = search_entry(support, opts.aux_prime_cap, [&](const Integer& a) {
    Integer dr;
    const HasseMap cr = residual_hasse(c, d, a, dr);
    return binary_realizable(dr, cr);
  });
  Integer dr;
  const HasseMap cr = residual_hasse(c, d, a1, dr);
  out.diagonal.push_back(Rational(a1));
  for (const auto& a : assemble_binary(dr, cr, opts.aux_prime_cap)) out.diagonal.push_back(Rational(a));

  if (profile_of_space(out) != prof) throw Error("assemble_space: internal error, profile mismatch");
  return out;
}

bool spaces_equivalent(const RationalSpace& a, const RationalSpace& b) {
  if (a.dim() != b.dim() || a.dim() == 0) return false;
  auto negatives = [](const RationalSpace& s) {
    return std::count_if(s.diagonal.begin(), s.diagonal.end(), [](const Rational& x) { return x < 0; });
  };
  if (negatives(a) != negatives(b)) return false;
  Rational da = 1, db = 1;
  std::set<std::int64_t> primes{2};
  for (const auto* s : {&a, &b})
    for (const auto& x : s->diagonal) {
      for (auto p : primes_of(x.get_num())) primes.insert(p);
      for (auto p : primes_of(x.get_den())) primes.insert(p);
    }
  for (const auto& x : a.diagonal) da *= x;
  for (const auto& x : b.diagonal) db *= x;
  if (squarefree_part(da) != squarefree_part(db)) return false;
  for (auto p : primes) {
    const Place v = Place::finite(p);
    if (std_invariants_of_diagonal(a.diagonal, v) != std_invariants_of_diagonal(b.diagonal, v)) return false;
  }
  return true;
}

}  // namespace qflat
