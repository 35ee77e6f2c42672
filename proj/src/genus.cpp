// SPDX-License-Identifier: Apache-2.0
#include "qflat/genus.hpp"

#include <functional>
#include <map>

#include "qflat/mass.hpp"

namespace qflat {

namespace {

std::int64_t mod_p(std::int64_t a, std::int64_t p) { return ((a % p) + p) % p; }

std::int64_t inv_mod(std::int64_t a, std::int64_t p) {
  std::int64_t t = 0, nt = 1, r = p, nr = mod_p(a, p);
  while (nr) {
    const std::int64_t q = r / nr;
    std::tie(t, nt) = std::make_pair(nt, t - q * nt);
    std::tie(r, nr) = std::make_pair(nr, r - q * nr);
  }
  return mod_p(t, p);
}

bool isotropic_mod_p(const MatrixZ& Hp, const VectorZ& v, std::int64_t p, int lead) {
  const int n = static_cast<int>(v.size());
  std::int64_t s = 0;
  for (int i = lead; i < n; ++i) {
    if (!v(i)) continue;
    std::int64_t row = 0;
    for (int j = lead; j < n; ++j) row += Hp(i, j) * v(j);
    s = (s + (row % p) * v(i)) % p;
  }
  // Q(v) = v^T H v / 2 and p is odd.
  return s == 0;
}

// Calls fn on each isotropic line until it returns false. With scramble set,
// lines are visited in the order of an affine bijection on [0, p^n), so that
// consecutive neighbors are unrelated; every line is still visited once.
void for_each_isotropic_line(const IntegralForm& f, std::int64_t p, const std::function<bool(const VectorZ&)>& fn,
                             bool scramble = false) {
  const int n = f.n();
  MatrixZ Hp(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Hp(i, j) = mod_p(f.hessian()(i, j), p);
  VectorZ v(n);
  unsigned __int128 total = 1;
  for (int i = 0; i < n && total < (static_cast<unsigned __int128>(1) << 62); ++i) total *= static_cast<unsigned>(p);
  if (scramble && total < (static_cast<unsigned __int128>(1) << 62)) {
    const auto N = static_cast<std::uint64_t>(total);
    // Multiplier prime to p, hence a unit mod N.
    std::uint64_t a = 0x9E3779B97F4A7C15ull % N;
    while (a == 0 || a % static_cast<std::uint64_t>(p) == 0) ++a;
    const std::uint64_t b = 0x632BE59BD9B4E019ull % N;
    for (std::uint64_t k = 0; k < N; ++k) {
      std::uint64_t idx = static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * k + b) % N);
      for (int i = n - 1; i >= 0; --i) {
        v(i) = static_cast<std::int64_t>(idx % static_cast<std::uint64_t>(p));
        idx /= static_cast<std::uint64_t>(p);
      }
      int lead = 0;
      while (lead < n && v(lead) == 0) ++lead;
      if (lead == n || v(lead) != 1) continue;
      if (isotropic_mod_p(Hp, v, p, lead) && !fn(v)) return;
    }
    return;
  }
  for (int lead = 0; lead < n; ++lead) {
    v.setZero();
    v(lead) = 1;
    while (true) {
      if (isotropic_mod_p(Hp, v, p, lead) && !fn(v)) return;
      int i = n - 1;
      while (i > lead && ++v(i) == p) v(i--) = 0;
      if (i == lead) break;
    }
  }
}

struct Traversal {
  const GenusOptions& opts;
  std::optional<Rational> target;
  GenusRecord rec;
  std::vector<std::vector<std::int64_t>> fingerprints;
  std::vector<IsometryTester> testers;
  std::map<std::vector<std::int64_t>, std::size_t> seen;  // reduced Hessians known to be classed

  static std::vector<std::int64_t> key(const IntegralForm& g) {
    const auto& H = g.hessian();
    return {H.data(), H.data() + H.size()};
  }

  bool done() const {
    if (target && rec.accumulated_mass == *target) return true;
    return rec.stopped_early;
  }

  // Registers g if it is a new class; returns true when it was new.
  bool offer(const IntegralForm& g) {
    const auto k = key(g);
    if (seen.count(k)) return false;
    const auto fp = theta_series(g, opts.fingerprint_bound);
    for (std::size_t i = 0; i < rec.representatives.size(); ++i)
      if (fingerprints[i] == fp && testers[i].find(g)) {
        seen.emplace(k, i);
        return false;
      }
    const Integer aut = automorphism_order(g);
    seen.emplace(k, rec.representatives.size());
    rec.representatives.push_back(g);
    rec.aut_orders.push_back(aut);
    fingerprints.push_back(fp);
    testers.emplace_back(g);
    rec.accumulated_mass += Rational(1) / Rational(aut);
    rec.accumulated_mass.canonicalize();
    if (target && rec.accumulated_mass > *target)
      throw Error("genus_representatives: accumulated mass " + to_string(rec.accumulated_mass) +
                  " exceeds the target " + to_string(*target));
    if (opts.stop_above && rec.representatives.size() > *opts.stop_above) rec.stopped_early = true;
    return true;
  }

  void run(const IntegralForm& f) {
    rec.target_mass = target;
    offer(lll_reduce(f).form);
    int stable = 0;
    std::set<std::int64_t> used;
    for (int count = 0; count < opts.prime_cap && !done(); ++count) {
      const std::int64_t p = neighbor_prime(f, used);
      used.insert(p);
      rec.neighbor_primes_used.push_back(p);
      bool found = false;
      for (std::size_t i = 0; i < rec.representatives.size() && !done(); ++i) {
        const IntegralForm base = rec.representatives[i];
        for_each_isotropic_line(base, p, [&](const VectorZ& line) {
          if (offer(p_neighbor(base, p, line))) found = true;
          return !done();
        }, true);
      }
      if (!target) {
        stable = found ? 0 : stable + 1;
        if (stable >= opts.stable_primes) break;
      }
    }
    if (target && !done())
      throw CertificationError("genus_representatives: mass " + to_string(rec.accumulated_mass) + " of target " +
                               to_string(*target) + " after " + std::to_string(opts.prime_cap) + " primes");
  }
};

}  // namespace

std::int64_t neighbor_prime(const IntegralForm& f, const std::set<std::int64_t>& exclude) {
  const Integer d = 2 * f.det_H();
  for (std::int64_t p = 3;; p = next_prime(p))
    if (!exclude.count(p) && mpz_divisible_ui_p(d.get_mpz_t(), static_cast<unsigned long>(p)) == 0) return p;
}

std::vector<VectorZ> isotropic_lines_mod_p(const IntegralForm& f, std::int64_t p) {
  if (p == 2 || !is_prime(p)) throw Error("isotropic_lines_mod_p: p must be an odd prime");
  std::vector<VectorZ> out;
  for_each_isotropic_line(f, p, [&](const VectorZ& v) {
    out.push_back(v);
    return true;
  });
  return out;
}

IntegralForm p_neighbor(const IntegralForm& f, std::int64_t p, const VectorZ& line) {
  const int n = f.n();
  const MatrixZ& H = f.hessian();
  if (p == 2 || mpz_divisible_ui_p(Integer(f.det_H()).get_mpz_t(), static_cast<unsigned long>(p)))
    throw Error("p_neighbor: p must be odd and prime to det_H");
  VectorZ v = line;
  for (int i = 0; i < n; ++i) v(i) = mod_p(v(i), p);
  if (mod_p(f.value(v), p) != 0) throw Error("p_neighbor: line is not isotropic");
  VectorZ w = H * v;
  for (int i = 0; i < n; ++i) w(i) = mod_p(w(i), p);
  int k = 0;
  while (k < n && w(k) == 0) ++k;
  if (k == n) throw Error("p_neighbor: degenerate line");
  // Lift so that Q(v) = 0 mod p^2.
  const std::int64_t c = mod_p(f.value(v) / p, p);
  const std::int64_t t = mod_p(-c * inv_mod(w(k), p), p);
  v(k) += p * t;
  // Rows spanning p * (L_v + Z v/p), where L_v = {x : B(x, v) = 0 mod p}.
  const std::int64_t wk_inv = inv_mod(w(k), p);
  Matrix<Integer> G(n + 1, n);
  G.setZero();
  int row = 0;
  for (int j = 0; j < n; ++j) {
    if (j == k) continue;
    G(row, j) = static_cast<long>(p);
    G(row, k) = static_cast<long>(-p * mod_p(w(j) * wk_inv, p));
    ++row;
  }
  G(row++, k) = static_cast<long>(p * p);
  for (int j = 0; j < n; ++j) G(row, j) = static_cast<long>(v(j));
  const Matrix<Integer> M = hermite_normal_form(G);
  if (M.rows() != n) throw Error("p_neighbor: neighbor has the wrong rank");
  MatrixZ Mz(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Mz(i, j) = to_int64(M(i, j));
  // H_N = M H M^T / p^2
  const IntegralForm scaled = f.transformed(Mz);
  MatrixZ HN = scaled.hessian();
  const std::int64_t p2 = p * p;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (HN(i, j) % p2) throw Error("p_neighbor: neighbor is not integral");
      HN(i, j) /= p2;
    }
  return lll_reduce(IntegralForm::from_hessian(HN)).form;
}

GenusRecord genus_representatives(const IntegralForm& f, const Rational& target_mass, const GenusOptions& opts) {
  if (!f.is_positive_definite()) throw Error("genus_representatives: form is not positive definite");
  Traversal tr{opts, target_mass, {}, {}, {}, {}};
  tr.run(f);
  return tr.rec;
}

GenusRecord genus_representatives(const IntegralForm& f, const GenusOptions& opts) {
  if (!f.is_positive_definite()) throw Error("genus_representatives: form is not positive definite");
  if (f.n() >= 3 && is_maximal(f)) {
    Rational target = mass_from_profile(local_profile(f)).proper_mass / 2;
    target.canonicalize();
    return genus_representatives(f, target, opts);
  }
  Traversal tr{opts, std::nullopt, {}, {}, {}, {}};
  tr.run(f);
  return tr.rec;
}

std::size_t class_number(const IntegralForm& f) { return genus_representatives(f).class_number(); }

}  // namespace qflat
