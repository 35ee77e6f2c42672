// SPDX-License-Identifier: Apache-2.0
// Short vectors, automorphism groups and isometry testing.
#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <unordered_map>
#include <unordered_set>

#include <Eigen/LU>

#include "qflat/lattice.hpp"

namespace qflat {

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<std::int64_t>& v) const {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (auto x : v) h = (h ^ static_cast<std::size_t>(x)) * 0x100000001b3ull;
    return h;
  }
};

std::vector<std::int64_t> key(const VectorZ& v) { return {v.data(), v.data() + v.size()}; }

bool lex_less(const VectorZ& a, const VectorZ& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

MatrixZ unimodular_inverse(const MatrixZ& U) {
  const int n = static_cast<int>(U.rows());
  MatrixQ A(n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      A(i, j) = Rational(static_cast<long>(U(i, j)));
      A(i, n + j) = Rational(i == j ? 1 : 0);
    }
  for (int c = 0; c < n; ++c) {
    int piv = c;
    while (piv < n && A(piv, c) == 0) ++piv;
    if (piv == n) throw Error("unimodular_inverse: singular matrix");
    A.row(c).swap(A.row(piv));
    const Rational inv = 1 / A(c, c);
    for (int k = 0; k < 2 * n; ++k) A(c, k) *= inv;
    for (int i = 0; i < n; ++i) {
      if (i == c || A(i, c) == 0) continue;
      const Rational m = A(i, c);
      for (int k = 0; k < 2 * n; ++k) A(i, k) -= m * A(c, k);
    }
  }
  MatrixZ out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Rational x = A(i, n + j);
      x.canonicalize();
      if (x.get_den() != 1) throw Error("unimodular_inverse: matrix is not unimodular");
      out(i, j) = to_int64(x.get_num());
    }
  return out;
}

int unimodular_det(const MatrixZ& M) {
  const double d = M.cast<double>().partialPivLu().determinant();
  return d < 0 ? -1 : 1;
}

// Vectors of the lattice of f up to a norm bound, both signs, with H v kept
// alongside for inner products. The coordinate index is built on request.
struct Pool {
  int n = 0;
  std::vector<std::int64_t> flat, Hflat;  // row-major v and H v
  std::vector<std::int64_t> norm;
  std::map<std::int64_t, std::vector<int>> by_norm;
  std::unordered_map<std::vector<std::int64_t>, int, VecHash> index;

  Pool(const IntegralForm& f, std::int64_t bound, bool with_index) : n(f.n()) {
    for (const auto& sv : short_vectors(f, bound))
      for (int s : {1, -1}) {
        const VectorZ v = s * sv.v;
        const VectorZ Hv = f.hessian() * v;
        const int id = static_cast<int>(norm.size());
        if (with_index) index.emplace(key(v), id);
        by_norm[sv.value].push_back(id);
        flat.insert(flat.end(), v.data(), v.data() + n);
        Hflat.insert(Hflat.end(), Hv.data(), Hv.data() + n);
        norm.push_back(sv.value);
      }
  }
  int size() const { return static_cast<int>(norm.size()); }
  VectorZ vec(int a) const { return Eigen::Map<const VectorZ>(&flat[static_cast<std::size_t>(a) * n], n); }
  int find(const VectorZ& v) const {
    const auto it = index.find(key(v));
    return it == index.end() ? -1 : it->second;
  }
  std::int64_t B(int a, int b) const {
    const std::int64_t* x = &flat[static_cast<std::size_t>(a) * n];
    const std::int64_t* y = &Hflat[static_cast<std::size_t>(b) * n];
    std::int64_t s = 0;
    for (int k = 0; k < n; ++k) s += x[k] * y[k];
    return s;
  }
};

// Hash of the multiset {x^T H w : w in W}; isometries preserve it. Values in
// a small window are counted directly, the rest are sorted.
std::uint64_t profile_hash(std::vector<std::int64_t>& values) {
  constexpr std::int64_t kWindow = 64;
  std::array<std::uint32_t, 2 * kWindow + 1> counts{};
  std::size_t out = 0;
  for (auto x : values) {
    if (x >= -kWindow && x <= kWindow)
      ++counts[static_cast<std::size_t>(x + kWindow)];
    else
      values[out++] = x;
  }
  values.resize(out);
  std::sort(values.begin(), values.end());
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (auto c : counts) h = (h ^ c) * 0x100000001b3ull;
  for (auto x : values) h = (h ^ static_cast<std::uint64_t>(x)) * 0x100000001b3ull;
  return h;
}

// Invariant of each vector in ids against the test vectors.
std::vector<std::uint64_t> invariants_against(const Pool& pool, const std::vector<int>& tests, const std::vector<int>& ids) {
  std::vector<std::uint64_t> out;
  out.reserve(ids.size());
  std::vector<std::int64_t> vals;
  for (int id : ids) {
    vals.clear();
    for (int w : tests) vals.push_back(pool.B(id, w));
    out.push_back(profile_hash(vals));
  }
  return out;
}

constexpr std::size_t kMaxTestVectors = 4096;

class Backtrack {
 public:
  static constexpr std::size_t kLazyAbove = 2048;

  Backtrack(const Pool& pool, const MatrixZ& T) : pool_(pool), T_(T), n_(static_cast<int>(T.rows())) {}

  using Domains = std::vector<std::vector<int>>;

  Domains initial_domains() const {
    Domains dom(n_);
    for (int k = 0; k < n_; ++k) {
      if (T_(k, k) % 2) continue;
      const auto it = pool_.by_norm.find(T_(k, k) / 2);
      if (it != pool_.by_norm.end()) dom[k] = it->second;
    }
    return dom;
  }

  // Restrict the domains of levels > i to vectors compatible with v_i = c.
  bool restrict(Domains& dom, int i, int c) const {
    for (int k = i + 1; k < n_; ++k) {
      if (dom[k].size() > kLazyAbove) continue;
      std::vector<int> keep;
      for (int x : dom[k])
        if (pool_.B(x, c) == T_(k, i)) keep.push_back(x);
      if (keep.empty()) return false;
      dom[k] = std::move(keep);
    }
    return true;
  }

  // Completes levels i..n-1; pick[0..i-1] must already be consistent.
  bool search(int i, const Domains& dom, std::vector<int>& pick) const {
    if (i == n_) return true;
    const bool lazy = dom[i].size() > kLazyAbove;
    for (int c : dom[i]) {
      if (lazy && !consistent(i, c, pick)) continue;
      Domains next = dom;
      if (!restrict(next, i, c)) continue;
      pick[i] = c;
      if (search(i + 1, next, pick)) return true;
    }
    return false;
  }

  bool consistent(int i, int c, const std::vector<int>& pick) const {
    for (int j = 0; j < i; ++j)
      if (pool_.B(c, pick[j]) != T_(i, j)) return false;
    return true;
  }

  MatrixZ matrix(const std::vector<int>& pick) const {
    MatrixZ M(n_, n_);
    for (int j = 0; j < n_; ++j) M.col(j) = pool_.vec(pick[j]);
    return M;
  }

 private:
  const Pool& pool_;
  const MatrixZ& T_;
  int n_;
};

std::int64_t max_norm(const IntegralForm& f) {
  std::int64_t m = 0;
  for (int i = 0; i < f.n(); ++i) m = std::max(m, f.coeff(i, i));
  return m;
}

}  // namespace

std::vector<ShortVector> short_vectors(const IntegralForm& f, std::int64_t bound) {
  const int n = f.n();
  std::vector<ShortVector> out;
  if (bound <= 0) return out;
  // Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2
  std::vector<std::vector<double>> q(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) q[i][j] = static_cast<double>(f.hessian()(i, j)) / 2.0;
  for (int i = 0; i < n; ++i) {
    if (q[i][i] <= 0) throw Error("short_vectors: form is not positive definite");
    for (int j = i + 1; j < n; ++j) {
      q[j][i] = q[i][j];
      q[i][j] /= q[i][i];
    }
    for (int k = i + 1; k < n; ++k)
      for (int l = k; l < n; ++l) q[k][l] -= q[k][i] * q[i][l];
  }
  const double eps = 1e-7 * (static_cast<double>(bound) + 1.0);
  VectorZ x = VectorZ::Zero(n);
  auto rec = [&](auto&& self, int i, double rem, bool tail_zero) -> void {
    double c = 0;
    for (int j = i + 1; j < n; ++j) c -= q[i][j] * static_cast<double>(x(j));
    const double r = std::sqrt(std::max(0.0, rem + eps) / q[i][i]);
    auto lo = static_cast<std::int64_t>(std::ceil(c - r));
    const auto hi = static_cast<std::int64_t>(std::floor(c + r));
    if (tail_zero) lo = std::max<std::int64_t>(lo, i == 0 ? 1 : 0);
    for (std::int64_t xi = lo; xi <= hi; ++xi) {
      const double t = rem - q[i][i] * (static_cast<double>(xi) - c) * (static_cast<double>(xi) - c);
      if (t < -eps) continue;
      x(i) = xi;
      if (i == 0) {
        const std::int64_t v = f.value(x);
        if (v > 0 && v <= bound) out.push_back({x, v});
      } else {
        self(self, i - 1, t, tail_zero && xi == 0);
      }
    }
    x(i) = 0;
  };
  rec(rec, n - 1, static_cast<double>(bound), true);
  std::sort(out.begin(), out.end(), [](const ShortVector& a, const ShortVector& b) {
    if (a.value != b.value) return a.value < b.value;
    return lex_less(a.v, b.v);
  });
  return out;
}

std::vector<std::int64_t> theta_series(const IntegralForm& f, std::int64_t bound) {
  std::vector<std::int64_t> theta(bound + 1, 0);
  theta[0] = 1;
  for (const auto& sv : short_vectors(f, bound)) theta[sv.value] += 2;
  return theta;
}

AutomorphismGroup automorphism_group(const IntegralForm& f) {
  const Reduction red = lll_reduce(f);
  const IntegralForm& g = red.form;
  const int n = g.n();
  const Pool pool(g, max_norm(g), true);
  const Backtrack bt(pool, g.hessian());
  auto base = bt.initial_domains();

  std::vector<MatrixZ> gens;
  auto closure = [&](std::unordered_set<int> seed) {
    std::vector<int> todo(seed.begin(), seed.end());
    while (!todo.empty()) {
      const int a = todo.back();
      todo.pop_back();
      for (const auto& M : gens) {
        const int b = pool.find(M * pool.vec(a));
        if (b < 0) throw Error("automorphism_group: generator leaves the candidate set");
        if (seed.insert(b).second) todo.push_back(b);
      }
    }
    return seed;
  };

  std::vector<int> unit(n);
  for (int i = 0; i < n; ++i) {
    unit[i] = pool.find(VectorZ::Unit(n, i));
    if (unit[i] < 0) throw Error("automorphism_group: basis vector missing from the pool");
  }

  // Keep only candidates whose inner products with the minimal vectors match.
  const auto& shell = pool.by_norm.begin()->second;
  if (shell.size() <= kMaxTestVectors) {
    std::map<std::int64_t, std::vector<std::uint64_t>> inv;
    for (int k = 0; k < n; ++k) {
      const std::int64_t nrm = pool.norm[unit[k]];
      auto it = inv.find(nrm);
      if (it == inv.end()) it = inv.emplace(nrm, invariants_against(pool, shell, pool.by_norm.at(nrm))).first;
      const auto& ids = pool.by_norm.at(nrm);
      const std::uint64_t want = invariants_against(pool, shell, {unit[k]}).front();
      std::vector<int> keep;
      for (std::size_t j = 0; j < ids.size(); ++j)
        if (it->second[j] == want) keep.push_back(ids[j]);
      base[k] = std::move(keep);
    }
  }

  Integer order = 1;
  for (int i = n - 1; i >= 0; --i) {
    // Pointwise stabilizer of e_0..e_{i-1}: fix those levels.
    auto dom = base;
    bool ok = true;
    for (int j = 0; j < i && ok; ++j) {
      dom[j] = {unit[j]};
      ok = bt.restrict(dom, j, unit[j]);
    }
    if (!ok) throw Error("automorphism_group: inconsistent basis");
    std::vector<int> pick(n);
    for (int j = 0; j < i; ++j) pick[j] = unit[j];

    auto orbit = closure({unit[i]});
    std::unordered_set<int> failed;
    for (int c : dom[i]) {
      if (orbit.count(c) || failed.count(c) || !bt.consistent(i, c, pick)) continue;
      auto trial = dom;
      trial[i] = {c};
      if (bt.search(i, trial, pick)) {
        gens.push_back(bt.matrix(pick));
        orbit.insert(c);
        orbit = closure(std::move(orbit));
      } else {
        for (int x : closure({c})) failed.insert(x);
      }
    }
    order *= static_cast<unsigned long>(orbit.size());
  }

  AutomorphismGroup out;
  out.order = order;
  // Back to the coordinates of f: M_f = U^T M U^{-T}.
  const MatrixZ U = red.transform;
  const MatrixZ Uinv_T = unimodular_inverse(U).transpose();
  for (const auto& M : gens) {
    const MatrixZ Mf = U.transpose() * M * Uinv_T;
    if (unimodular_det(Mf) < 0) out.has_improper = true;
    out.generators.push_back(Mf);
  }
  return out;
}

Integer automorphism_order(const IntegralForm& f) { return automorphism_group(f).order; }

struct IsometryTester::Impl {
  IntegralForm f;
  Integer det;
  Reduction rf;
  std::unique_ptr<Pool> pool;
  std::int64_t pool_bound = 0;
  std::int64_t min_norm = 0;
  std::size_t min_count = 0;
  std::vector<int> tests;  // pool ids of the minimal vectors, when few enough
  std::map<std::int64_t, std::vector<std::uint64_t>> invariants;  // per norm, aligned with by_norm

  void ensure_pool(std::int64_t bound) {
    if (pool && pool_bound >= bound) return;
    pool = std::make_unique<Pool>(rf.form, std::max(bound, min_norm), false);
    pool_bound = std::max(bound, min_norm);
    invariants.clear();
    tests.clear();
    const auto& shell = pool->by_norm.at(min_norm);
    if (shell.size() <= kMaxTestVectors) tests = shell;
  }

  const std::vector<std::uint64_t>& invariants_of(std::int64_t nrm) {
    auto it = invariants.find(nrm);
    if (it == invariants.end()) it = invariants.emplace(nrm, invariants_against(*pool, tests, pool->by_norm.at(nrm))).first;
    return it->second;
  }
};

IsometryTester::IsometryTester(const IntegralForm& f) : impl_(std::make_shared<Impl>()) {
  impl_->f = f;
  impl_->det = f.det_H();
  impl_->rf = lll_reduce(f);
  std::int64_t m = max_norm(impl_->rf.form);
  for (int i = 0; i < f.n(); ++i) m = std::min(m, impl_->rf.form.coeff(i, i));
  // The minimum is at most the smallest diagonal entry; find the true one.
  const auto sv = short_vectors(impl_->rf.form, m);
  impl_->min_norm = sv.front().value;
  impl_->min_count = 0;
  for (const auto& v : sv)
    if (v.value == impl_->min_norm) impl_->min_count += 2;
}

std::optional<MatrixZ> IsometryTester::find(const IntegralForm& g) const {
  Impl& im = *impl_;
  const IntegralForm& f = im.f;
  const int n = f.n();
  if (g.n() != n || g.det_H() != im.det) return std::nullopt;
  const Reduction rg = lll_reduce(g);
  const MatrixZ& Hg = rg.form.hessian();

  // Minimal vectors of g, for the per-vector invariants of its basis.
  const auto gmin = short_vectors(rg.form, im.min_norm);
  std::size_t gcount = 0;
  for (const auto& v : gmin)
    if (v.value < im.min_norm) return std::nullopt;
    else gcount += 2;
  if (gcount != im.min_count) return std::nullopt;

  im.ensure_pool(max_norm(rg.form));
  const bool use_inv = !im.tests.empty();
  std::vector<VectorZ> Hw;
  if (use_inv)
    for (const auto& v : gmin)
      for (int s : {1, -1}) Hw.push_back(s * (Hg * v.v));

  std::vector<std::vector<int>> dom(n);
  std::vector<std::int64_t> vals;
  for (int k = 0; k < n; ++k) {
    if (Hg(k, k) % 2) return std::nullopt;
    const std::int64_t nrm = Hg(k, k) / 2;
    const auto it = im.pool->by_norm.find(nrm);
    if (it == im.pool->by_norm.end()) return std::nullopt;
    if (!use_inv) {
      dom[k] = it->second;
      continue;
    }
    vals.clear();
    for (const auto& w : Hw) vals.push_back(w(k));
    const std::uint64_t want = profile_hash(vals);
    const auto& inv = im.invariants_of(nrm);
    for (std::size_t j = 0; j < inv.size(); ++j)
      if (inv[j] == want) dom[k].push_back(it->second[j]);
    if (dom[k].empty()) return std::nullopt;
  }

  // Smallest domains first.
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return dom[a].size() < dom[b].size(); });
  MatrixZ P = MatrixZ::Zero(n, n);
  std::vector<std::vector<int>> sdom(n);
  for (int i = 0; i < n; ++i) {
    P(i, order[i]) = 1;
    sdom[i] = std::move(dom[order[i]]);
  }
  const MatrixZ Hs = P * Hg * P.transpose();
  const Backtrack bt(*im.pool, Hs);
  std::vector<int> pick(n);
  if (!bt.search(0, sdom, pick)) return std::nullopt;
  // S^T H_rf S = P H_rg P^T, so S P carries H_rf to H_rg; then T = V^T (S P) U^{-T}.
  const MatrixZ S = bt.matrix(pick) * P;
  const MatrixZ T = im.rf.transform.transpose() * S * unimodular_inverse(rg.transform).transpose();
  if (T.transpose() * f.hessian() * T != g.hessian()) throw Error("is_isometric: transform check failed");
  return T;
}

std::optional<MatrixZ> is_isometric(const IntegralForm& f, const IntegralForm& g) {
  if (f.n() != g.n() || f.det_H() != g.det_H()) return std::nullopt;
  const Reduction rf = lll_reduce(f), rg = lll_reduce(g);
  const std::int64_t bound = max_norm(rg.form);
  if (theta_series(rf.form, bound) != theta_series(rg.form, bound)) return std::nullopt;
  return IsometryTester(f).find(g);
}

}  // namespace qflat
