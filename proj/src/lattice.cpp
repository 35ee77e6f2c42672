// SPDX-License-Identifier: Apache-2.0
#include "qflat/lattice.hpp"

#include <numeric>
#include <sstream>

namespace qflat {

namespace {

Integer bareiss_det(Matrix<Integer> M) {
  const int n = static_cast<int>(M.rows());
  if (n == 0) return 1;
  int sign = 1;
  Integer prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (M(k, k) == 0) {
      int r = k + 1;
      while (r < n && M(r, k) == 0) ++r;
      if (r == n) return 0;
      M.row(k).swap(M.row(r));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        Integer t = M(i, j) * M(k, k) - M(i, k) * M(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        M(i, j) = t;
      }
    prev = M(k, k);
  }
  return sign * M(n - 1, n - 1);
}

Matrix<Integer> to_integer(const MatrixZ& A) {
  Matrix<Integer> out(A.rows(), A.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) out(i, j) = static_cast<long>(A(i, j));
  return out;
}

std::int64_t checked(__int128 x) {
  if (x > INT64_MAX || x < INT64_MIN) throw Error("integer overflow in form arithmetic");
  return static_cast<std::int64_t>(x);
}

std::int64_t mod_p(std::int64_t a, std::int64_t p) { return ((a % p) + p) % p; }

std::int64_t inv_mod(std::int64_t a, std::int64_t p) {
  std::int64_t t = 0, nt = 1, r = p, nr = mod_p(a, p);
  while (nr) {
    const std::int64_t q = r / nr;
    std::tie(t, nt) = std::make_pair(nt, t - q * nt);
    std::tie(r, nr) = std::make_pair(nr, r - q * nr);
  }
  if (r != 1) throw Error("inv_mod: not invertible");
  return mod_p(t, p);
}

}  // namespace

IntegralForm IntegralForm::from_coeffs(const std::vector<std::vector<std::int64_t>>& upper) {
  const int n = static_cast<int>(upper.size());
  if (n == 0) throw Error("IntegralForm: empty coefficient list");
  MatrixZ H(n, n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(upper[i].size()) != n - i)
      throw Error("IntegralForm: row " + std::to_string(i) + " must have " + std::to_string(n - i) + " entries");
    H(i, i) = checked(static_cast<__int128>(2) * upper[i][0]);
    for (int j = i + 1; j < n; ++j) H(i, j) = H(j, i) = upper[i][j - i];
  }
  IntegralForm f;
  f.H_ = H;
  return f;
}

IntegralForm IntegralForm::from_hessian(const MatrixZ& H) {
  if (H.rows() != H.cols() || H.rows() == 0) throw Error("IntegralForm: Hessian must be square");
  for (Eigen::Index i = 0; i < H.rows(); ++i) {
    if (H(i, i) % 2) throw Error("IntegralForm: Hessian diagonal must be even");
    for (Eigen::Index j = 0; j < i; ++j)
      if (H(i, j) != H(j, i)) throw Error("IntegralForm: Hessian must be symmetric");
  }
  IntegralForm f;
  f.H_ = H;
  return f;
}

IntegralForm IntegralForm::diagonal(const std::vector<std::int64_t>& a) {
  std::vector<std::vector<std::int64_t>> rows;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::vector<std::int64_t> r(a.size() - i, 0);
    r[0] = a[i];
    rows.push_back(r);
  }
  return from_coeffs(rows);
}

std::int64_t IntegralForm::coeff(int i, int j) const {
  if (i > j) std::swap(i, j);
  return i == j ? H_(i, i) / 2 : H_(i, j);
}

std::vector<std::vector<std::int64_t>> IntegralForm::coeffs() const {
  std::vector<std::vector<std::int64_t>> out(n());
  for (int i = 0; i < n(); ++i)
    for (int j = i; j < n(); ++j) out[i].push_back(coeff(i, j));
  return out;
}

Integer IntegralForm::det_H() const { return bareiss_det(to_integer(H_)); }

bool IntegralForm::is_positive_definite() const {
  for (int k = 1; k <= n(); ++k)
    if (bareiss_det(to_integer(H_.topLeftCorner(k, k))) <= 0) return false;
  return true;
}

std::int64_t IntegralForm::value(const VectorZ& v) const { return bilinear(v, v) / 2; }

std::int64_t IntegralForm::bilinear(const VectorZ& x, const VectorZ& y) const {
  __int128 acc = 0;
  for (int i = 0; i < n(); ++i) {
    if (!x(i)) continue;
    __int128 row = 0;
    for (int j = 0; j < n(); ++j) row += static_cast<__int128>(H_(i, j)) * y(j);
    acc += row * x(i);
  }
  return checked(acc);
}

IntegralForm IntegralForm::transformed(const MatrixZ& U) const {
  const Matrix<Integer> Ui = to_integer(U), Hi = to_integer(H_);
  const int m = static_cast<int>(U.rows());
  MatrixZ out(m, m);
  Matrix<Integer> UH(m, n());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n(); ++j) {
      Integer s = 0;
      for (int k = 0; k < n(); ++k) s += Ui(i, k) * Hi(k, j);
      UH(i, j) = s;
    }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Integer s = 0;
      for (int k = 0; k < n(); ++k) s += UH(i, k) * Ui(j, k);
      out(i, j) = to_int64(s);
    }
  return from_hessian(out);
}

IntegralForm IntegralForm::scaled_down(std::int64_t c) const {
  if (c <= 0 || content(*this) % c) throw Error("scaled_down: divisor does not divide the content");
  MatrixZ H = H_ / c;
  return from_hessian(H);
}

bool IntegralForm::operator<(const IntegralForm& o) const {
  if (n() != o.n()) return n() < o.n();
  for (int i = 0; i < n(); ++i)
    for (int j = i; j < n(); ++j)
      if (coeff(i, j) != o.coeff(i, j)) return coeff(i, j) < o.coeff(i, j);
  return false;
}

std::string to_string(const IntegralForm& f) {
  const int n = f.n();
  auto var = [n](int i) {
    if (n <= 10) return std::string(1, static_cast<char>('a' + i));
    return "x" + std::to_string(i + 1);
  };
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const std::int64_t c = f.coeff(i, j);
      if (!c) continue;
      if (first)
        os << (c < 0 ? "-" : "");
      else
        os << (c < 0 ? " - " : " + ");
      const std::int64_t a = c < 0 ? -c : c;
      if (a != 1) os << a;
      if (i == j)
        os << var(i) << "²";
      else
        os << var(i) << (n > 10 ? "·" : "") << var(j);
      first = false;
    }
  if (first) os << "0";
  return os.str();
}

IntegralForm form_of_basis(const LatticeBasis& L) {
  const int n = static_cast<int>(L.basis.rows());
  const int m = static_cast<int>(L.basis.cols());
  if (m != L.ambient.dim()) throw Error("form_of_basis: basis does not match the ambient dimension");
  MatrixZ H(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Rational g = 0;
      for (int k = 0; k < m; ++k) g += L.ambient.diagonal[k] * L.basis(i, k) * L.basis(j, k);
      g.canonicalize();
      const Rational h = 2 * g;
      if (i == j ? g.get_den() != 1 : h.get_den() != 1) throw Error("form_of_basis: lattice is not Z-valued");
      H(i, j) = H(j, i) = to_int64(h.get_num());
    }
  return IntegralForm::from_hessian(H);
}

std::int64_t content(const IntegralForm& f) {
  std::int64_t g = 0;
  for (int i = 0; i < f.n(); ++i)
    for (int j = i; j < f.n(); ++j) g = std::gcd(g, f.coeff(i, j));
  return g;
}

Diagonalization rational_diagonalize(const IntegralForm& f) {
  const int n = f.n();
  MatrixQ A(n, n), T = MatrixQ::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = Rational(static_cast<long>(f.hessian()(i, j)), 2);
  for (int i = 0; i < n; ++i) {
    A(i, i).canonicalize();
    if (A(i, i) == 0) throw Error("rational_diagonalize: form is not positive definite");
    for (int j = i + 1; j < n; ++j) {
      Rational m = A(j, i) / A(i, i);
      m.canonicalize();
      if (m == 0) continue;
      for (int k = 0; k < n; ++k) A(j, k) -= m * A(i, k);
      for (int k = 0; k < n; ++k) A(k, j) -= m * A(k, i);
      for (int k = 0; k < n; ++k) T(j, k) -= m * T(i, k);
    }
  }
  Diagonalization out;
  for (int i = 0; i < n; ++i) {
    Rational a = A(i, i);
    a.canonicalize();
    if (a <= 0) throw Error("rational_diagonalize: form is not positive definite");
    out.diagonal.push_back(a);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) T(i, j).canonicalize();
  out.transform = T;
  return out;
}

GlobalProfile local_profile(const IntegralForm& f) {
  return profile_of_space(RationalSpace{rational_diagonalize(f).diagonal});
}

LatticeBasis zvalued_lattice_in(const RationalSpace& s) {
  const int n = s.dim();
  LatticeBasis L{s, MatrixQ::Zero(n, n)};
  for (int i = 0; i < n; ++i) {
    // least t with den | t^2
    Integer t = 1;
    for (const auto& f : factorize(s.diagonal[i].get_den()))
      t *= pow(Integer(static_cast<long>(f.prime)), static_cast<unsigned long>((f.exponent + 1) / 2));
    L.basis(i, i) = Rational(t);
  }
  return L;
}

Matrix<Integer> hermite_normal_form(const Matrix<Integer>& A) {
  Matrix<Integer> M = A;
  const int rows = static_cast<int>(M.rows()), cols = static_cast<int>(M.cols());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    while (true) {
      int piv = -1;
      for (int i = r; i < rows; ++i)
        if (M(i, c) != 0 && (piv < 0 || abs(M(i, c)) < abs(M(piv, c)))) piv = i;
      if (piv < 0) break;
      M.row(r).swap(M.row(piv));
      bool done = true;
      for (int i = r + 1; i < rows; ++i) {
        if (M(i, c) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), M(i, c).get_mpz_t(), M(r, c).get_mpz_t());
        for (int k = c; k < cols; ++k) M(i, k) -= q * M(r, k);
        if (M(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (r >= rows || M(r, c) == 0) continue;
    if (M(r, c) < 0)
      for (int k = c; k < cols; ++k) M(r, k) = -M(r, k);
    for (int i = 0; i < r; ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), M(i, c).get_mpz_t(), M(r, c).get_mpz_t());
      for (int k = c; k < cols; ++k) M(i, k) -= q * M(r, k);
    }
    ++r;
  }
  return M.topRows(r);
}

namespace {

// Basis of the kernel of H mod p, as integer vectors with entries in [0, p).
std::vector<VectorZ> kernel_mod_p(const MatrixZ& H, std::int64_t p) {
  const int n = static_cast<int>(H.rows());
  MatrixZ A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = mod_p(H(i, j), p);
  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < n && r < n; ++c) {
    int piv = -1;
    for (int i = r; i < n; ++i)
      if (A(i, c)) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    A.row(r).swap(A.row(piv));
    const std::int64_t inv = inv_mod(A(r, c), p);
    for (int k = 0; k < n; ++k) A(r, k) = A(r, k) * inv % p;
    for (int i = 0; i < n; ++i) {
      if (i == r || !A(i, c)) continue;
      const std::int64_t m = A(i, c);
      for (int k = 0; k < n; ++k) A(i, k) = mod_p(A(i, k) - m * A(r, k), p);
    }
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<VectorZ> out;
  std::vector<bool> is_pivot(n, false);
  for (int c : pivot_col) is_pivot[c] = true;
  for (int f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    VectorZ v = VectorZ::Zero(n);
    v(f) = 1;
    for (int i = 0; i < r; ++i) v(pivot_col[i]) = mod_p(-A(i, f), p);
    out.push_back(v);
  }
  return out;
}

// A vector v in L with H v = 0 mod p and Q(v) = 0 mod p^2, normalized so its
// first nonzero entry is 1; nullopt when L has no index-p Z-valued overlattice.
std::optional<VectorZ> enlargement_vector(const IntegralForm& f, std::int64_t p) {
  const auto K = kernel_mod_p(f.hessian(), p);
  const int k = static_cast<int>(K.size());
  if (k == 0) return std::nullopt;
  const int n = f.n();
  const std::int64_t p2 = p * p;
  // Lines in the kernel: coefficient vectors whose first nonzero entry is 1.
  std::vector<std::int64_t> c(k, 0);
  for (int lead = 0; lead < k; ++lead) {
    std::fill(c.begin(), c.end(), 0);
    c[lead] = 1;
    while (true) {
      VectorZ v = VectorZ::Zero(n);
      for (int i = 0; i < k; ++i)
        if (c[i]) v += c[i] * K[i];
      for (int i = 0; i < n; ++i) v(i) = mod_p(v(i), p);
      if (mod_p(f.value(v), p2) == 0) {
        int first = 0;
        while (v(first) == 0) ++first;
        const std::int64_t s = inv_mod(v(first), p);
        for (int i = 0; i < n; ++i) v(i) = v(i) * s % p;
        return v;
      }
      int i = k - 1;
      while (i > lead && ++c[i] == p) c[i--] = 0;
      if (i == lead) break;
    }
  }
  return std::nullopt;
}

std::vector<std::int64_t> square_divisor_primes(const Integer& det) {
  std::vector<std::int64_t> out;
  for (const auto& fa : factorize(det))
    if (fa.exponent >= 2) out.push_back(fa.prime);
  return out;
}

MatrixQ to_rational(const MatrixZ& A) {
  MatrixQ out(A.rows(), A.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) out(i, j) = Rational(static_cast<long>(A(i, j)));
  return out;
}

MatrixQ multiply(const MatrixQ& A, const MatrixQ& B) {
  MatrixQ C(A.rows(), B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < B.cols(); ++j) {
      Rational s = 0;
      for (Eigen::Index k = 0; k < A.cols(); ++k) s += A(i, k) * B(k, j);
      s.canonicalize();
      C(i, j) = s;
    }
  return C;
}

}  // namespace

Maximalization maximalize_form(const IntegralForm& f) {
  IntegralForm cur = f;
  MatrixQ T = MatrixQ::Identity(f.n(), f.n());
  while (true) {
    bool enlarged = false;
    for (auto p : square_divisor_primes(cur.det_H())) {
      const auto v = enlargement_vector(cur, p);
      if (!v) continue;
      const int n = cur.n();
      int k = 0;
      while ((*v)(k) == 0) ++k;
      // Replace e_k by v / p; v_k = 1 so the new rows span L + Z v/p.
      MatrixQ U = MatrixQ::Identity(n, n);
      for (int j = 0; j < n; ++j) U(k, j) = Rational(static_cast<long>((*v)(j)), static_cast<long>(p));
      for (int j = 0; j < n; ++j) U(k, j).canonicalize();
      const MatrixQ Hn = multiply(multiply(U, to_rational(cur.hessian())), MatrixQ(U.transpose()));
      MatrixZ H(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (Hn(i, j).get_den() != 1) throw Error("maximalize: enlargement is not integral");
          H(i, j) = to_int64(Hn(i, j).get_num());
        }
      const Reduction red = lll_reduce(IntegralForm::from_hessian(H));
      T = multiply(multiply(to_rational(red.transform), U), T);
      cur = red.form;
      enlarged = true;
      break;
    }
    if (!enlarged) break;
  }
  return {cur, T};
}

LatticeBasis maximalize(const LatticeBasis& L) {
  const Maximalization m = maximalize_form(form_of_basis(L));
  return {L.ambient, multiply(m.transform, L.basis)};
}

bool is_maximal(const IntegralForm& f) {
  for (auto p : square_divisor_primes(f.det_H()))
    if (enlargement_vector(f, p)) return false;
  return true;
}

bool is_maximal(const LatticeBasis& L) { return is_maximal(form_of_basis(L)); }

}  // namespace qflat
