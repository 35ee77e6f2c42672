// SPDX-License-Identifier: Apache-2.0
// Integral LLL on a Gram matrix, exact over Z.
#include "qflat/lattice.hpp"

namespace qflat {

namespace {

class IntegralLLL {
 public:
  explicit IntegralLLL(const MatrixZ& H) : n_(static_cast<int>(H.rows())) {
    G_.resize(n_ + 1, n_ + 1);
    U_.resize(n_ + 1, n_ + 1);
    lam_.resize(n_ + 1, n_ + 1);
    d_.resize(n_ + 1);
    for (int i = 1; i <= n_; ++i)
      for (int j = 1; j <= n_; ++j) {
        G_(i, j) = static_cast<long>(H(i - 1, j - 1));
        U_(i, j) = i == j ? 1 : 0;
        lam_(i, j) = 0;
      }
  }

  void run() {
    if (n_ <= 1) return;
    d_[0] = 1;
    d_[1] = G_(1, 1);
    if (d_[1] <= 0) throw Error("lll_reduce: form is not positive definite");
    int k = 2, kmax = 1;
    while (k <= n_) {
      if (k > kmax) {
        kmax = k;
        for (int j = 1; j <= k; ++j) {
          Integer u = G_(k, j);
          for (int i = 1; i < j; ++i) {
            u = d_[i] * u - lam_(k, i) * lam_(j, i);
            mpz_divexact(u.get_mpz_t(), u.get_mpz_t(), d_[i - 1].get_mpz_t());
          }
          if (j < k)
            lam_(k, j) = u;
          else {
            if (u <= 0) throw Error("lll_reduce: form is not positive definite");
            d_[k] = u;
          }
        }
      }
      redi(k, k - 1);
      const Integer lhs = 100 * d_[k] * d_[k - 2];
      const Integer rhs = 99 * d_[k - 1] * d_[k - 1] - 100 * lam_(k, k - 1) * lam_(k, k - 1);
      if (lhs < rhs) {
        swapi(k, kmax);
        k = std::max(2, k - 1);
      } else {
        for (int l = k - 2; l >= 1; --l) redi(k, l);
        ++k;
      }
    }
  }

  Reduction result() const {
    MatrixZ H(n_, n_), U(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        H(i, j) = to_int64(G_(i + 1, j + 1));
        U(i, j) = to_int64(U_(i + 1, j + 1));
      }
    return {IntegralForm::from_hessian(H), U};
  }

 private:
  void redi(int k, int l) {
    Integer two_lam = 2 * lam_(k, l);
    if (abs(two_lam) <= d_[l]) return;
    Integer q, num = two_lam + d_[l], den = 2 * d_[l];
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    for (int j = 1; j <= n_; ++j) U_(k, j) -= q * U_(l, j);
    // b_k <- b_k - q b_l on the Gram matrix.
    const Integer gkl = G_(k, l);
    G_(k, k) += q * q * G_(l, l) - 2 * q * gkl;
    for (int j = 1; j <= n_; ++j) {
      if (j == k) continue;
      G_(k, j) -= q * G_(l, j);
      G_(j, k) = G_(k, j);
    }
    lam_(k, l) -= q * d_[l];
    for (int i = 1; i < l; ++i) lam_(k, i) -= q * lam_(l, i);
  }

  void swapi(int k, int kmax) {
    U_.row(k).swap(U_.row(k - 1));
    G_.row(k).swap(G_.row(k - 1));
    G_.col(k).swap(G_.col(k - 1));
    for (int j = 1; j <= k - 2; ++j) std::swap(lam_(k, j), lam_(k - 1, j));
    const Integer lam = lam_(k, k - 1);
    Integer B = d_[k - 2] * d_[k] + lam * lam;
    mpz_divexact(B.get_mpz_t(), B.get_mpz_t(), d_[k - 1].get_mpz_t());
    for (int i = k + 1; i <= kmax; ++i) {
      const Integer t = lam_(i, k);
      Integer a = d_[k] * lam_(i, k - 1) - lam * t;
      mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), d_[k - 1].get_mpz_t());
      lam_(i, k) = a;
      Integer b = B * t + lam * lam_(i, k);
      mpz_divexact(b.get_mpz_t(), b.get_mpz_t(), d_[k].get_mpz_t());
      lam_(i, k - 1) = b;
    }
    d_[k - 1] = B;
  }

  int n_;
  Matrix<Integer> G_, U_, lam_;
  std::vector<Integer> d_;
};

}  // namespace

Reduction lll_reduce(const IntegralForm& f) {
  IntegralLLL lll(f.hessian());
  lll.run();
  return lll.result();
}

}  // namespace qflat
