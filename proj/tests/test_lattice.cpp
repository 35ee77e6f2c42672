// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "qflat/lattice.hpp"

using namespace qflat;

namespace {

using Nested = std::vector<std::vector<std::int64_t>>;

Nested nested(const MatrixZ& H) {
  Nested out(H.rows(), std::vector<std::int64_t>(H.cols()));
  for (Eigen::Index i = 0; i < H.rows(); ++i)
    for (Eigen::Index j = 0; j < H.cols(); ++j) out[i][j] = H(i, j);
  return out;
}

// Box radius that contains every vector with Q(x) <= b.
std::int64_t box_radius(const IntegralForm& f, std::int64_t b) {
  const Eigen::MatrixXd H = f.hessian().cast<double>();
  const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H).eigenvalues()(0);
  return static_cast<std::int64_t>(std::sqrt(2.0 * static_cast<double>(b) / lmin)) + 1;
}

IntegralForm random_form(std::mt19937_64& rng, int n, int diag_max, int off_max) {
  std::uniform_int_distribution<int> d(1, diag_max), o(-off_max, off_max);
  while (true) {
    Nested c(n);
    for (int i = 0; i < n; ++i) {
      c[i].push_back(d(rng));
      for (int j = i + 1; j < n; ++j) c[i].push_back(o(rng));
    }
    const auto f = IntegralForm::from_coeffs(c);
    if (f.is_positive_definite()) return f;
  }
}

MatrixZ random_unimodular(std::mt19937_64& rng, int n, int steps) {
  std::uniform_int_distribution<int> idx(0, n - 1), coef(-2, 2), coin(0, 3);
  MatrixZ U = MatrixZ::Identity(n, n);
  for (int s = 0; s < steps; ++s) {
    const int i = idx(rng), j = idx(rng);
    if (i == j) continue;
    if (coin(rng) == 0)
      U.row(i).swap(U.row(j));
    else
      U.row(i) += coef(rng) * U.row(j);
  }
  if (coin(rng) == 0) U.row(0) *= -1;
  return U;
}

Rational q(long a, long b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

const IntegralForm sum3 = IntegralForm::diagonal({1, 1, 1});
const IntegralForm sum4 = IntegralForm::diagonal({1, 1, 1, 1});
const IntegralForm a2 = IntegralForm::from_coeffs({{1, 1}, {1}});

IntegralForm e8() {
  // Gram matrix of the E8 root lattice (simple roots, Bourbaki labelling).
  MatrixZ H = 2 * MatrixZ::Identity(8, 8);
  const int edges[7][2] = {{0, 2}, {1, 3}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}};
  for (auto& e : edges) H(e[0], e[1]) = H(e[1], e[0]) = -1;
  return IntegralForm::from_hessian(H);
}

IntegralForm d4() {
  MatrixZ H = 2 * MatrixZ::Identity(4, 4);
  for (int i = 1; i < 4; ++i) H(0, i) = H(i, 0) = -1;
  return IntegralForm::from_hessian(H);
}

}  // namespace

TEST_CASE("form basics") {
  CHECK(to_string(a2) == "a² + ab + b²");
  CHECK(to_string(IntegralForm::from_coeffs({{1, -2, 0}, {3, 0}, {5}})) == "a² - 2ab + 3b² + 5c²");
  CHECK(a2.det_H() == 3);
  CHECK(sum3.det_H() == 8);
  CHECK(e8().det_H() == 1);
  CHECK(e8().is_positive_definite());
  CHECK_FALSE(IntegralForm::from_coeffs({{1, 3}, {1}}).is_positive_definite());
  CHECK(content(IntegralForm::from_coeffs({{2, 4}, {6}})) == 2);
  CHECK(IntegralForm::from_coeffs({{2, 4}, {6}}).scaled_down(2) == IntegralForm::from_coeffs({{1, 2}, {3}}));
  CHECK_THROWS_AS(IntegralForm::from_coeffs({{1, 1}}), Error);
  VectorZ v(2);
  v << 1, -1;
  CHECK(a2.value(v) == 1);
  CHECK(a2.bilinear(v, v) == 2);
}

TEST_CASE("short vectors agree with a box search") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 3;
    const auto f = random_form(rng, n, 6, 4);
    const std::int64_t b = 1 + trial % 20;
    const auto expect = oracle::box_vectors(nested(f.hessian()), b, box_radius(f, b));
    const auto got = short_vectors(f, b);
    CHECK(2 * got.size() == expect.size());
    for (const auto& sv : got) {
      CHECK(f.value(sv.v) == sv.value);
      int last = n - 1;
      while (sv.v(last) == 0) --last;
      CHECK(sv.v(last) > 0);
    }
  }
  const auto th = theta_series(sum3, 6);
  CHECK(th == std::vector<std::int64_t>{1, 6, 12, 8, 6, 24, 24});
  CHECK(theta_series(e8(), 2) == std::vector<std::int64_t>{1, 240, 2160});
}

TEST_CASE("LLL reduction") {
  const auto f = IntegralForm::from_coeffs({{1, 2000000}, {1000000000001}});
  const auto r = lll_reduce(f);
  CHECK(r.form == IntegralForm::diagonal({1, 1}));
  CHECK(f.transformed(r.transform) == r.form);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 6;
    const auto base = random_form(rng, n, 5, 2);
    const auto g = base.transformed(random_unimodular(rng, n, 30));
    const auto red = lll_reduce(g);
    CHECK(red.form.det_H() == g.det_H());
    CHECK(g.transformed(red.transform) == red.form);
    CHECK(std::abs(red.transform.cast<double>().determinant()) == doctest::Approx(1.0));
    // Gram-Schmidt over Q: size reduction and the Lovasz condition.
    const auto& H = red.form.hessian();
    std::vector<std::vector<Rational>> mu(n, std::vector<Rational>(n));
    std::vector<Rational> B(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < i; ++j) {
        Rational s(static_cast<long>(H(i, j)));
        for (int k = 0; k < j; ++k) s -= mu[j][k] * mu[i][k] * B[k];
        mu[i][j] = s / B[j];
      }
      Rational s(static_cast<long>(H(i, i)));
      for (int k = 0; k < i; ++k) s -= mu[i][k] * mu[i][k] * B[k];
      B[i] = s;
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) CHECK(abs(mu[i][j]) <= q(1, 2));
    for (int i = 1; i < n; ++i) CHECK(B[i] >= (q(99, 100) - mu[i][i - 1] * mu[i][i - 1]) * B[i - 1]);
  }
}

TEST_CASE("automorphism group orders") {
  CHECK(automorphism_order(sum3) == 48);
  CHECK(automorphism_order(sum4) == 384);
  CHECK(automorphism_order(a2) == 12);
  CHECK(automorphism_order(d4()) == 1152);
  CHECK(automorphism_order(e8()) == Integer("696729600"));
  CHECK(automorphism_order(IntegralForm::diagonal({1})) == 2);

  const auto g3 = automorphism_group(sum3);
  CHECK(g3.has_improper);
  CHECK(g3.proper_order() == 24);
  CHECK_FALSE(automorphism_group(a2).generators.empty());
  for (const auto& M : g3.generators) CHECK(M.transpose() * sum3.hessian() * M == sum3.hessian());

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 3;
    const auto f = random_form(rng, n, 4, 3);
    std::int64_t maxn = 0;
    for (int i = 0; i < n; ++i) maxn = std::max(maxn, f.coeff(i, i));
    const auto expect = oracle::brute_aut_count(nested(f.hessian()), box_radius(f, maxn));
    CHECK(automorphism_order(f) == expect);
    const auto g = f.transformed(random_unimodular(rng, n, 20));
    CHECK(automorphism_order(g) == expect);
    for (const auto& M : automorphism_group(g).generators)
      CHECK(M.transpose() * g.hessian() * M == g.hessian());
  }
}

TEST_CASE("isometry testing") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 5;
    const auto f = random_form(rng, n, 5, 2);
    const auto g = f.transformed(random_unimodular(rng, n, 25));
    const auto T = is_isometric(f, g);
    REQUIRE(T.has_value());
    CHECK(T->transpose() * f.hessian() * *T == g.hessian());
  }
  CHECK_FALSE(is_isometric(IntegralForm::diagonal({1, 1, 4}), IntegralForm::diagonal({1, 2, 2})));
  // Equal determinants, different classes.
  const auto r1 = IntegralForm::diagonal({1, 1, 10});
  const auto r2 = IntegralForm::diagonal({1, 2, 5});
  CHECK(r1.det_H() == r2.det_H());
  CHECK_FALSE(is_isometric(r1, r2));
  CHECK(is_isometric(d4(), d4().transformed(random_unimodular(rng, 4, 40))));
}

TEST_CASE("rational diagonalization and local profile") {
  const auto d = rational_diagonalize(a2);
  CHECK(d.diagonal == std::vector<Rational>{1, q(3, 4)});

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 5;
    const auto f = random_form(rng, n, 6, 3);
    const auto dg = rational_diagonalize(f);
    // T A T^T is diagonal with the reported entries, A = H / 2.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Rational s = 0;
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            s += dg.transform(i, k) * Rational(static_cast<long>(f.hessian()(k, l)), 2) * dg.transform(j, l);
        s.canonicalize();
        CHECK(s == (i == j ? dg.diagonal[i] : Rational(0)));
      }
    const auto g = f.transformed(random_unimodular(rng, n, 20));
    CHECK(local_profile(f) == local_profile(g));
  }
}

TEST_CASE("Z-valued lattices and maximalization") {
  const auto L = zvalued_lattice_in(RationalSpace{{1, q(3, 4)}});
  CHECK(L.basis(0, 0) == 1);
  CHECK(L.basis(1, 1) == 2);
  CHECK(form_of_basis(L) == IntegralForm::diagonal({1, 3}));

  const auto m = maximalize_form(IntegralForm::diagonal({1, 1, 9}));
  CHECK(m.form.det_H() == 8);
  CHECK(is_isometric(m.form, sum3));

  const auto hur = maximalize_form(sum4);
  CHECK(hur.form.det_H() == 4);
  CHECK(automorphism_order(hur.form) == 1152);
  CHECK_FALSE(is_maximal(sum4));
  CHECK(is_maximal(sum3));
  CHECK(is_maximal(e8()));

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 5;
    const auto f = random_form(rng, n, 9, 4);
    const auto mx = maximalize_form(f);
    CHECK(is_maximal(mx.form));
    const Integer ratio = f.det_H() / mx.form.det_H();
    CHECK(ratio * mx.form.det_H() == f.det_H());
    CHECK(maximalize_form(mx.form).form.det_H() == mx.form.det_H());
    // The transform expresses the new basis in the old one.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Rational s = 0;
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            s += mx.transform(i, k) * Rational(static_cast<long>(f.hessian()(k, l))) * mx.transform(j, l);
        s.canonicalize();
        CHECK(s == Rational(static_cast<long>(mx.form.hessian()(i, j))));
      }
    CHECK(local_profile(f) == local_profile(mx.form));
  }
  const auto LB = maximalize(zvalued_lattice_in(RationalSpace{{1, 1, 1, 1}}));
  CHECK(form_of_basis(LB).det_H() == 4);
}

TEST_CASE("Hermite normal form") {
  Matrix<Integer> A(3, 2);
  A << 4, 6, 6, 9, 2, 3;
  const auto Hn = hermite_normal_form(A);
  REQUIRE(Hn.rows() == 1);
  CHECK(Hn(0, 0) == 2);
  CHECK(Hn(0, 1) == 3);

  Matrix<Integer> B(2, 2);
  B << 3, 1, 0, 5;
  const auto Hb = hermite_normal_form(B);
  CHECK(Hb(0, 0) == 3);
  CHECK(Hb(0, 1) == 1);
  CHECK(Hb(1, 1) == 5);
}
