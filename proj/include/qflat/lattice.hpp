// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qflat/space.hpp"

namespace qflat {

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixZ = Matrix<std::int64_t>;
using VectorZ = Vector<std::int64_t>;
using MatrixQ = Matrix<Rational>;

// Q(x) = sum_{i<=j} c_ij x_i x_j, stored through its Hessian
// H_ii = 2 c_ii, H_ij = c_ij.
class IntegralForm {
 public:
  IntegralForm() = default;
  // Row i holds c_ii, c_i(i+1), ..., c_in.
  static IntegralForm from_coeffs(const std::vector<std::vector<std::int64_t>>& upper);
  static IntegralForm from_hessian(const MatrixZ& H);
  static IntegralForm diagonal(const std::vector<std::int64_t>& a);

  int n() const { return static_cast<int>(H_.rows()); }
  std::int64_t coeff(int i, int j) const;
  std::vector<std::vector<std::int64_t>> coeffs() const;
  const MatrixZ& hessian() const { return H_; }
  Integer det_H() const;
  bool is_positive_definite() const;

  std::int64_t value(const VectorZ& v) const;                        // Q(v)
  std::int64_t bilinear(const VectorZ& x, const VectorZ& y) const;   // x^T H y
  // Form in the basis given by the rows of U: H' = U H U^T.
  IntegralForm transformed(const MatrixZ& U) const;
  IntegralForm scaled_down(std::int64_t c) const;  // Q / c; c must divide every c_ij

  bool operator==(const IntegralForm& o) const { return H_ == o.H_; }
  // Lexicographic on the coefficient list; a total order for sorting.
  bool operator<(const IntegralForm& o) const;

 private:
  MatrixZ H_;
};

std::string to_string(const IntegralForm& f);

// Basis rows expressed in the diagonal coordinates of the ambient space.
struct LatticeBasis {
  RationalSpace ambient;
  MatrixQ basis;
};

IntegralForm form_of_basis(const LatticeBasis& L);
std::int64_t content(const IntegralForm& f);

struct Diagonalization {
  std::vector<Rational> diagonal;
  MatrixQ transform;  // rows: orthogonal basis in the coordinates of f
};
Diagonalization rational_diagonalize(const IntegralForm& f);
GlobalProfile local_profile(const IntegralForm& f);

struct Reduction {
  IntegralForm form;
  MatrixZ transform;  // unimodular, rows = new basis: form.H = U H U^T
};
// Exact integral LLL with delta = 99/100 and size-reduction bound 1/2.
Reduction lll_reduce(const IntegralForm& f);

struct ShortVector {
  VectorZ v;
  std::int64_t value;
};
// All v != 0 with Q(v) <= bound, one of each pair +-v (last nonzero entry positive).
std::vector<ShortVector> short_vectors(const IntegralForm& f, std::int64_t bound);
// theta[m] = #{v : Q(v) = m} for 0 <= m <= bound, both signs counted.
std::vector<std::int64_t> theta_series(const IntegralForm& f, std::int64_t bound);

struct AutomorphismGroup {
  Integer order;
  bool has_improper = false;
  std::vector<MatrixZ> generators;  // columns are images of the basis vectors
  Integer proper_order() const { return has_improper ? Integer(order / 2) : order; }
};
AutomorphismGroup automorphism_group(const IntegralForm& f);
Integer automorphism_order(const IntegralForm& f);

// T with T^T H_f T = H_g when f and g are isometric.
std::optional<MatrixZ> is_isometric(const IntegralForm& f, const IntegralForm& g);

// Repeated isometry tests against one form; its reduction and short vectors are
// kept between calls, so one tester must not be shared across threads.
class IsometryTester {
 public:
  explicit IsometryTester(const IntegralForm& f);
  // Same contract as is_isometric(f, g), without the theta prefilter.
  std::optional<MatrixZ> find(const IntegralForm& g) const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

LatticeBasis zvalued_lattice_in(const RationalSpace& s);
LatticeBasis maximalize(const LatticeBasis& L);
bool is_maximal(const LatticeBasis& L);
bool is_maximal(const IntegralForm& f);

struct Maximalization {
  IntegralForm form;
  MatrixQ transform;  // rows: basis of the maximal lattice in the coordinates of the input
};
Maximalization maximalize_form(const IntegralForm& f);

// Row-style Hermite normal form of an integer matrix; zero rows dropped.
Matrix<Integer> hermite_normal_form(const Matrix<Integer>& A);

}  // namespace qflat
