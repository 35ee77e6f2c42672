// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>

#include "qflat/arith.hpp"

namespace qflat {

// Closed interval with dyadic endpoints. Every operation rounds outward to
// precision_bits significant bits, so containment of the true value is kept.
class RealInterval {
 public:
  RealInterval() = default;
  RealInterval(const Rational& lo, const Rational& hi, int precision_bits);
  static RealInterval exact(const Rational& x, int precision_bits);

  const Rational& lower() const { return lo_; }
  const Rational& upper() const { return hi_; }
  int precision_bits() const { return prec_; }
  Rational width() const { return hi_ - lo_; }
  bool contains(const Rational& x) const { return lo_ <= x && x <= hi_; }
  bool certainly_less(const RealInterval& o) const { return hi_ < o.lo_; }
  bool certainly_greater(const RealInterval& o) const { return lo_ > o.hi_; }

  friend RealInterval operator+(const RealInterval& a, const RealInterval& b);
  friend RealInterval operator-(const RealInterval& a, const RealInterval& b);
  friend RealInterval operator*(const RealInterval& a, const RealInterval& b);
  friend RealInterval operator/(const RealInterval& a, const RealInterval& b);

  RealInterval pow(int e) const;
  // Positive k-th root of an interval inside [0, inf).
  RealInterval root(int k) const;

 private:
  Rational lo_ = 0;
  Rational hi_ = 0;
  int prec_ = 64;
};

// Round a rational to a dyadic with `bits` significant bits.
Rational round_down(const Rational& x, int bits);
Rational round_up(const Rational& x, int bits);

RealInterval pi_interval(int precision_bits);
// zeta(r) for integer r >= 2, via Euler-Maclaurin with an explicit remainder.
RealInterval zeta_real_interval(int r, int precision_bits);

// Expression tree for the analytic cutoffs.
class Expr {
 public:
  enum class Kind { constant, pi, gamma, zeta, product, quotient, power, root };

  static Expr constant(const Rational& x);
  static Expr pi();
  static Expr gamma(int r);
  static Expr zeta(int r);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr pow(int e) const;
  Expr root(int k) const;

  Kind kind() const { return node_->kind; }
  std::string to_string() const;

 private:
  struct Node {
    Kind kind;
    Rational value;
    int arg = 0;
    std::shared_ptr<const Node> lhs, rhs;
  };
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;

  friend RealInterval eval_interval(const Expr& e, int precision_bits);
};

RealInterval eval_interval(const Expr& e, int precision_bits);

}  // namespace qflat
