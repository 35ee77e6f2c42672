// SPDX-License-Identifier: Apache-2.0
#include "qflat/interval.hpp"

#include <algorithm>
#include <sstream>

namespace qflat {

namespace {

// e with 2^e <= x < 2^{e+1}, for x > 0.
long floor_log2(const Rational& x) {
  long e = static_cast<long>(mpz_sizeinbase(x.get_num_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(x.get_den_mpz_t(), 2));
  auto two_pow = [](long k) {
    Rational t = 1;
    if (k >= 0)
      mpq_mul_2exp(t.get_mpq_t(), t.get_mpq_t(), static_cast<unsigned long>(k));
    else
      mpq_div_2exp(t.get_mpq_t(), t.get_mpq_t(), static_cast<unsigned long>(-k));
    return t;
  };
  while (two_pow(e) > x) --e;
  while (two_pow(e + 1) <= x) ++e;
  return e;
}

Rational scale2(const Rational& x, long k) {
  Rational out;
  if (k >= 0)
    mpq_mul_2exp(out.get_mpq_t(), x.get_mpq_t(), static_cast<unsigned long>(k));
  else
    mpq_div_2exp(out.get_mpq_t(), x.get_mpq_t(), static_cast<unsigned long>(-k));
  return out;
}

Rational round_positive(const Rational& x, int bits, bool up) {
  const long shift = bits - 1 - floor_log2(x);
  Rational scaled = scale2(x, shift);
  Integer m;
  if (up)
    mpz_cdiv_q(m.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  else
    mpz_fdiv_q(m.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  return scale2(Rational(m), -shift);
}

}  // namespace

Rational round_down(const Rational& x, int bits) {
  if (x == 0) return 0;
  if (x < 0) return -round_positive(-x, bits, true);
  return round_positive(x, bits, false);
}

Rational round_up(const Rational& x, int bits) {
  if (x == 0) return 0;
  if (x < 0) return -round_positive(-x, bits, false);
  return round_positive(x, bits, true);
}

RealInterval::RealInterval(const Rational& lo, const Rational& hi, int precision_bits)
    : lo_(round_down(lo, precision_bits)), hi_(round_up(hi, precision_bits)), prec_(precision_bits) {
  if (lo > hi) throw Error("RealInterval: lower > upper");
}

RealInterval RealInterval::exact(const Rational& x, int precision_bits) {
  return RealInterval(x, x, precision_bits);
}

RealInterval operator+(const RealInterval& a, const RealInterval& b) {
  const int p = std::min(a.prec_, b.prec_);
  return RealInterval(a.lo_ + b.lo_, a.hi_ + b.hi_, p);
}

RealInterval operator-(const RealInterval& a, const RealInterval& b) {
  const int p = std::min(a.prec_, b.prec_);
  return RealInterval(a.lo_ - b.hi_, a.hi_ - b.lo_, p);
}

RealInterval operator*(const RealInterval& a, const RealInterval& b) {
  const int p = std::min(a.prec_, b.prec_);
  const Rational c[4] = {a.lo_ * b.lo_, a.lo_ * b.hi_, a.hi_ * b.lo_, a.hi_ * b.hi_};
  return RealInterval(*std::min_element(c, c + 4), *std::max_element(c, c + 4), p);
}

RealInterval operator/(const RealInterval& a, const RealInterval& b) {
  if (b.lo_ <= 0 && b.hi_ >= 0) throw Error("RealInterval: division by interval containing 0");
  const int p = std::min(a.prec_, b.prec_);
  const Rational c[4] = {a.lo_ / b.lo_, a.lo_ / b.hi_, a.hi_ / b.lo_, a.hi_ / b.hi_};
  return RealInterval(*std::min_element(c, c + 4), *std::max_element(c, c + 4), p);
}

RealInterval RealInterval::pow(int e) const {
  if (e < 0) return RealInterval::exact(1, prec_) / pow(-e);
  if (e == 0) return exact(1, prec_);
  const Rational a = qflat::pow(lo_, e), b = qflat::pow(hi_, e);
  if (lo_ >= 0 || e % 2 == 1) return RealInterval(std::min(a, b), std::max(a, b), prec_);
  if (hi_ <= 0) return RealInterval(b, a, prec_);
  return RealInterval(0, std::max(a, b), prec_);
}

namespace {

// Dyadic y with y^k <= x (up = false) or y^k >= x (up = true).
Rational root_bound(const Rational& x, int k, int bits, bool up) {
  if (x == 0) return 0;
  const long s = bits + 2 - floor_log2(x) / k;
  const Rational scaled = scale2(x, s * k);
  Integer N;
  mpz_fdiv_q(N.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  Integer r;
  mpz_root(r.get_mpz_t(), N.get_mpz_t(), static_cast<unsigned long>(k));
  if (up && !(qflat::pow(r, k) == N && scaled == Rational(N))) r += 1;
  return scale2(Rational(r), -s);
}

}  // namespace

RealInterval RealInterval::root(int k) const {
  if (k < 1) throw Error("RealInterval::root: k must be positive");
  if (lo_ < 0) throw Error("RealInterval::root: negative argument");
  return RealInterval(root_bound(lo_, k, prec_, false), root_bound(hi_, k, prec_, true), prec_);
}

RealInterval pi_interval(int precision_bits) {
  const int work = precision_bits + 16;
  // Machin: pi = 16 atan(1/5) - 4 atan(1/239); alternating tails bound the error.
  auto atan_inv = [&](long x, Rational& sum, Rational& tail) {
    sum = 0;
    Rational term = Rational(1, x);
    const Rational x2 = Rational(x * x);
    const Rational eps = scale2(Rational(1), -work - 8);
    for (long j = 0;; ++j) {
      const Rational t = term / (2 * j + 1);
      if (t < eps) {
        tail = t;
        break;
      }
      sum += (j % 2 == 0) ? t : Rational(-t);
      term /= x2;
    }
  };
  Rational a, ta, b, tb;
  atan_inv(5, a, ta);
  atan_inv(239, b, tb);
  const Rational mid = 16 * a - 4 * b;
  const Rational err = 16 * ta + 4 * tb;
  return RealInterval(mid - err, mid + err, precision_bits);
}

RealInterval zeta_real_interval(int r, int precision_bits) {
  if (r < 2) throw Error("zeta_real_interval: r must be >= 2");
  const int work = precision_bits + 16;
  const long N = precision_bits + 10;
  RealInterval head = RealInterval::exact(0, work);
  for (long k = 1; k < N; ++k) {
    const Rational t = Rational(1) / qflat::pow(Integer(k), r);
    head = head + RealInterval(t, t, work);
  }
  const Rational n = N;
  Rational mid = qflat::pow(n, 1 - r) / (r - 1) + qflat::pow(n, -r) / 2;
  // Euler-Maclaurin correction terms B_{2j}/(2j)! * r(r+1)...(r+2j-2) * N^{-r-2j+1}.
  const Rational eps = scale2(Rational(1), -work - 4);
  Rational rising = r;  // r(r+1)...(r+2j-2)
  Integer fact = 2;     // (2j)!
  Rational err;
  for (int j = 1;; ++j) {
    const Rational t = bernoulli(2 * j) / fact * rising * qflat::pow(n, -r - 2 * j + 1);
    if (abs(t) < eps) {
      // The remainder for real exponent is bounded by the first omitted
      // term; doubled for margin.
      err = 2 * abs(t);
      break;
    }
    mid += t;
    rising *= Rational((r + 2 * j - 1) * (r + 2 * j));
    fact *= (2 * j + 1) * (2 * j + 2);
  }
  return RealInterval(head.lower() + mid - err, head.upper() + mid + err, precision_bits);
}

Expr Expr::constant(const Rational& x) {
  return Expr(std::make_shared<const Node>(Node{Kind::constant, x, 0, nullptr, nullptr}));
}
Expr Expr::pi() { return Expr(std::make_shared<const Node>(Node{Kind::pi, 0, 0, nullptr, nullptr})); }
Expr Expr::gamma(int r) {
  if (r < 1) throw Error("Expr::gamma: argument must be a positive integer");
  return Expr(std::make_shared<const Node>(Node{Kind::gamma, 0, r, nullptr, nullptr}));
}
Expr Expr::zeta(int r) {
  if (r < 2) throw Error("Expr::zeta: argument must be >= 2");
  return Expr(std::make_shared<const Node>(Node{Kind::zeta, 0, r, nullptr, nullptr}));
}
Expr operator*(const Expr& a, const Expr& b) {
  return Expr(std::make_shared<const Expr::Node>(
      Expr::Node{Expr::Kind::product, 0, 0, a.node_, b.node_}));
}
Expr operator/(const Expr& a, const Expr& b) {
  return Expr(std::make_shared<const Expr::Node>(
      Expr::Node{Expr::Kind::quotient, 0, 0, a.node_, b.node_}));
}
Expr Expr::pow(int e) const {
  return Expr(std::make_shared<const Node>(Node{Kind::power, 0, e, node_, nullptr}));
}
Expr Expr::root(int k) const {
  return Expr(std::make_shared<const Node>(Node{Kind::root, 0, k, node_, nullptr}));
}

std::string Expr::to_string() const {
  std::ostringstream os;
  switch (node_->kind) {
    case Kind::constant: os << node_->value.get_str(); break;
    case Kind::pi: os << "pi"; break;
    case Kind::gamma: os << "gamma(" << node_->arg << ")"; break;
    case Kind::zeta: os << "zeta(" << node_->arg << ")"; break;
    case Kind::product:
      os << "(" << Expr(node_->lhs).to_string() << " * " << Expr(node_->rhs).to_string() << ")";
      break;
    case Kind::quotient:
      os << "(" << Expr(node_->lhs).to_string() << " / " << Expr(node_->rhs).to_string() << ")";
      break;
    case Kind::power: os << Expr(node_->lhs).to_string() << "^" << node_->arg; break;
    case Kind::root: os << "root" << node_->arg << "(" << Expr(node_->lhs).to_string() << ")"; break;
  }
  return os.str();
}

RealInterval eval_interval(const Expr& e, int precision_bits) {
  const auto& n = *e.node_;
  switch (n.kind) {
    case Expr::Kind::constant: return RealInterval::exact(n.value, precision_bits);
    case Expr::Kind::pi: return pi_interval(precision_bits);
    case Expr::Kind::gamma: {
      Integer f = 1;
      for (int k = 2; k < n.arg; ++k) f *= k;
      return RealInterval::exact(Rational(f), precision_bits);
    }
    case Expr::Kind::zeta: return zeta_real_interval(n.arg, precision_bits);
    case Expr::Kind::product:
      return eval_interval(Expr(n.lhs), precision_bits) * eval_interval(Expr(n.rhs), precision_bits);
    case Expr::Kind::quotient:
      return eval_interval(Expr(n.lhs), precision_bits) / eval_interval(Expr(n.rhs), precision_bits);
    case Expr::Kind::power: return eval_interval(Expr(n.lhs), precision_bits).pow(n.arg);
    case Expr::Kind::root: return eval_interval(Expr(n.lhs), precision_bits).root(n.arg);
  }
  throw Error("eval_interval: unknown node");
}

}  // namespace qflat
