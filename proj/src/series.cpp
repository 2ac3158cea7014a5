#include "autores/series.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace autores {

PowerSeries::PowerSeries(int lo, int hi) : lo_(lo), hi_(hi) {
  assert(hi >= lo);
  c_.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
}

PowerSeries PowerSeries::constant(double c, int hi) {
  PowerSeries s(0, hi);
  s.c_[0] = c;
  return s;
}

PowerSeries PowerSeries::monomial(double c, int exponent, int hi) {
  PowerSeries s(std::min(exponent, 0), hi);
  s.set_coeff(exponent, c);
  return s;
}

double PowerSeries::coeff(int k) const {
  if (k < lo_ || k > hi_) return 0.0;
  return c_[static_cast<std::size_t>(k - lo_)];
}

void PowerSeries::set_coeff(int k, double c) {
  assert(k >= lo_ && k <= hi_);
  c_[static_cast<std::size_t>(k - lo_)] = c;
}

PowerSeries& PowerSeries::operator+=(const PowerSeries& o) {
  const int lo = std::min(lo_, o.lo_);
  const int hi = std::min(hi_, o.hi_);
  PowerSeries r(lo, hi);
  for (int k = lo; k <= hi; ++k) r.set_coeff(k, coeff(k) + o.coeff(k));
  *this = std::move(r);
  return *this;
}

PowerSeries& PowerSeries::operator-=(const PowerSeries& o) {
  PowerSeries neg = -1.0 * o;
  return *this += neg;
}

PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
  // Coefficients of the product are exact only while every contributing
  // pair lies inside the operands' exact ranges.
  const int lo = a.lo_ + b.lo_;
  const int hi = std::min(a.hi_ + b.lo_, b.hi_ + a.lo_);
  PowerSeries r(lo, hi);
  for (int i = a.lo_; i <= a.hi_; ++i) {
    const double ai = a.coeff(i);
    if (ai == 0.0) continue;
    for (int j = b.lo_; j <= b.hi_; ++j) {
      const int k = i + j;
      if (k > hi) break;
      r.set_coeff(k, r.coeff(k) + ai * b.coeff(j));
    }
  }
  return r;
}

PowerSeries operator*(double s, PowerSeries a) {
  for (double& c : a.c_) c *= s;
  return a;
}

PowerSeries PowerSeries::derivative_tau() const {
  // The unknown tail starting at x^{hi+1} maps to x^{hi+3}, so the
  // derivative is exact through hi + 2.
  PowerSeries r(std::min(lo_ + 2, 0), hi_ + 2);
  for (int k = lo_; k <= hi_; ++k)
    r.set_coeff(k + 2, -0.5 * k * coeff(k));
  return r;
}

namespace {

// sin/cos of a series with positive lowest exponent, by Taylor expansion.
void sincos_tail(const PowerSeries& b, int b_lo, PowerSeries* sin_out,
                 PowerSeries* cos_out) {
  const int hi = b.order();
  PowerSeries s(0, hi), c = PowerSeries::constant(1.0, hi);
  PowerSeries bp = PowerSeries::constant(1.0, hi);  // b^n
  double fact = 1.0;
  for (int n = 1; n * b_lo <= hi; ++n) {
    bp = bp * b;
    fact *= n;
    const double sign = ((n / 2) % 2 == 0) ? 1.0 : -1.0;
    if (n % 2 == 1) {
      s += (sign / fact) * bp;
    } else {
      c += (sign / fact) * bp;
    }
  }
  *sin_out = std::move(s);
  *cos_out = std::move(c);
}

}  // namespace

PowerSeries PowerSeries::sin() const {
  assert(lo_ >= 0);
  const double a0 = coeff(0);
  PowerSeries b = *this - constant(a0, hi_);
  b.set_coeff(0, 0.0);
  PowerSeries st, ct;
  sincos_tail(b, 1, &st, &ct);
  return std::sin(a0) * ct + std::cos(a0) * st;
}

PowerSeries PowerSeries::cos() const {
  assert(lo_ >= 0);
  const double a0 = coeff(0);
  PowerSeries b = *this - constant(a0, hi_);
  b.set_coeff(0, 0.0);
  PowerSeries st, ct;
  sincos_tail(b, 1, &st, &ct);
  return std::cos(a0) * ct - std::sin(a0) * st;
}

double PowerSeries::eval(double x) const {
  // Horner over nonnegative exponents plus explicit negative powers.
  double acc = 0.0;
  for (int k = hi_; k >= std::max(lo_, 0); --k) acc = acc * x + coeff(k);
  for (int k = std::min(hi_, -1); k >= lo_; --k)
    acc += coeff(k) * std::pow(x, k);
  return acc;
}

PowerSeries nu_series(double m, int hi) {
  PowerSeries r(0, hi);
  double binom = 1.0;  // C(-1/2, j), iteratively
  for (int j = 0; 2 * j + 1 <= hi; ++j) {
    if (j > 0) binom *= -(2.0 * j - 1.0) / (2.0 * j);
    r.set_coeff(2 * j + 1, m * binom);
  }
  return r;
}

}  // namespace autores
