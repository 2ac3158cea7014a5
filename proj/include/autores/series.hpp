#pragma once

// Truncated power series in x = tau^{-1/2} with integer exponents, allowing
// a few negative powers (sqrt(lambda*tau) carries x^{-1}, lambda*tau itself
// x^{-2}).  Every series tracks the highest exponent through which its
// coefficients are exact, so truncation stays consistent under arithmetic.

#include <vector>

namespace autores {

class PowerSeries {
 public:
  PowerSeries() = default;
  // Zero series with coefficients valid on exponents [lo, hi].
  PowerSeries(int lo, int hi);

  static PowerSeries constant(double c, int hi);
  static PowerSeries monomial(double c, int exponent, int hi);

  int lo() const { return lo_; }
  int order() const { return hi_; }  // highest exact exponent

  double coeff(int k) const;
  void set_coeff(int k, double c);

  PowerSeries& operator+=(const PowerSeries& o);
  PowerSeries& operator-=(const PowerSeries& o);
  friend PowerSeries operator+(PowerSeries a, const PowerSeries& b) {
    return a += b;
  }
  friend PowerSeries operator-(PowerSeries a, const PowerSeries& b) {
    return a -= b;
  }
  friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b);
  friend PowerSeries operator*(double s, PowerSeries a);

  // d/dtau = -(x^3 / 2) d/dx: maps c_k x^k to -(k/2) c_k x^{k+2}.
  PowerSeries derivative_tau() const;

  // Trigonometric composition; requires lo() >= 0.
  PowerSeries sin() const;
  PowerSeries cos() const;

  double eval(double x) const;

 private:
  int lo_ = 0;
  int hi_ = -1;
  std::vector<double> c_;  // c_[i] is the coefficient of x^{lo_ + i}
};

// nu(tau) = m x (1 + x^2)^{-1/2} expanded by the binomial series.
PowerSeries nu_series(double m, int hi);

}  // namespace autores
