#pragma once

namespace qiopa {

/// Real number stored as sign and natural log of its magnitude.
struct LogScaledReal {
  int sign = 0;               ///< -1, 0 or +1; 0 means exactly zero
  double log_magnitude = 0.0;

  static LogScaledReal zero() { return {}; }
  static LogScaledReal one() { return {1, 0.0}; }
  static LogScaledReal from_double(double v);
  /// exp(l) with positive sign.
  static LogScaledReal from_log(double l) { return {1, l}; }

  bool is_zero() const { return sign == 0; }
  double value() const;

  LogScaledReal operator*(const LogScaledReal& o) const;
  LogScaledReal operator/(const LogScaledReal& o) const;
  LogScaledReal operator-() const { return {-sign, log_magnitude}; }
  LogScaledReal operator+(const LogScaledReal& o) const;
  LogScaledReal pow(int p) const;
  LogScaledReal sqrt() const;
};

double log_factorial(int n);

/// binom(n, k); exact zero for k < 0 or k > n.
LogScaledReal log_binomial(int n, int k);

/// Laguerre polynomial L_n(x) by the three-term recurrence.
double laguerre(int n, double x);

/// Associated Laguerre polynomial L_n^{(k)}(x), k >= 0.
double assoc_laguerre(int n, int k, double x);

/// Terminating Gauss series 2F1(a, b; c; z). One of a, b must be a
/// non-positive integer.
double hyp2f1_terminating(double a, double b, double c, double z);
LogScaledReal hyp2f1_terminating_log(double a, double b, double c, double z);

}  // namespace qiopa
