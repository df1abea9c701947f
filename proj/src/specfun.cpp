#include "qiopa/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "qiopa/errors.hpp"

namespace qiopa {

namespace {

void require_finite(double x, const char* where) {
  if (!std::isfinite(x)) throw DomainError(std::string(where) + ": non-finite argument");
}

bool is_nonpositive_integer(double a) {
  return a <= 0.0 && std::abs(a - std::round(a)) < 1e-12;
}

}  // namespace

LogScaledReal LogScaledReal::from_double(double v) {
  if (v == 0.0) return zero();
  return {v > 0 ? 1 : -1, std::log(std::abs(v))};
}

double LogScaledReal::value() const {
  if (sign == 0) return 0.0;
  return sign * std::exp(log_magnitude);
}

LogScaledReal LogScaledReal::operator*(const LogScaledReal& o) const {
  if (sign == 0 || o.sign == 0) return zero();
  return {sign * o.sign, log_magnitude + o.log_magnitude};
}

LogScaledReal LogScaledReal::operator/(const LogScaledReal& o) const {
  if (o.sign == 0) throw DomainError("LogScaledReal: division by zero");
  if (sign == 0) return zero();
  return {sign * o.sign, log_magnitude - o.log_magnitude};
}

LogScaledReal LogScaledReal::operator+(const LogScaledReal& o) const {
  if (sign == 0) return o;
  if (o.sign == 0) return *this;
  const double top = std::max(log_magnitude, o.log_magnitude);
  const double s = sign * std::exp(log_magnitude - top) + o.sign * std::exp(o.log_magnitude - top);
  if (s == 0.0) return zero();
  return {s > 0 ? 1 : -1, top + std::log(std::abs(s))};
}

LogScaledReal LogScaledReal::pow(int p) const {
  if (p == 0) return one();
  if (sign == 0) return zero();
  return {(p % 2 != 0) ? sign : 1, p * log_magnitude};
}

LogScaledReal LogScaledReal::sqrt() const {
  if (sign < 0) throw DomainError("LogScaledReal: sqrt of negative value");
  if (sign == 0) return zero();
  return {1, 0.5 * log_magnitude};
}

double log_factorial(int n) {
  if (n < 0) throw DomainError("log_factorial: negative argument");
  return std::lgamma(static_cast<double>(n) + 1.0);
}

LogScaledReal log_binomial(int n, int k) {
  if (n < 0) throw DomainError("log_binomial: negative n");
  if (k < 0 || k > n) return LogScaledReal::zero();
  return LogScaledReal::from_log(log_factorial(n) - log_factorial(k) - log_factorial(n - k));
}

double laguerre(int n, double x) { return assoc_laguerre(n, 0, x); }

double assoc_laguerre(int n, int k, double x) {
  require_finite(x, "assoc_laguerre");
  if (n < 0 || k < 0) throw DomainError("assoc_laguerre: negative order");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + k - x;
  for (int m = 1; m < n; ++m) {
    const double next = ((2.0 * m + 1.0 + k - x) * cur - (m + k) * prev) / (m + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

LogScaledReal hyp2f1_terminating_log(double a, double b, double c, double z) {
  require_finite(a, "hyp2f1_terminating");
  require_finite(b, "hyp2f1_terminating");
  require_finite(c, "hyp2f1_terminating");
  require_finite(z, "hyp2f1_terminating");
  int terms = std::numeric_limits<int>::max();
  if (is_nonpositive_integer(a)) terms = std::min(terms, static_cast<int>(-std::round(a)));
  if (is_nonpositive_integer(b)) terms = std::min(terms, static_cast<int>(-std::round(b)));
  if (terms == std::numeric_limits<int>::max())
    throw UnsupportedInput("hyp2f1_terminating: series does not terminate");

  std::vector<LogScaledReal> parts;
  parts.reserve(static_cast<std::size_t>(terms) + 1);
  LogScaledReal term = LogScaledReal::one();
  parts.push_back(term);
  for (int m = 0; m < terms; ++m) {
    if (std::abs(c + m) < 1e-14) throw DomainError("hyp2f1_terminating: c hits a pole");
    term = term * LogScaledReal::from_double((a + m) * (b + m) * z / ((c + m) * (m + 1.0)));
    if (term.is_zero()) break;
    parts.push_back(term);
  }
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& p : parts)
    if (!p.is_zero()) top = std::max(top, p.log_magnitude);
  double s = 0.0;
  for (const auto& p : parts)
    if (!p.is_zero()) s += p.sign * std::exp(p.log_magnitude - top);
  if (s == 0.0) return LogScaledReal::zero();
  return {s > 0 ? 1 : -1, top + std::log(std::abs(s))};
}

double hyp2f1_terminating(double a, double b, double c, double z) {
  return hyp2f1_terminating_log(a, b, c, z).value();
}

}  // namespace qiopa
