#ifndef DSD_SPECIAL_HPP
#define DSD_SPECIAL_HPP

#include <cmath>
#include <limits>
#include <numbers>

#include "dsd/error.hpp"

namespace dsd {

struct SeriesControl {
  double tolerance = 1e-15;
  int max_terms = 100000;
};

namespace detail {

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

}  // namespace detail

/// Confluent hypergeometric 1F1(a; b; z). Negative arguments go through
/// Kummer's transformation so the summed series has no sign cancellation when
/// a and b are positive.
inline double hyp1f1(double a, double b, double z, SeriesControl ctl = {}) {
  if (z == 0.0) return 1.0;
  const bool terminates = detail::is_nonpositive_integer(a);
  if (detail::is_nonpositive_integer(b) && !(terminates && a > b))
    throw DomainError("hyp1f1: b must not be a nonpositive integer");
  if (z < 0.0 && !terminates) return std::exp(z) * hyp1f1(b - a, b, -z, ctl);

  double term = 1.0;
  double sum = 1.0;
  double comp = 0.0;
  int small = 0;
  for (int k = 0; k < ctl.max_terms; ++k) {
    term *= (a + k) / (b + k) * z / (k + 1);
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (term == 0.0) return sum;
    if (std::abs(term) <= ctl.tolerance * std::abs(sum)) {
      if (++small >= 2) return sum;
    } else {
      small = 0;
    }
  }
  throw ConvergenceError("hyp1f1: series did not converge", sum, std::abs(term));
}

/// Gauss hypergeometric 2F1(a, b; c; z) for |z| < 1, or any z when a or b is
/// a nonpositive integer (finite sum).
inline double hyp2f1(double a, double b, double c, double z, SeriesControl ctl = {}) {
  if (z == 0.0) return 1.0;
  const bool term_a = detail::is_nonpositive_integer(a);
  const bool term_b = detail::is_nonpositive_integer(b);
  if (term_a || term_b) {
    const double deg = term_a && term_b ? std::max(a, b) : (term_a ? a : b);
    const int m = static_cast<int>(-deg);
    double term = 1.0;
    double sum = 1.0;
    for (int k = 0; k < m; ++k) {
      if (c + k == 0.0) throw DomainError("hyp2f1: c hits zero before the series terminates");
      term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z;
      sum += term;
    }
    return sum;
  }
  if (detail::is_nonpositive_integer(c)) throw DomainError("hyp2f1: c must not be a nonpositive integer");
  if (!(std::abs(z) < 1.0)) throw DomainError("hyp2f1: |z| >= 1 requires a terminating series");

  double term = 1.0;
  double sum = 1.0;
  double comp = 0.0;
  int small = 0;
  for (int k = 0; k < ctl.max_terms; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z;
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (term == 0.0) return sum;
    if (std::abs(term) <= ctl.tolerance * std::abs(sum)) {
      if (++small >= 2) return sum;
    } else {
      small = 0;
    }
  }
  throw ConvergenceError("hyp2f1: series did not converge", sum, std::abs(term));
}

/// Pochhammer rising factorial (x)_k.
inline double pochhammer(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x + i;
  return r;
}

/// c_p = pi^((p+1)/2) / Gamma((p+1)/2).
inline double c_p(int p) {
  const double h = 0.5 * (p + 1);
  return std::exp(h * std::log(std::numbers::pi) - std::lgamma(h));
}

}  // namespace dsd

#endif  // DSD_SPECIAL_HPP
