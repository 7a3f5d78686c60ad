#ifndef DSD_SERIES_HPP
#define DSD_SERIES_HPP

// Double series for the distance variance of the Gamma, Poisson and negative
// binomial families. Inner sums cancel heavily, so they are carried out in
// binary floating point with 100 decimal digits. A guard propagates the
// rounding error of every inner sum and refuses to return a value it cannot
// vouch for.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "dsd/error.hpp"

namespace dsd {

struct SeriesOptions {
  double tolerance = 1e-13;  // relative size of a negligible shell
  int consecutive = 3;       // negligible shells required before stopping
  int max_index = 500;       // cap on j and k
};

struct SeriesResult {
  double value = 0.0;
  double error_bound = 0.0;
  int terms = 0;                    // largest j (or k) summed
  double cancellation_digits = 0.0; // worst decimal digits lost in an inner sum
};

namespace detail {

using mp100 = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<100>,
                                            boost::multiprecision::et_off>;

// Tracks rounding error of inner alternating sums. For a sum whose largest
// summand has magnitude `mag` over `count` terms, the absolute error is at
// most about count * mag * 10^-digits.
template <class T>
struct Guard {
  double worst_digits = 0.0;
  double abs_error = 0.0;

  T bound(const T& mag, int count) const {
    return mag * count * pow(T(10), -std::numeric_limits<T>::digits10);
  }

  // Records the effect of the error in `a` on prefactor * a^2.
  void add(const T& mag, const T& a, int count, const T& prefactor) {
    using std::abs;
    using std::log10;
    const T da = bound(mag, count);
    if (mag == 0) return;
    if (abs(a) > da * 1000) worst_digits = std::max(worst_digits, static_cast<double>(log10(mag / abs(a))));
    const T aa = abs(a);
    abs_error += static_cast<double>(prefactor * ((aa + da) * (aa + da) - aa * aa));
  }
};

inline void check_precision(double abs_error, double value, double tol, const char* what) {
  if (!(abs_error <= tol * std::abs(value)))
    throw ConvergenceError(std::string(what) + ": cancellation exceeds working precision", value, abs_error);
}

// Shell-wise accumulation of sum_{j>=k>=1} t(j,k) * (j == k ? 1 : 2). Stops
// after `consecutive` shells each below tolerance times the running total.
template <class Shell>
SeriesResult sum_shells(Shell shell, const SeriesOptions& opt, const char* what) {
  double total = 0.0;
  double last = 0.0;
  int small = 0;
  for (int j = 1; j <= opt.max_index; ++j) {
    const double s = shell(j);
    total += s;
    last = s;
    if (std::abs(s) <= opt.tolerance * std::abs(total)) {
      if (++small >= opt.consecutive) return {total, std::abs(s) * opt.consecutive, j, 0.0};
    } else {
      small = 0;
    }
  }
  throw ConvergenceError(std::string(what) + ": series did not converge within the term cap", total,
                         std::abs(last));
}

}  // namespace detail

/// Gamma(alpha, 1). Partial sums S(N) over the triangles j + k <= N converge
/// algebraically (tail ~ N^-3/2 with further terms in N^-5/2, N^-7/2), so the
/// limit is obtained by Richardson extrapolation over N = 10, 20, 40, 80, 160.
/// The coefficient is antisymmetric in (j, k), so only j >= k is evaluated.
inline SeriesResult gamma_dvar_series(double alpha) {
  using T = detail::mp100;
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("gamma: shape alpha must be > 0");
  constexpr int kN = 160;
  const std::vector<int> ladder{10, 20, 40, 80, 160};
  const double lg_a = std::lgamma(alpha);
  std::vector<double> diag(kN + 1, 0.0);  // diag[s] = sum_{j+k=s} A_jk^2
  detail::Guard<T> guard;

  const T ta(alpha);
  for (int s = 2; s <= kN; ++s) {
    for (int j = (s + 1) / 2; j <= s - 1; ++j) {
      const int k = s - j;
      const T a(2 - s);
      const T b = T(1) - ta - j;
      const T c = T(2) - 2 * ta - s;
      T f = 0, mag = 0, t = 1;
      for (int m = 0; m <= s - 2; ++m) {
        f += t;
        mag = std::max(mag, abs(t));
        t *= (a + m) * (b + m) / ((c + m) * (m + 1)) * 2;
      }
      const double lp = -s * std::log(2.0) +
                        0.5 * (std::lgamma(alpha + j) - lg_a - std::lgamma(j + 1.0) +
                               std::lgamma(alpha + k) - lg_a - std::lgamma(k + 1.0)) +
                        std::lgamma(2 * alpha + s - 1) - std::lgamma(alpha + j) -
                        std::lgamma(alpha + k);
      const T e = exp(T(lp));
      const T amp = f * e;
      guard.add(mag * e, amp, s, T(j == k ? 1 : 2));
      const double a2 = static_cast<double>(amp * amp);
      diag[s] += j == k ? a2 : 2.0 * a2;
    }
  }
  const double scale = std::pow(2.0, 2.0 * (2.0 - 2.0 * alpha));
  std::vector<double> partial;
  double run = 0.0;
  std::size_t next = 0;
  for (int s = 2; s <= kN; ++s) {
    run += diag[s];
    if (next < ladder.size() && s == ladder[next]) {
      partial.push_back(scale * run);
      ++next;
    }
  }
  // Each pass removes one power N^-p of the error expansion.
  const double exps[] = {1.5, 2.5, 3.5};
  std::vector<double> r = partial;
  std::vector<double> prev;
  for (double p : exps) {
    const double f = std::pow(2.0, p);
    prev = r;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) r[i] = (f * r[i + 1] - r[i]) / (f - 1.0);
    r.pop_back();
  }
  const double value = r.back();
  const double rounding = scale * guard.abs_error;
  detail::check_precision(rounding, value, 1e-12, "gamma series");
  const double bound = std::abs(r.back() - prev.back()) + rounding;
  return {value, bound, kN, guard.worst_digits};
}

/// Poisson(lambda). The inner coefficient is symmetric in (j, k) and is
/// evaluated with j >= k.
inline SeriesResult poisson_dvar_series(double lambda, SeriesOptions opt = {}) {
  using T = detail::mp100;
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("poisson: lambda must be > 0");
  const T lam(lambda);
  const T z = 4 * lam;
  const T ez = exp(-z);
  const T half(0.5);
  detail::Guard<T> guard;

  // e^{-4 lambda} 1F1(l + 1/2; j; 4 lambda) == 1F1(j - l - 1/2; j; -4 lambda)
  const auto kummer = [&](int j, int l) {
    T term = 1, sum = 1;
    const T a = T(l) + half;
    for (int i = 0; i < 100000; ++i) {
      term *= (a + i) / (j + i) * z / (i + 1);
      sum += term;
      if (term < sum * T(1e-60)) break;
    }
    return sum * ez;
  };

  std::vector<T> fact{T(1)};
  const auto factorial = [&](int n) -> const T& {
    while (static_cast<int>(fact.size()) <= n) fact.push_back(fact.back() * static_cast<int>(fact.size()));
    return fact[n];
  };

  const auto shell = [&](int j) {
    std::vector<T> m1f1((j + 1) / 2 + 1);
    for (int l = 0; l < static_cast<int>(m1f1.size()); ++l) m1f1[l] = kummer(j, l);
    // (1/2)_l and (1/2)_{j-l-1}
    std::vector<T> ph(j + 1);
    ph[0] = 1;
    for (int i = 1; i <= j; ++i) ph[i] = ph[i - 1] * (half + (i - 1));

    double out = 0.0;
    for (int k = 1; k <= j; ++k) {
      const int d = j - k;
      T a = 0, mag = 0, binom = 1;  // binom = C(d, 2l)
      for (int l = 0; 2 * l <= d; ++l) {
        if (l > 0) binom = binom * (d - 2 * l + 2) * (d - 2 * l + 1) / ((2 * l - 1) * (2 * l));
        T t = binom * ph[l] * ph[j - l - 1] * m1f1[l];
        if (l % 2 == 1) t = -t;
        a += t;
        mag = std::max(mag, abs(t));
      }
      const T pre = pow(T(4), j + k - 1) / (factorial(j) * factorial(k)) * pow(lam, j + k) /
                    (factorial(j - 1) * factorial(j - 1));
      guard.add(mag, a, d / 2 + 1, j == k ? pre : T(2 * pre));
      const T term = pre * a * a;
      out += static_cast<double>(j == k ? term : 2 * term);
    }
    return out;
  };
  SeriesResult r = detail::sum_shells(shell, opt, "poisson series");
  detail::check_precision(guard.abs_error, r.value, 1e-12, "poisson series");
  r.error_bound += guard.abs_error;
  r.cancellation_digits = guard.worst_digits;
  return r;
}

namespace detail {

using mp200 = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<200>,
                                            boost::multiprecision::et_off>;
using mp400 = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<400>,
                                            boost::multiprecision::et_off>;

// Raised when an inner sum cancels close to the working precision.
struct PrecisionExhausted {};

// Weights of the sum over (l1, l2) for d = j - k. With
//   P(x) = (1 - c x)^d (1 - 1/x)^d = sum_n L_n x^n,
// the weight n! (n)_m / (n - m)! = n^2 prod_{i<m} (n^2 - i^2) is even in n, so
// the sum over |l1 - l2| becomes a derivative of x^a (1 - c x)^d (x - 1)^d at
// x = 1. It vanishes for 2m < d and otherwise is a sum of same-sign terms:
//   B[m] = (-1)^(m+d) 2^m d! (S(d - m, 2m - d) + S(d - m + 1, 2m - 1 - d) / 2),
//   S(a, r) = sum_i C(a + i - 1, i) c^(r-i) / (r-i)! (1-c)^(d-r+i) / (d-r+i)!.
// The factor (-2)^m / (2m)! of the inner m-sum is folded in.
template <class T>
std::vector<T> nb_weights(int d, const std::vector<T>& ifact, const std::vector<T>& inv, const std::vector<T>& pc,
                          const std::vector<T>& pq) {
  std::vector<T> b(d + 1);
  if (d == 0) {
    b[0] = 1;
    return b;
  }
  const auto sum = [&](int a, int r) {  // r <= d
    T s = 0, rise = 1;                  // C(a + i - 1, i)
    for (int i = 0; i <= r; ++i) {
      if (i > 0) {
        if (a == 0) break;
        rise *= a + i - 1;
        rise *= inv[i];
      }
      s += rise * pc[r - i] * ifact[r - i] * pq[d - r + i] * ifact[d - r + i];
    }
    return s;
  };
  T two_m = 1;
  for (int m = 1; m <= d; ++m) {
    two_m *= 2;
    if (2 * m < d) continue;
    T s = sum(d - m, 2 * m - d);
    if (2 * m - 1 >= d) s += sum(d - m + 1, 2 * m - 1 - d) / 2;
    b[m] = ((m + d) % 2 == 0 ? 1 : -1) * two_m / ifact[d] * s;
  }
  return b;
}

// 2F1(a, 1/2; q; w) for 0 < w < 1 by its positive series.
template <class T>
T hyp2f1_half(const T& a, int q, const T& w) {
  const T half(0.5);
  const T eps = pow(T(10), -std::numeric_limits<T>::digits10);
  T term = 1, sum = 1;
  for (long i = 0; i < 10000000; ++i) {
    term *= (a + i) * (half + i) / ((q + i) * T(i + 1)) * w;
    sum += term;
    if (term < sum * eps && (a + i) * w < T(q + i)) break;
  }
  return sum;
}

// Progress of the shell sum, carried over when the precision is raised.
struct NbState {
  int j = 1;
  int small = 0;
  double total = 0.0;
  double last = 0.0;
  double abs_error = 0.0;
  double worst_digits = 0.0;
};

template <class T>
SeriesResult negbinomial_series_at(double c, double beta, const SeriesOptions& opt, NbState& st) {
  const T tc(c), tb(beta), half(0.5);
  const T w = 4 * tc / ((1 + tc) * (1 + tc));
  const T g_base = (1 + tc * tc) / ((1 + tc) * (1 + tc));
  const T front = pow(1 - tc, 4 * tb) * pow(1 + tc * tc, -2 * tb);
  const T shrink = tc / ((1 + tc * tc) * (1 + tc * tc));
  const int cap = opt.max_index;
  const double usable = std::numeric_limits<T>::digits10 - 20.0;

  std::vector<T> ifact(cap + 2), inv(cap + 2), pc(cap + 1), pq(cap + 1), p4c(cap + 1), e(cap + 2);
  ifact[0] = inv[0] = 1;
  for (int i = 1; i <= cap + 1; ++i) {
    inv[i] = T(1) / i;
    ifact[i] = ifact[i - 1] * inv[i];
  }
  pc[0] = pq[0] = p4c[0] = 1;
  for (int i = 1; i <= cap; ++i) {
    pc[i] = pc[i - 1] * tc;
    pq[i] = pq[i - 1] * (1 - tc);
    p4c[i] = p4c[i - 1] * 4 * tc;
  }
  e[1] = 1;  // 2^{q-1} (1/2)_{q-1} / (q-1)!
  for (int q = 2; q <= cap + 1; ++q) e[q] = e[q - 1] * 2 * (half + (q - 2)) * inv[q - 1];
  std::vector<T> pb(cap + 1);  // (beta)_j / j!
  pb[0] = 1;
  for (int i = 1; i <= cap; ++i) pb[i] = pb[i - 1] * (tb + (i - 1)) * inv[i];

  std::vector<std::vector<T>> weights;
  std::vector<T> f, h;
  const auto shell = [&](int j, Guard<T>& guard) {
    while (static_cast<int>(weights.size()) < j)
      weights.push_back(nb_weights<T>(static_cast<int>(weights.size()), ifact, inv, pc, pq));
    // h[q] = e_q ((1+c^2)/(1+c)^2)^(beta+j) 2F1(beta + j, 1/2; q; w), q <= j,
    // by downward recurrence in q from two direct evaluations.
    const T a = tb + j;
    f.assign(j + 2, T(0));
    f[j] = hyp2f1_half(a, j, w);
    f[j + 1] = hyp2f1_half(a, j + 1, w);
    for (int q = j; q >= 2; --q) {
      f[q - 1] = -(q * (q - 1 - (2 * q - a - half - 1) * w) * f[q] + (q - a) * (q - half) * w * f[q + 1]) /
                 (q * (q - 1) * (w - 1));
    }
    const T g = pow(g_base, a);
    h.assign(j + 1, T(0));
    for (int q = 1; q <= j; ++q) h[q] = e[q] * g * f[q];

    const T pj = front * pb[j] * pow(shrink, j);
    T out = 0;
    for (int k = 1; k <= j; ++k) {
      const int d = j - k;
      const auto& b = weights[d];
      T acc = 0, mag = 0;
      for (int m = (d + 1) / 2; m <= d; ++m) {
        const T t = b[m] * h[k + m];
        acc += t;
        mag = std::max(mag, abs(t));
      }
      const T pre = pj * pb[k] * p4c[k] * (j == k ? 1 : 2);
      guard.add(mag, acc, d + 1, pre);
      if (guard.worst_digits + std::log10(d + 1.0) > usable) throw PrecisionExhausted{};
      out += pre * acc * acc;
    }
    return static_cast<double>(out);
  };

  for (; st.j <= cap; ++st.j) {
    Guard<T> guard;
    guard.abs_error = st.abs_error;
    guard.worst_digits = st.worst_digits;
    const double s = shell(st.j, guard);
    st.abs_error = guard.abs_error;
    st.worst_digits = guard.worst_digits;
    st.total += s;
    const double ratio = st.last != 0.0 ? std::abs(s / st.last) : 1.0;
    st.last = s;
    if (std::abs(s) <= opt.tolerance * std::abs(st.total)) {
      if (++st.small >= opt.consecutive) {
        check_precision(st.abs_error, st.total, 1e-12, "negative binomial series");
        // Geometric tail from the observed shell ratio.
        const double tail = ratio < 1.0 ? std::abs(s) * ratio / (1.0 - ratio) : std::abs(s) * opt.consecutive;
        return {st.total, std::max(tail, std::abs(s) * opt.consecutive) + st.abs_error, st.j, st.worst_digits};
      }
    } else {
      st.small = 0;
    }
  }
  throw ConvergenceError("negative binomial series: did not converge within the term cap", st.total,
                         std::numeric_limits<double>::infinity());
}

}  // namespace detail

/// Negative binomial with P(X = x) = (beta)_x / x! (1 - c)^beta c^x. The
/// infinite inner sum over l is replaced by its closed form
///   sum_l (beta+j)_l r^l / l! 2F1(-l, q - 1/2; q; 2)
///     = ((1+c^2)/(1+c)^2)^(beta+j) 2F1(beta + j, 1/2; q; 4c/(1+c)^2)
/// with r = 2c/(1+c^2); the right side has positive terms for 0 < c < 1.
/// Shells decay like w^(2j) with w = 4c/(1+c)^2, so about
/// log(tolerance) / log(w^2) shells are needed; each costs O(j^2) operations.
/// The alternating sum over m loses roughly half a digit per shell, so the
/// working precision is raised from 100 to 200 to 400 digits as needed.
inline SeriesResult negbinomial_dvar_series(double c, double beta, SeriesOptions opt = {}) {
  if (!(c > 0.0 && c < 1.0)) throw DomainError("negbinomial: c must satisfy 0 < c < 1");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("negbinomial: beta must be > 0");
  const double w = 4.0 * c / ((1.0 + c) * (1.0 + c));
  const double needed = std::log(opt.tolerance) / (2.0 * std::log(w));
  if (needed > opt.max_index) {
    throw ConvergenceError("negative binomial series: about " + std::to_string(static_cast<long>(needed)) +
                               " shells needed, above the term cap",
                           0.0, std::numeric_limits<double>::infinity());
  }
  // Shells are independent, so a higher precision resumes at the shell that
  // ran out of digits.
  detail::NbState st;
  try {
    return detail::negbinomial_series_at<detail::mp100>(c, beta, opt, st);
  } catch (const detail::PrecisionExhausted&) {
  }
  try {
    return detail::negbinomial_series_at<detail::mp200>(c, beta, opt, st);
  } catch (const detail::PrecisionExhausted&) {
  }
  try {
    return detail::negbinomial_series_at<detail::mp400>(c, beta, opt, st);
  } catch (const detail::PrecisionExhausted&) {
    throw ConvergenceError("negative binomial series: cancellation exceeds 400 digits", st.total,
                           std::numeric_limits<double>::infinity());
  }
}

}  // namespace dsd

#endif  // DSD_SERIES_HPP
