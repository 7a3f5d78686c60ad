#ifndef DSD_ESTIMATORS_HPP
#define DSD_ESTIMATORS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "dsd/error.hpp"
#include "dsd/sample.hpp"
#include "dsd/summation.hpp"

namespace dsd {

/// Components of the sample distance variance for one sample.
///
/// t1n = mean squared distance, t2n = deltaN^2, t3n = mean over i of the
/// squared average distance from X_i. The unbiased fields are empty when n is
/// too small for them (deltaHatN needs n >= 2, wHat and vSqHat need n >= 3).
struct EstimatorBreakdown {
  std::size_t n = 0;
  std::size_t p = 0;
  double t1n = 0.0;
  double t2n = 0.0;
  double t3n = 0.0;
  double wn = 0.0;
  double deltaN = 0.0;
  double vSq = 0.0;
  std::optional<double> deltaHatN;
  std::optional<double> wHat;
  std::optional<double> vSqHat;
};

enum class RowSumMethod { automatic, direct, sorted };

inline EstimatorBreakdown breakdown_from_sums(const DistanceSums& sums, std::size_t n,
                                              std::size_t p) {
  const double nd = static_cast<double>(n);
  EstimatorBreakdown b;
  b.n = n;
  b.p = p;
  b.deltaN = sums.total / (nd * nd);
  b.t1n = sums.total_squared / (nd * nd);
  b.t2n = b.deltaN * b.deltaN;
  std::vector<double> r2(n);
  for (std::size_t i = 0; i < n; ++i) r2[i] = sums.row_sums[i] * sums.row_sums[i];
  b.t3n = pairwise_sum(r2) / (nd * nd * nd);
  b.wn = b.t1n - 2.0 * b.t3n;
  // Nonnegative in exact arithmetic; rounding can leave a tiny negative.
  b.vSq = std::max(0.0, b.wn + b.t2n);
  if (n >= 2) b.deltaHatN = sums.total / (nd * (nd - 1.0));
  if (n >= 3) {
    b.wHat = nd * nd * b.wn / ((nd - 1.0) * (nd - 2.0));
    b.vSqHat = *b.wHat + *b.deltaHatN * *b.deltaHatN;
  }
  return b;
}

inline EstimatorBreakdown breakdown(const Sample& s, RowSumMethod method = RowSumMethod::automatic) {
  DistanceSums sums;
  switch (method) {
    case RowSumMethod::automatic: sums = pairwise_distance_row_sums(s); break;
    case RowSumMethod::direct: sums = pairwise_distance_row_sums_direct(s); break;
    case RowSumMethod::sorted: sums = pairwise_distance_row_sums_sorted(s); break;
  }
  return breakdown_from_sums(sums, s.n(), s.p());
}

enum class DsdVariant { vstat, unbiased_components };

struct DistanceSd {
  double value = 0.0;
  bool clamped = false;  // the unbiased square was negative and replaced by 0
};

inline DistanceSd distance_sd(const EstimatorBreakdown& b, DsdVariant variant) {
  if (variant == DsdVariant::vstat) return {std::sqrt(b.vSq), false};
  if (!b.vSqHat) throw DomainError("unbiased distance standard deviation requires n >= 3");
  if (*b.vSqHat < 0.0) return {0.0, true};
  return {std::sqrt(*b.vSqHat), false};
}

inline DistanceSd distance_sd(const Sample& s, DsdVariant variant = DsdVariant::vstat) {
  if (variant == DsdVariant::unbiased_components && s.n() < 3)
    throw DomainError("unbiased distance standard deviation requires n >= 3");
  return distance_sd(breakdown(s), variant);
}

enum class GiniVariant { biased, unbiased };

/// Mean Euclidean distance between observations, over all n^2 ordered pairs
/// (biased) or the n(n-1) distinct pairs (unbiased).
inline double gini_mean_difference(const Sample& s, GiniVariant variant = GiniVariant::unbiased) {
  const double nd = static_cast<double>(s.n());
  if (variant == GiniVariant::unbiased && s.n() < 2)
    throw DomainError("unbiased Gini mean difference requires n >= 2");
  const double total = pairwise_distance_row_sums(s).total;
  return variant == GiniVariant::biased ? total / (nd * nd) : total / (nd * (nd - 1.0));
}

/// Divisor applied to the centered sum of squares.
enum class VarianceNorm { over_n_n_minus_1, over_n_minus_1 };

inline double sample_variance(const Sample& s, VarianceNorm norm = VarianceNorm::over_n_n_minus_1) {
  const auto& x = s.values();
  const std::size_t n = x.size();
  if (n < 2) throw DomainError("sample variance requires n >= 2");
  const double nd = static_cast<double>(n);
  const double mean = pairwise_sum(x) / nd;
  std::vector<double> dev2(n);
  for (std::size_t i = 0; i < n; ++i) dev2[i] = (x[i] - mean) * (x[i] - mean);
  const double ss = pairwise_sum(dev2);
  return norm == VarianceNorm::over_n_minus_1 ? ss / (nd - 1.0) : ss / (nd * (nd - 1.0));
}

inline double sample_median(std::vector<double> x) {
  const std::size_t n = x.size();
  if (n == 0) throw DomainError("median of an empty sample");
  const auto mid = x.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(x.begin(), mid, x.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(x.begin(), mid);
  return 0.5 * (lower + upper);
}

/// Mean absolute deviation about the sample median (average of the central
/// pair for even n).
inline double mean_deviation(const Sample& s) {
  const auto& x = s.values();
  const double m = sample_median(x);
  std::vector<double> dev(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) dev[i] = std::abs(x[i] - m);
  return pairwise_sum(dev) / static_cast<double>(x.size());
}

inline constexpr std::size_t kBruteForceMaxN = 2000;

/// Literal double and triple sums. Oracle only: O(n^3 p).
inline double brute_force_vsq(const Sample& s) {
  const std::size_t n = s.n();
  if (n > kBruteForceMaxN)
    throw DomainError("brute_force_vsq refuses n > " + std::to_string(kBruteForceMaxN));
  const auto dist = [&](std::size_t i, std::size_t j) {
    double sq = 0.0;
    for (std::size_t k = 0; k < s.p(); ++k) {
      const double d = s(i, k) - s(j, k);
      sq += d * d;
    }
    return std::sqrt(sq);
  };
  std::vector<double> d(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i * n + j] = dist(i, j);

  long double s1 = 0, s2 = 0, s3 = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const long double dij = d[i * n + j];
      s1 += dij * dij;
      s2 += dij;
      for (std::size_t k = 0; k < n; ++k) s3 += dij * d[i * n + k];
    }
  const long double nd = static_cast<long double>(n);
  const long double t1 = s1 / (nd * nd);
  const long double t2 = (s2 / (nd * nd)) * (s2 / (nd * nd));
  const long double t3 = s3 / (nd * nd * nd);
  return static_cast<double>(t1 + t2 - 2.0L * t3);
}

}  // namespace dsd

#endif  // DSD_ESTIMATORS_HPP
