#ifndef DSD_SPACINGS_HPP
#define DSD_SPACINGS_HPP

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "dsd/error.hpp"
#include "dsd/sample.hpp"
#include "dsd/summation.hpp"

namespace dsd {

/// Sorted sample plus its n-1 spacings d[k] = x(k+1) - x(k).
struct SpacingsView {
  SortedSample sorted;
  std::vector<double> d;
};

inline SpacingsView spacings(const Sample& s) {
  if (s.values().size() < 2) throw DomainError("spacings require n >= 2");
  SpacingsView out{sort_univariate(s), {}};
  const auto& v = out.sorted.values;
  out.d.resize(v.size() - 1);
  for (std::size_t k = 0; k + 1 < v.size(); ++k) out.d[k] = v[k + 1] - v[k];
  return out;
}

namespace detail {

// sum_{k,l} a(min(k,l)) b(max(k,l)) d_k d_l for 1-based k, l in [1, n-1], in
// O(n) via suffix sums over the separable weights.
template <class A, class B>
double separable_quadform(std::span<const double> d, A a, B b) {
  const std::size_t m = d.size();
  std::vector<double> diag(m), cross(m);
  CompensatedSum suffix;  // sum_{l > k} b(l) d_l
  for (std::size_t idx = m; idx-- > 0;) {
    const double k = static_cast<double>(idx + 1);
    cross[idx] = a(k) * d[idx] * suffix.value();
    diag[idx] = a(k) * b(k) * d[idx] * d[idx];
    suffix.add(b(k) * d[idx]);
  }
  return pairwise_sum(diag) + 2.0 * pairwise_sum(cross);
}

// The same double sum term by term, O(n^2).
template <class A, class B>
double separable_quadform_direct(std::span<const double> d, A a, B b) {
  const std::size_t m = d.size();
  std::vector<double> rows(m), row(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double ki = static_cast<double>(i + 1);
    for (std::size_t j = 0; j < m; ++j) {
      const double kj = static_cast<double>(j + 1);
      const double lo = ki < kj ? ki : kj;
      const double hi = ki < kj ? kj : ki;
      row[j] = a(lo) * b(hi) * d[i] * d[j];
    }
    rows[i] = pairwise_sum(row);
  }
  return pairwise_sum(rows);
}

inline double binom2(double n) { return n * (n - 1.0) / 2.0; }
inline double binom4(double n) { return n * (n - 1.0) * (n - 2.0) * (n - 3.0) / 24.0; }

}  // namespace detail

/// binom(n,2)^-2 sum_{k,l} min(k,l)^2 (n - max(k,l))^2 D_k D_l.
inline double u_stat_quadform(const SpacingsView& sv) {
  const double n = static_cast<double>(sv.d.size() + 1);
  const double q = detail::separable_quadform(
      sv.d, [](double k) { return k * k; }, [n](double k) { return (n - k) * (n - k); });
  const double c = detail::binom2(n);
  return q / (c * c);
}

inline double u_stat_quadform(const Sample& s) { return u_stat_quadform(spacings(s)); }

inline double u_stat_quadform_direct(const Sample& s) {
  const SpacingsView sv = spacings(s);
  const double n = static_cast<double>(sv.d.size() + 1);
  const double q = detail::separable_quadform_direct(
      sv.d, [](double k) { return k * k; }, [n](double k) { return (n - k) * (n - k); });
  const double c = detail::binom2(n);
  return q / (c * c);
}

/// Average over all 4-subsets of (2/3)(x(3:4) - x(2:4))^2. Uses the separable
/// weights k(k-1) and (n-k)(n-k-1), O(n) after sorting.
inline double u_stat_exact(const SpacingsView& sv) {
  const double n = static_cast<double>(sv.d.size() + 1);
  if (n < 4) throw DomainError("exact U-statistic requires n >= 4");
  const double q = detail::separable_quadform(
      sv.d, [](double k) { return k * (k - 1.0); },
      [n](double k) { return (n - k) * (n - k - 1.0); });
  return q / (6.0 * detail::binom4(n));
}

inline double u_stat_exact(const Sample& s) {
  if (s.values().size() < 4) throw DomainError("exact U-statistic requires n >= 4");
  return u_stat_exact(spacings(s));
}

/// (2/3) binom(n,4)^-1 sum_{i<j} (i-1)(n-j)(x(j) - x(i))^2, O(n^2).
inline double u_stat_exact_direct(const Sample& s) {
  const std::size_t n = s.values().size();
  if (n < 4) throw DomainError("exact U-statistic requires n >= 4");
  const auto v = sort_univariate(s).values;
  const double nd = static_cast<double>(n);
  std::vector<double> rows(n, 0.0), row(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j <= i) {
        row[j] = 0.0;
        continue;
      }
      const double diff = v[j] - v[i];
      row[j] = static_cast<double>(i) * (nd - static_cast<double>(j + 1)) * diff * diff;
    }
    rows[i] = pairwise_sum(row);
  }
  return (2.0 / 3.0) * pairwise_sum(rows) / detail::binom4(nd);
}

enum class QuadFormKind { V, G, S };

inline char kind_letter(QuadFormKind k) {
  switch (k) {
    case QuadFormKind::V: return 'V';
    case QuadFormKind::G: return 'G';
    case QuadFormKind::S: return 'S';
  }
  return '?';
}

inline QuadFormKind parse_kind(const std::string& s) {
  if (s == "V" || s == "v") return QuadFormKind::V;
  if (s == "G" || s == "g") return QuadFormKind::G;
  if (s == "S" || s == "s") return QuadFormKind::S;
  throw DomainError("unknown matrix kind '" + s + "' (expected V, G or S)");
}

/// Closed-form entry of a spacings quadratic-form matrix, 1-based i, j.
inline double quadform_entry(QuadFormKind kind, std::size_t n, std::size_t i, std::size_t j) {
  const double nd = static_cast<double>(n);
  const double lo = static_cast<double>(i < j ? i : j);
  const double hi = static_cast<double>(i < j ? j : i);
  const double c = detail::binom2(nd);
  switch (kind) {
    case QuadFormKind::V: return lo * lo * (nd - hi) * (nd - hi) / (c * c);
    case QuadFormKind::G:
      return static_cast<double>(i) * static_cast<double>(j) * (nd - static_cast<double>(i)) *
             (nd - static_cast<double>(j)) / (c * c);
    case QuadFormKind::S: return 0.5 * lo * (nd - hi) / c;
  }
  return 0.0;
}

/// Dense (n-1)x(n-1) matrix. D^t V D is the spacings U-statistic, D^t G D the
/// squared unbiased Gini mean difference, D^t S D the sample variance with
/// divisor n-1.
struct QuadFormMatrix {
  QuadFormKind kind = QuadFormKind::V;
  std::size_t n = 0;
  std::vector<double> entries;  // row-major, size (n-1)^2

  std::size_t dim() const noexcept { return n - 1; }
  double at(std::size_t i, std::size_t j) const { return entries[(i - 1) * dim() + (j - 1)]; }
};

inline constexpr std::size_t kMaxMatrixN = 5000;

inline QuadFormMatrix quadform_matrix(QuadFormKind kind, std::size_t n) {
  if (n < 2) throw DomainError("matrix size parameter n must be >= 2");
  if (n > kMaxMatrixN)
    throw DomainError("matrix size parameter n must be <= " + std::to_string(kMaxMatrixN));
  QuadFormMatrix m{kind, n, std::vector<double>((n - 1) * (n - 1))};
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 1; j < n; ++j) m.entries[(i - 1) * (n - 1) + (j - 1)] = quadform_entry(kind, n, i, j);
  return m;
}

inline double evaluate_quadform(const QuadFormMatrix& m, std::span<const double> d) {
  if (d.size() != m.dim()) throw DomainError("spacings vector length does not match matrix");
  const std::size_t k = m.dim();
  std::vector<double> rows(k), row(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) row[j] = m.entries[i * k + j] * d[i] * d[j];
    rows[i] = pairwise_sum(row);
  }
  return pairwise_sum(rows);
}

/// Writes "i,j,value" rows (1-based, full matrix) for external plotting.
inline void export_matrix_heatmap(const QuadFormMatrix& m, const std::string& path) {
  if (path.empty()) throw IoError("empty output path");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "i,j,value\n";
  char buf[64];
  const std::size_t k = m.dim();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const int len = std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g\n", i + 1, j + 1, m.entries[i * k + j]);
      out.write(buf, len);
    }
  out.flush();
  if (!out) throw IoError("error writing '" + path + "'");
}

}  // namespace dsd

#endif  // DSD_SPACINGS_HPP
