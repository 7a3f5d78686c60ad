#ifndef DSD_SAMPLE_HPP
#define DSD_SAMPLE_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dsd/error.hpp"
#include "dsd/parallel.hpp"
#include "dsd/summation.hpp"

namespace dsd {

/// n observations of dimension p, stored row-major.
class Sample {
 public:
  Sample(std::vector<double> data, std::size_t n, std::size_t p)
      : data_(std::move(data)), n_(n), p_(p) {
    if (n_ == 0 || p_ == 0) throw DomainError("sample must have n >= 1 and p >= 1");
    if (data_.size() != n_ * p_) throw DomainError("sample data size does not match n*p");
    for (double v : data_)
      if (!std::isfinite(v)) throw DomainError("sample entries must be finite");
  }

  static Sample univariate(std::vector<double> values) {
    const std::size_t n = values.size();
    return Sample(std::move(values), n, 1);
  }

  static Sample from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw DomainError("sample must have at least one row");
    const std::size_t p = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * p);
    for (const auto& r : rows) {
      if (r.size() != p) throw DomainError("rows have different lengths");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return Sample(std::move(flat), rows.size(), p);
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t p() const noexcept { return p_; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * p_, p_}; }
  double operator()(std::size_t i, std::size_t k) const { return data_[i * p_ + k]; }
  const std::vector<double>& data() const noexcept { return data_; }

  /// The single column of a univariate sample.
  const std::vector<double>& values() const {
    if (p_ != 1) throw DomainError("operation requires a univariate sample (p = 1)");
    return data_;
  }

 private:
  std::vector<double> data_;
  std::size_t n_;
  std::size_t p_;
};

struct SortedSample {
  std::vector<double> values;      // nondecreasing
  std::vector<std::size_t> order;  // values[k] == source[order[k]]
};

struct DistanceSums {
  std::vector<double> row_sums;
  double total = 0.0;
  double total_squared = 0.0;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

// Locale-independent; accepts a leading '+' and scientific notation.
inline bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

inline std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delim, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace detail

/// Parses delimited text. Blank lines are skipped. The first non-blank line is
/// treated as a header when any of its fields is non-numeric.
inline Sample parse_csv(std::string_view text, char delimiter = ',') {
  std::vector<double> data;
  std::size_t p = 0;
  std::size_t n = 0;
  bool first = true;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = detail::trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty()) {
      if (eol == text.size()) break;
      continue;
    }
    const auto fields = detail::split(line, delimiter);
    std::vector<double> row(fields.size());
    std::size_t bad = 0;
    for (std::size_t k = 0; k < fields.size(); ++k) {
      if (!detail::parse_double(fields[k], row[k]) || !std::isfinite(row[k])) {
        if (bad == 0) bad = k + 1;
      }
    }
    if (first) {
      first = false;
      p = fields.size();
      if (bad != 0) continue;  // header row
    }
    if (fields.size() != p)
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(p) +
                           " fields, found " + std::to_string(fields.size()),
                       line_no);
    if (bad != 0)
      throw ParseError("line " + std::to_string(line_no) + ", column " + std::to_string(bad) +
                           ": not a finite number: '" + std::string(fields[bad - 1]) + "'",
                       line_no, bad);
    data.insert(data.end(), row.begin(), row.end());
    ++n;
    if (eol == text.size()) break;
  }
  if (n == 0) throw ParseError("input contains no data rows", 0);
  return Sample(std::move(data), n, p);
}

inline Sample load_csv(const std::string& path, char delimiter = ',') {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path + "'");
  return parse_csv(buf.str(), delimiter);
}

inline SortedSample sort_univariate(const Sample& s) {
  const auto& x = s.values();
  SortedSample out;
  out.order.resize(x.size());
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  out.values.resize(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) out.values[k] = x[out.order[k]];
  return out;
}

/// O(n^2 p) evaluation with pairwise summation within and across rows.
inline DistanceSums pairwise_distance_row_sums_direct(const Sample& s) {
  const std::size_t n = s.n();
  const std::size_t p = s.p();
  DistanceSums out;
  out.row_sums.assign(n, 0.0);
  std::vector<double> row_sq(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    std::vector<double> dist(n), dist2(n);
    const auto xi = s.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      const auto xj = s.row(j);
      double sq = 0.0;
      for (std::size_t k = 0; k < p; ++k) {
        const double d = xi[k] - xj[k];
        sq += d * d;
      }
      dist2[j] = sq;
      dist[j] = p == 1 ? std::abs(xi[0] - xj[0]) : std::sqrt(sq);
    }
    out.row_sums[i] = pairwise_sum(dist);
    row_sq[i] = pairwise_sum(dist2);
  });
  out.total = pairwise_sum(out.row_sums);
  out.total_squared = pairwise_sum(row_sq);
  return out;
}

/// O(n log n) univariate path: row sums from compensated prefix sums of the
/// sorted values; the squared total from the centered sum of squares. Values
/// are shifted by the minimum first, so a constant sample gives exact zeros.
inline DistanceSums pairwise_distance_row_sums_sorted(const Sample& s) {
  const auto& x = s.values();
  const std::size_t n = x.size();
  const SortedSample sorted = sort_univariate(s);
  const auto& v = sorted.values;
  const double origin = v[0];

  std::vector<double> prefix(n + 1, 0.0);  // prefix[k] = w[0] + ... + w[k-1], w = v - origin
  CompensatedSum acc;
  for (std::size_t k = 0; k < n; ++k) {
    acc.add(v[k] - origin);
    prefix[k + 1] = acc.value();
  }
  const double grand = prefix[n];

  DistanceSums out;
  out.row_sums.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = v[k] - origin;
    const double below = static_cast<double>(k) * w - prefix[k];
    const double above = (grand - prefix[k + 1]) - static_cast<double>(n - 1 - k) * w;
    out.row_sums[sorted.order[k]] = below + above;
  }
  out.total = pairwise_sum(out.row_sums);

  std::vector<double> dev(n);
  for (std::size_t i = 0; i < n; ++i) dev[i] = x[i] - origin;
  const double mean = pairwise_sum(dev) / static_cast<double>(n);
  for (auto& d : dev) d = (d - mean) * (d - mean);
  out.total_squared = 2.0 * static_cast<double>(n) * pairwise_sum(dev);
  return out;
}

/// Row sums of the Euclidean distance matrix; dispatches to the sorted path
/// for univariate samples.
inline DistanceSums pairwise_distance_row_sums(const Sample& s) {
  return s.p() == 1 ? pairwise_distance_row_sums_sorted(s) : pairwise_distance_row_sums_direct(s);
}

}  // namespace dsd

#endif  // DSD_SAMPLE_HPP
