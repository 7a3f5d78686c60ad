#ifndef DSD_SUMMATION_HPP
#define DSD_SUMMATION_HPP

#include <cstddef>
#include <span>

namespace dsd {

/// Pairwise (tree) summation. The reduction tree depends only on the length
/// of the input, so the result is reproducible for a fixed input.
inline double pairwise_sum(std::span<const double> xs) {
  constexpr std::size_t kBlock = 16;
  if (xs.size() <= kBlock) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

/// Neumaier-compensated running sum, used for prefix sums where a tree is not
/// applicable.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if ((sum_ >= 0 ? sum_ : -sum_) >= (x >= 0 ? x : -x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace dsd

#endif  // DSD_SUMMATION_HPP
