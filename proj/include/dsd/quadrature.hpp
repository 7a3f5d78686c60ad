#ifndef DSD_QUADRATURE_HPP
#define DSD_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "dsd/error.hpp"

namespace dsd {

/// Node of a tanh-sinh rule on a sub-interval [a, b] of (0, 1). `ubar` is
/// 1 - u computed without cancellation; `w` is the trapezoid weight h du/dt.
struct QuadNode {
  double t = 0.0;
  double u = 0.0;
  double ubar = 0.0;
  double w = 0.0;
  std::size_t piece = 0;
};

/// Tanh-sinh grid over (0, 1) split at the given interior breakpoints. Nodes
/// are ordered by increasing u. Level k uses step 2^-k in t.
class QuadGrid {
 public:
  QuadGrid(int level, std::vector<double> breakpoints = {}) : level_(level), h_(std::ldexp(1.0, -level)) {
    bounds_.push_back(0.0);
    for (double b : breakpoints) bounds_.push_back(b);
    bounds_.push_back(1.0);
    const int imax = static_cast<int>(std::floor(kTmax / h_));
    for (std::size_t p = 0; p + 1 < bounds_.size(); ++p)
      for (int i = -imax; i <= imax; ++i) nodes_.push_back(node(p, i * h_));
  }

  int level() const noexcept { return level_; }
  double step() const noexcept { return h_; }
  const std::vector<QuadNode>& nodes() const noexcept { return nodes_; }
  std::size_t pieces() const noexcept { return bounds_.size() - 1; }
  double lower(std::size_t piece) const { return bounds_[piece]; }
  double upper(std::size_t piece) const { return bounds_[piece + 1]; }

  /// Node at parameter t in piece p, with an unscaled weight du/dt.
  QuadNode node(std::size_t p, double t) const {
    const double a = bounds_[p];
    const double b = bounds_[p + 1];
    const double s = 0.5 * std::numbers::pi * std::sinh(t);
    const double sp = 1.0 / (1.0 + std::exp(-2.0 * s));
    const double sm = 1.0 / (1.0 + std::exp(2.0 * s));
    QuadNode n;
    n.t = t;
    n.u = a + (b - a) * sp;
    n.ubar = (1.0 - b) + (b - a) * sm;
    n.w = h_ * (b - a) * std::numbers::pi * std::cosh(t) * sp * sm;
    n.piece = p;
    return n;
  }

  /// Parameter t of the point u (with complement ubar) inside piece p.
  double t_of(std::size_t p, double u, double ubar) const {
    const double a = bounds_[p];
    const double b = bounds_[p + 1];
    const double sp = (u - a) / (b - a);
    const double sm = (ubar - (1.0 - b)) / (b - a);
    return std::asinh(std::log(sp / sm) / std::numbers::pi);
  }

  std::size_t piece_of(double u) const {
    for (std::size_t p = 0; p + 1 < bounds_.size(); ++p)
      if (u < bounds_[p + 1]) return p;
    return bounds_.size() - 2;
  }

  // Beyond |t| = 5.68 the distance to an endpoint drops below 1e-200.
  static constexpr double kTmax = 5.68;

 private:
  int level_;
  double h_;
  std::vector<double> bounds_;
  std::vector<QuadNode> nodes_;
};

/// Trapezoid sum of f(u, ubar) over the grid: approximates the integral over (0, 1).
template <class F>
double grid_sum(const QuadGrid& g, F&& f) {
  double s = 0.0;
  for (const auto& n : g.nodes())
    if (n.w > 0.0) s += n.w * f(n.u, n.ubar);
  return s;
}

/// Integral over (0, 1) with level doubling until two successive levels agree
/// to within tol * max(1, |I|).
template <class F>
double integrate_unit(F&& f, double tol = 1e-12, std::vector<double> breakpoints = {}, int max_level = 10) {
  double prev = grid_sum(QuadGrid(2, breakpoints), f);
  for (int level = 3; level <= max_level; ++level) {
    const double cur = grid_sum(QuadGrid(level, breakpoints), f);
    if (std::abs(cur - prev) <= tol * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  throw ConvergenceError("quadrature did not reach the requested tolerance", prev, tol);
}

/// Running integrals of a K-vector integrand at every grid node:
/// left[i] = integral over (0, u_i), right[i] = integral over (u_i, 1).
/// Between consecutive nodes of a piece a 5-point Gauss-Legendre rule in t is
/// used, so partial integrals keep the accuracy of the full rule.
template <std::size_t K>
struct Cumulative {
  std::vector<std::array<double, K>> left;
  std::vector<std::array<double, K>> right;
};

template <std::size_t K, class F>
Cumulative<K> cumulative_integrals(const QuadGrid& g, F&& f) {
  static constexpr double gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                   0.9061798459386640};
  static constexpr double gw[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                   0.4786286704993665, 0.2369268850561891};
  const auto& nodes = g.nodes();
  const std::size_t m = nodes.size();
  std::vector<std::array<double, K>> panel(m, std::array<double, K>{});  // panel[i]: (node i-1, node i)
  for (std::size_t i = 1; i < m; ++i) {
    if (nodes[i].piece != nodes[i - 1].piece) continue;  // gap at a breakpoint has width ~0
    const double t0 = nodes[i - 1].t;
    const double t1 = nodes[i].t;
    const double half = 0.5 * (t1 - t0);
    const double mid = 0.5 * (t1 + t0);
    for (int q = 0; q < 5; ++q) {
      QuadNode sub = g.node(nodes[i].piece, mid + half * gx[q]);
      if (!(sub.w > 0.0)) continue;
      const double wt = sub.w / g.step() * half * gw[q];
      const std::array<double, K> v = f(sub.u, sub.ubar);
      for (std::size_t k = 0; k < K; ++k) panel[i][k] += wt * v[k];
    }
  }
  Cumulative<K> out;
  out.left.assign(m, std::array<double, K>{});
  out.right.assign(m, std::array<double, K>{});
  for (std::size_t i = 1; i < m; ++i)
    for (std::size_t k = 0; k < K; ++k) out.left[i][k] = out.left[i - 1][k] + panel[i][k];
  for (std::size_t i = m - 1; i-- > 0;)
    for (std::size_t k = 0; k < K; ++k) out.right[i][k] = out.right[i + 1][k] + panel[i + 1][k];
  return out;
}

}  // namespace dsd

#endif  // DSD_QUADRATURE_HPP
