#ifndef DSD_CLOSED_FORMS_HPP
#define DSD_CLOSED_FORMS_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "dsd/distribution.hpp"
#include "dsd/error.hpp"
#include "dsd/quadrature.hpp"
#include "dsd/series.hpp"
#include "dsd/special.hpp"
#include "dsd/summation.hpp"

namespace dsd {

/// Tolerances for series and quadrature evaluation.
struct ClosedFormContext {
  double series_tolerance = 1e-13;
  int series_term_cap = 500;
  double quadrature_tolerance = 1e-11;

  static double cp(int p) { return c_p(p); }
  SeriesOptions series() const { return {series_tolerance, 3, series_term_cap}; }
};

enum class EvalMethod { closed_form, series, numeric };

inline const char* method_name(EvalMethod m) {
  switch (m) {
    case EvalMethod::closed_form: return "closed-form";
    case EvalMethod::series: return "series";
    case EvalMethod::numeric: return "numeric";
  }
  return "?";
}

struct PopulationValue {
  double value = 0.0;
  EvalMethod method = EvalMethod::closed_form;
  double error_bound = 0.0;
};

namespace detail {

// Integer-supported laws: F is constant on [i, i+1), so the double integral
// over x < y collapses to sums over cells (the diagonal cell counts half).
struct LatticeCdf {
  std::vector<double> F;  // F(i)
  std::vector<double> S;  // 1 - F(i)
};

inline LatticeCdf lattice_cdf(const DistributionSpec& d) {
  LatticeCdf out;
  for (int i = 0; i < 1000000; ++i) {
    const double s = survival(d, i);
    out.F.push_back(cdf(d, i));
    out.S.push_back(s);
    if (s < 1e-300 || (i > 10 && s < 1e-40)) return out;
  }
  throw ConvergenceError(family_name(d) + ": support truncation did not converge", 0.0, 1.0);
}

inline double lattice_dvar(const LatticeCdf& c) {
  std::vector<double> terms;
  CompensatedSum prefix;  // sum_{i<j} F_i^2
  for (std::size_t j = 0; j < c.F.size(); ++j) {
    terms.push_back(prefix.value() * c.S[j] * c.S[j] + 0.5 * c.F[j] * c.F[j] * c.S[j] * c.S[j]);
    prefix.add(c.F[j] * c.F[j]);
  }
  return 8.0 * pairwise_sum(terms);
}

inline double lattice_gini(const LatticeCdf& c) {
  std::vector<double> terms(c.F.size());
  for (std::size_t i = 0; i < c.F.size(); ++i) terms[i] = c.F[i] * c.S[i];
  return 2.0 * pairwise_sum(terms);
}

inline double dx_du(const DistributionSpec& d, double x) {
  const double f = pdf(d, x);
  return f > 0.0 ? 1.0 / f : 0.0;
}

inline void require_univariate(const DistributionSpec& d, const char* what) {
  if (dimension(d) != 1) throw DomainError(std::string(what) + " requires a univariate distribution");
}

}  // namespace detail

/// 8 * double integral over x < y of F(x)^2 (1 - F(y))^2, in probability
/// space: the inner integral is accumulated along the outer tanh-sinh grid.
inline PopulationValue population_dvar_numeric(const DistributionSpec& d, const ClosedFormContext& ctx = {}) {
  validate(d);
  detail::require_univariate(d, "numeric distance variance");
  if (is_discrete(d)) return {detail::lattice_dvar(detail::lattice_cdf(d)), EvalMethod::numeric, 0.0};

  const auto bps = quantile_breakpoints(d);
  const auto at_level = [&](int level) {
    QuadGrid g(level, bps);
    const auto cum = cumulative_integrals<1>(g, [&](double u, double ub) {
      return std::array<double, 1>{u * u * detail::dx_du(d, quantile(d, u, ub))};
    });
    std::vector<double> terms;
    terms.reserve(g.nodes().size());
    for (std::size_t i = 0; i < g.nodes().size(); ++i) {
      const auto& n = g.nodes()[i];
      if (!(n.w > 0.0)) continue;
      const double x = quantile(d, n.u, n.ubar);
      terms.push_back(n.w * n.ubar * n.ubar * detail::dx_du(d, x) * cum.left[i][0]);
    }
    return 8.0 * pairwise_sum(terms);
  };
  double prev = at_level(3);
  for (int level = 4; level <= 10; ++level) {
    const double cur = at_level(level);
    const double diff = std::abs(cur - prev);
    if (diff <= ctx.quadrature_tolerance * std::max(1.0, cur)) return {cur, EvalMethod::numeric, diff};
    prev = cur;
  }
  throw ConvergenceError(family_name(d) + ": distance variance quadrature did not converge", prev,
                         ctx.quadrature_tolerance);
}

/// Gini mean difference E|X - X'| (Euclidean norm for the multivariate normal).
inline PopulationValue population_gini_detailed(const DistributionSpec& d, const ClosedFormContext& ctx = {}) {
  validate(d);
  using std::numbers::pi;
  const auto numeric = [&]() -> PopulationValue {
    if (is_discrete(d)) return {detail::lattice_gini(detail::lattice_cdf(d)), EvalMethod::numeric, 0.0};
    const double v = integrate_unit(
        [&](double u, double ub) { return 2.0 * u * ub * detail::dx_du(d, quantile(d, u, ub)); },
        ctx.quadrature_tolerance, quantile_breakpoints(d));
    return {v, EvalMethod::numeric, ctx.quadrature_tolerance * std::max(1.0, v)};
  };
  return std::visit(detail::overloaded{
                        [](const Bernoulli& b) -> PopulationValue { return {2.0 * b.prob * (1.0 - b.prob)}; },
                        [](const Normal& n) -> PopulationValue { return {2.0 * n.sd / std::sqrt(pi)}; },
                        [](const Uniform& u) -> PopulationValue { return {(u.hi - u.lo) / 3.0}; },
                        [](const Laplace& l) -> PopulationValue { return {1.5 * l.alpha}; },
                        [](const Pareto& p) -> PopulationValue {
                          return {2.0 * p.alpha * p.xm / ((p.alpha - 1.0) * (2.0 * p.alpha - 1.0))};
                        },
                        [](const Exponential& e) -> PopulationValue { return {1.0 / e.rate}; },
                        [](const MultiNormalIdentity& m) -> PopulationValue {
                          const double p = static_cast<double>(m.mean.size());
                          return {2.0 * std::exp(std::lgamma(0.5 * (p + 1.0)) - std::lgamma(0.5 * p))};
                        },
                        [&](const auto&) { return numeric(); },
                    },
                    d);
}

inline double population_gini(const DistributionSpec& d, const ClosedFormContext& ctx = {}) {
  return population_gini_detailed(d, ctx).value;
}

inline double population_variance(const DistributionSpec& d) {
  validate(d);
  return variance(d);
}

/// Distance variance of the family: exact formula, double series, or (for
/// Student t) the probability-space quadrature.
inline PopulationValue population_dvar_detailed(const DistributionSpec& d, const ClosedFormContext& ctx = {}) {
  validate(d);
  using std::numbers::pi;
  return std::visit(
      detail::overloaded{
          [](const Bernoulli& b) -> PopulationValue {
            const double v = b.prob * (1.0 - b.prob);
            return {4.0 * v * v};
          },
          [](const Normal& n) -> PopulationValue {
            return {4.0 * ((1.0 - std::sqrt(3.0)) / pi + 1.0 / 3.0) * n.sd * n.sd};
          },
          [](const Uniform& u) -> PopulationValue { return {2.0 * (u.hi - u.lo) * (u.hi - u.lo) / 45.0}; },
          [](const Laplace& l) -> PopulationValue { return {7.0 * l.alpha * l.alpha / 12.0}; },
          [](const Pareto& p) -> PopulationValue {
            const double a = p.alpha;
            return {4.0 * a * a * p.xm * p.xm / ((a - 1.0) * (2.0 * a - 1.0) * (2.0 * a - 1.0) * (3.0 * a - 2.0))};
          },
          [](const Exponential& e) -> PopulationValue { return {1.0 / (3.0 * e.rate * e.rate)}; },
          [](const GammaDist& g) -> PopulationValue {
            const auto r = gamma_dvar_series(g.alpha);
            return {r.value, EvalMethod::series, r.error_bound};
          },
          [&](const Poisson& p) -> PopulationValue {
            const auto r = poisson_dvar_series(p.lambda, ctx.series());
            return {r.value, EvalMethod::series, r.error_bound};
          },
          [&](const NegBinomial& nb) -> PopulationValue {
            const auto r = negbinomial_dvar_series(nb.c, nb.beta, ctx.series());
            return {r.value, EvalMethod::series, r.error_bound};
          },
          [](const MultiNormalIdentity& m) -> PopulationValue {
            const int p = static_cast<int>(m.mean.size());
            const double hp = 0.5 * p;
            const double ratio = c_p(p - 1) / c_p(p);
            const double gam = std::exp(std::lgamma(hp) + std::lgamma(hp + 1.0) - 2.0 * std::lgamma(0.5 * (p + 1)));
            return {4.0 * pi * ratio * ratio * (gam - 2.0 * hyp2f1(-0.5, -0.5, hp, 0.25) + 1.0)};
          },
          [&](const StudentT&) -> PopulationValue { return population_dvar_numeric(d, ctx); },
      },
      d);
}

inline double population_dvar(const DistributionSpec& d, const ClosedFormContext& ctx = {}) {
  return population_dvar_detailed(d, ctx).value;
}

/// T3 = E(|X - X'| |X'' - X'|) = E psi(X)^2 with psi(x) = E|x - X|.
inline double population_t3(const DistributionSpec& d, const ClosedFormContext& ctx = {}) {
  validate(d);
  detail::require_univariate(d, "T3");
  if (is_discrete(d)) {
    double total = 0.0;
    for (int i = 0;; ++i) {
      const double p = pmf(d, i);
      const double a = mean_abs_deviation_from(d, i);
      total += p * a * a;
      if (i > 10 && survival(d, i) < 1e-30) break;
      if (i > 1000000) throw ConvergenceError("T3 sum did not converge", total, 1.0);
    }
    return total;
  }
  if (!std::isfinite(variance(d))) throw DomainError(family_name(d) + ": T3 requires a finite second moment");
  return integrate_unit(
      [&](double u, double ub) {
        const double a = mean_abs_deviation_from(d, quantile(d, u, ub));
        return a * a;
      },
      ctx.quadrature_tolerance, quantile_breakpoints(d));
}

/// J = E (Y - X)(Z - Y) over X < Y < Z for three independent copies
/// equals (T3 - sigma^2) / 4.
inline double j_integral(const DistributionSpec& d, const ClosedFormContext& ctx = {}) {
  validate(d);
  detail::require_univariate(d, "J integral");
  const double s2 = variance(d);
  if (!std::isfinite(s2)) throw DomainError(family_name(d) + ": J requires a finite second moment");
  return (population_t3(d, ctx) - s2) / 4.0;
}

/// Exact variance of the unbiased Gini mean difference at sample size n.
inline double gini_variance_finite_n(const DistributionSpec& d, std::size_t n, const ClosedFormContext& ctx = {}) {
  if (n < 2) throw DomainError("Gini variance requires n >= 2");
  validate(d);
  const double s2 = variance(d);
  if (!std::isfinite(s2)) throw DomainError(family_name(d) + ": variance sigma^2 is infinite");
  const double j = j_integral(d, ctx);
  const double delta = population_gini(d, ctx);
  const double nd = static_cast<double>(n);
  return (4.0 * (nd - 1.0) * s2 + 16.0 * (nd - 2.0) * j - 2.0 * (2.0 * nd - 3.0) * delta * delta) /
         (nd * (nd - 1.0));
}

/// Asymptotic variance of the Gini mean difference: 4 sigma^2 - 2 V^2 - 2 Delta^2.
inline double asv_gini(const DistributionSpec& d, const ClosedFormContext& ctx = {}) {
  validate(d);
  detail::require_univariate(d, "Gini asymptotic variance");
  const double s2 = variance(d);
  if (!std::isfinite(s2)) throw DomainError(family_name(d) + ": variance sigma^2 is infinite");
  const double delta = population_gini(d, ctx);
  return 4.0 * s2 - 2.0 * population_dvar(d, ctx) - 2.0 * delta * delta;
}

}  // namespace dsd

#endif  // DSD_CLOSED_FORMS_HPP
