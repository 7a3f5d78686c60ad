#ifndef DSD_ASYMPTOTICS_HPP
#define DSD_ASYMPTOTICS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dsd/closed_forms.hpp"
#include "dsd/distribution.hpp"
#include "dsd/error.hpp"
#include "dsd/parallel.hpp"
#include "dsd/quadrature.hpp"
#include "dsd/random.hpp"
#include "dsd/simulate.hpp"
#include "dsd/summation.hpp"

namespace dsd {

/// The four expectations entering the Hoeffding projection of the sample
/// distance variance, for a univariate law with finite variance:
///   psi1(x) = E(x - Y)^2, psi2(x) = E|x - Y||x - Z| = psi4(x)^2,
///   psi3(x) = E |x - Y| psi4(Y), psi4(x) = E|x - Y|.
class PsiProfile {
 public:
  explicit PsiProfile(DistributionSpec d, double tolerance = 1e-11) : d_(std::move(d)), tol_(tolerance) {
    validate(d_);
    if (dimension(d_) != 1) throw DomainError("psi functions are implemented for univariate laws");
    sigma2_ = variance(d_);
    if (!std::isfinite(sigma2_)) throw DomainError(family_name(d_) + ": psi functions need a finite variance");
    mu_ = mean(d_);
  }

  const DistributionSpec& distribution() const noexcept { return d_; }

  double psi1(double x) const { return (x - mu_) * (x - mu_) + sigma2_; }
  double psi4(double x) const { return mean_abs_deviation_from(d_, x); }
  double psi2(double x) const {
    const double a = psi4(x);
    return a * a;
  }

  double psi3(double x) const {
    if (is_discrete(d_)) {
      double total = 0.0;
      for (int k = 0;; ++k) {
        const double p = pmf(d_, k);
        total += p * std::abs(x - k) * psi4(k);
        if (k > mu_ && survival(d_, k) < 1e-20) break;
        if (k > 10000000) throw ConvergenceError("psi3 lattice sum did not converge", total, 1.0);
      }
      return total;
    }
    auto bps = quantile_breakpoints(d_);
    const double fx = cdf(d_, x);
    if (fx > 1e-12 && fx < 1.0 - 1e-12) bps.push_back(fx);
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              bps.end());
    return integrate_unit(
        [&](double u, double ub) {
          const double y = quantile(d_, u, ub);
          return std::abs(x - y) * psi4(y);
        },
        tol_, bps, 12);
  }

 private:
  DistributionSpec d_;
  double tol_;
  double sigma2_ = 0.0;
  double mu_ = 0.0;
};

inline PsiProfile psi_profile(const DistributionSpec& d) { return PsiProfile(d); }

enum class AsymptoticMethod { quadrature, monte_carlo };

inline const char* asymptotic_method_name(AsymptoticMethod m) {
  return m == AsymptoticMethod::quadrature ? "quadrature" : "monte-carlo";
}

struct AsymptoticOptions {
  std::size_t draws = 10000000;
  std::uint64_t seed = 1;
  double tolerance = 1e-10;
  int max_level = 10;
  int table_level = 7;  // t-grid for the interpolated influence function
  bool diagnostics = true;
  std::vector<std::size_t> diagnostic_sizes{100, 400, 1600};
  std::size_t diagnostic_replications = 2000;
};

/// Simulated n Var(V_n) at one sample size.
struct FiniteNPoint {
  std::size_t n = 0;
  double n_variance = 0.0;
  double se = 0.0;
};

struct AsymptoticReport {
  std::string distribution;
  AsymptoticMethod method = AsymptoticMethod::quadrature;
  double m11 = 0.0, m12 = 0.0, m22 = 0.0;
  double gamma = 0.0;
  double asv_vsq = 0.0;
  double asv_vsd = 0.0;
  double t1 = 0.0, t2 = 0.0, t3 = 0.0;
  double dvar = 0.0;   // population V^2
  double delta = 0.0;  // population Gini mean difference
  double e_psi3 = 0.0; // equals t3
  double standard_error = 0.0;  // of gamma; 0 for quadrature
  std::size_t draws = 0;
  std::uint64_t seed = 0;
  int level = 0;
  bool moment_condition = true;  // finite fourth moment
  std::vector<FiniteNPoint> finite_n;
};

namespace detail {

/// Influence terms at one point: g is the projection of V_n^2 up to an
/// additive constant and a factor 2; a = g - 2 Delta psi4.
struct InfluenceNode {
  double g = 0.0;
  double psi4 = 0.0;
};

/// Lattice evaluation for discrete laws: exact finite sums over the support
/// truncated where the survival mass drops below 1e-20.
struct LatticeInfluence {
  std::vector<double> p, g, psi4;
  double delta = 0.0, t3 = 0.0, e_psi3 = 0.0;
};

inline LatticeInfluence lattice_influence(const DistributionSpec& d) {
  LatticeInfluence L;
  const double mu = mean(d);
  for (int k = 0;; ++k) {
    L.p.push_back(pmf(d, k));
    if (k > mu && survival(d, k) < 1e-20) break;
    if (k > 1000000) throw ConvergenceError(family_name(d) + ": support truncation failed", 0.0, 1.0);
  }
  const std::size_t K = L.p.size();
  const double s2 = variance(d);
  L.psi4.assign(K, 0.0);
  for (std::size_t i = 0; i < K; ++i) {
    std::vector<double> terms(K);
    for (std::size_t j = 0; j < K; ++j) terms[j] = L.p[j] * std::abs(double(i) - double(j));
    L.psi4[i] = pairwise_sum(terms);
  }
  std::vector<double> t(K);
  for (std::size_t i = 0; i < K; ++i) t[i] = L.p[i] * L.psi4[i];
  L.delta = pairwise_sum(t);
  for (std::size_t i = 0; i < K; ++i) t[i] = L.p[i] * L.psi4[i] * L.psi4[i];
  L.t3 = pairwise_sum(t);
  L.g.assign(K, 0.0);
  std::vector<double> e3(K);
  for (std::size_t i = 0; i < K; ++i) {
    std::vector<double> terms(K);
    for (std::size_t j = 0; j < K; ++j) terms[j] = L.p[j] * std::abs(double(i) - double(j)) * L.psi4[j];
    const double psi3 = pairwise_sum(terms);
    const double x = double(i);
    const double psi1 = (x - mu) * (x - mu) + s2;
    L.g[i] = psi1 - L.psi4[i] * L.psi4[i] - 2.0 * psi3 + 2.0 * L.delta * L.psi4[i];
    e3[i] = L.p[i] * psi3;
  }
  L.e_psi3 = pairwise_sum(e3);
  return L;
}

/// Influence terms on a tanh-sinh grid in probability space. Tail forms keep
/// the bounded influence free of cancellation: with e(x) = E(Y - x)+ and
/// R(x) = E(Y - x)+ psi4(Y), g = -4 e (x - mu + e - Delta) - 4 R above the
/// median, and the mirror form below it, joined by a constant at the median.
struct GridInfluence {
  std::vector<InfluenceNode> nodes;
  double delta = 0.0, t3 = 0.0, e_psi3 = 0.0;
};

inline GridInfluence grid_influence(const DistributionSpec& d, const QuadGrid& grid) {
  const double mu = mean(d);
  const auto& nodes = grid.nodes();
  const std::size_t m = nodes.size();
  const auto cum = cumulative_integrals<3>(grid, [&](double u, double ub) {
    const double y = quantile(d, u, ub);
    const double a = mean_abs_deviation_from(d, y);
    return std::array<double, 3>{y, a, y * a};
  });

  std::vector<double> x(m), psi4(m);
  for (std::size_t i = 0; i < m; ++i) {
    x[i] = quantile(d, nodes[i].u, nodes[i].ubar);
    psi4[i] = mean_abs_deviation_from(d, x[i]);
  }
  std::vector<double> t(m);
  for (std::size_t i = 0; i < m; ++i) t[i] = nodes[i].w * psi4[i];
  const double delta = pairwise_sum(t);

  std::vector<double> gr(m), gl(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& n = nodes[i];
    const auto& L = cum.left[i];
    const auto& R = cum.right[i];
    const double er = R[0] - x[i] * n.ubar;
    const double rr = R[2] - x[i] * R[1];
    gr[i] = -4.0 * er * (x[i] - mu + er - delta) - 4.0 * rr;
    const double el = x[i] * n.u - L[0];
    const double rl = x[i] * L[1] - L[2];
    gl[i] = -4.0 * el * (mu - x[i] + el - delta) - 4.0 * rl;
  }
  std::size_t mid = 0;
  for (std::size_t i = 1; i < m; ++i)
    if (std::abs(nodes[i].u - 0.5) < std::abs(nodes[mid].u - 0.5)) mid = i;
  const double shift = gr[mid] - gl[mid];

  GridInfluence out;
  out.delta = delta;
  out.nodes.resize(m);
  std::vector<double> t3(m), e3(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double g = nodes[i].u >= 0.5 ? gr[i] : gl[i] + shift;
    if (!std::isfinite(g)) throw ConvergenceError(family_name(d) + ": influence function is not finite", g, 0.0);
    out.nodes[i] = {g, psi4[i]};
    t3[i] = nodes[i].w * psi4[i] * psi4[i];
    // psi3(x) = x A_left - B_left + B_right - x A_right
    const double psi3 = x[i] * cum.left[i][1] - cum.left[i][2] + cum.right[i][2] - x[i] * cum.right[i][1];
    e3[i] = nodes[i].w * psi3;
  }
  out.t3 = pairwise_sum(t3);
  out.e_psi3 = pairwise_sum(e3);
  return out;
}

struct MomentSet {
  double m11 = 0.0, m12 = 0.0, m22 = 0.0, gamma = 0.0;
};

/// Second moments of (a, psi4) and g under weights summing to one.
inline MomentSet influence_moments(const std::vector<double>& w, const std::vector<double>& g,
                                   const std::vector<double>& psi4, double delta) {
  const std::size_t m = w.size();
  std::vector<double> s(m);
  const auto wsum = [&](auto f) {
    for (std::size_t i = 0; i < m; ++i) s[i] = w[i] * f(i);
    return pairwise_sum(s);
  };
  const double eg = wsum([&](std::size_t i) { return g[i]; });
  const double ep = wsum([&](std::size_t i) { return psi4[i]; });
  const auto a = [&](std::size_t i) { return g[i] - eg - 2.0 * delta * (psi4[i] - ep); };
  MomentSet r;
  r.m11 = 4.0 * wsum([&](std::size_t i) { return a(i) * a(i); });
  r.m12 = 4.0 * wsum([&](std::size_t i) { return a(i) * (psi4[i] - ep); });
  r.m22 = 4.0 * wsum([&](std::size_t i) { return (psi4[i] - ep) * (psi4[i] - ep); });
  r.gamma = 4.0 * wsum([&](std::size_t i) { return (g[i] - eg) * (g[i] - eg); });
  return r;
}

inline MomentSet grid_moments(const QuadGrid& grid, const GridInfluence& gi) {
  const std::size_t m = grid.nodes().size();
  std::vector<double> w(m), g(m), p(m);
  for (std::size_t i = 0; i < m; ++i) {
    w[i] = grid.nodes()[i].w;
    g[i] = gi.nodes[i].g;
    p[i] = gi.nodes[i].psi4;
  }
  return influence_moments(w, g, p, gi.delta);
}

/// Influence function g tabulated on a tanh-sinh grid with Catmull-Rom
/// interpolation in t.
class InfluenceTable {
 public:
  InfluenceTable(const DistributionSpec& d, int level)
      : grid_(level, quantile_breakpoints(d)), gi_(grid_influence(d, grid_)) {
    per_piece_ = grid_.nodes().size() / grid_.pieces();
    imax_ = static_cast<long>((per_piece_ - 1) / 2);
  }

  double delta() const noexcept { return gi_.delta; }

  double at(double u, double ubar) const {
    const std::size_t p = grid_.piece_of(u);
    const double t = grid_.t_of(p, u, ubar);
    const double h = grid_.step();
    double pos = t / h + static_cast<double>(imax_);
    const double top = static_cast<double>(2 * imax_);
    pos = std::clamp(pos, 0.0, top);
    long i = static_cast<long>(std::floor(pos));
    if (i >= 2 * imax_) i = 2 * imax_ - 1;
    const double s = pos - static_cast<double>(i);
    const auto val = [&](long k) {
      k = std::clamp(k, 0L, 2 * imax_);
      return gi_.nodes[p * per_piece_ + static_cast<std::size_t>(k)].g;
    };
    const double y0 = val(i - 1), y1 = val(i), y2 = val(i + 1), y3 = val(i + 2);
    return y1 + 0.5 * s *
                    (y2 - y0 + s * (2.0 * y0 - 5.0 * y1 + 4.0 * y2 - y3 + s * (3.0 * (y1 - y2) + y3 - y0)));
  }

 private:
  QuadGrid grid_;
  GridInfluence gi_;
  std::size_t per_piece_ = 0;
  long imax_ = 0;
};

/// Single-pass accumulators for gamma = 4 Var(g) with a delta-method standard
/// error. Each record is a pair of draws, antithetic for symmetric laws.
struct PairStats {
  CompensatedSum s1, s2, s11, s22, s12;
  std::size_t pairs = 0;

  void add(double g1, double g2) {
    const double a = 0.5 * (g1 + g2);
    const double b = 0.5 * (g1 * g1 + g2 * g2);
    s1.add(a);
    s2.add(b);
    s11.add(a * a);
    s22.add(b * b);
    s12.add(a * b);
    ++pairs;
  }

  void merge(const PairStats& o) {
    s1.add(o.s1.value());
    s2.add(o.s2.value());
    s11.add(o.s11.value());
    s22.add(o.s22.value());
    s12.add(o.s12.value());
    pairs += o.pairs;
  }
};

}  // namespace detail

/// Simulated n Var(V_n) sequence, reported alongside the limit when the
/// fourth-moment condition fails.
inline std::vector<FiniteNPoint> finite_n_diagnostics(const DistributionSpec& d, const AsymptoticOptions& opt) {
  SimulationPlan plan;
  plan.distribution = d;
  plan.sample_sizes = opt.diagnostic_sizes;
  plan.replications = opt.diagnostic_replications;
  plan.seed = opt.seed;
  plan.estimators = {SimEstimator::vstat};
  const SimulationResult r = run_plan(plan);
  std::vector<FiniteNPoint> out;
  for (const auto& c : r.cells) out.push_back({c.n, c.n_variance, c.se_n_variance});
  return out;
}

/// Asymptotic variance of the sample distance variance and standard
/// deviation. Quadrature requires a finite fourth moment; Monte Carlo draws
/// the outer expectation over the tabulated influence function.
inline AsymptoticReport asymptotic_report(const DistributionSpec& d, AsymptoticMethod method,
                                          const AsymptoticOptions& opt = {}) {
  validate(d);
  if (dimension(d) != 1) throw DomainError("asymptotic report is implemented for univariate laws");
  if (!std::isfinite(variance(d))) throw DomainError(family_name(d) + ": asymptotics need a finite variance");
  AsymptoticReport rep;
  rep.distribution = family_name(d);
  rep.method = method;
  rep.moment_condition = has_finite_fourth_moment(d);
  if (method == AsymptoticMethod::quadrature && !rep.moment_condition)
    throw DomainError(family_name(d) +
                      ": infinite fourth moment; only the monte-carlo method is permitted");
  rep.dvar = population_dvar(d);
  rep.t1 = 2.0 * variance(d);

  if (is_discrete(d)) {
    const auto L = detail::lattice_influence(d);
    rep.delta = L.delta;
    rep.t3 = L.t3;
    rep.e_psi3 = L.e_psi3;
    if (method == AsymptoticMethod::quadrature) {
      const auto ms = detail::influence_moments(L.p, L.g, L.psi4, L.delta);
      rep.m11 = ms.m11, rep.m12 = ms.m12, rep.m22 = ms.m22, rep.gamma = ms.gamma;
    } else {
      const auto ms = detail::influence_moments(L.p, L.g, L.psi4, L.delta);
      rep.m11 = ms.m11, rep.m12 = ms.m12, rep.m22 = ms.m22;
      const std::size_t K = L.g.size();
      const auto lookup = [&](double k) {
        const auto i = static_cast<std::size_t>(k);
        return i < K ? L.g[i] : L.g[K - 1];
      };
      const std::size_t block = 1 << 16;
      const std::size_t pairs = std::max<std::size_t>(opt.draws / 2, 1);
      const std::size_t nb = (pairs + block - 1) / block;
      std::vector<detail::PairStats> stats(nb);
      parallel_for(nb, [&](std::size_t b) {
        Rng rng(opt.seed, b);
        const std::size_t cnt = std::min(block, pairs - b * block);
        for (std::size_t k = 0; k < cnt; ++k) stats[b].add(lookup(draw(d, rng)), lookup(draw(d, rng)));
      });
      detail::PairStats all;
      for (const auto& s : stats) all.merge(s);
      const double np = static_cast<double>(all.pairs);
      const double e1 = all.s1.value() / np, e2 = all.s2.value() / np;
      rep.gamma = 4.0 * (e2 - e1 * e1);
      const double v1 = all.s11.value() / np - e1 * e1;
      const double v2 = all.s22.value() / np - e2 * e2;
      const double c12 = all.s12.value() / np - e1 * e2;
      rep.standard_error = 4.0 * std::sqrt(std::max(0.0, v2 + 4.0 * e1 * e1 * v1 - 4.0 * e1 * c12) / np);
      rep.draws = 2 * all.pairs;
      rep.seed = opt.seed;
    }
  } else if (method == AsymptoticMethod::quadrature) {
    const auto bps = quantile_breakpoints(d);
    detail::MomentSet prev;
    bool have_prev = false;
    for (int level = 4; level <= opt.max_level; ++level) {
      const QuadGrid grid(level, bps);
      const auto gi = detail::grid_influence(d, grid);
      const auto ms = detail::grid_moments(grid, gi);
      rep.m11 = ms.m11, rep.m12 = ms.m12, rep.m22 = ms.m22, rep.gamma = ms.gamma;
      rep.delta = gi.delta, rep.t3 = gi.t3, rep.e_psi3 = gi.e_psi3;
      rep.level = level;
      if (have_prev && std::abs(ms.gamma - prev.gamma) <= opt.tolerance * std::max(1.0, ms.gamma) &&
          std::abs(ms.m11 - prev.m11) <= opt.tolerance * std::max(1.0, ms.m11))
        break;
      if (level == opt.max_level)
        throw ConvergenceError(family_name(d) + ": gamma quadrature did not converge", ms.gamma,
                               std::abs(ms.gamma - prev.gamma));
      prev = ms;
      have_prev = true;
    }
  } else {
    const detail::InfluenceTable table(d, opt.table_level);
    {
      const QuadGrid grid(opt.table_level, quantile_breakpoints(d));
      const auto gi = detail::grid_influence(d, grid);
      const auto ms = detail::grid_moments(grid, gi);
      rep.m11 = ms.m11, rep.m12 = ms.m12, rep.m22 = ms.m22;
      rep.delta = gi.delta, rep.t3 = gi.t3, rep.e_psi3 = gi.e_psi3;
    }
    rep.level = opt.table_level;
    const bool anti = is_symmetric(d);
    const std::size_t block = 1 << 16;
    const std::size_t pairs = std::max<std::size_t>(opt.draws / 2, 1);
    const std::size_t nb = (pairs + block - 1) / block;
    std::vector<detail::PairStats> stats(nb);
    parallel_for(nb, [&](std::size_t b) {
      Rng rng(opt.seed, b);
      const std::size_t cnt = std::min(block, pairs - b * block);
      for (std::size_t k = 0; k < cnt; ++k) {
        const std::uint64_t r = rng.next() >> 11;
        const double u = (static_cast<double>(r) + 0.5) * 0x1.0p-53;
        const double ub = (static_cast<double>((1ULL << 53) - 1 - r) + 0.5) * 0x1.0p-53;
        const double g1 = table.at(u, ub);
        double g2;
        if (anti) {
          g2 = table.at(ub, u);
        } else {
          const std::uint64_t r2 = rng.next() >> 11;
          const double u2 = (static_cast<double>(r2) + 0.5) * 0x1.0p-53;
          const double ub2 = (static_cast<double>((1ULL << 53) - 1 - r2) + 0.5) * 0x1.0p-53;
          g2 = table.at(u2, ub2);
        }
        stats[b].add(g1, g2);
      }
    });
    detail::PairStats all;
    for (const auto& s : stats) all.merge(s);
    const double np = static_cast<double>(all.pairs);
    const double e1 = all.s1.value() / np, e2 = all.s2.value() / np;
    rep.gamma = 4.0 * (e2 - e1 * e1);
    const double v1 = all.s11.value() / np - e1 * e1;
    const double v2 = all.s22.value() / np - e2 * e2;
    const double c12 = all.s12.value() / np - e1 * e2;
    rep.standard_error = 4.0 * std::sqrt(std::max(0.0, v2 + 4.0 * e1 * e1 * v1 - 4.0 * e1 * c12) / np);
    rep.draws = 2 * all.pairs;
    rep.seed = opt.seed;
  }

  rep.t2 = rep.delta * rep.delta;
  rep.asv_vsq = rep.gamma;
  rep.asv_vsd = rep.gamma / (4.0 * rep.dvar);
  if (!rep.moment_condition && opt.diagnostics) rep.finite_n = finite_n_diagnostics(d, opt);
  return rep;
}

enum class AreEstimator { dvar_sd, sd, mean_dev, gini };

inline const char* are_estimator_name(AreEstimator e) {
  switch (e) {
    case AreEstimator::dvar_sd: return "dvar-sd";
    case AreEstimator::sd: return "sd";
    case AreEstimator::mean_dev: return "mean-dev";
    case AreEstimator::gini: return "gini";
  }
  return "?";
}

inline AreEstimator parse_are_estimator(const std::string& s) {
  for (auto e : {AreEstimator::dvar_sd, AreEstimator::sd, AreEstimator::mean_dev, AreEstimator::gini})
    if (s == are_estimator_name(e)) return e;
  throw DomainError("unknown estimator '" + s + "'");
}

/// Standardized asymptotic variance ASV / s^2 of the maximum likelihood
/// scale estimator for the reference families.
inline double mle_standardized_asv(const DistributionSpec& d) {
  if (std::holds_alternative<Normal>(d)) return 0.5;
  if (std::holds_alternative<Laplace>(d)) return 1.0;
  if (const auto* t = std::get_if<StudentT>(&d)) return (t->nu + 3.0) / (2.0 * t->nu);
  throw DomainError(family_name(d) + ": no reference scale estimator (use normal, laplace or t)");
}

struct AreValue {
  AreEstimator estimator = AreEstimator::dvar_sd;
  double value = 0.0;
  double standardized_asv = 0.0;
  bool infinite_asv = false;
  const char* method = "closed-form";
};

/// ARE of one scale estimator relative to the MLE: the ratio of standardized
/// asymptotic variances with the MLE in the numerator. An infinite ASV gives 0.
inline AreValue are(AreEstimator e, const DistributionSpec& d, const AsymptoticReport* report = nullptr,
                    const AsymptoticOptions& opt = {}) {
  validate(d);
  const double ref = mle_standardized_asv(d);
  AreValue r;
  r.estimator = e;
  switch (e) {
    case AreEstimator::sd: {
      const double k = kurtosis(d);
      r.standardized_asv = (k - 1.0) / 4.0;
      break;
    }
    case AreEstimator::mean_dev: {
      const double med = quantile(d, 0.5, 0.5);
      const double md = mean_abs_deviation_from(d, med);
      r.standardized_asv = (variance(d) - md * md) / (md * md);
      break;
    }
    case AreEstimator::gini: {
      const double delta = population_gini(d);
      r.standardized_asv = asv_gini(d) / (delta * delta);
      break;
    }
    case AreEstimator::dvar_sd: {
      AsymptoticReport local;
      if (!report) {
        const auto m = has_finite_fourth_moment(d) ? AsymptoticMethod::quadrature : AsymptoticMethod::monte_carlo;
        AsymptoticOptions o = opt;
        o.diagnostics = false;
        local = asymptotic_report(d, m, o);
        report = &local;
      }
      r.standardized_asv = report->asv_vsd / report->dvar;
      r.method = asymptotic_method_name(report->method);
      break;
    }
  }
  if (!std::isfinite(r.standardized_asv)) {
    r.infinite_asv = true;
    r.value = 0.0;
  } else {
    r.value = ref / r.standardized_asv;
  }
  return r;
}

inline nlohmann::ordered_json report_json(const AsymptoticReport& r) {
  nlohmann::ordered_json j;
  j["distribution"] = r.distribution;
  j["method"] = asymptotic_method_name(r.method);
  j["m11"] = r.m11;
  j["m12"] = r.m12;
  j["m22"] = r.m22;
  j["gamma"] = r.gamma;
  j["asv_vsq"] = r.asv_vsq;
  j["asv_vsd"] = r.asv_vsd;
  j["t1"] = r.t1;
  j["t2"] = r.t2;
  j["t3"] = r.t3;
  j["dvar"] = r.dvar;
  j["delta"] = r.delta;
  j["standard_error"] = r.standard_error;
  j["draws"] = r.draws;
  j["seed"] = r.seed;
  j["level"] = r.level;
  j["moment_condition"] = r.moment_condition;
  for (const auto& p : r.finite_n) {
    j["finite_n_" + std::to_string(p.n)] = p.n_variance;
    j["finite_n_" + std::to_string(p.n) + "_se"] = p.se;
  }
  return j;
}

}  // namespace dsd

#endif  // DSD_ASYMPTOTICS_HPP
