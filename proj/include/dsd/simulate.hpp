#ifndef DSD_SIMULATE_HPP
#define DSD_SIMULATE_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dsd/closed_forms.hpp"
#include "dsd/distribution.hpp"
#include "dsd/error.hpp"
#include "dsd/estimators.hpp"
#include "dsd/parallel.hpp"
#include "dsd/random.hpp"
#include "dsd/sample.hpp"
#include "dsd/spacings.hpp"
#include "dsd/summation.hpp"

namespace dsd {

namespace detail {

// Marsaglia-Tsang; shapes below one via the u^(1/alpha) boost.
inline double gamma_variate(double alpha, Rng& rng) {
  if (alpha < 1.0) return gamma_variate(alpha + 1.0, rng) * std::pow(rng.uniform(), 1.0 / alpha);
  const double d = alpha - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double z, v;
    do {
      z = rng.normal();
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * z * z * z * z) return d * v;
    if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) return d * v;
  }
}

// Sequential-search inversion over the probability mass recurrence.
template <class NextRatio>
double discrete_inversion(double p0, NextRatio ratio, Rng& rng) {
  const double u = rng.uniform();
  double k = 0.0;
  double p = p0;
  double cum = p0;
  while (u > cum) {
    p *= ratio(k);
    k += 1.0;
    cum += p;
    if (p == 0.0 && cum < u) break;  // u beyond representable tail mass
  }
  return k;
}

}  // namespace detail

/// One draw from a univariate family. Uniform, exponential, Laplace and
/// Pareto use their exact inverse CDF; the normal uses Box-Muller.
inline double draw(const DistributionSpec& d, Rng& rng) {
  return std::visit(
      detail::overloaded{
          [&](const Bernoulli& b) { return rng.uniform() < b.prob ? 1.0 : 0.0; },
          [&](const Normal& n) { return n.mean + n.sd * rng.normal(); },
          [&](const Uniform& u) { return u.lo + (u.hi - u.lo) * rng.uniform(); },
          [&](const Laplace& l) {
            const double u = rng.uniform();
            return u < 0.5 ? l.mu + l.alpha * std::log(2.0 * u) : l.mu - l.alpha * std::log(2.0 * (1.0 - u));
          },
          [&](const Pareto& p) { return p.xm * std::pow(1.0 - rng.uniform(), -1.0 / p.alpha); },
          [&](const Exponential& e) { return -std::log1p(-rng.uniform()) / e.rate; },
          [&](const GammaDist& g) { return detail::gamma_variate(g.alpha, rng); },
          [&](const Poisson& p) {
            const double lam = p.lambda;
            return detail::discrete_inversion(std::exp(-lam), [lam](double k) { return lam / (k + 1.0); }, rng);
          },
          [&](const NegBinomial& nb) {
            const double c = nb.c;
            const double beta = nb.beta;
            return detail::discrete_inversion(std::pow(1.0 - c, beta),
                                              [c, beta](double k) { return (beta + k) * c / (k + 1.0); }, rng);
          },
          [&](const MultiNormalIdentity&) -> double {
            throw DomainError("mvnormal: use sample() for vector draws");
          },
          [&](const StudentT& t) {
            const double chi2 = 2.0 * detail::gamma_variate(0.5 * t.nu, rng);
            return rng.normal() / std::sqrt(chi2 / t.nu);
          },
      },
      d);
}

/// n i.i.d. observations.
inline Sample sample(const DistributionSpec& d, std::size_t n, Rng& rng) {
  if (n == 0) throw DomainError("sample size must be >= 1");
  if (const auto* m = std::get_if<MultiNormalIdentity>(&d)) {
    const std::size_t p = m->mean.size();
    std::vector<double> data(n * p);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < p; ++k) data[i * p + k] = m->mean[k] + rng.normal();
    return Sample(std::move(data), n, p);
  }
  std::vector<double> x(n);
  for (auto& v : x) v = draw(d, rng);
  return Sample::univariate(std::move(x));
}

enum class SimEstimator { vstat, unbiased_components, ustat, gini, sd, mean_dev };

inline const char* estimator_name(SimEstimator e) {
  switch (e) {
    case SimEstimator::vstat: return "vstat";
    case SimEstimator::unbiased_components: return "unbiased-components";
    case SimEstimator::ustat: return "ustat";
    case SimEstimator::gini: return "gini";
    case SimEstimator::sd: return "sd";
    case SimEstimator::mean_dev: return "mean-dev";
  }
  return "?";
}

inline SimEstimator parse_estimator(const std::string& s) {
  for (auto e : {SimEstimator::vstat, SimEstimator::unbiased_components, SimEstimator::ustat, SimEstimator::gini,
                 SimEstimator::sd, SimEstimator::mean_dev})
    if (s == estimator_name(e)) return e;
  if (s == "unbiased") return SimEstimator::unbiased_components;
  throw DomainError("unknown estimator '" + s + "'");
}

struct SimulationPlan {
  DistributionSpec distribution = Normal{};
  std::vector<std::size_t> sample_sizes{5, 10, 50, 500};
  std::size_t replications = 10000;
  std::uint64_t seed = 1;
  std::vector<SimEstimator> estimators{SimEstimator::vstat, SimEstimator::unbiased_components};
};

/// Summary of one estimator at one sample size, from replication values.
struct SimulationCell {
  std::size_t n = 0;
  SimEstimator estimator = SimEstimator::vstat;
  double mean = 0.0;
  double variance = 0.0;     // divisor R - 1
  double n_variance = 0.0;
  double se_mean = 0.0;      // sqrt(variance / R)
  double se_variance = 0.0;  // sqrt((m4 - variance^2) / R)
  double se_n_variance = 0.0;
  std::size_t clamped = 0;   // replications with a negative unbiased square
};

struct SimulationResult {
  std::string distribution;
  std::vector<std::pair<std::string, double>> parameters;
  std::size_t replications = 0;
  std::uint64_t seed = 0;
  std::vector<SimulationCell> cells;

  const SimulationCell& cell(std::size_t n, SimEstimator e) const {
    for (const auto& c : cells)
      if (c.n == n && c.estimator == e) return c;
    throw DomainError("no cell for n = " + std::to_string(n) + ", estimator " + estimator_name(e));
  }
};

/// Mean, variance and their standard errors from replication values, reduced
/// in a fixed order.
struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double se_mean = 0.0;
  double se_variance = 0.0;
};

inline Moments moments(const std::vector<double>& v) {
  const std::size_t r = v.size();
  Moments m;
  if (r == 0) return m;
  const double rd = static_cast<double>(r);
  m.mean = pairwise_sum(v) / rd;
  std::vector<double> d2(r), d4(r);
  for (std::size_t i = 0; i < r; ++i) {
    const double d = v[i] - m.mean;
    d2[i] = d * d;
    d4[i] = d2[i] * d2[i];
  }
  const double m2 = pairwise_sum(d2) / rd;
  const double m4 = pairwise_sum(d4) / rd;
  m.variance = r > 1 ? m2 * rd / (rd - 1.0) : 0.0;
  m.se_mean = r > 1 ? std::sqrt(m.variance / rd) : 0.0;
  m.se_variance = std::sqrt(std::max(0.0, m4 - m2 * m2) / rd);
  return m;
}

/// Stream index for replication `rep` at the `size_index`-th sample size.
inline std::uint64_t substream(std::size_t size_index, std::size_t rep) {
  return (static_cast<std::uint64_t>(size_index) << 40) | static_cast<std::uint64_t>(rep);
}

inline void validate(const SimulationPlan& plan) {
  validate(plan.distribution);
  if (plan.replications < 1) throw DomainError("replications must be >= 1");
  if (plan.sample_sizes.empty()) throw DomainError("at least one sample size is required");
  if (plan.estimators.empty()) throw DomainError("at least one estimator is required");
  for (std::size_t n : plan.sample_sizes)
    if (n < 2) throw DomainError("sample sizes must be >= 2");
  const bool multi = dimension(plan.distribution) > 1;
  for (auto e : plan.estimators) {
    if (e == SimEstimator::unbiased_components)
      for (std::size_t n : plan.sample_sizes)
        if (n < 3) throw DomainError("unbiased-components requires sample sizes >= 3");
    if (multi && e != SimEstimator::vstat && e != SimEstimator::unbiased_components && e != SimEstimator::gini)
      throw DomainError(std::string(estimator_name(e)) + " requires a univariate distribution");
  }
}

/// Runs every replication on its own substream; results depend only on the
/// plan, not on the worker count.
inline SimulationResult run_plan(const SimulationPlan& plan, unsigned threads = 0) {
  validate(plan);
  SimulationResult res;
  res.distribution = family_name(plan.distribution);
  res.parameters = parameters(plan.distribution);
  res.replications = plan.replications;
  res.seed = plan.seed;
  const std::size_t ne = plan.estimators.size();
  for (std::size_t si = 0; si < plan.sample_sizes.size(); ++si) {
    const std::size_t n = plan.sample_sizes[si];
    std::vector<std::vector<double>> values(ne, std::vector<double>(plan.replications));
    std::vector<unsigned char> clamped(plan.replications, 0);
    parallel_for(
        plan.replications,
        [&](std::size_t rep) {
          Rng rng(plan.seed, substream(si, rep));
          const Sample s = sample(plan.distribution, n, rng);
          std::optional<EstimatorBreakdown> b;
          const auto bd = [&]() -> const EstimatorBreakdown& {
            if (!b) b = breakdown(s);
            return *b;
          };
          for (std::size_t e = 0; e < ne; ++e) {
            double v = 0.0;
            switch (plan.estimators[e]) {
              case SimEstimator::vstat: v = std::sqrt(bd().vSq); break;
              case SimEstimator::unbiased_components: {
                const DistanceSd sd = distance_sd(bd(), DsdVariant::unbiased_components);
                v = sd.value;
                if (sd.clamped) clamped[rep] = 1;
                break;
              }
              case SimEstimator::ustat: v = std::sqrt(u_stat_quadform(s)); break;
              case SimEstimator::gini: v = gini_mean_difference(s, GiniVariant::unbiased); break;
              case SimEstimator::sd: v = std::sqrt(sample_variance(s, VarianceNorm::over_n_minus_1)); break;
              case SimEstimator::mean_dev: v = mean_deviation(s); break;
            }
            values[e][rep] = v;
          }
        },
        threads);
    std::size_t nclamped = 0;
    for (unsigned char c : clamped) nclamped += c;
    for (std::size_t e = 0; e < ne; ++e) {
      const Moments m = moments(values[e]);
      SimulationCell c;
      c.n = n;
      c.estimator = plan.estimators[e];
      c.mean = m.mean;
      c.variance = m.variance;
      c.n_variance = static_cast<double>(n) * m.variance;
      c.se_mean = m.se_mean;
      c.se_variance = m.se_variance;
      c.se_n_variance = static_cast<double>(n) * m.se_variance;
      c.clamped = plan.estimators[e] == SimEstimator::unbiased_components ? nclamped : 0;
      res.cells.push_back(c);
    }
  }
  return res;
}

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// One row per (distribution, n, estimator, metric).
inline std::string simulation_csv(const SimulationResult& r) {
  std::string out = "distribution,n,estimator,metric,value\n";
  for (const auto& c : r.cells) {
    const std::pair<const char*, double> metrics[] = {
        {"mean", c.mean},       {"variance", c.variance},       {"n_variance", c.n_variance},
        {"se_mean", c.se_mean}, {"se_variance", c.se_variance}, {"se_n_variance", c.se_n_variance},
        {"clamped", static_cast<double>(c.clamped)}};
    for (const auto& [name, v] : metrics)
      out += r.distribution + "," + std::to_string(c.n) + "," + estimator_name(c.estimator) + "," + name + "," +
             format_number(v) + "\n";
  }
  return out;
}

inline nlohmann::ordered_json simulation_json(const SimulationResult& r) {
  nlohmann::ordered_json j;
  j["distribution"] = r.distribution;
  for (const auto& [k, v] : r.parameters) j["param_" + k] = v;
  j["replications"] = r.replications;
  j["seed"] = r.seed;
  auto cells = nlohmann::ordered_json::array();
  for (const auto& c : r.cells) {
    nlohmann::ordered_json e;
    e["n"] = c.n;
    e["estimator"] = estimator_name(c.estimator);
    e["mean"] = c.mean;
    e["variance"] = c.variance;
    e["n_variance"] = c.n_variance;
    e["se_mean"] = c.se_mean;
    e["se_variance"] = c.se_variance;
    e["se_n_variance"] = c.se_n_variance;
    e["clamped"] = c.clamped;
    cells.push_back(e);
  }
  j["cells"] = cells;
  return j;
}

// ---------------------------------------------------------------------------
// Monte Carlo checks on sums and differences of independent variables.

/// Batched estimate of a population distance variance: the unbiased
/// components estimator is averaged over independent batches, and the
/// standard error comes from the spread between batches.
struct McEstimate {
  double value = 0.0;
  double se = 0.0;
  std::size_t draws = 0;
};

template <class Draw>
McEstimate mc_dvar(Draw&& draw_one, std::size_t draws, std::uint64_t seed, std::uint64_t stream_base,
                   std::size_t batch = 10000) {
  if (draws < 2 * batch) batch = std::max<std::size_t>(draws / 2, 3);
  const std::size_t nb = draws / batch;
  std::vector<double> est(nb);
  parallel_for(nb, [&](std::size_t b) {
    Rng rng(seed, stream_base + b);
    std::vector<double> x(batch);
    for (auto& v : x) v = draw_one(rng);
    est[b] = *breakdown(Sample::univariate(std::move(x))).vSqHat;
  });
  const Moments m = moments(est);
  return {m.mean, m.se_mean, nb * batch};
}

/// Paired batches: g(x_batch) - h(y_batch) on the same draws.
template <class DrawPair>
McEstimate mc_dvar_gap(DrawPair&& draw_pair, std::size_t draws, std::uint64_t seed, std::uint64_t stream_base,
                       std::size_t batch = 10000) {
  if (draws < 2 * batch) batch = std::max<std::size_t>(draws / 2, 3);
  const std::size_t nb = draws / batch;
  std::vector<double> est(nb);
  parallel_for(nb, [&](std::size_t b) {
    Rng rng(seed, stream_base + b);
    std::vector<double> sum(batch), diff(batch);
    for (std::size_t i = 0; i < batch; ++i) {
      const auto [x, y] = draw_pair(rng);
      sum[i] = x + y;
      diff[i] = x - y;
    }
    est[b] = *breakdown(Sample::univariate(std::move(sum))).vSqHat -
             *breakdown(Sample::univariate(std::move(diff))).vSqHat;
  });
  const Moments m = moments(est);
  return {m.mean, m.se_mean, nb * batch};
}

struct SumCheck {
  std::string name;
  double target = 0.0;
  McEstimate estimate;
  double z() const { return estimate.se > 0.0 ? (estimate.value - target) / estimate.se : 0.0; }
  bool within(double k) const { return std::abs(estimate.value - target) <= k * estimate.se; }
};

struct SumExamplesReport {
  std::uint64_t seed = 0;
  std::size_t draws = 0;
  // X ~ Bernoulli(1/2), Y ~ Uniform[0,1]: X + Y is Uniform[0,2].
  SumCheck bernoulli_plus_uniform;
  double t1 = 0.0, t2 = 0.0, t3 = 0.0;  // population components of X + Y
  double v_x = 0.0;                     // distance standard deviation of X alone
  // V^2(X+Y) - V^2(X-Y) for independent Bernoulli(p) pairs.
  std::vector<std::pair<double, SumCheck>> bernoulli_gaps;
  // Symmetric summand: X ~ N(0,1), Y ~ N(1,2).
  SumCheck normal_symmetric;
};

/// Exact gap 8 (p - p^2)^2 (1 - 2p)^2.
inline double bernoulli_gap(double p) {
  const double q = p - p * p;
  return 8.0 * q * q * (1.0 - 2.0 * p) * (1.0 - 2.0 * p);
}

inline SumExamplesReport check_sum_examples(std::uint64_t seed, std::size_t draws,
                                            const std::vector<double>& ps = {0.1, 0.3, 0.5}) {
  if (draws < 1000000) throw DomainError("check_sum_examples requires at least 10^6 draws");
  SumExamplesReport r;
  r.seed = seed;
  r.draws = draws;

  const DistributionSpec sum_law = Uniform{0.0, 2.0};
  r.t1 = 2.0 * variance(sum_law);
  const double delta = population_gini(sum_law);
  r.t2 = delta * delta;
  r.t3 = population_t3(sum_law);
  r.v_x = std::sqrt(population_dvar(Bernoulli{0.5}));

  r.bernoulli_plus_uniform.name = "bernoulli(0.5)+uniform(0,1)";
  r.bernoulli_plus_uniform.target = 8.0 / 45.0;
  r.bernoulli_plus_uniform.estimate = mc_dvar(
      [](Rng& g) {
        const double x = g.uniform() < 0.5 ? 1.0 : 0.0;
        return x + g.uniform();
      },
      draws, seed, 0);

  std::uint64_t base = 1ULL << 32;
  for (double p : ps) {
    SumCheck c;
    c.name = "bernoulli gap p=" + format_number(p);
    c.target = bernoulli_gap(p);
    c.estimate = mc_dvar_gap(
        [p](Rng& g) {
          const double x = g.uniform() < p ? 1.0 : 0.0;
          const double y = g.uniform() < p ? 1.0 : 0.0;
          return std::pair<double, double>{x, y};
        },
        draws, seed, base);
    base += 1ULL << 32;
    r.bernoulli_gaps.emplace_back(p, c);
  }

  r.normal_symmetric.name = "normal(0,1) + normal(1,2)";
  r.normal_symmetric.target = 0.0;
  r.normal_symmetric.estimate = mc_dvar_gap(
      [](Rng& g) {
        const double x = g.normal();
        const double y = 1.0 + 2.0 * g.normal();
        return std::pair<double, double>{x, y};
      },
      draws, seed, base);
  return r;
}

}  // namespace dsd

#endif  // DSD_SIMULATE_HPP
