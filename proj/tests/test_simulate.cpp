#include <algorithm>
#include <cmath>
#include <numbers>
#include <cstdlib>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "dsd/simulate.hpp"

using namespace dsd;

namespace {

struct Stats {
  double mean = 0, var = 0;
};

Stats stats(const std::vector<double>& x) {
  const auto m = moments(x);
  return {m.mean, m.variance};
}

SimulationPlan plan_for(DistributionSpec d, std::vector<std::size_t> ns, std::size_t reps, std::uint64_t seed,
                        std::vector<SimEstimator> es = {SimEstimator::vstat}) {
  SimulationPlan p;
  p.distribution = std::move(d);
  p.sample_sizes = std::move(ns);
  p.replications = reps;
  p.seed = seed;
  p.estimators = std::move(es);
  return p;
}

}  // namespace

TEST(Sampler, Reproducible) {
  Rng a(42, 7), b(42, 7), c(42, 8);
  const auto x = sample(Uniform{0, 1}, 3, a).data();
  EXPECT_EQ(x, sample(Uniform{0, 1}, 3, b).data());
  EXPECT_NE(x, sample(Uniform{0, 1}, 3, c).data());
  for (double v : x) {
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
}

TEST(Sampler, BernoulliAndExponentialMeans) {
  Rng rng(1, 0);
  const std::size_t n = 100000;
  const auto b = stats(sample(Bernoulli{0.3}, n, rng).data());
  EXPECT_NEAR(b.mean, 0.3, 3 * std::sqrt(0.21 / n));
  const auto e = stats(sample(Exponential{2}, n, rng).data());
  EXPECT_NEAR(e.mean, 0.5, 3 * 0.5 / std::sqrt(n));
}

TEST(Sampler, MomentsOfEveryFamily) {
  Rng rng(2, 0);
  const std::size_t n = 200000;
  for (const DistributionSpec& d :
       {DistributionSpec{Normal{1, 2}}, DistributionSpec{Uniform{-1, 3}}, DistributionSpec{Laplace{0.5, 1.5}},
        DistributionSpec{Pareto{5, 2}}, DistributionSpec{GammaDist{0.6}}, DistributionSpec{GammaDist{3.5}},
        DistributionSpec{Poisson{4.2}}, DistributionSpec{NegBinomial{0.4, 2.5}}, DistributionSpec{StudentT{5}},
        DistributionSpec{Exponential{0.3}}}) {
    const auto s = stats(sample(d, n, rng).data());
    const double sd = std::sqrt(variance(d));
    EXPECT_NEAR(s.mean, mean(d), 4 * sd / std::sqrt(n)) << family_name(d);
    // The variance check needs a finite fourth moment; allow 4 standard errors.
    const double k = kurtosis(d);
    EXPECT_NEAR(s.var, variance(d), 4 * variance(d) * std::sqrt((k - 1) / n)) << family_name(d);
  }
}

TEST(Sampler, SupportsAndShapes) {
  Rng rng(3, 0);
  const auto pareto = sample(Pareto{2.5, 1.5}, 10000, rng);
  for (double v : pareto.data()) EXPECT_GE(v, 1.5);
  const auto poisson = sample(Poisson{0.7}, 1000, rng);
  for (double v : poisson.data()) EXPECT_EQ(v, std::floor(v));
  const auto m = sample(MultiNormalIdentity{{1, -1, 0}}, 50000, rng);
  EXPECT_EQ(m.p(), 3u);
  double s0 = 0, s1 = 0;
  for (std::size_t i = 0; i < m.n(); ++i) {
    s0 += m(i, 0);
    s1 += m(i, 1);
  }
  EXPECT_NEAR(s0 / 50000, 1.0, 0.02);
  EXPECT_NEAR(s1 / 50000, -1.0, 0.02);
  // Student t with 3 degrees of freedom: P(T <= 1) from the CDF.
  std::size_t below = 0;
  const std::size_t n = 200000;
  const auto t3 = sample(StudentT{3}, n, rng);
  for (double v : t3.data()) below += v <= 1.0;
  const double p = cdf(StudentT{3}, 1.0);
  EXPECT_NEAR(static_cast<double>(below) / n, p, 4 * std::sqrt(p * (1 - p) / n));
}

TEST(RunPlan, DeterministicAcrossRunsAndWorkers) {
  const auto plan = plan_for(Laplace{0, 1}, {5, 12}, 3000, 17,
                             {SimEstimator::vstat, SimEstimator::unbiased_components, SimEstimator::ustat,
                              SimEstimator::gini, SimEstimator::sd, SimEstimator::mean_dev});
  const auto a = run_plan(plan, 1);
  const auto b = run_plan(plan, 4);
  const auto c = run_plan(plan);
  EXPECT_EQ(simulation_csv(a), simulation_csv(b));
  EXPECT_EQ(simulation_csv(a), simulation_csv(c));
  EXPECT_EQ(simulation_json(a).dump(), simulation_json(b).dump());
  auto other = plan;
  other.seed = 18;
  EXPECT_NE(simulation_csv(run_plan(other)), simulation_csv(a));
}

TEST(RunPlan, ValidationErrors) {
  EXPECT_THROW(run_plan(plan_for(Normal{}, {5}, 0, 1)), DomainError);
  EXPECT_THROW(run_plan(plan_for(Normal{}, {1}, 10, 1)), DomainError);
  EXPECT_THROW(run_plan(plan_for(Normal{}, {}, 10, 1)), DomainError);
  EXPECT_THROW(run_plan(plan_for(Normal{}, {5}, 10, 1, {})), DomainError);
  EXPECT_THROW(run_plan(plan_for(Normal{}, {2}, 10, 1, {SimEstimator::unbiased_components})), DomainError);
  EXPECT_THROW(run_plan(plan_for(MultiNormalIdentity{{0, 0}}, {5}, 10, 1, {SimEstimator::ustat})), DomainError);
  EXPECT_THROW(run_plan(plan_for(Pareto{0.5, 1}, {5}, 10, 1)), DomainError);
  EXPECT_EQ(parse_estimator("unbiased"), SimEstimator::unbiased_components);
  EXPECT_THROW(parse_estimator("median"), DomainError);
}

TEST(RunPlan, CsvAndJsonLayout) {
  const auto r = run_plan(plan_for(Normal{0, 1}, {5, 10}, 200, 3, {SimEstimator::vstat, SimEstimator::gini}));
  const auto csv = simulation_csv(r);
  EXPECT_EQ(csv.rfind("distribution,n,estimator,metric,value\n", 0), 0u);
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), 1u + 2 * 2 * 7);
  EXPECT_NE(csv.find("normal,10,gini,n_variance,"), std::string::npos);
  const auto j = nlohmann::json::parse(simulation_json(r).dump());
  EXPECT_EQ(j["seed"], 3);
  EXPECT_EQ(j["replications"], 200);
  EXPECT_EQ(j["param_sd"], 1.0);
  ASSERT_EQ(j["cells"].size(), 4u);
  EXPECT_EQ(j["cells"][0]["estimator"], "vstat");
  const auto& c = r.cell(10, SimEstimator::gini);
  EXPECT_DOUBLE_EQ(c.n_variance, 10 * c.variance);
  EXPECT_NEAR(c.se_mean, std::sqrt(c.variance / 200), 1e-15);
  EXPECT_THROW(r.cell(7, SimEstimator::vstat), DomainError);
}

TEST(RunPlan, StandardErrorsComeFromReplications) {
  // At n = 2 the sd estimator is |X1 - X2|/sqrt 2, half-normal with mean
  // sqrt(2/pi) and variance 1 - 2/pi.
  const auto r = run_plan(plan_for(Normal{0, 1}, {2}, 40000, 4, {SimEstimator::sd}));
  const auto& c = r.cell(2, SimEstimator::sd);
  EXPECT_NEAR(c.mean, std::sqrt(2 / std::numbers::pi), 4 * c.se_mean);
  EXPECT_NEAR(c.variance, 1 - 2 / std::numbers::pi, 4 * c.se_variance);
}

TEST(RunPlan, TableCells) {
  const auto n500 = run_plan(plan_for(Normal{0, 1}, {500}, 10000, 1)).cell(500, SimEstimator::vstat);
  EXPECT_NEAR(n500.mean, 0.634, 0.01);
  EXPECT_NEAR(n500.n_variance, 0.255, 0.05 * 0.255);
  const auto l5 = run_plan(plan_for(Laplace{0, 1}, {5}, 10000, 1)).cell(5, SimEstimator::vstat);
  EXPECT_NEAR(l5.mean, 0.888, 0.01);
  EXPECT_NEAR(l5.n_variance, 0.955, 0.05 * 0.955);
  const auto t10 = run_plan(plan_for(StudentT{3}, {10}, 10000, 1, {SimEstimator::unbiased_components}))
                       .cell(10, SimEstimator::unbiased_components);
  EXPECT_NEAR(t10.mean, 0.967, 0.01);
  EXPECT_NEAR(t10.n_variance, 2.177, 0.15 * 2.177);
}

TEST(SumExamples, ComponentsAndTargets) {
  const auto r = check_sum_examples(7, 1000000);
  EXPECT_NEAR(r.t1, 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(r.t2, 4.0 / 9.0, 1e-14);
  EXPECT_NEAR(2 * r.t3, 14.0 / 15.0, 1e-10);
  EXPECT_NEAR(r.t1 + r.t2 - 2 * r.t3, 8.0 / 45.0, 1e-10);
  EXPECT_DOUBLE_EQ(r.v_x, 0.5);
  // V(X) = 1/2 exceeds V(X + Y) = sqrt(8/45).
  EXPECT_GT(r.v_x, std::sqrt(8.0 / 45.0));
  EXPECT_TRUE(r.bernoulli_plus_uniform.within(3)) << r.bernoulli_plus_uniform.z();
  for (const auto& [p, c] : r.bernoulli_gaps) EXPECT_TRUE(c.within(3)) << "p=" << p << " z=" << c.z();
  EXPECT_TRUE(r.normal_symmetric.within(3)) << r.normal_symmetric.z();
  EXPECT_NEAR(bernoulli_gap(0.3), 0.056448, 1e-15);
  EXPECT_EQ(bernoulli_gap(0.5), 0.0);
  EXPECT_THROW(check_sum_examples(1, 1000), DomainError);
}

TEST(SumExamples, SymmetricPairIsDeterministic) {
  const auto a = check_sum_examples(9, 1000000, {0.2});
  const auto b = check_sum_examples(9, 1000000, {0.2});
  EXPECT_EQ(a.bernoulli_gaps[0].second.estimate.value, b.bernoulli_gaps[0].second.estimate.value);
}

TEST(DispersiveOrder, ScalePairs) {
  // Paired seeds: the same uniforms drive both members, so every replication
  // aggregate is ordered, and the population order is checked at 3 sigma.
  for (const auto& [lo, hi] : {std::pair<DistributionSpec, DistributionSpec>{Uniform{0, 1}, Uniform{0, 2}},
                               std::pair<DistributionSpec, DistributionSpec>{Normal{0, 1}, Normal{0, 2}}}) {
    const auto a = run_plan(plan_for(lo, {10, 50}, 4000, 5)).cells;
    const auto b = run_plan(plan_for(hi, {10, 50}, 4000, 5)).cells;
    for (std::size_t k = 0; k < a.size(); ++k) {
      EXPECT_LT(a[k].mean, b[k].mean);
      EXPECT_LT(a[k].mean + 3 * a[k].se_mean, b[k].mean - 3 * b[k].se_mean) << family_name(lo);
    }
  }
}

TEST(DispersiveOrder, LogConcaveConvolution) {
  // X ~ Normal(0,1) has a log-concave density, so V(X + Y) >= V(X).
  const double vx = std::sqrt(population_dvar(Normal{0, 1}));
  std::uint64_t base = 0;
  for (const DistributionSpec& y : {DistributionSpec{Normal{0, 0.5}}, DistributionSpec{Uniform{-1, 1}},
                                    DistributionSpec{Laplace{0, 0.7}}}) {
    const auto est = mc_dvar([&](Rng& g) { return g.normal() + draw(y, g); }, 1000000, 13, base);
    base += 1ULL << 32;
    const double v = std::sqrt(est.value), se = est.se / (2 * v);
    EXPECT_GE(v, vx - 3 * se) << family_name(y);
  }
}
