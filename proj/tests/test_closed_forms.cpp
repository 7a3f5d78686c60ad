#include <cmath>
#include <numbers>

#include <boost/math/distributions/exponential.hpp>
#include <boost/math/distributions/pareto.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include "dsd/closed_forms.hpp"
#include "dsd/estimators.hpp"
#include "dsd/simulate.hpp"
#include "oracles.hpp"

using namespace dsd;
using std::numbers::pi;

namespace {

// 4((1 - sqrt 3)/pi + 1/3) evaluated in long double.
const double kNormalDvar = static_cast<double>(4.0L * ((1.0L - std::sqrt(3.0L)) / std::numbers::pi_v<long double> + 1.0L / 3.0L));

std::vector<DistributionSpec> registry() {
  return {Bernoulli{0.3},   Normal{1, 2},      Uniform{-1, 3},       Laplace{0.5, 1.5}, Pareto{3, 2},
          Exponential{0.7}, GammaDist{2.5},    Poisson{1.5},         NegBinomial{0.3, 2}, StudentT{5},
          StudentT{3}};
}

}  // namespace

TEST(PopulationDvar, ClosedFormValues) {
  EXPECT_NEAR(population_dvar(Bernoulli{0.5}), 0.25, 1e-15);
  EXPECT_NEAR(population_dvar(Uniform{0, 1}), 2.0 / 45.0, 1e-15);
  EXPECT_NEAR(population_dvar(Exponential{1}), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(population_dvar(Laplace{0, 1}), 7.0 / 12.0, 1e-15);
  EXPECT_NEAR(population_dvar(Pareto{2, 1}), 4.0 / 9.0, 1e-15);
  EXPECT_NEAR(population_dvar(Normal{0, 1}), kNormalDvar, 1e-15);
  EXPECT_NEAR(kNormalDvar, 0.401257296381328, 1e-14);
  EXPECT_NEAR(std::sqrt(population_dvar(Normal{0, 1})), 0.633, 5e-4);
  EXPECT_NEAR(population_dvar(MultiNormalIdentity{{0.0}}), kNormalDvar, 1e-10);
}

TEST(PopulationDvar, ScaleFormulas) {
  EXPECT_NEAR(population_dvar(Bernoulli{0.2}), 4 * 0.16 * 0.16, 1e-15);
  EXPECT_NEAR(population_dvar(Uniform{2, 5}), 2.0 * 9 / 45, 1e-14);
  EXPECT_NEAR(population_dvar(Normal{3, 2}), 4 * kNormalDvar, 1e-14);
  EXPECT_NEAR(population_dvar(Exponential{2}), 1.0 / 12.0, 1e-15);
  EXPECT_NEAR(population_dvar(Pareto{3, 2}), 4.0 * 9 * 4 / (2 * 25 * 7), 1e-14);
}

TEST(PopulationDvar, LocationInvariance) {
  EXPECT_EQ(population_dvar(Normal{-7, 1.3}), population_dvar(Normal{4, 1.3}));
  EXPECT_NEAR(population_dvar(Laplace{-2, 0.8}), population_dvar(Laplace{9, 0.8}), 1e-15);
  EXPECT_NEAR(population_dvar(Uniform{0, 2}), population_dvar(Uniform{10, 12}), 1e-14);
  EXPECT_NEAR(population_dvar_numeric(Laplace{-2, 0.8}).value, population_dvar_numeric(Laplace{9, 0.8}).value, 1e-9);
}

TEST(PopulationDvar, NumericMatchesClosedForms) {
  for (const DistributionSpec& d : {DistributionSpec{Normal{0, 1}}, DistributionSpec{Uniform{0, 1}},
                                    DistributionSpec{Laplace{0, 1}}, DistributionSpec{Pareto{2, 1}},
                                    DistributionSpec{Pareto{4.5, 0.5}}, DistributionSpec{Exponential{1.5}},
                                    DistributionSpec{Normal{2, 0.3}}}) {
    const auto r = population_dvar_numeric(d);
    EXPECT_EQ(r.method, EvalMethod::numeric);
    EXPECT_NEAR(r.value, population_dvar(d), 1e-8) << family_name(d);
  }
  EXPECT_NEAR(population_dvar_numeric(Uniform{0, 1}).value, 2.0 / 45.0, 1e-8);
}

TEST(PopulationDvar, NumericMatchesNestedQuadratureOracle) {
  const boost::math::exponential_distribution<double> e(1.0);
  const double oe = oracle::positive_dvar([&](double x) { return x <= 0 ? 0.0 : boost::math::cdf(e, x); },
                                          [&](double x) { return x <= 0 ? 0.0 : boost::math::pdf(e, x); }, 1.0);
  EXPECT_NEAR(oe, 1.0 / 3.0, 1e-9);
  const boost::math::pareto_distribution<double> p(1.0, 5.0);
  const double op = oracle::positive_dvar([&](double x) { return x <= 1 ? 0.0 : boost::math::cdf(p, x); },
                                          [&](double x) { return x <= 1 ? 0.0 : boost::math::pdf(p, x); },
                                          boost::math::variance(p), 1.0);
  EXPECT_NEAR(population_dvar(Pareto{5, 1}), op, 1e-9);
}

TEST(PopulationDvar, DiscreteLawsMatchLatticeSums) {
  for (double p : {0.1, 0.5, 0.9}) {
    EXPECT_NEAR(population_dvar(Bernoulli{p}), oracle::lattice_dvar({1 - p, p}), 1e-15);
    EXPECT_NEAR(population_dvar_numeric(Bernoulli{p}).value, oracle::lattice_dvar({1 - p, p}), 1e-15);
  }
  for (const DistributionSpec& d : {DistributionSpec{Poisson{3.0}}, DistributionSpec{NegBinomial{0.45, 1.2}}}) {
    std::vector<double> p;
    for (int k = 0; k < 200; ++k) p.push_back(pmf(d, k));
    const auto r = population_dvar_detailed(d);
    EXPECT_EQ(r.method, EvalMethod::series);
    EXPECT_NEAR(r.value, oracle::lattice_dvar(p), 1e-11);
    EXPECT_NEAR(population_dvar_numeric(d).value, r.value, 1e-11);
  }
}

TEST(PopulationDvar, GammaAtShapeOneIsExponential) {
  EXPECT_NEAR(population_dvar(GammaDist{1.0}), 1.0 / 3.0, 1e-8);
  EXPECT_NEAR(population_dvar_numeric(GammaDist{2.5}).value, population_dvar(GammaDist{2.5}), 1e-8);
}

TEST(PopulationDvar, StudentTIsNumeric) {
  const auto t5 = population_dvar_detailed(StudentT{5});
  const auto t3 = population_dvar_detailed(StudentT{3});
  EXPECT_EQ(t5.method, EvalMethod::numeric);
  EXPECT_NEAR(std::sqrt(t5.value), 0.725, 5e-4);
  EXPECT_NEAR(std::sqrt(t3.value), 0.810, 5e-4);
}

TEST(PopulationDvar, MultivariateNormal) {
  for (double m : {0.0, 2.5}) EXPECT_NEAR(population_dvar(MultiNormalIdentity{{m}}), kNormalDvar, 1e-10);
  // p = 2 against the V-statistic of a large simulated sample.
  Rng rng(11, 0);
  const auto s = sample(MultiNormalIdentity{{0.0, 0.0}}, 4000, rng);
  const double v = population_dvar(MultiNormalIdentity{{0.0, 0.0}});
  EXPECT_NEAR(breakdown(s).vSq, v, 0.05 * v);
}

TEST(PopulationDvar, RejectsInvalidParameters) {
  EXPECT_THROW(population_dvar(Pareto{1.0, 1.0}), DomainError);
  EXPECT_THROW(population_dvar(Uniform{1, 1}), DomainError);
  EXPECT_THROW(population_dvar(NegBinomial{1.2, 1}), DomainError);
  EXPECT_THROW(population_dvar_numeric(MultiNormalIdentity{{0, 0}}), DomainError);
}

TEST(PopulationGini, Values) {
  EXPECT_NEAR(population_gini(Bernoulli{0.5}), 0.5, 1e-15);
  EXPECT_NEAR(population_gini(Uniform{0, 1}), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(population_gini(Normal{0, 1}), 2 / std::sqrt(pi), 1e-15);
  EXPECT_NEAR(population_gini(Normal{0, 1}), 1.1283791670955126, 1e-15);
  EXPECT_NEAR(population_gini(Exponential{2}), 0.5, 1e-15);
  EXPECT_NEAR(population_gini(Laplace{0, 2}), 3.0, 1e-15);
  EXPECT_NEAR(population_gini(GammaDist{1.0}), 1.0, 1e-10);
  EXPECT_NEAR(population_gini(MultiNormalIdentity{{0.0}}), 2 / std::sqrt(pi), 1e-14);
  EXPECT_NEAR(population_gini(MultiNormalIdentity{{0.0, 0.0}}), std::sqrt(pi), 1e-14);
}

TEST(PopulationGini, SpacingRepresentationOracle) {
  // Delta = 2 int F (1 - F) dx, integrated directly in x.
  boost::math::quadrature::tanh_sinh<double> ts;
  for (const DistributionSpec& d : {DistributionSpec{Pareto{3, 2}}, DistributionSpec{GammaDist{2.5}},
                                    DistributionSpec{StudentT{5}}, DistributionSpec{Laplace{1, 2}}}) {
    const double o = ts.integrate([&](double x) { return 2 * cdf(d, x) * survival(d, x); },
                                  -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity());
    EXPECT_NEAR(population_gini(d), o, 1e-8 * o) << family_name(d);
  }
  for (const DistributionSpec& d : {DistributionSpec{Poisson{2.0}}, DistributionSpec{NegBinomial{0.3, 2}}}) {
    std::vector<double> p;
    for (int k = 0; k < 200; ++k) p.push_back(pmf(d, k));
    EXPECT_NEAR(population_gini(d), oracle::lattice_gini(p), 1e-12);
  }
}

TEST(PopulationInequalities, RegistryFamilies) {
  for (const auto& d : registry()) {
    const double s2 = population_variance(d), v2 = population_dvar(d), delta = population_gini(d);
    EXPECT_LE(v2, s2 * (1 + 1e-12)) << family_name(d);
    EXPECT_LE(v2, delta * delta * (1 + 1e-12)) << family_name(d);
    if (is_continuous_univariate(d)) EXPECT_LE(delta * delta, 4.0 / 3.0 * s2) << family_name(d);
  }
  // Bernoulli attains V^2 = Delta^2.
  EXPECT_NEAR(population_dvar(Bernoulli{0.3}), std::pow(population_gini(Bernoulli{0.3}), 2), 1e-15);
}

TEST(JIntegral, Uniform) {
  // E psi(X)^2 with psi(x) = x^2 - x + 1/2 is 7/60, so J = (7/60 - 1/12)/4.
  EXPECT_NEAR(population_t3(Uniform{0, 1}), 7.0 / 60.0, 1e-12);
  EXPECT_NEAR(j_integral(Uniform{0, 1}), 1.0 / 120.0, 1e-12);
}

TEST(JIntegral, NestedQuadratureOracle) {
  // J = E[(Y - X)(Z - Y); X < Y < Z] = int f(y) (int_{-inf}^y F) (int_y^inf (1 - F)) dy.
  boost::math::quadrature::tanh_sinh<double> ts;
  boost::math::quadrature::exp_sinh<double> es;
  constexpr double inf = std::numeric_limits<double>::infinity();
  for (const DistributionSpec& d : {DistributionSpec{Normal{0, 1}}, DistributionSpec{Exponential{1}},
                                    DistributionSpec{Laplace{0, 1}}}) {
    const double lo = std::holds_alternative<Exponential>(d) ? 0.0 : -inf;
    const auto below = [&](double y) {
      return lo == 0.0 ? ts.integrate([&](double x) { return cdf(d, x); }, 0.0, y)
                       : es.integrate([&](double t) { return cdf(d, y - t); }, 0.0, inf);
    };
    const auto above = [&](double y) { return es.integrate([&](double t) { return survival(d, y + t); }, 0.0, inf); };
    const auto g = [&](double y) { return pdf(d, y) * below(y) * above(y); };
    const double o = lo == 0.0 ? es.integrate(g, 0.0, inf)
                               : es.integrate([&](double t) { return g(-t); }, 0.0, inf) + es.integrate(g, 0.0, inf);
    EXPECT_NEAR(j_integral(d), o, 1e-8) << family_name(d);
  }
}

TEST(JIntegral, ReflectionInvariance) {
  EXPECT_NEAR(j_integral(Laplace{3, 1}), j_integral(Laplace{-3, 1}), 1e-12);
  EXPECT_NEAR(j_integral(Normal{1, 2}), j_integral(Normal{-1, 2}), 1e-12);
}

TEST(GiniVariance, SmallSampleAndLimit) {
  for (const DistributionSpec& d : {DistributionSpec{Normal{0, 1}}, DistributionSpec{Uniform{0, 1}},
                                    DistributionSpec{Exponential{1}}}) {
    const double s2 = variance(d), delta = population_gini(d);
    EXPECT_NEAR(gini_variance_finite_n(d, 2), 2 * s2 - delta * delta, 1e-12);
    const double n = 1e7;
    EXPECT_NEAR(n * gini_variance_finite_n(d, static_cast<std::size_t>(n)), asv_gini(d), 1e-5) << family_name(d);
  }
  // Uniform(0,1), n = 10.
  EXPECT_NEAR(gini_variance_finite_n(Uniform{0, 1}, 10), (3.0 + 16.0 * 8 / 120 - 34.0 / 9) / 90, 1e-15);
  EXPECT_NEAR(gini_variance_finite_n(Uniform{0, 1}, 10), 0.003209876543, 1e-12);
  EXPECT_THROW(gini_variance_finite_n(Uniform{0, 1}, 1), DomainError);
  EXPECT_THROW(gini_variance_finite_n(StudentT{2}, 5), DomainError);
}

TEST(AsvGini, Values) {
  EXPECT_NEAR(asv_gini(Uniform{0, 1}), 1.0 / 45.0, 1e-14);
  EXPECT_NEAR(asv_gini(Exponential{1}), 4.0 / 3.0, 1e-14);
  EXPECT_NEAR(asv_gini(Normal{0, 1}), 4 - 2 * kNormalDvar - 8 / pi, 1e-14);
  EXPECT_NEAR(asv_gini(Normal{0, 1}), 0.651006317767, 1e-11);
  // Gini ASV of the normal law in closed form: 4 (pi/3 + 2 sqrt 3 - 4) / pi.
  EXPECT_NEAR(asv_gini(Normal{0, 1}), 4 * (pi / 3 + 2 * std::sqrt(3.0) - 4) / pi, 1e-14);
  EXPECT_THROW(asv_gini(StudentT{2}), DomainError);
}

TEST(ClosedFormContext, Constants) {
  EXPECT_NEAR(ClosedFormContext::cp(1), pi, 1e-14);
  EXPECT_GT(ClosedFormContext{}.series_tolerance, 0.0);
  EXPECT_STREQ(method_name(EvalMethod::numeric), "numeric");
}
