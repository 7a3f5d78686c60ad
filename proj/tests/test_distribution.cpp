#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include "dsd/distribution.hpp"

using namespace dsd;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

std::vector<DistributionSpec> continuous_laws() {
  return {Normal{0.3, 1.7}, Uniform{-1, 2}, Laplace{0.5, 2}, Pareto{3.5, 1.5}, Exponential{2},
          GammaDist{0.7},   GammaDist{3.2}, StudentT{5},     StudentT{3}};
}

// Left end of the support, or -inf.
double support_lo(const DistributionSpec& d) {
  if (const auto* u = std::get_if<Uniform>(&d)) return u->lo;
  if (const auto* p = std::get_if<Pareto>(&d)) return p->xm;
  if (std::holds_alternative<Exponential>(d) || std::holds_alternative<GammaDist>(d)) return 0.0;
  return -inf;
}

// int_lo^x g(y) f(y) dy by quadrature, split at the Laplace kink, at 0 and
// at any extra kinks of g.
double integrate_below(const DistributionSpec& d, double x, auto g, std::vector<double> cuts = {}) {
  boost::math::quadrature::tanh_sinh<double> ts;
  boost::math::quadrature::exp_sinh<double> es;
  const auto h = [&](double y) { return g(y) * pdf(d, y); };
  const double lo = support_lo(d);
  if (const auto* u = std::get_if<Uniform>(&d)) x = std::min(x, u->hi);
  if (const auto* l = std::get_if<Laplace>(&d)) cuts.push_back(l->mu);
  cuts.push_back(0.0);
  std::vector<double> pts{lo};
  for (double c : cuts)
    if (c > lo && c < x) pts.push_back(c);
  std::sort(pts.begin() + 1, pts.end());
  pts.push_back(x);
  double total = 0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double a = pts[k], b = pts[k + 1];
    if (a >= b) continue;
    total += (std::isinf(a) || std::isinf(b)) ? es.integrate(h, a, b) : ts.integrate(h, a, b);
  }
  return total;
}

}  // namespace

TEST(ParseDistribution, ValidSpecifications) {
  EXPECT_EQ(std::get<Bernoulli>(parse_distribution("bernoulli", "prob=0.3")).prob, 0.3);
  const auto n = std::get<Normal>(parse_distribution("normal", "mean=1,sd=2"));
  EXPECT_EQ(n.mean, 1.0);
  EXPECT_EQ(n.sd, 2.0);
  EXPECT_EQ(std::get<Normal>(parse_distribution("normal", "")).sd, 1.0);
  EXPECT_EQ(std::get<Pareto>(parse_distribution("pareto", "alpha=3")).xm, 1.0);
  EXPECT_EQ(std::get<StudentT>(parse_distribution("t5", "")).nu, 5.0);
  EXPECT_EQ(std::get<StudentT>(parse_distribution("t", "nu=3")).nu, 3.0);
  const auto nb = std::get<NegBinomial>(parse_distribution("negbinomial", "c=0.4,beta=2.5"));
  EXPECT_EQ(nb.c, 0.4);
  EXPECT_EQ(nb.beta, 2.5);
  EXPECT_EQ(std::get<MultiNormalIdentity>(parse_distribution("mvnormal", "dim=3")).mean.size(), 3u);
  EXPECT_EQ(family_name(parse_distribution("gamma", "alpha=2")), "gamma");
}

TEST(ParseDistribution, RejectsBadInput) {
  EXPECT_THROW(parse_distribution("cauchy", ""), DomainError);
  EXPECT_THROW(parse_distribution("normal", "mu=1"), DomainError);
  EXPECT_THROW(parse_distribution("normal", "sd=abc"), DomainError);
  EXPECT_THROW(parse_distribution("normal", "sd"), DomainError);
  EXPECT_THROW(parse_distribution("normal", "sd=0"), DomainError);
  EXPECT_THROW(parse_distribution("bernoulli", ""), DomainError);
  EXPECT_THROW(parse_distribution("bernoulli", "prob=1.5"), DomainError);
  EXPECT_THROW(parse_distribution("pareto", "alpha=1"), DomainError);
  EXPECT_THROW(parse_distribution("uniform", "lo=2,hi=1"), DomainError);
  EXPECT_THROW(parse_distribution("negbinomial", "c=1,beta=1"), DomainError);
  EXPECT_THROW(parse_distribution("mvnormal", "dim=1.5"), DomainError);
  EXPECT_THROW(parse_distribution("t", "nu=1"), DomainError);
  EXPECT_THROW(parse_distribution("normal", "sd=inf"), DomainError);
}

TEST(Distribution, QuantileInvertsCdf) {
  for (const auto& d : continuous_laws())
    for (double u : {1e-10, 1e-4, 0.02, 0.25, 0.5, 0.77, 0.999, 1 - 1e-9}) {
      const double x = quantile(d, u);
      EXPECT_NEAR(cdf(d, x), u, 1e-11 * u + 1e-15) << family_name(d) << " u=" << u;
    }
}

TEST(Distribution, UpperTailKeepsRelativePrecision) {
  for (const auto& d : continuous_laws())
    for (double ub : {1e-12, 1e-6, 0.1}) {
      const double x = quantile(d, 1 - ub, ub);
      // Near hi the Uniform quantile is limited by the spacing of doubles; its
      // survival is exact at the representable x.
      const auto* u = std::get_if<Uniform>(&d);
      const double want = u ? (u->hi - x) / (u->hi - u->lo) : ub;
      EXPECT_NEAR(survival(d, x), want, 1e-9 * want) << family_name(d);
    }
}

TEST(Distribution, SurvivalComplementsCdf) {
  for (const auto& d : continuous_laws())
    for (double u : {0.01, 0.3, 0.6, 0.95}) {
      const double x = quantile(d, u);
      EXPECT_NEAR(cdf(d, x) + survival(d, x), 1.0, 1e-14);
    }
  const DistributionSpec po = Poisson{3.0};
  EXPECT_NEAR(cdf(po, 2) + survival(po, 2), 1.0, 1e-14);
  EXPECT_NEAR(cdf(po, 2), pmf(po, 0) + pmf(po, 1) + pmf(po, 2), 1e-14);
}

TEST(Distribution, DensityIsDerivativeOfCdf) {
  for (const auto& d : continuous_laws())
    for (double u : {0.1, 0.4, 0.7}) {
      const double x = quantile(d, u), h = 1e-5 * std::max(1.0, std::abs(x));
      EXPECT_NEAR(pdf(d, x), (cdf(d, x + h) - cdf(d, x - h)) / (2 * h), 1e-6) << family_name(d);
    }
}

TEST(Distribution, MomentsMatchQuadrature) {
  for (const auto& d : continuous_laws()) {
    const double m = integrate_below(d, inf, [](double y) { return y; });
    EXPECT_NEAR(mean(d), m, 1e-9 * std::max(1.0, std::abs(m))) << family_name(d);
    const double v = integrate_below(d, inf, [&](double y) { return (y - m) * (y - m); });
    EXPECT_NEAR(variance(d), v, 1e-7 * v) << family_name(d);
  }
  EXPECT_NEAR(kurtosis(Normal{2, 3}), 3.0, 1e-14);
  EXPECT_NEAR(kurtosis(Laplace{0, 1}), 6.0, 1e-14);
  EXPECT_NEAR(kurtosis(StudentT{5}), 9.0, 1e-12);
  EXPECT_FALSE(has_finite_fourth_moment(StudentT{3}));
  EXPECT_FALSE(has_finite_fourth_moment(Pareto{3.5, 1}));
  EXPECT_TRUE(has_finite_fourth_moment(Pareto{4.5, 1}));
}

TEST(Distribution, PartialExpectationMatchesQuadrature) {
  for (const auto& d : continuous_laws())
    for (double u : {0.03, 0.3, 0.5, 0.8, 0.99}) {
      const double x = quantile(d, u);
      const double o = integrate_below(d, x, [](double y) { return y; });
      EXPECT_NEAR(partial_expectation(d, x), o, 1e-9 * std::max(1.0, std::abs(o))) << family_name(d) << " u=" << u;
    }
}

TEST(Distribution, DiscretePartialExpectation) {
  for (const DistributionSpec& d : {DistributionSpec{Poisson{2.5}}, DistributionSpec{NegBinomial{0.35, 1.7}},
                                    DistributionSpec{Bernoulli{0.3}}})
    for (double x : {0.0, 1.0, 2.5, 4.0, 9.0}) {
      double o = 0;
      for (int k = 1; k <= x; ++k) o += k * pmf(d, k);
      EXPECT_NEAR(partial_expectation(d, x), o, 1e-13) << family_name(d) << " x=" << x;
    }
}

TEST(Distribution, MeanAbsoluteDeviationExamples) {
  // E|X| for the standard normal is sqrt(2/pi); for U(0,1) at 0 it is 1/2.
  EXPECT_NEAR(mean_abs_deviation_from(Normal{0, 1}, 0.0), std::sqrt(2 / std::numbers::pi), 1e-15);
  EXPECT_NEAR(mean_abs_deviation_from(Uniform{0, 1}, 0.0), 0.5, 1e-15);
  EXPECT_NEAR(mean_abs_deviation_from(Uniform{0, 1}, 0.5), 0.25, 1e-15);
  EXPECT_NEAR(mean_abs_deviation_from(Laplace{0, 2}, 0.0), 2.0, 1e-15);
  for (const auto& d : continuous_laws()) {
    const double x = quantile(d, 0.37);
    const double o = integrate_below(d, inf, [&](double y) { return std::abs(y - x); }, {x});
    EXPECT_NEAR(mean_abs_deviation_from(d, x), o, 1e-8 * o) << family_name(d);
  }
}

TEST(Distribution, SymmetryAndDimension) {
  EXPECT_TRUE(is_symmetric(Normal{}));
  EXPECT_TRUE(is_symmetric(Bernoulli{0.5}));
  EXPECT_FALSE(is_symmetric(Bernoulli{0.3}));
  EXPECT_FALSE(is_symmetric(Exponential{}));
  EXPECT_EQ(dimension(MultiNormalIdentity{{0, 0, 0}}), 3u);
  EXPECT_TRUE(is_discrete(Poisson{}));
  EXPECT_THROW(quantile(MultiNormalIdentity{{0, 0}}, 0.5), DomainError);
}
