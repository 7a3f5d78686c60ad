#ifndef DSD_DISTRIBUTION_HPP
#define DSD_DISTRIBUTION_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include <boost/math/distributions/laplace.hpp>
#include <boost/math/distributions/negative_binomial.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "dsd/error.hpp"

namespace dsd {

struct Bernoulli { double prob = 0.5; };
struct Normal { double mean = 0.0, sd = 1.0; };
struct Uniform { double lo = 0.0, hi = 1.0; };
struct Laplace { double mu = 0.0, alpha = 1.0; };  // density exp(-|x-mu|/alpha) / (2 alpha)
struct Pareto { double alpha = 2.0, xm = 1.0; };
struct Exponential { double rate = 1.0; };
struct GammaDist { double alpha = 1.0; };  // unit scale
struct Poisson { double lambda = 1.0; };
struct NegBinomial { double c = 0.5, beta = 1.0; };  // P(x) = (beta)_x/x! (1-c)^beta c^x
struct MultiNormalIdentity { std::vector<double> mean{0.0}; };
struct StudentT { double nu = 5.0; };

using DistributionSpec = std::variant<Bernoulli, Normal, Uniform, Laplace, Pareto, Exponential,
                                      GammaDist, Poisson, NegBinomial, MultiNormalIdentity, StudentT>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace detail {

template <class... Ts>
struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

using boost_policy = boost::math::policies::policy<
    boost::math::policies::overflow_error<boost::math::policies::ignore_error>,
    boost::math::policies::discrete_quantile<boost::math::policies::integer_round_up>>;

inline boost::math::normal_distribution<double, boost_policy> std_normal() { return {0.0, 1.0}; }

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw DomainError(msg);
}

}  // namespace detail

inline std::string family_name(const DistributionSpec& d) {
  return std::visit(detail::overloaded{
                        [](const Bernoulli&) { return "bernoulli"; },
                        [](const Normal&) { return "normal"; },
                        [](const Uniform&) { return "uniform"; },
                        [](const Laplace&) { return "laplace"; },
                        [](const Pareto&) { return "pareto"; },
                        [](const Exponential&) { return "exponential"; },
                        [](const GammaDist&) { return "gamma"; },
                        [](const Poisson&) { return "poisson"; },
                        [](const NegBinomial&) { return "negbinomial"; },
                        [](const MultiNormalIdentity&) { return "mvnormal"; },
                        [](const StudentT&) { return "t"; },
                    },
                    d);
}

/// Throws DomainError naming the violated constraint.
inline void validate(const DistributionSpec& d) {
  using detail::require;
  const auto fin = [](double x) { return std::isfinite(x); };
  std::visit(detail::overloaded{
                 [&](const Bernoulli& b) { require(b.prob >= 0.0 && b.prob <= 1.0, "bernoulli: 0 <= prob <= 1 required"); },
                 [&](const Normal& n) {
                   require(fin(n.mean), "normal: mean must be finite");
                   require(n.sd > 0.0 && fin(n.sd), "normal: sd > 0 required");
                 },
                 [&](const Uniform& u) { require(fin(u.lo) && fin(u.hi) && u.lo < u.hi, "uniform: lo < hi required"); },
                 [&](const Laplace& l) {
                   require(fin(l.mu), "laplace: mu must be finite");
                   require(l.alpha > 0.0 && fin(l.alpha), "laplace: alpha > 0 required");
                 },
                 [&](const Pareto& p) {
                   require(p.alpha > 1.0 && fin(p.alpha), "pareto: alpha > 1 required");
                   require(p.xm > 0.0 && fin(p.xm), "pareto: xm > 0 required");
                 },
                 [&](const Exponential& e) { require(e.rate > 0.0 && fin(e.rate), "exponential: rate > 0 required"); },
                 [&](const GammaDist& g) { require(g.alpha > 0.0 && fin(g.alpha), "gamma: alpha > 0 required"); },
                 [&](const Poisson& p) { require(p.lambda > 0.0 && fin(p.lambda), "poisson: lambda > 0 required"); },
                 [&](const NegBinomial& nb) {
                   require(nb.c > 0.0 && nb.c < 1.0, "negbinomial: 0 < c < 1 required");
                   require(nb.beta > 0.0 && fin(nb.beta), "negbinomial: beta > 0 required");
                 },
                 [&](const MultiNormalIdentity& m) {
                   require(!m.mean.empty(), "mvnormal: dimension >= 1 required");
                   for (double v : m.mean) require(fin(v), "mvnormal: mean entries must be finite");
                 },
                 [&](const StudentT& t) { require(t.nu > 1.0 && fin(t.nu), "t: nu > 1 required"); },
             },
             d);
}

inline std::size_t dimension(const DistributionSpec& d) {
  if (const auto* m = std::get_if<MultiNormalIdentity>(&d)) return m->mean.size();
  return 1;
}

inline bool is_discrete(const DistributionSpec& d) {
  return std::holds_alternative<Bernoulli>(d) || std::holds_alternative<Poisson>(d) ||
         std::holds_alternative<NegBinomial>(d);
}

inline bool is_continuous_univariate(const DistributionSpec& d) {
  return !is_discrete(d) && dimension(d) == 1;
}

/// Symmetric about a center (used for antithetic sampling).
inline bool is_symmetric(const DistributionSpec& d) {
  return std::holds_alternative<Normal>(d) || std::holds_alternative<Uniform>(d) ||
         std::holds_alternative<Laplace>(d) || std::holds_alternative<StudentT>(d) ||
         (std::holds_alternative<Bernoulli>(d) && std::get<Bernoulli>(d).prob == 0.5);
}

inline double mean(const DistributionSpec& d) {
  return std::visit(detail::overloaded{
                        [](const Bernoulli& b) { return b.prob; },
                        [](const Normal& n) { return n.mean; },
                        [](const Uniform& u) { return 0.5 * (u.lo + u.hi); },
                        [](const Laplace& l) { return l.mu; },
                        [](const Pareto& p) { return p.alpha * p.xm / (p.alpha - 1.0); },
                        [](const Exponential& e) { return 1.0 / e.rate; },
                        [](const GammaDist& g) { return g.alpha; },
                        [](const Poisson& p) { return p.lambda; },
                        [](const NegBinomial& nb) { return nb.beta * nb.c / (1.0 - nb.c); },
                        [](const MultiNormalIdentity&) -> double {
                          throw DomainError("mvnormal: scalar mean undefined for a vector");
                        },
                        [](const StudentT&) { return 0.0; },
                    },
                    d);
}

/// Variance; for the multivariate normal, the trace of the covariance.
/// Infinite when the second moment diverges.
inline double variance(const DistributionSpec& d) {
  return std::visit(detail::overloaded{
                        [](const Bernoulli& b) { return b.prob * (1.0 - b.prob); },
                        [](const Normal& n) { return n.sd * n.sd; },
                        [](const Uniform& u) { return (u.hi - u.lo) * (u.hi - u.lo) / 12.0; },
                        [](const Laplace& l) { return 2.0 * l.alpha * l.alpha; },
                        [](const Pareto& p) {
                          if (p.alpha <= 2.0) return kInf;
                          return p.alpha * p.xm * p.xm / ((p.alpha - 1.0) * (p.alpha - 1.0) * (p.alpha - 2.0));
                        },
                        [](const Exponential& e) { return 1.0 / (e.rate * e.rate); },
                        [](const GammaDist& g) { return g.alpha; },
                        [](const Poisson& p) { return p.lambda; },
                        [](const NegBinomial& nb) { return nb.beta * nb.c / ((1.0 - nb.c) * (1.0 - nb.c)); },
                        [](const MultiNormalIdentity& m) { return static_cast<double>(m.mean.size()); },
                        [](const StudentT& t) { return t.nu > 2.0 ? t.nu / (t.nu - 2.0) : kInf; },
                    },
                    d);
}

/// Kurtosis E(X-mu)^4 / sigma^4; infinite when the fourth moment diverges.
inline double kurtosis(const DistributionSpec& d) {
  return std::visit(detail::overloaded{
                        [](const Bernoulli& b) {
                          const double q = 1.0 - b.prob;
                          return (1.0 - 3.0 * b.prob * q) / (b.prob * q);
                        },
                        [](const Normal&) { return 3.0; },
                        [](const Uniform&) { return 1.8; },
                        [](const Laplace&) { return 6.0; },
                        [](const Pareto& p) {
                          const double a = p.alpha;
                          if (a <= 4.0) return kInf;
                          return 3.0 + 6.0 * (a * a * a + a * a - 6.0 * a - 2.0) / (a * (a - 3.0) * (a - 4.0));
                        },
                        [](const Exponential&) { return 9.0; },
                        [](const GammaDist& g) { return 3.0 + 6.0 / g.alpha; },
                        [](const Poisson& p) { return 3.0 + 1.0 / p.lambda; },
                        [](const NegBinomial& nb) {
                          const double pr = 1.0 - nb.c;
                          return 3.0 + 6.0 / nb.beta + pr * pr / (nb.beta * nb.c);
                        },
                        [](const MultiNormalIdentity&) -> double {
                          throw DomainError("mvnormal: kurtosis is defined for univariate laws only");
                        },
                        [](const StudentT& t) { return t.nu > 4.0 ? 3.0 + 6.0 / (t.nu - 4.0) : kInf; },
                    },
                    d);
}

inline bool has_finite_fourth_moment(const DistributionSpec& d) {
  if (const auto* t = std::get_if<StudentT>(&d)) return t->nu > 4.0;
  if (const auto* p = std::get_if<Pareto>(&d)) return p->alpha > 4.0;
  return true;
}

inline double cdf(const DistributionSpec& d, double x) {
  using namespace boost::math;
  using P = detail::boost_policy;
  return std::visit(
      detail::overloaded{
          [&](const Bernoulli& b) { return x < 0.0 ? 0.0 : (x < 1.0 ? 1.0 - b.prob : 1.0); },
          [&](const Normal& n) { return boost::math::cdf(normal_distribution<double, P>(n.mean, n.sd), x); },
          [&](const Uniform& u) { return x <= u.lo ? 0.0 : (x >= u.hi ? 1.0 : (x - u.lo) / (u.hi - u.lo)); },
          [&](const Laplace& l) {
            const double z = (x - l.mu) / l.alpha;
            return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
          },
          [&](const Pareto& p) { return x <= p.xm ? 0.0 : -std::expm1(p.alpha * std::log(p.xm / x)); },
          [&](const Exponential& e) { return x <= 0.0 ? 0.0 : -std::expm1(-e.rate * x); },
          [&](const GammaDist& g) { return x <= 0.0 ? 0.0 : boost::math::gamma_p(g.alpha, x); },
          [&](const Poisson& p) {
            return x < 0.0 ? 0.0 : boost::math::cdf(poisson_distribution<double, P>(p.lambda), std::floor(x));
          },
          [&](const NegBinomial& nb) {
            return x < 0.0 ? 0.0
                           : boost::math::cdf(negative_binomial_distribution<double, P>(nb.beta, 1.0 - nb.c),
                                              std::floor(x));
          },
          [&](const MultiNormalIdentity&) -> double { throw DomainError("mvnormal: cdf is univariate only"); },
          [&](const StudentT& t) { return boost::math::cdf(students_t_distribution<double, P>(t.nu), x); },
      },
      d);
}

/// P(X > x), computed without cancellation.
inline double survival(const DistributionSpec& d, double x) {
  using namespace boost::math;
  using P = detail::boost_policy;
  return std::visit(
      detail::overloaded{
          [&](const Normal& n) {
            return boost::math::cdf(complement(normal_distribution<double, P>(n.mean, n.sd), x));
          },
          [&](const Laplace& l) {
            const double z = (x - l.mu) / l.alpha;
            return z < 0.0 ? 1.0 - 0.5 * std::exp(z) : 0.5 * std::exp(-z);
          },
          [&](const Uniform& u) { return x <= u.lo ? 1.0 : (x >= u.hi ? 0.0 : (u.hi - x) / (u.hi - u.lo)); },
          [&](const Pareto& p) { return x <= p.xm ? 1.0 : std::pow(p.xm / x, p.alpha); },
          [&](const Exponential& e) { return x <= 0.0 ? 1.0 : std::exp(-e.rate * x); },
          [&](const GammaDist& g) { return x <= 0.0 ? 1.0 : boost::math::gamma_q(g.alpha, x); },
          [&](const Poisson& p) {
            return x < 0.0 ? 1.0
                           : boost::math::cdf(complement(poisson_distribution<double, P>(p.lambda), std::floor(x)));
          },
          [&](const NegBinomial& nb) {
            return x < 0.0 ? 1.0
                           : boost::math::cdf(complement(
                                 negative_binomial_distribution<double, P>(nb.beta, 1.0 - nb.c), std::floor(x)));
          },
          [&](const StudentT& t) {
            return boost::math::cdf(complement(students_t_distribution<double, P>(t.nu), x));
          },
          [&](const auto&) { return 1.0 - cdf(d, x); },
      },
      d);
}

inline double pdf(const DistributionSpec& d, double x) {
  using namespace boost::math;
  using P = detail::boost_policy;
  return std::visit(
      detail::overloaded{
          [&](const Normal& n) { return boost::math::pdf(normal_distribution<double, P>(n.mean, n.sd), x); },
          [&](const Uniform& u) { return (x < u.lo || x > u.hi) ? 0.0 : 1.0 / (u.hi - u.lo); },
          [&](const Laplace& l) { return std::exp(-std::abs(x - l.mu) / l.alpha) / (2.0 * l.alpha); },
          [&](const Pareto& p) {
            return x < p.xm ? 0.0 : p.alpha / x * std::pow(p.xm / x, p.alpha);
          },
          [&](const Exponential& e) { return x < 0.0 ? 0.0 : e.rate * std::exp(-e.rate * x); },
          [&](const GammaDist& g) {
            return x <= 0.0 ? 0.0 : boost::math::gamma_p_derivative(g.alpha, x);
          },
          [&](const StudentT& t) { return boost::math::pdf(students_t_distribution<double, P>(t.nu), x); },
          [&](const auto&) -> double { throw DomainError(family_name(d) + ": no density"); },
      },
      d);
}

/// Probability mass at integer k for the discrete families.
inline double pmf(const DistributionSpec& d, double k) {
  using namespace boost::math;
  using P = detail::boost_policy;
  if (k < 0.0 || k != std::floor(k)) return 0.0;
  return std::visit(
      detail::overloaded{
          [&](const Bernoulli& b) { return k == 0.0 ? 1.0 - b.prob : (k == 1.0 ? b.prob : 0.0); },
          [&](const Poisson& p) { return boost::math::pdf(poisson_distribution<double, P>(p.lambda), k); },
          [&](const NegBinomial& nb) {
            return boost::math::pdf(negative_binomial_distribution<double, P>(nb.beta, 1.0 - nb.c), k);
          },
          [&](const auto&) -> double { throw DomainError(family_name(d) + ": no probability mass function"); },
      },
      d);
}

/// Quantile at u with complement ubar = 1 - u supplied separately so that the
/// upper tail keeps full relative precision.
inline double quantile(const DistributionSpec& d, double u, double ubar) {
  using namespace boost::math;
  using P = detail::boost_policy;
  const bool upper = u > 0.5;
  return std::visit(
      detail::overloaded{
          [&](const Bernoulli& b) { return ubar <= b.prob ? 1.0 : 0.0; },
          [&](const Normal& n) {
            const normal_distribution<double, P> nd(n.mean, n.sd);
            return upper ? boost::math::quantile(complement(nd, ubar)) : boost::math::quantile(nd, u);
          },
          [&](const Uniform& un) { return upper ? un.hi - ubar * (un.hi - un.lo) : un.lo + u * (un.hi - un.lo); },
          [&](const Laplace& l) { return u < 0.5 ? l.mu + l.alpha * std::log(2.0 * u) : l.mu - l.alpha * std::log(2.0 * ubar); },
          [&](const Pareto& p) { return p.xm * std::pow(ubar, -1.0 / p.alpha); },
          [&](const Exponential& e) { return upper ? -std::log(ubar) / e.rate : -std::log1p(-u) / e.rate; },
          [&](const GammaDist& g) {
            return upper ? boost::math::gamma_q_inv(g.alpha, ubar) : boost::math::gamma_p_inv(g.alpha, u);
          },
          [&](const Poisson& p) {
            const poisson_distribution<double, P> pd(p.lambda);
            return upper ? boost::math::quantile(complement(pd, ubar)) : boost::math::quantile(pd, u);
          },
          [&](const NegBinomial& nb) {
            const negative_binomial_distribution<double, P> nd(nb.beta, 1.0 - nb.c);
            return upper ? boost::math::quantile(complement(nd, ubar)) : boost::math::quantile(nd, u);
          },
          [&](const MultiNormalIdentity&) -> double { throw DomainError("mvnormal: quantile is univariate only"); },
          [&](const StudentT& t) {
            const students_t_distribution<double, P> td(t.nu);
            return upper ? -boost::math::quantile(td, ubar) : boost::math::quantile(td, u);
          },
      },
      d);
}

inline double quantile(const DistributionSpec& d, double u) { return quantile(d, u, 1.0 - u); }

/// Partial expectation L(x) = E[X 1{X <= x}].
inline double partial_expectation(const DistributionSpec& d, double x) {
  using namespace boost::math;
  using P = detail::boost_policy;
  return std::visit(
      detail::overloaded{
          [&](const Bernoulli& b) { return x < 1.0 ? 0.0 : b.prob; },
          [&](const Normal& n) {
            const double z = (x - n.mean) / n.sd;
            const auto sn = detail::std_normal();
            return n.mean * boost::math::cdf(sn, z) - n.sd * boost::math::pdf(sn, z);
          },
          [&](const Uniform& u) {
            const double c = std::min(std::max(x, u.lo), u.hi);
            return (c * c - u.lo * u.lo) / (2.0 * (u.hi - u.lo));
          },
          [&](const Laplace& l) {
            const double s = (x - l.mu) / l.alpha;
            return s <= 0.0 ? 0.5 * std::exp(s) * (x - l.alpha) : l.mu - 0.5 * std::exp(-s) * (x + l.alpha);
          },
          [&](const Pareto& p) {
            if (x <= p.xm) return 0.0;
            return p.alpha * p.xm / (p.alpha - 1.0) * -std::expm1((p.alpha - 1.0) * std::log(p.xm / x));
          },
          [&](const Exponential& e) {
            if (x <= 0.0) return 0.0;
            const double lx = e.rate * x;
            return -(std::expm1(-lx) + lx * std::exp(-lx)) / e.rate;
          },
          [&](const GammaDist& g) { return x <= 0.0 ? 0.0 : g.alpha * boost::math::gamma_p(g.alpha + 1.0, x); },
          [&](const Poisson& p) {
            if (x < 1.0) return 0.0;
            return p.lambda * boost::math::cdf(poisson_distribution<double, P>(p.lambda), std::floor(x) - 1.0);
          },
          [&](const NegBinomial& nb) {
            if (x < 1.0) return 0.0;
            const negative_binomial_distribution<double, P> shifted(nb.beta + 1.0, 1.0 - nb.c);
            return nb.beta * nb.c / (1.0 - nb.c) * boost::math::cdf(shifted, std::floor(x) - 1.0);
          },
          [&](const MultiNormalIdentity&) -> double { throw DomainError("mvnormal: univariate only"); },
          [&](const StudentT& t) {
            const double f = boost::math::pdf(students_t_distribution<double, P>(t.nu), x);
            return -(t.nu + x * x) / (t.nu - 1.0) * f;
          },
      },
      d);
}

/// E|x - X| = x(2F(x) - 1) + E X - 2 L(x).
inline double mean_abs_deviation_from(const DistributionSpec& d, double x) {
  return x * (cdf(d, x) - survival(d, x)) + mean(d) - 2.0 * partial_expectation(d, x);
}

/// Interior points of (0, 1) in probability space where the quantile
/// function is not smooth; quadrature splits there.
inline std::vector<double> quantile_breakpoints(const DistributionSpec& d) {
  if (std::holds_alternative<Laplace>(d)) return {0.5};
  return {};
}

/// Parses "k=v,k=v" parameter lists for a family name. Unknown keys and
/// malformed values are rejected.
inline DistributionSpec parse_distribution(std::string_view name, std::string_view params) {
  std::map<std::string, std::string> kv;
  std::size_t pos = 0;
  while (pos < params.size()) {
    std::size_t end = params.find(',', pos);
    if (end == std::string_view::npos) end = params.size();
    const std::string_view item = params.substr(pos, end - pos);
    pos = end + 1;
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw DomainError("parameter '" + std::string(item) + "' is not of the form key=value");
    kv[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
  }
  std::map<std::string, bool> used;
  const auto num = [&](const std::string& key, double def, bool required = false) {
    auto it = kv.find(key);
    if (it == kv.end()) {
      if (required) throw DomainError(std::string(name) + ": parameter '" + key + "' is required");
      return def;
    }
    used[key] = true;
    const std::string& s = it->second;
    std::size_t idx = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &idx);
    } catch (const std::exception&) {
      idx = 0;
    }
    if (idx != s.size() || s.empty() || !std::isfinite(v))
      throw DomainError(std::string(name) + ": parameter '" + key + "' is not a finite number");
    return v;
  };

  DistributionSpec d;
  const std::string n(name);
  if (n == "bernoulli") {
    d = Bernoulli{num("prob", 0.5, true)};
  } else if (n == "normal") {
    d = Normal{num("mean", 0.0), num("sd", 1.0)};
  } else if (n == "uniform") {
    d = Uniform{num("lo", 0.0), num("hi", 1.0)};
  } else if (n == "laplace") {
    d = Laplace{num("mu", 0.0), num("alpha", 1.0)};
  } else if (n == "pareto") {
    d = Pareto{num("alpha", 0.0, true), num("xm", 1.0)};
  } else if (n == "exponential") {
    d = Exponential{num("rate", 1.0)};
  } else if (n == "gamma") {
    d = GammaDist{num("alpha", 0.0, true)};
  } else if (n == "poisson") {
    d = Poisson{num("lambda", 0.0, true)};
  } else if (n == "negbinomial") {
    d = NegBinomial{num("c", 0.0, true), num("beta", 0.0, true)};
  } else if (n == "mvnormal") {
    const double dim = num("dim", 1.0);
    if (dim < 1.0 || dim != std::floor(dim) || dim > 1e6)
      throw DomainError("mvnormal: dim must be a positive integer");
    d = MultiNormalIdentity{std::vector<double>(static_cast<std::size_t>(dim), num("mean", 0.0))};
  } else if (n == "t" || n == "studentt") {
    d = StudentT{num("nu", 0.0, true)};
  } else if (n == "t5" || n == "t3") {
    d = StudentT{n == "t5" ? 5.0 : 3.0};
  } else {
    throw DomainError("unknown distribution '" + n +
                      "' (known: bernoulli, normal, uniform, laplace, pareto, exponential, gamma, "
                      "poisson, negbinomial, mvnormal, t)");
  }
  for (const auto& [key, value] : kv)
    if (!used.count(key)) throw DomainError(n + ": unknown parameter '" + key + "'");
  validate(d);
  return d;
}

/// Parameters as (name, value) pairs, for reports.
inline std::vector<std::pair<std::string, double>> parameters(const DistributionSpec& d) {
  return std::visit(detail::overloaded{
                        [](const Bernoulli& b) -> std::vector<std::pair<std::string, double>> { return {{"prob", b.prob}}; },
                        [](const Normal& n) -> std::vector<std::pair<std::string, double>> { return {{"mean", n.mean}, {"sd", n.sd}}; },
                        [](const Uniform& u) -> std::vector<std::pair<std::string, double>> { return {{"lo", u.lo}, {"hi", u.hi}}; },
                        [](const Laplace& l) -> std::vector<std::pair<std::string, double>> { return {{"mu", l.mu}, {"alpha", l.alpha}}; },
                        [](const Pareto& p) -> std::vector<std::pair<std::string, double>> { return {{"alpha", p.alpha}, {"xm", p.xm}}; },
                        [](const Exponential& e) -> std::vector<std::pair<std::string, double>> { return {{"rate", e.rate}}; },
                        [](const GammaDist& g) -> std::vector<std::pair<std::string, double>> { return {{"alpha", g.alpha}}; },
                        [](const Poisson& p) -> std::vector<std::pair<std::string, double>> { return {{"lambda", p.lambda}}; },
                        [](const NegBinomial& nb) -> std::vector<std::pair<std::string, double>> { return {{"c", nb.c}, {"beta", nb.beta}}; },
                        [](const MultiNormalIdentity& m) -> std::vector<std::pair<std::string, double>> {
                          return {{"dim", static_cast<double>(m.mean.size())}};
                        },
                        [](const StudentT& t) -> std::vector<std::pair<std::string, double>> { return {{"nu", t.nu}}; },
                    },
                    d);
}

}  // namespace dsd

#endif  // DSD_DISTRIBUTION_HPP
