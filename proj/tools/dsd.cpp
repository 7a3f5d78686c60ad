// dsd: distance standard deviation estimates, population values, efficiencies,
// simulations and quadratic-form matrices.
//
// Exit codes: 0 success, 2 usage or validation error, 3 I/O error, 1 other.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dsd/dsd.hpp"

namespace {

using json = nlohmann::ordered_json;

enum class Format { plain, csv, json };

/// Flat key/value record printed in one of the three formats.
class Record {
 public:
  void add(const std::string& key, double v) { fields_.emplace_back(key, std::isfinite(v) ? json(v) : json(nullptr)); }
  void add(const std::string& key, const std::string& v) { fields_.emplace_back(key, json(v)); }
  void add(const std::string& key, const char* v) { fields_.emplace_back(key, json(v)); }
  void add(const std::string& key, bool v) { fields_.emplace_back(key, json(v)); }
  void add(const std::string& key, std::size_t v) { fields_.emplace_back(key, json(v)); }
  void add(const std::string& key, std::uint64_t v, int) { fields_.emplace_back(key, json(v)); }

  void print(Format f, std::ostream& os) const {
    if (f == Format::json) {
      json j = json::object();
      for (const auto& [k, v] : fields_) j[k] = v;
      os << j.dump(2) << "\n";
      return;
    }
    if (f == Format::csv) os << "key,value\n";
    for (const auto& [k, v] : fields_) os << k << (f == Format::csv ? "," : " ") << text(v) << "\n";
  }

 private:
  static std::string text(const json& v) {
    if (v.is_null()) return "inf";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_float()) return dsd::format_number(v.get<double>());
    return v.dump();
  }
  std::vector<std::pair<std::string, json>> fields_;
};

struct Common {
  std::string format = "plain";
  bool verbose = false;

  Format fmt() const {
    if (format == "json") return Format::json;
    if (format == "csv") return Format::csv;
    return Format::plain;
  }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"plain", "csv", "json"}));
  cmd->add_flag("-v,--verbose", c.verbose, "Timing and progress on stderr");
}

struct Timer {
  bool on;
  const char* what;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  ~Timer() {
    if (!on) return;
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::fprintf(stderr, "%s: %.3f s\n", what, s);
  }
};

dsd::DistributionSpec resolve_distribution(const std::string& name, const std::string& params, double nu) {
  if (nu > 0.0) {
    if (name != "t" && name != "studentt")
      throw dsd::DomainError("--nu applies to the t distribution only");
    if (!params.empty()) throw dsd::DomainError("give either --nu or --params, not both");
    return dsd::parse_distribution(name, "nu=" + dsd::format_number(nu));
  }
  return dsd::parse_distribution(name, params);
}

void add_parameters(Record& r, const dsd::DistributionSpec& d) {
  r.add("distribution", dsd::family_name(d));
  for (const auto& [k, v] : dsd::parameters(d)) r.add("param_" + k, v);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// ---------------------------------------------------------------------------

struct EstimateArgs {
  Common common;
  std::string input;
  std::string estimator = "all";
  std::string delimiter = ",";
};

int run_estimate(const EstimateArgs& a) {
  Timer timer{a.common.verbose, "estimate"};
  if (a.delimiter.size() != 1) throw dsd::DomainError("--delimiter must be a single character");
  dsd::Sample s = [&] {
    if (a.input == "-") {
      const std::string text{std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
      return dsd::parse_csv(text, a.delimiter[0]);
    }
    return dsd::load_csv(a.input, a.delimiter[0]);
  }();
  const bool all = a.estimator == "all";
  const bool want_v = all || a.estimator == "vstat";
  const bool want_hat = all || a.estimator == "unbiased";
  const bool want_u = a.estimator == "ustat" || (all && s.p() == 1);
  if (a.estimator == "ustat" && s.p() != 1)
    throw dsd::DomainError("ustat requires univariate data (found " + std::to_string(s.p()) + " columns)");
  if (a.estimator == "unbiased" && s.n() < 3) throw dsd::DomainError("unbiased estimator requires n >= 3");
  if (a.estimator == "ustat" && s.n() < 2) throw dsd::DomainError("ustat requires n >= 2");

  const auto b = dsd::breakdown(s);
  Record r;
  r.add("n", b.n);
  r.add("p", b.p);
  if (want_v) {
    r.add("v_sq", b.vSq);
    r.add("v", std::sqrt(b.vSq));
    r.add("t1n", b.t1n);
    r.add("t2n", b.t2n);
    r.add("t3n", b.t3n);
    r.add("wn", b.wn);
    r.add("delta_n", b.deltaN);
  }
  if (b.deltaHatN) r.add("delta_hat", *b.deltaHatN);
  if (s.p() == 1 && s.n() >= 2) r.add("sigma_sq_hat", dsd::sample_variance(s, dsd::VarianceNorm::over_n_minus_1));
  if (want_hat && b.vSqHat) {
    const auto sd = dsd::distance_sd(b, dsd::DsdVariant::unbiased_components);
    r.add("w_hat", *b.wHat);
    r.add("v_sq_hat", *b.vSqHat);
    r.add("v_hat", sd.value);
    r.add("v_hat_clamped", sd.clamped);
  }
  if (want_u && s.n() >= 2) {
    const double u2 = dsd::u_stat_quadform(s);
    r.add("u_sq", u2);
    r.add("u", std::sqrt(std::max(0.0, u2)));
    if (s.n() >= 4) r.add("u_sq_exact", dsd::u_stat_exact(s));
  }
  r.print(a.common.fmt(), std::cout);
  return 0;
}

// ---------------------------------------------------------------------------

struct ClosedFormArgs {
  Common common;
  std::string dist;
  std::string params;
  double nu = 0.0;
  bool numeric = false;
};

int run_closed_form(const ClosedFormArgs& a) {
  Timer timer{a.common.verbose, "closed-form"};
  const auto d = resolve_distribution(a.dist, a.params, a.nu);
  dsd::validate(d);
  const auto v = a.numeric ? dsd::population_dvar_numeric(d) : dsd::population_dvar_detailed(d);
  Record r;
  add_parameters(r, d);
  r.add("v_sq", v.value);
  r.add("v", std::sqrt(v.value));
  r.add("method", dsd::method_name(v.method));
  r.add("error_bound", v.error_bound);
  r.add("delta", dsd::population_gini(d));
  const double s2 = dsd::population_variance(d);
  r.add("sigma_sq", s2);
  if (dsd::dimension(d) == 1 && std::isfinite(s2)) r.add("asv_gini", dsd::asv_gini(d));
  r.print(a.common.fmt(), std::cout);
  return 0;
}

// ---------------------------------------------------------------------------

struct AreArgs {
  Common common;
  std::string dist;
  std::string params;
  double nu = 0.0;
  std::size_t draws = 10000000;
  std::uint64_t seed = 1;
};

int run_are(const AreArgs& a) {
  Timer timer{a.common.verbose, "are"};
  const auto d = resolve_distribution(a.dist, a.params, a.nu);
  dsd::validate(d);
  dsd::mle_standardized_asv(d);  // rejects unsupported reference families early
  dsd::AsymptoticOptions opt;
  opt.draws = a.draws;
  opt.seed = a.seed;
  const auto method =
      dsd::has_finite_fourth_moment(d) ? dsd::AsymptoticMethod::quadrature : dsd::AsymptoticMethod::monte_carlo;
  const auto rep = dsd::asymptotic_report(d, method, opt);

  Record r;
  add_parameters(r, d);
  for (auto e : {dsd::AreEstimator::dvar_sd, dsd::AreEstimator::sd, dsd::AreEstimator::mean_dev,
                 dsd::AreEstimator::gini}) {
    const auto v = dsd::are(e, d, &rep, opt);
    std::string key = dsd::are_estimator_name(e);
    for (auto& ch : key)
      if (ch == '-') ch = '_';
    r.add(key, v.value);
    r.add(key + "_method", v.method);
    if (v.infinite_asv) r.add(key + "_infinite_asv", true);
  }
  const auto rj = dsd::report_json(rep);
  for (const auto& [k, v] : rj.items()) {
    if (k == "distribution") continue;
    if (v.is_number_float()) r.add(k, v.get<double>());
    else if (v.is_boolean()) r.add(k, v.get<bool>());
    else if (v.is_number_unsigned()) r.add(k, v.get<std::uint64_t>(), 0);
    else if (v.is_number_integer()) r.add(k, static_cast<double>(v.get<long long>()));
    else if (v.is_string()) r.add(k, v.get<std::string>());
  }
  if (!rep.moment_condition) {
    std::fprintf(stderr, "note: %s has an infinite fourth moment; the moment condition of the limit theorem does not hold\n",
                 rep.distribution.c_str());
    for (const auto& p : rep.finite_n)
      std::fprintf(stderr, "  simulated n*Var(V_n) at n=%zu: %.4f (se %.4f)\n", p.n, p.n_variance, p.se);
  }
  r.print(a.common.fmt(), std::cout);
  return 0;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  Common common;
  std::string dist;
  std::string params;
  double nu = 0.0;
  std::string sizes = "5,10,50,500";
  long long reps = 10000;
  std::uint64_t seed = 1;
  std::string estimators = "vstat,unbiased-components";
  std::string out;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw dsd::IoError("cannot open '" + path + "' for writing");
  f << text;
  f.flush();
  if (!f) throw dsd::IoError("error writing '" + path + "'");
}

int run_simulate(const SimulateArgs& a) {
  Timer timer{a.common.verbose, "simulate"};
  if (a.reps < 1) throw dsd::DomainError("--reps must be >= 1");
  dsd::SimulationPlan plan;
  plan.distribution = resolve_distribution(a.dist, a.params, a.nu);
  plan.replications = static_cast<std::size_t>(a.reps);
  plan.seed = a.seed;
  plan.sample_sizes.clear();
  for (const auto& s : split_list(a.sizes)) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != s.size() || v < 2) throw dsd::DomainError("invalid sample size '" + s + "' (integers >= 2)");
    plan.sample_sizes.push_back(static_cast<std::size_t>(v));
  }
  plan.estimators.clear();
  for (const auto& e : split_list(a.estimators)) plan.estimators.push_back(dsd::parse_estimator(e));
  dsd::validate(plan);

  std::fprintf(stderr, "seed %llu\n", static_cast<unsigned long long>(plan.seed));
  const auto res = dsd::run_plan(plan);
  const std::string csv = dsd::simulation_csv(res);
  const std::string js = dsd::simulation_json(res).dump(2) + "\n";
  if (!a.out.empty()) {
    write_file(a.out + ".csv", csv);
    write_file(a.out + ".json", js);
    std::fprintf(stderr, "wrote %s.csv and %s.json\n", a.out.c_str(), a.out.c_str());
    return 0;
  }
  switch (a.common.fmt()) {
    case Format::json: std::cout << js; break;
    case Format::csv: std::cout << csv; break;
    case Format::plain: {
      std::printf("%-6s %-20s %12s %12s %12s %12s\n", "n", "estimator", "mean", "se_mean", "n_var", "se_n_var");
      for (const auto& c : res.cells)
        std::printf("%-6zu %-20s %12.6f %12.6f %12.6f %12.6f\n", c.n, dsd::estimator_name(c.estimator), c.mean,
                    c.se_mean, c.n_variance, c.se_n_variance);
      break;
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct MatricesArgs {
  Common common;
  long long n = 0;
  std::string kinds = "V,G,S";
  std::string out = ".";
};

int run_matrices(const MatricesArgs& a) {
  Timer timer{a.common.verbose, "matrices"};
  if (a.n < 2) throw dsd::DomainError("--n must be >= 2");
  std::vector<dsd::QuadFormKind> kinds;
  for (const auto& k : split_list(a.kinds)) kinds.push_back(dsd::parse_kind(k));
  if (kinds.empty()) throw dsd::DomainError("--kinds must name at least one of V, G, S");
  std::error_code ec;
  std::filesystem::create_directories(a.out, ec);
  if (!std::filesystem::is_directory(a.out)) throw dsd::IoError("cannot create output directory '" + a.out + "'");
  Record r;
  r.add("n", static_cast<std::size_t>(a.n));
  for (auto k : kinds) {
    const auto m = dsd::quadform_matrix(k, static_cast<std::size_t>(a.n));
    const std::string path =
        (std::filesystem::path(a.out) / ("matrix_" + std::string(1, dsd::kind_letter(k)) + "_n" +
                                         std::to_string(a.n) + ".csv"))
            .string();
    dsd::export_matrix_heatmap(m, path);
    r.add(std::string("file_") + dsd::kind_letter(k), path);
  }
  r.print(a.common.fmt(), std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distance standard deviation: estimates, population values, efficiencies and simulations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "dsd 0.1.0");

  EstimateArgs est;
  auto* c_est = app.add_subcommand("estimate", "Estimate dispersion measures from a CSV file");
  c_est->add_option("input", est.input, "CSV file, or - for stdin")->required();
  c_est->add_option("--estimator", est.estimator, "Which estimator")
      ->check(CLI::IsMember({"vstat", "unbiased", "ustat", "all"}));
  c_est->add_option("--delimiter", est.delimiter, "Field delimiter");
  add_common(c_est, est.common);

  ClosedFormArgs cf;
  auto* c_cf = app.add_subcommand("closed-form", "Population values for a parametric family");
  c_cf->add_option("--dist", cf.dist, "Family name")->required();
  c_cf->add_option("--params", cf.params, "Parameters as k=v,k=v");
  c_cf->add_option("--nu", cf.nu, "Degrees of freedom for t");
  c_cf->add_flag("--numeric", cf.numeric, "Use the probability-space quadrature");
  add_common(c_cf, cf.common);

  AreArgs ar;
  auto* c_are = app.add_subcommand("are", "Asymptotic relative efficiencies against the scale MLE");
  c_are->add_option("--dist", ar.dist, "normal, laplace, t, t5 or t3")->required();
  c_are->add_option("--params", ar.params, "Parameters as k=v,k=v");
  c_are->add_option("--nu", ar.nu, "Degrees of freedom for t");
  c_are->add_option("--draws", ar.draws, "Monte Carlo draws when quadrature is not permitted");
  c_are->add_option("--seed", ar.seed, "Monte Carlo seed");
  add_common(c_are, ar.common);

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Finite-sample simulation of the estimators");
  c_sim->add_option("--dist", sim.dist, "Family name")->required();
  c_sim->add_option("--params", sim.params, "Parameters as k=v,k=v");
  c_sim->add_option("--nu", sim.nu, "Degrees of freedom for t");
  c_sim->add_option("--n", sim.sizes, "Comma-separated sample sizes");
  c_sim->add_option("--reps", sim.reps, "Replications per sample size");
  c_sim->add_option("--seed", sim.seed, "Seed");
  c_sim->add_option("--estimators", sim.estimators,
                    "Comma-separated: vstat, unbiased-components, ustat, gini, sd, mean-dev");
  c_sim->add_option("--out", sim.out, "Write PREFIX.csv and PREFIX.json instead of stdout");
  add_common(c_sim, sim.common);

  MatricesArgs mat;
  auto* c_mat = app.add_subcommand("matrices", "Export the quadratic-form matrices as heatmap CSVs");
  c_mat->add_option("--n", mat.n, "Sample size")->required();
  c_mat->add_option("--kinds", mat.kinds, "Comma-separated subset of V,G,S");
  c_mat->add_option("--out", mat.out, "Output directory");
  add_common(c_mat, mat.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*c_est) return run_estimate(est);
    if (*c_cf) return run_closed_form(cf);
    if (*c_are) return run_are(ar);
    if (*c_sim) return run_simulate(sim);
    if (*c_mat) return run_matrices(mat);
  } catch (const dsd::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const dsd::DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const dsd::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const dsd::ConvergenceError& e) {
    std::fprintf(stderr, "error: %s (partial value %.17g, bound %.3g)\n", e.what(), e.partial_value(),
                 e.error_bound());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
