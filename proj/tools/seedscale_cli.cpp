// Command-line front end: builds the model matrices, runs the scaling
// pipeline and the Monte Carlo checks, and writes CSV reports with
// reproducibility metadata.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seedscale/csv.hpp"
#include "seedscale/diffusion.hpp"
#include "seedscale/duality.hpp"
#include "seedscale/expm.hpp"
#include "seedscale/rng.hpp"
#include "seedscale/seedbank.hpp"
#include "seedscale/timescale.hpp"
#include "seedscale/tolerances.hpp"

namespace {

using namespace seedscale;

constexpr const char* kBuildId = "seedscale " SEEDSCALE_VERSION;

struct Output {
  std::ofstream file;
  std::ostream* stream = nullptr;
  std::string path;

  explicit Output(const std::string& out_path) : path(out_path) {
    if (out_path == "-") {
      stream = &std::cout;
      return;
    }
    file.open(out_path, std::ios::binary);  // binary keeps LF endings everywhere
    if (!file) throw std::runtime_error("cannot open output file: " + out_path);
    stream = &file;
  }
  std::ostream& os() { return *stream; }
};

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += format_real(v[i]);
  }
  return s;
}

void common_metadata(CsvWriter& csv, const std::string& command,
                     std::uint64_t seed) {
  csv.metadata("command", command);
  csv.metadata("build", kBuildId);
  csv.metadata("normal_method", RngStream::kNormalMethod);
  csv.metadata("seed", seed);
}

void require(bool ok, const std::string& message) {
  if (!ok) throw CLI::ValidationError(message);
}

// ---- rates ----------------------------------------------------------------

struct RatesArgs {
  int n0 = 3, m0 = 2;
  double c = 0.5, K = 1.0, alpha_prime = 0.0;
  std::string model = "seedbank";
  std::string out = "rates.csv";
};

int run_rates(const RatesArgs& a) {
  require(a.c > 0.0, "c must be positive");
  require(a.K > 0.0, "K must be positive");
  require(a.n0 >= 0 && a.m0 >= 0 && a.n0 + a.m0 >= 1,
          "n0, m0 must be nonnegative with n0+m0 >= 1");
  const InitialBlocks init{a.n0, a.m0};
  RateMatrix q =
      a.model == "two-island"
          ? structured_q({a.c, a.K, a.alpha_prime}, init)
          : blockcounting_q({a.c, a.K, {}}, init);
  Output out(a.out);
  CsvWriter csv(out.os());
  common_metadata(csv, "rates", 0);
  csv.metadata("model", a.model);
  csv.metadata("n0", static_cast<std::uint64_t>(a.n0));
  csv.metadata("m0", static_cast<std::uint64_t>(a.m0));
  csv.metadata("c", a.c);
  csv.metadata("K", a.K);
  if (a.model == "two-island") csv.metadata("alpha_prime", a.alpha_prime);
  dump_matrix_csv(out.os(), q.space(), q.entries());
  std::cout << "rates: wrote " << q.size() << "x" << q.size()
            << " generator to " << out.path << "\n";
  return 0;
}

// ---- limit-chain ----------------------------------------------------------

struct LimitChainArgs {
  int n0 = 2, m0 = 1;
  double K = 1.0;
  std::vector<double> t_list{1.0};
  std::string model = "seedbank";
  std::string out = "limit_chain.csv";
};

int run_limit_chain(const LimitChainArgs& a) {
  require(a.K > 0.0, "K must be positive");
  require(a.n0 >= 0 && a.m0 >= 0 && a.n0 + a.m0 >= 1,
          "n0, m0 must be nonnegative with n0+m0 >= 1");
  for (double t : a.t_list) require(t >= 0.0, "t must be nonnegative");
  const InitialBlocks init{a.n0, a.m0};
  DegenerateSemigroup sg = a.model == "two-island"
                               ? DegenerateSemigroup::imbalanced(init, a.K)
                               : DegenerateSemigroup::ancient(init, a.K);
  Output out(a.out);
  CsvWriter csv(out.os());
  common_metadata(csv, "limit-chain", 0);
  csv.metadata("model", a.model);
  csv.metadata("n0", static_cast<std::uint64_t>(a.n0));
  csv.metadata("m0", static_cast<std::uint64_t>(a.m0));
  csv.metadata("K", a.K);
  csv.metadata("t_list", join(a.t_list));
  std::vector<std::string> columns{"t", "from"};
  for (std::size_t j = 0; j < sg.space().size(); ++j) {
    columns.push_back(sg.space().label(j));
  }
  csv.header(columns);
  for (double t : a.t_list) {
    TransitionMatrix pi = ancient_semigroup(sg, t);
    for (std::size_t i = 0; i < pi.size(); ++i) {
      auto row = csv.row();
      row.field(t).field(pi.space().label(i));
      for (std::size_t j = 0; j < pi.size(); ++j) row.field(pi(i, j));
      row.done();
    }
  }
  std::cout << "limit-chain: wrote Pi(t) rows to " << out.path << "\n";
  return 0;
}

// ---- timescale ------------------------------------------------------------

struct TimescaleArgs {
  int n0 = 3, m0 = 2;
  double K = 1.0;
  std::vector<double> c_list{0.2, 0.1, 0.05, 0.02};
  std::vector<double> t_list{0.5, 1.0};
  std::string model = "seedbank";
  std::string out = "timescale.csv";
};

int run_timescale(const TimescaleArgs& a) {
  require(a.K > 0.0, "K must be positive");
  require(!a.c_list.empty(), "c-list must be nonempty");
  for (double c : a.c_list) require(c > 0.0 && c <= 1.0, "c must lie in (0,1]");
  const InitialBlocks init{a.n0, a.m0};
  const bool imbalanced = a.model == "two-island";
  auto decompose = [&](double c) {
    return imbalanced ? prelimit_decomposition_imbalanced(c, a.K, init)
                      : prelimit_decomposition(c, a.K, init);
  };
  QFamily family = [&](double c) {
    return imbalanced ? structured_q({c, a.K, c}, init)
                      : blockcounting_q({c, a.K, {}}, init);
  };
  ScalingSequence scaling = ScalingSequence::ancient(a.c_list);

  StepConditionReport step = check_step_condition(family, scaling);

  const double c_min = a.c_list.back();
  PrelimitDecomposition dec_min = decompose(c_min);
  ProjectionResult projection =
      detect_projection(dec_min.a_kappa, dec_min.a_scale, {1.0, 2.0, 4.0});

  std::vector<std::pair<double, GeneralMatrix>> b_family;
  for (double c : a.c_list) b_family.emplace_back(c, decompose(c).b_kappa);
  GExtraction extraction = extract_g(projection.p_hat, b_family);

  GeneralMatrix reference = imbalanced ? imbalanced_ghat(init, a.K)
                                       : ancient_g(init, a.K);
  const double g_error = matrix_norm(Eigen::MatrixXd(
      extraction.g_hat.entries() - reference.entries()));
  const double g_budget = 5.0 * c_min;

  DiscretizationReport discretization =
      verify_discretization_lemma(family, scaling, a.t_list, {a.n0, a.m0});

  const bool pass = step.verdict && projection.max_rounding_error < 0.05 &&
                    extraction.limit_supported && g_error < g_budget &&
                    discretization.all_within_bound;

  Output out(a.out);
  CsvWriter csv(out.os());
  common_metadata(csv, "timescale", 0);
  csv.metadata("model", a.model);
  csv.metadata("n0", static_cast<std::uint64_t>(a.n0));
  csv.metadata("m0", static_cast<std::uint64_t>(a.m0));
  csv.metadata("K", a.K);
  csv.metadata("c_list", join(a.c_list));
  csv.metadata("t_list", join(a.t_list));
  csv.metadata("projection_rounding_error", projection.max_rounding_error);
  csv.metadata("g_error", g_error);
  csv.metadata("g_budget", g_budget);
  csv.metadata("verdict", pass ? "pass" : "fail");
  csv.header({"record", "c", "t", "value", "bound"});
  for (const auto& r : step.records) {
    csv.row().field("step_ratio").field(r.c_kappa).field(0.0).field(r.ratio).field(0.1).done();
  }
  for (const auto& [c, residual] : projection.residuals) {
    csv.row().field("projection_residual").field(c_min).field(c).field(residual).field(0.0).done();
  }
  for (const auto& [c, residual] : extraction.pbp_residuals) {
    csv.row().field("pbp_residual").field(c).field(0.0).field(residual).field(0.0).done();
  }
  for (const auto& r : discretization.records) {
    csv.row().field("discretization_tv").field(r.c_kappa).field(r.t).field(r.tv).field(r.bound).done();
  }
  std::cout << "timescale: step condition " << (step.verdict ? "ok" : "FAIL")
            << ", projection rounding " << projection.max_rounding_error
            << ", |G_hat - G| = " << g_error << " (budget " << g_budget
            << "), discretization "
            << (discretization.all_within_bound ? "ok" : "FAIL") << "\n"
            << "timescale: " << (pass ? "pass" : "FAIL") << ", report in "
            << out.path << "\n";
  return pass ? 0 : 1;
}

// ---- simulate -------------------------------------------------------------

struct SimulateArgs {
  std::string model = "seedbank";  // seedbank | limit | two-island
  double c = 1.0, K = 1.0, h = 1e-3;
  double x0 = 0.5, y0 = 0.5;
  std::vector<double> t_list{0.25, 0.5, 0.75, 1.0};
  std::uint64_t replicates = 10000, seed = 42;
  std::string out = "simulate.csv";
};

int run_simulate(const SimulateArgs& a) {
  require(a.c > 0.0, "c must be positive");
  require(a.K > 0.0, "K must be positive");
  require(a.h > 0.0, "h must be positive");
  require(a.replicates >= 1, "replicates must be >= 1");
  require(a.x0 >= 0.0 && a.x0 <= 1.0 && a.y0 >= 0.0 && a.y0 <= 1.0,
          "x0 and y0 must lie in [0,1]");
  require(!a.t_list.empty(), "t-list must be nonempty");
  if (a.model != "seedbank") {
    require(a.x0 == 0.0 || a.x0 == 1.0, "x0 must be 0 or 1 for limit models");
  }

  EmConfig config;
  config.h = a.h;
  config.horizon = *std::max_element(a.t_list.begin(), a.t_list.end());
  config.output_grid = a.t_list;
  config.validate();

  Output out(a.out);
  CsvWriter csv(out.os());
  common_metadata(csv, "simulate", a.seed);
  csv.metadata("model", a.model);
  csv.metadata("c", a.c);
  csv.metadata("K", a.K);
  csv.metadata("h", a.h);
  csv.metadata("x0", a.x0);
  csv.metadata("y0", a.y0);
  csv.metadata("t_list", join(a.t_list));
  csv.metadata("replicates", a.replicates);
  csv.metadata("scheme", a.model == "seedbank" ? "euler-maruyama"
                         : a.model == "limit"  ? "exact-jump"
                                               : "hybrid-thinning");
  csv.header({"replicate", "t", "x", "y"});
  for (std::uint64_t r = 0; r < a.replicates; ++r) {
    RngStream rng(a.seed, r);
    if (a.model == "seedbank") {
      Trajectory traj = simulate_seedbank({a.x0, a.y0}, a.c, a.K, config, rng);
      for (std::size_t i = 0; i < traj.times.size(); ++i) {
        csv.row().field(r).field(traj.times[i]).field(traj.states[i].x)
            .field(traj.states[i].y).done();
      }
    } else if (a.model == "limit") {
      JumpTrajectory traj = sample_limit_jump(
          {static_cast<int>(a.x0), a.y0}, a.K, config.horizon, rng);
      for (double t : a.t_list) {
        JumpState s = traj.state_at(t);
        csv.row().field(r).field(t).field(static_cast<double>(s.x)).field(s.y).done();
      }
    } else {
      HybridTrajectory traj = sample_two_island_limit(
          {static_cast<int>(a.x0), a.y0}, a.K, config, rng);
      for (std::size_t i = 0; i < traj.times.size(); ++i) {
        csv.row().field(r).field(traj.times[i])
            .field(static_cast<double>(traj.x[i])).field(traj.y[i]).done();
      }
    }
  }
  std::cout << "simulate: wrote " << a.replicates << " trajectories to "
            << out.path << "\n";
  return 0;
}

// ---- duality --------------------------------------------------------------

struct DualityArgs {
  std::string model = "seedbank";  // seedbank | limit
  double c = 1.0, K = 1.0, h = 1e-3, bias = 5e-3;
  std::vector<double> t_list{1.0};
  std::uint64_t replicates = 10000, seed = 42;
  std::string out = "duality.csv";
};

void write_duality_csv(Output& out, const DualityArgs& a,
                       const DualityReport& report) {
  CsvWriter csv(out.os());
  common_metadata(csv, "duality", a.seed);
  csv.metadata("model", a.model);
  csv.metadata("c", a.c);
  csv.metadata("K", a.K);
  csv.metadata("h", a.h);
  csv.metadata("bias_allowance", report.bias_allowance);
  csv.metadata("t_list", join(a.t_list));
  csv.metadata("replicates", a.replicates);
  csv.metadata("verdict", report.all_pass ? "pass" : "fail");
  csv.header({"n", "m", "x", "y", "t", "chain_exact", "mc_mean", "mc_sigma",
              "pass"});
  for (const auto& cell : report.cells) {
    csv.row().field(static_cast<std::int64_t>(cell.n))
        .field(static_cast<std::int64_t>(cell.m)).field(cell.x).field(cell.y)
        .field(cell.t).field(cell.chain_exact).field(cell.diffusion_mc_mean)
        .field(cell.mc_sigma).field(std::string(cell.pass ? "1" : "0")).done();
  }
}

int run_duality(const DualityArgs& a) {
  require(a.c > 0.0, "c must be positive");
  require(a.K > 0.0, "K must be positive");
  require(a.h > 0.0, "h must be positive");
  require(a.replicates >= 100, "replicates must be >= 100");
  for (double t : a.t_list) require(t > 0.0, "t must be positive");

  MomentGrid grid;
  grid.times = a.t_list;
  std::sort(grid.times.begin(), grid.times.end());
  DualityReport report;
  if (a.model == "limit") {
    for (int n = 0; n <= 1; ++n) {
      for (int m = 0; m <= 2; ++m) grid.pairs.emplace_back(n, m);
    }
    grid.points = {{0.0, 0.7}, {1.0, 0.3}};
    report = verify_limit_duality(a.K, grid, a.replicates, a.seed);
  } else {
    for (int n = 0; n <= 2; ++n) {
      for (int m = 0; m <= 2; ++m) grid.pairs.emplace_back(n, m);
    }
    grid.points = {{0.5, 0.5}, {0.3, 0.9}};
    RateMatrix q = blockcounting_q({a.c, a.K, {}}, {2, 2});
    report = verify_prelimit_duality(q, a.c, a.K, grid, a.h, a.replicates,
                                     a.seed, a.bias);
  }
  Output out(a.out);
  write_duality_csv(out, a, report);
  std::size_t failed = 0;
  for (const auto& cell : report.cells) failed += cell.pass ? 0 : 1;
  std::cout << "duality (" << a.model << "): " << report.cells.size()
            << " cells, " << failed << " failed -> "
            << (report.all_pass ? "pass" : "FAIL") << ", report in "
            << out.path << "\n";
  return report.all_pass ? 0 : 1;
}

// ---- converge -------------------------------------------------------------

struct ConvergeArgs {
  int n0 = 3, m0 = 2;
  double K = 1.0;
  std::vector<double> c_list{0.2, 0.1, 0.05, 0.02};
  std::vector<double> t_list{0.5, 1.0, 2.0};
  std::string out = "converge.csv";
};

int run_converge(const ConvergeArgs& a) {
  require(a.K > 0.0, "K must be positive");
  ConvergenceReport report =
      chain_convergence_tv(a.c_list, a.K, {a.n0, a.m0}, a.t_list);
  const bool pass = report.marginal_monotone && report.two_time_monotone &&
                    report.final_tv < 0.05;
  Output out(a.out);
  CsvWriter csv(out.os());
  common_metadata(csv, "converge", 0);
  csv.metadata("n0", static_cast<std::uint64_t>(a.n0));
  csv.metadata("m0", static_cast<std::uint64_t>(a.m0));
  csv.metadata("K", a.K);
  csv.metadata("c_list", join(a.c_list));
  csv.metadata("t_list", join(a.t_list));
  csv.metadata("final_tv", report.final_tv);
  csv.metadata("verdict", pass ? "pass" : "fail");
  csv.header({"kind", "c", "t", "tv"});
  for (const auto& r : report.records) {
    csv.row().field("marginal").field(r.c).field(r.t).field(r.tv).done();
  }
  for (const auto& r : report.two_time) {
    csv.row().field("two_time").field(r.c).field(r.t).field(r.tv).done();
  }
  std::cout << "converge: marginal TV "
            << (report.marginal_monotone ? "decreasing" : "NOT decreasing")
            << ", two-time TV "
            << (report.two_time_monotone ? "decreasing" : "NOT decreasing")
            << ", final TV " << report.final_tv << " -> "
            << (pass ? "pass" : "FAIL") << ", report in " << out.path << "\n";
  return pass ? 0 : 1;
}

// ---- spark ----------------------------------------------------------------

struct SparkArgs {
  double K = 1.0, horizon = 1.0;
  std::vector<double> c_list{0.2, 0.1, 0.05};
  std::uint64_t replicates = 10000, seed = 42;
  std::string out = "spark.csv";
};

int run_spark(const SparkArgs& a) {
  require(a.K > 0.0, "K must be positive");
  require(a.horizon > 0.0, "horizon must be positive");
  require(a.replicates >= 1, "replicates must be >= 1");
  std::vector<SparkReport> reports;
  for (double c : a.c_list) {
    require(c > 0.0, "c must be positive");
    reports.push_back(spark_statistic(c, a.K, a.horizon, a.replicates, a.seed));
  }
  bool occupation_decreasing = true;
  for (std::size_t i = 1; i < reports.size(); ++i) {
    if (!(reports[i].occupation_fraction < reports[i - 1].occupation_fraction)) {
      occupation_decreasing = false;
    }
  }
  double min_exc = reports.front().excursions_per_path;
  double max_exc = min_exc;
  for (const auto& r : reports) {
    min_exc = std::min(min_exc, r.excursions_per_path);
    max_exc = std::max(max_exc, r.excursions_per_path);
  }
  const bool excursions_stable = min_exc > 0.0 && max_exc <= 2.0 * min_exc;
  const bool pass = occupation_decreasing && excursions_stable;

  Output out(a.out);
  CsvWriter csv(out.os());
  common_metadata(csv, "spark", a.seed);
  csv.metadata("K", a.K);
  csv.metadata("horizon", a.horizon);
  csv.metadata("c_list", join(a.c_list));
  csv.metadata("replicates", a.replicates);
  csv.metadata("verdict", pass ? "pass" : "fail");
  csv.header({"c", "occupation_fraction", "excursions_per_path"});
  for (const auto& r : reports) {
    csv.row().field(r.c).field(r.occupation_fraction)
        .field(r.excursions_per_path).done();
  }
  std::cout << "spark: occupation fraction "
            << (occupation_decreasing ? "decreasing" : "NOT decreasing")
            << ", excursions per path in [" << min_exc << ", " << max_exc
            << "] -> " << (pass ? "pass" : "FAIL") << ", report in "
            << out.path << "\n";
  return pass ? 0 : 1;
}

// Flat key=value configuration files. Values act as defaults: they are
// applied before CLI11 parses the command line, so explicit flags override
// them. Unknown keys are a usage error.
using Setter = std::function<void(const std::string&)>;
using ConfigTable = std::map<std::string, Setter>;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<double> parse_list(const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string token;
  while (std::getline(ss, token, ',')) out.push_back(std::stod(trim(token)));
  return out;
}

Setter bind(double& target) {
  return [&target](const std::string& v) { target = std::stod(v); };
}
Setter bind(int& target) {
  return [&target](const std::string& v) { target = std::stoi(v); };
}
Setter bind(std::uint64_t& target) {
  return [&target](const std::string& v) { target = std::stoull(v); };
}
Setter bind(std::string& target) {
  return [&target](const std::string& v) { target = v; };
}
Setter bind(std::vector<double>& target) {
  return [&target](const std::string& v) { target = parse_list(v); };
}

void apply_config_file(const std::string& path, const ConfigTable& table) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("cannot read config file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError("config line is not key=value: " + stripped);
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    auto it = table.find(key);
    if (it == table.end()) {
      throw CLI::ValidationError("unknown config key: " + key);
    }
    try {
      it->second(value);
    } catch (const std::exception&) {
      throw CLI::ValidationError("bad value for config key " + key + ": " + value);
    }
  }
}

// The --config argument has to be found before the main parse so its values
// can serve as defaults.
std::string find_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seed bank coalescent scaling-limit toolkit"};
  app.require_subcommand(1);
  int workers = 1;  // accepted for interface stability; results are
                    // worker-count independent by construction
  app.add_option("--workers", workers, "worker hint (deterministic regardless)");

  std::string config_path;
  auto add_config = [&config_path](CLI::App* sub) {
    sub->add_option("--config", config_path, "flat key=value configuration file");
  };

  RatesArgs rates;
  auto* sub_rates = app.add_subcommand("rates", "dump the block-counting generator");
  add_config(sub_rates);
  sub_rates->add_option("--n0", rates.n0);
  sub_rates->add_option("--m0", rates.m0);
  sub_rates->add_option("--c", rates.c);
  sub_rates->add_option("--K", rates.K);
  sub_rates->add_option("--alpha-prime", rates.alpha_prime);
  sub_rates->add_option("--model", rates.model)
      ->check(CLI::IsMember({"seedbank", "two-island"}));
  sub_rates->add_option("--out", rates.out);

  LimitChainArgs limit_chain;
  auto* sub_limit = app.add_subcommand("limit-chain", "evaluate the limit semigroup");
  add_config(sub_limit);
  sub_limit->add_option("--n0", limit_chain.n0);
  sub_limit->add_option("--m0", limit_chain.m0);
  sub_limit->add_option("--K", limit_chain.K);
  sub_limit->add_option("--t-list", limit_chain.t_list)->delimiter(',');
  sub_limit->add_option("--model", limit_chain.model)
      ->check(CLI::IsMember({"seedbank", "two-island"}));
  sub_limit->add_option("--out", limit_chain.out);

  TimescaleArgs timescale;
  auto* sub_timescale = app.add_subcommand(
      "timescale", "run the separation-of-time-scales pipeline");
  add_config(sub_timescale);
  sub_timescale->add_option("--n0", timescale.n0);
  sub_timescale->add_option("--m0", timescale.m0);
  sub_timescale->add_option("--K", timescale.K);
  sub_timescale->add_option("--c-list", timescale.c_list)->delimiter(',');
  sub_timescale->add_option("--t-list", timescale.t_list)->delimiter(',');
  sub_timescale->add_option("--model", timescale.model)
      ->check(CLI::IsMember({"seedbank", "two-island"}));
  sub_timescale->add_option("--out", timescale.out);

  SimulateArgs simulate;
  auto* sub_simulate = app.add_subcommand("simulate", "sample trajectories");
  add_config(sub_simulate);
  sub_simulate->add_option("--model", simulate.model)
      ->check(CLI::IsMember({"seedbank", "limit", "two-island"}));
  sub_simulate->add_option("--c", simulate.c);
  sub_simulate->add_option("--K", simulate.K);
  sub_simulate->add_option("--step", simulate.h);
  sub_simulate->add_option("--x0", simulate.x0);
  sub_simulate->add_option("--y0", simulate.y0);
  sub_simulate->add_option("--t-list", simulate.t_list)->delimiter(',');
  sub_simulate->add_option("--replicates", simulate.replicates);
  sub_simulate->add_option("--seed", simulate.seed);
  sub_simulate->add_option("--out", simulate.out);

  DualityArgs duality;
  auto* sub_duality = app.add_subcommand("duality", "moment-duality verification");
  add_config(sub_duality);
  sub_duality->add_option("--model", duality.model)
      ->check(CLI::IsMember({"seedbank", "limit"}));
  sub_duality->add_option("--c", duality.c);
  sub_duality->add_option("--K", duality.K);
  sub_duality->add_option("--step", duality.h);
  sub_duality->add_option("--bias", duality.bias);
  sub_duality->add_option("--t,--t-list", duality.t_list)->delimiter(',');
  sub_duality->add_option("--replicates", duality.replicates);
  sub_duality->add_option("--seed", duality.seed);
  sub_duality->add_option("--out", duality.out);

  ConvergeArgs converge;
  auto* sub_converge = app.add_subcommand(
      "converge", "exact chain-convergence experiment");
  add_config(sub_converge);
  sub_converge->add_option("--n0", converge.n0);
  sub_converge->add_option("--m0", converge.m0);
  sub_converge->add_option("--K", converge.K);
  sub_converge->add_option("--c-list", converge.c_list)->delimiter(',');
  sub_converge->add_option("--t-list", converge.t_list)->delimiter(',');
  sub_converge->add_option("--out", converge.out);

  SparkArgs spark;
  auto* sub_spark = app.add_subcommand("spark", "spark occupation statistics");
  add_config(sub_spark);
  sub_spark->add_option("--K", spark.K);
  sub_spark->add_option("--horizon", spark.horizon);
  sub_spark->add_option("--c-list", spark.c_list)->delimiter(',');
  sub_spark->add_option("--replicates", spark.replicates);
  sub_spark->add_option("--seed", spark.seed);
  sub_spark->add_option("--out", spark.out);

  std::map<std::string, ConfigTable> tables;
  tables["rates"] = {{"n0", bind(rates.n0)},
                     {"m0", bind(rates.m0)},
                     {"c", bind(rates.c)},
                     {"K", bind(rates.K)},
                     {"alpha-prime", bind(rates.alpha_prime)},
                     {"model", bind(rates.model)},
                     {"out", bind(rates.out)}};
  tables["limit-chain"] = {{"n0", bind(limit_chain.n0)},
                           {"m0", bind(limit_chain.m0)},
                           {"K", bind(limit_chain.K)},
                           {"t-list", bind(limit_chain.t_list)},
                           {"model", bind(limit_chain.model)},
                           {"out", bind(limit_chain.out)}};
  tables["timescale"] = {{"n0", bind(timescale.n0)},
                         {"m0", bind(timescale.m0)},
                         {"K", bind(timescale.K)},
                         {"c-list", bind(timescale.c_list)},
                         {"t-list", bind(timescale.t_list)},
                         {"model", bind(timescale.model)},
                         {"out", bind(timescale.out)}};
  tables["simulate"] = {{"model", bind(simulate.model)},
                        {"c", bind(simulate.c)},
                        {"K", bind(simulate.K)},
                        {"step", bind(simulate.h)},
                        {"x0", bind(simulate.x0)},
                        {"y0", bind(simulate.y0)},
                        {"t-list", bind(simulate.t_list)},
                        {"replicates", bind(simulate.replicates)},
                        {"seed", bind(simulate.seed)},
                        {"out", bind(simulate.out)}};
  tables["duality"] = {{"model", bind(duality.model)},
                       {"c", bind(duality.c)},
                       {"K", bind(duality.K)},
                       {"step", bind(duality.h)},
                       {"bias", bind(duality.bias)},
                       {"t-list", bind(duality.t_list)},
                       {"replicates", bind(duality.replicates)},
                       {"seed", bind(duality.seed)},
                       {"out", bind(duality.out)}};
  tables["converge"] = {{"n0", bind(converge.n0)},
                        {"m0", bind(converge.m0)},
                        {"K", bind(converge.K)},
                        {"c-list", bind(converge.c_list)},
                        {"t-list", bind(converge.t_list)},
                        {"out", bind(converge.out)}};
  tables["spark"] = {{"K", bind(spark.K)},
                     {"horizon", bind(spark.horizon)},
                     {"c-list", bind(spark.c_list)},
                     {"replicates", bind(spark.replicates)},
                     {"seed", bind(spark.seed)},
                     {"out", bind(spark.out)}};

  try {
    const std::string pre_config = find_config_path(argc, argv);
    if (!pre_config.empty() && argc > 1) {
      auto it = tables.find(argv[1]);
      if (it != tables.end()) apply_config_file(pre_config, it->second);
    }
    app.parse(argc, argv);
    if (sub_rates->parsed()) return run_rates(rates);
    if (sub_limit->parsed()) return run_limit_chain(limit_chain);
    if (sub_timescale->parsed()) return run_timescale(timescale);
    if (sub_simulate->parsed()) return run_simulate(simulate);
    if (sub_duality->parsed()) return run_duality(duality);
    if (sub_converge->parsed()) return run_converge(converge);
    if (sub_spark->parsed()) return run_spark(spark);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
