// lab_opt: command-line driver for optimisation campaigns, search space
// reduction and result statistics.
//
// Exit codes: 0 success, 1 I/O or evaluation failure, 2 usage error,
// 3 infeasible or degenerate data.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "labopt/labopt.hpp"

namespace {

using namespace labopt;

constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDegenerate = 3;

class UsageError : public Error {
 public:
  using Error::Error;
};

std::vector<double> read_column(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::vector<double> v;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::size_t used = 0;
    try {
      double x = std::stod(line, &used);
      v.push_back(x);
    } catch (const std::exception&) {
      if (!first) throw UsageError("'" + path + "': not a number: " + line);
    }
    first = false;
  }
  return v;
}

struct Matrix {
  std::vector<std::string> names;
  std::vector<std::vector<double>> rows;
};

Matrix read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  Matrix m;
  std::string line;
  if (!std::getline(in, line)) throw UsageError("'" + path + "' is empty");
  std::stringstream header(line);
  for (std::string cell; std::getline(header, cell, ',');) m.names.push_back(cell);
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw UsageError("'" + path + "': not a number: " + cell);
      }
    }
    if (row.size() != m.names.size())
      throw UsageError("'" + path + "': row has " + std::to_string(row.size()) + " values, header names " +
                       std::to_string(m.names.size()) + " algorithms");
    m.rows.push_back(std::move(row));
  }
  return m;
}

struct CampaignOptions {
  std::string problem;
  std::size_t n = 0, groups = 0, max_iter = 0;
  double theta = 0.15;
  std::size_t runs = 30;
  std::uint64_t seed = 1;
  std::size_t jobs = 0;
  std::string out = "runs.csv";
  std::string trace;
};

void add_campaign_options(CLI::App* cmd, CampaignOptions& o) {
  cmd->add_option("--problem", o.problem, "Registry name or JSON problem file")->required();
  cmd->add_option("--n", o.n, "Individuals per group")->capture_default_str();
  cmd->add_option("--groups", o.groups, "Number of groups")->capture_default_str();
  cmd->add_option("--theta", o.theta, "Sampling space reduction factor")->capture_default_str();
  cmd->add_option("--max-iter", o.max_iter, "Iteration budget per run (per box when constrained)")
      ->capture_default_str();
  cmd->add_option("--runs", o.runs, "Independent runs")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  cmd->add_option("--jobs", o.jobs, "Worker threads (default: LAB_OPT_JOBS or all cores)");
  cmd->add_option("--out", o.out, "Per-run CSV output")->capture_default_str();
  cmd->add_option("--trace", o.trace, "Convergence trace output (JSONL)");
}

void finish_campaign(const CampaignResult& r, const CampaignOptions& o) {
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  write_file(o.out, [&](std::ostream& out) { write_runs_csv(out, r); });
  if (!o.trace.empty()) write_file(o.trace, [&](std::ostream& out) { write_traces_jsonl(out, r); });
  std::cout << "problem\t" << r.problem << "\nruns\t" << r.runs.size() << '\n';
  write_summary(std::cout, summarize(r.runs));
}

int cmd_run(CampaignOptions& o) {
  ProblemSpec p = resolve_problem(o.problem);
  if (p.constrained())
    throw UsageError("problem '" + p.name + "' has constraints; use cssr and solve-constrained");
  CampaignSpec spec;
  spec.runs = o.runs;
  spec.master_seed = o.seed;
  spec.jobs = resolve_jobs(o.jobs);
  if (o.n) spec.lab.n = o.n;
  if (o.groups) spec.lab.groups = o.groups;
  if (o.max_iter) spec.lab.max_iter = o.max_iter;
  spec.lab.theta = o.theta;
  spec.lab.validate();
  finish_campaign(run_campaign(p, spec), o);
  return 0;
}

int cmd_solve(CampaignOptions& o, const std::string& clusters, double omega, double beta) {
  ProblemSpec p = resolve_problem(o.problem);
  ClustersFile file = read_clusters(clusters);
  if (!file.problem.empty() && file.problem != p.name)
    std::cerr << "warning: clusters were computed for '" << file.problem << "', solving '" << p.name << "'\n";
  CampaignSpec spec;
  spec.constrained = true;
  spec.runs = o.runs;
  spec.master_seed = o.seed;
  spec.jobs = resolve_jobs(o.jobs);
  spec.boxes = file.boxes;
  ConstrainedConfig& c = spec.constrained_cfg;
  if (o.n) c.base.n = o.n;
  if (o.groups) c.base.groups = o.groups;
  if (o.max_iter) c.base.max_iter = o.max_iter;
  c.base.theta = o.theta;
  c.omega = omega;
  c.beta = beta;
  c.validate();
  CampaignResult r = run_campaign(p, spec);
  for (std::size_t i = 0; i < r.runs.size(); ++i) {
    Evaluation ev = evaluate(p, r.runs[i].best_position);
    if (!ev.feasible)
      throw InfeasibleRegion("run " + std::to_string(i) + " returned an infeasible point");
  }
  finish_campaign(r, o);
  return 0;
}

int cmd_cssr(const std::string& problem, const CssrConfig& cfg, const std::string& out) {
  ProblemSpec p = resolve_problem(problem);
  if (!p.constrained()) throw UsageError("problem '" + p.name + "' has no constraints");
  CssrResult r = reduce(p, cfg);
  write_clusters(out, p.name, r);
  std::printf("problem\t%s\ngrid points\t%zu\ncombined points\t%zu\nnoise points\t%zu\n", p.name.c_str(),
              r.grid_points, r.combined_points, r.noise_points);
  std::printf("max_dist\t%.6g\neps\t%.6g\nmin_pts\t%zu\n", r.params.max_dist, r.params.eps, r.params.min_pts);
  const double total = p.bounds.volume();
  for (const auto& b : r.boxes) {
    std::printf("cluster %d\tpoints %zu\tvolume ratio %.6g\n", b.id, b.point_count, b.volume() / total);
    for (std::size_t i = 0; i < b.dim(); ++i) std::printf("  x%zu\t[%.10g, %.10g]\n", i + 1, b.min[i], b.max[i]);
  }
  std::printf("total volume ratio\t%.6g\n", r.volume_ratio(p.bounds));
  return 0;
}

int cmd_wilcoxon(const std::string& a_path, const std::string& b_path, double alpha) {
  auto a = read_column(a_path);
  auto b = read_column(b_path);
  SignedRankResult r = wilcoxon_signed_rank(a, b);
  std::string winner = "=";
  if (r.p_value < alpha) winner = r.t_plus > r.t_minus ? "b" : "a";
  std::printf("p\t%.4E\nT+\t%g\nT-\t%g\nn\t%zu\nmethod\t%s\nwinner\t%s\n", r.p_value, r.t_plus, r.t_minus,
              r.n_effective, r.method == PValueMethod::Exact ? "exact" : "normal", winner.c_str());
  return 0;
}

int cmd_friedman(const std::string& path) {
  Matrix m = read_matrix(path);
  FriedmanResult r = friedman(m.rows);
  std::printf("algorithm\tmean_rank\trank\n");
  for (std::size_t j = 0; j < m.names.size(); ++j)
    std::printf("%s\t%.6g\t%zu\n", m.names[j].c_str(), r.mean_ranks[j], r.ordering[j]);
  std::printf("chi2\t%.6g\n", r.statistic);
  return 0;
}

int cmd_list() {
  std::printf("%-22s %4s  %-28s %s\n", "name", "dim", "bounds", "known best");
  for (const auto& e : registry()) {
    ProblemSpec p = e.problem();
    char bounds[64];
    if (e.engineering)
      std::snprintf(bounds, sizeof bounds, "mixed, %zu constraints", p.constraints.size());
    else
      std::snprintf(bounds, sizeof bounds, "[%g, %g]", e.lower, e.upper);
    std::printf("%-22s %4zu  %-28s %.10g\n", e.name.c_str(), e.dim, bounds, e.known_best);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Modified LAB optimiser, search space reduction and rank statistics"};
  app.require_subcommand(1);

  CampaignOptions run_opts;
  auto* run = app.add_subcommand("run", "Seeded multi-run campaign on a bound-constrained problem");
  add_campaign_options(run, run_opts);

  std::string cssr_problem, cssr_out = "clusters.json";
  CssrConfig cssr_cfg;
  double max_dist = 0, eps = 0;
  std::size_t min_pts = 0;
  auto* cssr = app.add_subcommand("cssr", "Reduce the search space of a constrained problem");
  cssr->add_option("--problem", cssr_problem, "Registry name or JSON problem file")->required();
  cssr->add_option("--points-per-dim", cssr_cfg.e, "Grid points per dimension")->capture_default_str();
  auto* md = cssr->add_option("--max-dist", max_dist, "Proximity radius (default: twice the grid diagonal)");
  auto* ep = cssr->add_option("--eps", eps, "DBSCAN radius (default: max-dist)");
  auto* mp = cssr->add_option("--min-pts", min_pts, "DBSCAN core threshold (default: 2 x dimension)");
  cssr->add_option("--out", cssr_out, "Output clusters file")->capture_default_str();

  CampaignOptions solve_opts;
  solve_opts.out = "runs.csv";
  std::string clusters;
  double omega = ConstrainedConfig{}.omega, beta = ConstrainedConfig{}.beta;
  auto* solve = app.add_subcommand("solve-constrained", "Constrained campaign inside reduced regions");
  add_campaign_options(solve, solve_opts);
  solve->add_option("--clusters", clusters, "clusters.json from the cssr command")->required();
  solve->add_option("--omega", omega, "Step fraction toward the selected leader")->capture_default_str();
  solve->add_option("--beta", beta, "Decay constant of the global leader step")->capture_default_str();

  auto* stats = app.add_subcommand("stats", "Rank tests on result files");
  stats->require_subcommand(1);
  std::string a_path, b_path, matrix_path;
  double alpha = 0.05;
  auto* wil = stats->add_subcommand("wilcoxon", "Two-sided signed-rank test on paired run results");
  wil->add_option("--a", a_path, "Single-column CSV")->required();
  wil->add_option("--b", b_path, "Single-column CSV")->required();
  wil->add_option("--alpha", alpha, "Significance level")->capture_default_str();
  auto* fri = stats->add_subcommand("friedman", "Mean ranks across problems");
  fri->add_option("--matrix", matrix_path, "CSV: header of algorithm names, one row per problem")->required();

  auto* list = app.add_subcommand("list-problems", "Print the built-in problems");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*cssr) {
      if (*md) cssr_cfg.max_dist = max_dist;
      if (*ep) cssr_cfg.eps = eps;
      if (*mp) cssr_cfg.min_pts = min_pts;
      return cmd_cssr(cssr_problem, cssr_cfg, cssr_out);
    }
    if (*solve) return cmd_solve(solve_opts, clusters, omega, beta);
    if (*wil) return cmd_wilcoxon(a_path, b_path, alpha);
    if (*fri) return cmd_friedman(matrix_path);
    if (*list) return cmd_list();
  } catch (const DegenerateData& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}
