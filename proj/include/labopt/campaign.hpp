#pragma once

// Seeded multi-run experiments and their on-disk results.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "labopt/cluster_box.hpp"
#include "labopt/error.hpp"
#include "labopt/lab.hpp"
#include "labopt/lab_constrained.hpp"
#include "labopt/parallel.hpp"
#include "labopt/problem.hpp"
#include "labopt/rng.hpp"

namespace labopt {

/// Shortest text that round-trips to the same double (17 significant digits).
inline std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string join_point(std::span<const double> x, char sep = ';') {
  std::string s;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += sep;
    s += format_g17(x[i]);
  }
  return s;
}

struct CampaignSpec {
  std::size_t runs = 30;
  std::uint64_t master_seed = 1;
  std::size_t jobs = 1;
  bool constrained = false;
  LabConfig lab;                     // unconstrained runs
  ConstrainedConfig constrained_cfg; // constrained runs
  std::vector<ClusterBox> boxes;     // constrained runs; empty means the full bounds
};

struct CampaignResult {
  std::string problem;
  std::vector<RunRecord> runs;
  std::vector<std::string> warnings;
};

struct Summary {
  double mean = 0, std_dev = 0, best = 0, worst = 0, runtime_s = 0;
};

inline Summary summarize(const std::vector<RunRecord>& runs) {
  if (runs.empty()) throw ConfigError("no runs to summarise");
  Summary s;
  s.best = runs.front().best_value;
  s.worst = s.best;
  for (const auto& r : runs) {
    s.mean += r.best_value;
    s.runtime_s += r.wall_ms / 1000.0;
    s.best = std::min(s.best, r.best_value);
    s.worst = std::max(s.worst, r.best_value);
  }
  const double n = static_cast<double>(runs.size());
  s.mean /= n;
  s.runtime_s /= n;
  if (runs.size() > 1) {
    double ss = 0;
    for (const auto& r : runs) ss += (r.best_value - s.mean) * (r.best_value - s.mean);
    s.std_dev = std::sqrt(ss / (n - 1));
  }
  return s;
}

/// Run i uses seed derive_seed(master_seed, i); results are stored in run order.
inline CampaignResult run_campaign(const ProblemSpec& problem, const CampaignSpec& spec) {
  if (spec.runs < 1) throw ConfigError("runs must be >= 1");
  CampaignResult out;
  out.problem = problem.name;
  out.runs.resize(spec.runs);
  std::vector<std::vector<std::string>> warnings(spec.runs);
  std::vector<ClusterBox> boxes = spec.boxes;
  if (spec.constrained && boxes.empty()) boxes.push_back(ClusterBox::from_bounds(problem.bounds));

  parallel_for(spec.runs, spec.jobs, [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(spec.master_seed, i);
    if (spec.constrained) {
      ConstrainedConfig c = spec.constrained_cfg;
      c.base.seed = seed;
      ConstrainedResult r = optimize_constrained(problem, boxes, c);
      out.runs[i] = std::move(r.overall);
      warnings[i] = std::move(r.warnings);
    } else {
      LabConfig c = spec.lab;
      c.seed = seed;
      out.runs[i] = optimize(problem, c);
    }
    out.runs[i].seed = seed;
  });
  for (std::size_t i = 0; i < spec.runs; ++i)
    for (auto& w : warnings[i]) out.warnings.push_back("run " + std::to_string(i) + ": " + w);
  return out;
}

inline constexpr const char* kCsvHeader = "run_id,seed,problem,best_f,best_x,evaluations,iterations,wall_ms";

inline void write_runs_csv(std::ostream& out, const CampaignResult& r) {
  out << kCsvHeader << '\n';
  char wall[32];
  for (std::size_t i = 0; i < r.runs.size(); ++i) {
    const RunRecord& run = r.runs[i];
    std::snprintf(wall, sizeof wall, "%.3f", run.wall_ms);
    out << i << ',' << run.seed << ',' << r.problem << ',' << format_g17(run.best_value) << ','
        << join_point(run.best_position) << ',' << run.evaluations << ',' << run.iterations << ',' << wall
        << '\n';
  }
}

/// One JSON object per line: {"run":i,"iter":k,"best_f":v}, runs in order.
inline void write_traces_jsonl(std::ostream& out, const CampaignResult& r) {
  for (std::size_t i = 0; i < r.runs.size(); ++i)
    for (std::size_t k = 0; k < r.runs[i].trace.size(); ++k)
      out << "{\"run\":" << i << ",\"iter\":" << k << ",\"best_f\":" << format_g17(r.runs[i].trace[k]) << "}\n";
}

inline void write_summary(std::ostream& out, const Summary& s) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "Mean\t%.6E\nStd. Dev.\t%.6E\nBest\t%.6E\nWorst\t%.6E\nRuntime\t%.3f\n", s.mean,
                s.std_dev, s.best, s.worst, s.runtime_s);
  out << buf;
}

template <typename Writer>
void write_file(const std::string& path, Writer&& w) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  w(out);
  out.flush();
  if (!out) throw Error("failed writing '" + path + "'");
}

/// One parsed CSV row.
struct CsvRun {
  std::size_t run_id = 0;
  std::uint64_t seed = 0;
  std::string problem;
  double best_f = 0;
  Point best_x;
  std::size_t evaluations = 0, iterations = 0;
  double wall_ms = 0;
};

inline std::vector<CsvRun> read_runs_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw ConfigError("runs CSV: unexpected header");
  std::vector<CsvRun> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 8) throw ConfigError("runs CSV: expected 8 fields in '" + line + "'");
    CsvRun r;
    r.run_id = std::stoul(f[0]);
    r.seed = std::stoull(f[1]);
    r.problem = f[2];
    r.best_f = std::stod(f[3]);
    std::stringstream xs(f[4]);
    while (std::getline(xs, cell, ';')) r.best_x.push_back(std::stod(cell));
    r.evaluations = std::stoul(f[5]);
    r.iterations = std::stoul(f[6]);
    r.wall_ms = std::stod(f[7]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace labopt
