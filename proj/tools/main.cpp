// selfnorm: tail probabilities of self-normalized sums and Student's t.
//
// Exit codes: 0 ok, 1 verify failure, 2 domain error, 3 convergence failure,
// 64 usage error, 73 output path not writable.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "selfnorm/approximations.hpp"
#include "selfnorm/density_spec.hpp"
#include "selfnorm/error.hpp"
#include "selfnorm/montecarlo.hpp"
#include "selfnorm/random.hpp"
#include "selfnorm/table.hpp"
#include "selfnorm/verify.hpp"

namespace {

using namespace selfnorm;
using json = nlohmann::ordered_json;

constexpr int kExitVerifyFailed = 1;
constexpr int kExitDomain = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitUsage = 64;
constexpr int kExitCantCreate = 73;

struct UsageError {
  std::string message;
};

struct Common {
  std::string dist = "normal";
  int n = 5;
  std::uint64_t reps = 1'000'000;
  std::uint64_t seed = 0;
  int workers = 0;
};

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

McConfig mc_config(const Common& c) {
  McConfig cfg;
  cfg.reps = c.reps;
  cfg.seed = c.seed;
  cfg.workers = c.workers;
  return cfg;
}

json solution_json(const SaddleSolution& s) {
  json j;
  j["b"] = s.b;
  j["infeasible"] = s.infeasible;
  j["a0"] = s.a0;
  j["t_hat"] = s.t_hat;
  j["s_hat"] = s.s_hat;
  j["Lambda"] = s.Lambda;
  j["w"] = s.w;
  j["v"] = s.v;
  j["Lambda_aa"] = s.Lambda_aa;
  j["Lambda_b"] = s.Lambda_b;
  j["delta_det"] = s.delta_det;
  j["residual_t"] = s.residual_t;
  j["residual_a"] = s.residual_a;
  j["inner_iterations"] = s.inner_iterations;
  j["outer_iterations"] = s.outer_iterations;
  return j;
}

json mc_json(const McEstimate& m) {
  json j;
  j["p_hat"] = m.p_hat;
  j["std_err"] = m.std_err;
  j["ci95_low"] = m.ci95_low;
  j["ci95_high"] = m.ci95_high;
  j["reps"] = m.reps;
  j["seed"] = m.seed;
  j["degenerate"] = m.degenerate;
  j["generator"] = std::string(m.generator);
  return j;
}

std::string mc_line(const McEstimate& m) {
  std::ostringstream out;
  out << "p_hat=" << fmt6(m.p_hat) << " std_err=" << fmt6(m.std_err) << " ci95=[" << fmt6(m.ci95_low) << ", "
      << fmt6(m.ci95_high) << "] reps=" << m.reps << " seed=" << m.seed << " generator=" << m.generator;
  if (m.degenerate > 0) out << " degenerate=" << m.degenerate;
  return out.str();
}

struct TailArgs {
  Common common;
  std::optional<double> b;
  std::optional<double> t;
  std::string method = "saddle";
  bool json = false;
};

int run_tail(const TailArgs& a) {
  const DistributionModel dist = resolve_distribution(a.common.dist);
  const Method method = parse_method(a.method);
  json out;
  std::ostringstream line;

  if (method == Method::monte_carlo) {
    const McConfig cfg = mc_config(a.common);
    const McEstimate m = a.t ? estimate_student_t_tail(dist, a.common.n, *a.t, cfg)
                             : estimate_tail(dist, a.common.n, *a.b, cfg);
    out["probability"] = m.p_hat;
    out["method"] = std::string(to_string(method));
    out["n"] = a.common.n;
    if (a.t) {
      out["t"] = *a.t;
    } else {
      out["b"] = *a.b;
    }
    out["warnings"] = json::array();
    out["monte_carlo"] = mc_json(m);
    line << fmt6(m.p_hat) << " method=monte_carlo n=" << a.common.n
         << (a.t ? " t=" + fmt6(*a.t) : " b=" + fmt6(*a.b)) << ' ' << mc_line(m);
  } else {
    const TailEstimate est = a.t ? student_t_upper_tail(dist, a.common.n, *a.t, method)
                                 : upper_tail(dist, a.common.n, *a.b, method);
    out["probability"] = est.probability;
    out["method"] = std::string(to_string(est.method));
    out["n"] = est.n;
    out["b"] = est.b;
    if (a.t) out["t"] = *a.t;
    out["warnings"] = json::array();
    for (auto w : est.warnings) out["warnings"].push_back(std::string(to_string(w)));
    if (est.diagnostics) out["diagnostics"] = solution_json(*est.diagnostics);
    line << fmt6(est.probability) << " method=" << to_string(est.method) << " n=" << est.n
         << " b=" << fmt6(est.b);
    if (a.t) line << " t=" << fmt6(*a.t);
    if (!est.warnings.empty()) {
      line << " warnings=";
      for (std::size_t i = 0; i < est.warnings.size(); ++i) {
        line << (i ? "," : "") << to_string(est.warnings[i]);
      }
    }
  }
  std::cout << (a.json ? out.dump(2) : line.str()) << '\n';
  return 0;
}

struct TableArgs {
  Common common;
  std::string b_grid;
  std::string methods = "mc,saddle,normal,edgeworth,ld";
  std::string format = "csv";
  std::string out;
  std::string normal_scaling = "sqrt_n";
};

std::vector<Method> parse_methods(const std::string& list) {
  std::vector<Method> methods;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    try {
      methods.push_back(parse_method(item));
    } catch (const Error& e) {
      throw UsageError{e.what()};
    }
  }
  if (methods.empty()) throw UsageError{"--methods is empty"};
  return methods;
}

std::vector<double> grid_or_usage(const std::string& text) {
  std::vector<double> grid;
  try {
    grid = parse_b_grid(text);
  } catch (const Error& e) {
    throw UsageError{e.what()};
  }
  if (grid.empty()) throw UsageError{"b-grid '" + text + "' is empty (start > stop)"};
  return grid;
}

int run_table(const TableArgs& a) {
  TableRequest req;
  req.n = a.common.n;
  req.b_grid = grid_or_usage(a.b_grid);
  req.methods = parse_methods(a.methods);
  req.mc = mc_config(a.common);
  req.normal_scaling = a.normal_scaling == "sqrt_n" ? NormalScaling::sqrt_n : NormalScaling::sqrt_n_minus_1;

  // Open the destination before the (possibly long) computation.
  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) {
      std::cerr << "error: cannot write '" << a.out << "'\n";
      return kExitCantCreate;
    }
  }

  const DistributionModel dist = resolve_distribution(a.common.dist);
  const Table table = build_table(dist, req);
  for (const auto& note : table.notes) std::cerr << "note: " << note << '\n';

  json meta;
  meta["dist"] = dist.name();
  meta["n"] = req.n;
  meta["methods"] = a.methods;
  meta["normal_scaling"] = a.normal_scaling;
  meta["reps"] = req.mc.reps;
  meta["seed"] = req.mc.seed;
  meta["generator"] = std::string(Xoshiro256::kName);

  std::string text;
  if (a.format == "json") {
    text = to_json(table.rows, meta.dump());
  } else {
    text = to_csv(table.rows);
    std::cerr << "# dist=" << dist.name() << " n=" << req.n << " reps=" << req.mc.reps << " seed=" << req.mc.seed
              << " generator=" << Xoshiro256::kName << '\n';
  }
  if (file.is_open()) {
    file << text;
    file.close();
    if (!file) {
      std::cerr << "error: failed writing '" << a.out << "'\n";
      return kExitCantCreate;
    }
  } else {
    std::cout << text;
  }
  return 0;
}

struct McArgs {
  Common common;
  std::optional<double> b;
  std::optional<double> t;
  bool json = false;
};

int run_mc(const McArgs& a) {
  const DistributionModel dist = resolve_distribution(a.common.dist);
  const McConfig cfg = mc_config(a.common);
  const McEstimate m =
      a.t ? estimate_student_t_tail(dist, a.common.n, *a.t, cfg) : estimate_tail(dist, a.common.n, *a.b, cfg);
  if (a.json) {
    json out = mc_json(m);
    out["n"] = a.common.n;
    if (a.t) {
      out["t"] = *a.t;
    } else {
      out["b"] = *a.b;
    }
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << mc_line(m) << '\n';
  }
  return 0;
}

struct VerifyArgs {
  std::string dist = "normal";
  std::string b_grid = "0.1:0.9:0.1";
  std::uint64_t seed = 0;
};

int run_verify_cmd(const VerifyArgs& a) {
  const std::vector<double> grid = grid_or_usage(a.b_grid);
  const DistributionModel dist = resolve_distribution(a.dist);
  const VerifyReport report = run_verify(dist, grid, a.seed);
  int failed = 0;
  for (const auto& r : report.results) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
    failed += !r.passed;
  }
  std::cout << (failed ? "FAILED: " : "all passed: ") << report.results.size() - failed << '/'
            << report.results.size() << " properties, dist=" << dist.name() << " seed=" << a.seed << '\n';
  return failed ? kExitVerifyFailed : 0;
}

void add_common(CLI::App* cmd, Common& c, bool random) {
  cmd->add_option("--dist", c.dist, "normal | exp | t2 | cauchy | file:<path>")->capture_default_str();
  cmd->add_option("--n", c.n, "sample size")->check(CLI::Range(2, 1000000))->capture_default_str();
  if (random) {
    cmd->add_option("--reps", c.reps, "Monte Carlo replicates")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--seed", c.seed, "Monte Carlo seed")->capture_default_str();
    cmd->add_option("--workers", c.workers, "OpenMP threads (0 = runtime default)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Saddlepoint, Normal, Edgeworth, large-deviation and Monte Carlo tails of self-normalized sums"};
  app.require_subcommand(1);

  TailArgs tail;
  auto* tail_cmd = app.add_subcommand("tail", "one tail probability");
  add_common(tail_cmd, tail.common, true);
  auto* tail_b = tail_cmd->add_option("--b", tail.b, "threshold of mean(X)/sqrt(mean(X^2))");
  auto* tail_t = tail_cmd->add_option("--t", tail.t, "threshold of the Student t statistic");
  tail_b->excludes(tail_t);
  tail_cmd->add_option("--method", tail.method, "saddle | normal | edgeworth | ld | mc")->capture_default_str();
  tail_cmd->add_flag("--json", tail.json, "JSON output with diagnostics");

  TableArgs table;
  auto* table_cmd = app.add_subcommand("table", "a table of methods over a grid of b");
  add_common(table_cmd, table.common, true);
  table_cmd->add_option("--b-grid", table.b_grid, "start:stop:step")->required();
  table_cmd->add_option("--methods", table.methods, "comma list of mc, saddle, normal, edgeworth, ld")
      ->capture_default_str();
  table_cmd->add_option("--format", table.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  table_cmd->add_option("--out", table.out, "output file (default stdout)");
  table_cmd->add_option("--normal-scaling", table.normal_scaling, "sqrt_n: 1-Phi(b sqrt(n)); sqrt_n_minus_1")
      ->check(CLI::IsMember({"sqrt_n", "sqrt_n_minus_1"}))
      ->capture_default_str();

  McArgs mc;
  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo estimate");
  add_common(mc_cmd, mc.common, true);
  auto* mc_b = mc_cmd->add_option("--b", mc.b, "threshold of mean(X)/sqrt(mean(X^2))");
  auto* mc_t = mc_cmd->add_option("--t", mc.t, "threshold of the Student t statistic");
  mc_b->excludes(mc_t);
  mc_cmd->add_flag("--json", mc.json, "JSON output");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "run the solver property suite");
  verify_cmd->add_option("--dist", verify.dist)->capture_default_str();
  verify_cmd->add_option("--b-grid", verify.b_grid, "start:stop:step")->capture_default_str();
  verify_cmd->add_option("--seed", verify.seed)->capture_default_str();

  try {
    app.parse(argc, argv);
    if (tail_cmd->parsed() && !tail.b && !tail.t) throw CLI::RequiredError("--b or --t");
    if (mc_cmd->parsed() && !mc.b && !mc.t) throw CLI::RequiredError("--b or --t");
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (tail_cmd->parsed()) return run_tail(tail);
    if (table_cmd->parsed()) return run_table(table);
    if (mc_cmd->parsed()) return run_mc(mc);
    if (verify_cmd->parsed()) return run_verify_cmd(verify);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.message << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.is_domain_error() ? kExitDomain : kExitConvergence;
  }
  return kExitUsage;
}
