// Batch runner: enumerate action sets, simulate games, sweep k, verify.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "combandit/errors.hpp"
#include "combandit/experiment.hpp"
#include "combandit/suites.hpp"

namespace {

using namespace combandit;

constexpr int kUsageError = 2;

struct Flags {
  std::string family = "multitask";
  std::vector<std::size_t> k;
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t horizon = 0;
  std::string adversary = "correlated";
  bool clipped = false;
  std::optional<double> sigma;
  std::string learner = "uniform";
  std::optional<double> eta;
  std::optional<double> gamma;
  std::size_t reps = 0;
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 1;
  std::string out;
  std::uint64_t cap = kDefaultEnumerationCap;
  bool record_hidden = false;
  std::optional<std::size_t> t_factor;
  std::uint64_t list_limit = 10000;
  std::string suite = "all";
};

void add_instance_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--family", f.family, "multitask | path | matching")
      ->check(CLI::IsMember({"multitask", "path", "matching"}));
  cmd->add_option("--n", f.n, "arms per task / columns / vertices per layer");
  cmd->add_option("--d", f.d, "dimension (edge count for path)");
  cmd->add_option("--cap", f.cap, "enumeration cap");
}

void add_run_flags(CLI::App* cmd, Flags& f) {
  add_instance_flags(cmd, f);
  cmd->add_option("--T", f.horizon, "horizon");
  cmd->add_option("--adversary", f.adversary, "noise mode")
      ->check(CLI::IsMember({"correlated", "independent"}));
  cmd->add_flag("--clipped", f.clipped,
                "clip losses to [0,1]; without --sigma this selects the clipped "
                "adversary");
  cmd->add_option("--sigma", f.sigma, "noise scale (default sigma(T))");
  cmd->add_option("--learner", f.learner,
                  "fixed | uniform | round_robin | greedy | exp3 | exp2")
      ->check(CLI::IsMember(
          {"fixed", "uniform", "round_robin", "greedy", "exp3", "exp2"}));
  cmd->add_option("--eta", f.eta, "learning rate");
  cmd->add_option("--gamma", f.gamma, "exploration mix");
  cmd->add_option("--reps", f.reps, "replications")->required();
  cmd->add_option("--seed", f.seed, "experiment seed")->required();
  cmd->add_option("--jobs", f.jobs, "concurrent replications");
  cmd->add_option("--out", f.out, "CSV output path (default stdout)");
  cmd->add_flag("--record-hidden", f.record_hidden,
                "write transcripts with hidden losses to <out>.transcripts");
}

ExperimentConfig to_config(const Flags& f, std::size_t k) {
  ExperimentConfig c;
  c.family = parse_family(f.family);
  c.k = k;
  c.n = f.n;
  c.d = f.d;
  c.horizon = f.horizon;
  c.noise = parse_noise_mode(f.adversary);
  c.clipped = f.clipped;
  c.sigma = f.sigma;
  c.learner.kind = parse_learner_kind(f.learner);
  c.learner.eta = f.eta;
  c.learner.gamma = f.gamma;
  c.reps = f.reps;
  c.seed = f.seed;
  c.jobs = f.jobs;
  c.cap = f.cap;
  c.record_hidden = f.record_hidden;
  return c;
}

std::size_t single_k(const Flags& f) {
  if (f.k.size() != 1) throw CLI::ValidationError("--k", "expects one value");
  return f.k.front();
}

// CSV goes to --out (summary to stdout) or to stdout (summary to stderr).
int emit(const Flags& f, const std::vector<RunRecord>& rows,
         const std::string& summary) {
  if (f.out.empty()) {
    write_csv(std::cout, rows);
    std::cerr << summary;
    return 0;
  }
  std::ofstream csv(f.out, std::ios::binary);
  if (!csv) throw std::runtime_error("cannot open " + f.out);
  write_csv(csv, rows);
  std::ofstream(f.out + ".summary.json", std::ios::binary) << summary;
  std::cout << summary;
  return 0;
}

int cmd_enumerate(const Flags& f) {
  Dimensions dims{parse_family(f.family), f.d, single_k(f), f.n};
  if (dims.family == Family::LayeredPath) {
    if (dims.d == 0) dims.d = dims.k * dims.n;
    if (dims.k != 0) dims.n = dims.d / dims.k;
  } else {
    dims.d = dims.k * dims.n;
  }
  const ActionSet set = build_action_set(dims);
  std::cout << "# " << set.describe() << '\n';
  if (set.cardinality() > f.list_limit) {
    std::cout << "# listing suppressed (cardinality above --limit "
              << f.list_limit << ")\n";
    return 0;
  }
  for (const auto& x : set.enumerate(f.cap)) std::cout << x.to_string() << '\n';
  return 0;
}

int cmd_simulate(const Flags& f) {
  const ExperimentConfig config = to_config(f, single_k(f));
  std::unique_ptr<std::ofstream> transcripts;
  if (f.record_hidden) {
    if (f.out.empty()) {
      throw CLI::ValidationError("--record-hidden", "needs --out");
    }
    transcripts = std::make_unique<std::ofstream>(f.out + ".transcripts",
                                                  std::ios::binary);
  }
  const SimulationResult result = simulate(config, transcripts.get());
  return emit(f, result.rows, summary_document(result));
}

int cmd_sweep(const Flags& f) {
  if (f.k.size() < 3) {
    throw CLI::ValidationError("--k", "sweep needs at least 3 k values");
  }
  if (!f.t_factor && f.horizon == 0) {
    throw CLI::ValidationError("--T", "sweep needs --T or --t-factor");
  }
  ExperimentConfig base = to_config(f, f.k.front());
  base.d = 0;
  const SweepResult result = sweep(base, f.k, f.t_factor);
  std::vector<RunRecord> rows;
  for (const auto* group : {&result.correlated, &result.independent}) {
    for (const auto& r : *group) {
      rows.insert(rows.end(), r.rows.begin(), r.rows.end());
    }
  }
  return emit(f, rows, sweep_document(result));
}

int cmd_verify(const Flags& f) {
  VerifyOptions options;
  if (f.seed) options.seed = *f.seed;
  options.clip_sigma = f.sigma;
  const auto checks = run_suite(f.suite, options);
  bool ok = true;
  for (const auto& c : checks) {
    nlohmann::ordered_json line;
    line["suite"] = c.suite;
    line["check"] = c.check;
    line["status"] = c.pass ? "pass" : "fail";
    line["detail"] = c.detail;
    std::cout << line.dump() << '\n';
    ok = ok && c.pass;
  }
  std::cerr << (ok ? "verify: all checks passed\n" : "verify: FAILED\n");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bandit combinatorial optimization lower-bound simulator"};
  app.require_subcommand(1);
  Flags f;

  auto* enumerate = app.add_subcommand("enumerate", "list an action set");
  add_instance_flags(enumerate, f);
  enumerate->add_option("--k", f.k, "sparsity")->required()->expected(1);
  enumerate->add_option("--limit", f.list_limit,
                        "print actions only up to this cardinality");

  auto* simulate = app.add_subcommand("simulate", "run replications");
  add_run_flags(simulate, f);
  simulate->add_option("--k", f.k, "sparsity")->required()->expected(1);

  auto* sweep = app.add_subcommand("sweep", "scaling sweep over k");
  add_run_flags(sweep, f);
  sweep->add_option("--k", f.k, "k values, e.g. 2,4,8")
      ->required()
      ->delimiter(',');
  sweep->add_option("--t-factor", f.t_factor, "T = c*k*d at each k");

  auto* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("--suite", f.suite,
                     "all | cardinality | bijection | variance | kl | play_counts "
                     "| ranking_counts | clip");
  verify->add_option("--seed", f.seed, "seed for Monte Carlo checks");
  verify->add_option("--sigma", f.sigma,
                     "override sigma in the clip suite (negative testing)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kUsageError;
  }

  try {
    if (*enumerate) return cmd_enumerate(f);
    if (*simulate) return cmd_simulate(f);
    if (*sweep) return cmd_sweep(f);
    if (*verify) return cmd_verify(f);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kUsageError;
}
