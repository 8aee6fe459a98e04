#include "combandit/experiment.hpp"

#include <cmath>
#include <json.hpp>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "combandit/game.hpp"
#include "combandit/text.hpp"

namespace combandit {
namespace {

using nlohmann::ordered_json;

[[noreturn]] void reject(const std::string& what) {
  throw std::invalid_argument(what);
}

ordered_json tuning_json(const std::optional<Tuning>& tuning, bool eta) {
  if (!tuning) return "na";
  return eta ? tuning->eta : tuning->gamma;
}

ordered_json config_json(const SimulationResult& r) {
  const ExperimentConfig& c = r.config;
  const Dimensions dims = c.dimensions();
  ordered_json j;
  j["family"] = family_name(dims.family);
  j["k"] = dims.k;
  j["n"] = dims.n;
  j["d"] = dims.d;
  j["T"] = c.horizon;
  j["adversary"] = c.theorem4() ? "theorem4" : "gaussian";
  j["noise_mode"] = noise_mode_name(c.noise);
  j["clipped"] = c.clipped;
  j["sigma"] = r.sigma;
  j["epsilon"] = r.epsilon;
  j["learner"] = learner_kind_name(c.learner.kind);
  j["eta"] = tuning_json(r.tuning, true);
  j["gamma"] = tuning_json(r.tuning, false);
  j["seed"] = *c.seed;
  j["reps"] = c.reps;
  j["cap"] = c.cap;
  return j;
}

ordered_json summary_json(const SimulationResult& r) {
  ordered_json j = config_json(r);
  const RegretSummary& s = r.summary;
  j["mean"] = s.mean;
  j["standard_error"] = s.standard_error;
  j["mean_minus_2se"] = s.mean_minus_2se();
  if (std::isnan(s.bound_value)) {
    j["bound_value"] = "na";
  } else {
    j["bound_value"] = s.bound_value;
  }
  j["bound_check"] =
      r.bound_check ? (*r.bound_check ? "pass" : "fail") : "na";
  j["regrets"] = s.regrets;
  std::vector<std::string> best;
  for (const Action& x : s.hindsight_best) best.push_back(x.to_string());
  j["hindsight_best"] = best;
  return j;
}

ordered_json fit_json(const ScalingFit& fit) {
  ordered_json j;
  ordered_json points = ordered_json::array();
  for (const auto& p : fit.points) points.push_back({{"k", p.k}, {"value", p.value}});
  j["points"] = points;
  j["exponent"] = fit.exponent;
  j["intercept"] = fit.intercept;
  j["residual"] = fit.residual;
  return j;
}

}  // namespace

Dimensions ExperimentConfig::dimensions() const {
  Dimensions dims{family, d, k, n};
  if (family == Family::LayeredPath) {
    if (dims.d == 0) dims.d = k * n;
    if (dims.n == 0 && k != 0) dims.n = dims.d / k;
  } else if (dims.d == 0) {
    dims.d = k * n;
  } else if (dims.n == 0 && k != 0) {
    dims.n = dims.d / k;
  }
  return dims;
}

void ExperimentConfig::validate() const {
  dimensions().validate();
  if (horizon < 1) reject("--T must be at least 1");
  if (reps < 1) reject("--reps must be at least 1");
  if (!seed) reject("--seed is required");
  if (jobs < 1) reject("--jobs must be at least 1");
  if (sigma && !(std::isfinite(*sigma) && *sigma >= 0.0)) {
    reject("--sigma must be finite and nonnegative");
  }
  const Dimensions dims = dimensions();
  if (theorem4() && horizon < dims.k * dims.d) {
    reject("clipped recipe requires T >= k*d");
  }
  learner.validate();
  if (learner.kind == LearnerKind::PerTaskExp3 &&
      family != Family::Multitask) {
    reject("exp3 learner needs --family multitask");
  }
  const std::uint64_t size = build_action_set(dims).cardinality();
  if (size > cap) {
    reject("action set has " + std::to_string(size) +
           " elements, above --cap " + std::to_string(cap) +
           " (hindsight regret needs full enumeration)");
  }
}

std::string csv_header() {
  return "run_id,family,k,n,d,T,adversary,noise_mode,clipped,sigma,epsilon,"
         "learner,eta,gamma,seed,regret,hindsight_best_loss,cum_loss";
}

std::string csv_row(const RunRecord& r) {
  std::ostringstream os;
  os << r.run_id << ',' << family_name(r.dims.family) << ',' << r.dims.k << ','
     << r.dims.n << ',' << r.dims.d << ',' << r.horizon << ',' << r.adversary
     << ',' << noise_mode_name(r.noise) << ',' << (r.clipped ? 1 : 0) << ','
     << format_double(r.sigma) << ',' << format_double(r.epsilon) << ','
     << learner_kind_name(r.learner) << ','
     << (r.tuning ? format_double(r.tuning->eta) : "na") << ','
     << (r.tuning ? format_double(r.tuning->gamma) : "na") << ',' << r.seed
     << ',' << format_double(r.regret) << ','
     << format_double(r.hindsight_best_loss) << ','
     << format_double(r.cum_loss);
  return os.str();
}

void write_csv(std::ostream& os, const std::vector<RunRecord>& rows) {
  os << csv_header() << '\n';
  for (const auto& r : rows) os << csv_row(r) << '\n';
}

SimulationResult simulate(const ExperimentConfig& config,
                          std::ostream* transcripts) {
  config.validate();
  const Dimensions dims = config.dimensions();
  const ActionSet set = build_action_set(dims);
  const std::size_t horizon = config.horizon;

  SimulationResult result;
  result.config = config;
  result.sigma = config.sigma.value_or(compute_sigma(horizon));
  result.epsilon = compute_epsilon(result.sigma, loss_dims(dims), horizon,
                                   gap_variant_for(dims.family));
  if (uses_tuning(config.learner.kind)) {
    result.tuning = effective_tuning(config.learner, set, horizon);
  }

  const AdversaryFactory adversaries =
      [&](const ActionSet& s, std::uint64_t seed) {
        if (config.theorem4()) {
          return make_theorem4_adversary(s, horizon, seed, config.noise);
        }
        return make_gaussian_adversary(s, horizon, result.sigma, config.noise,
                                       config.clipped, seed);
      };
  LearnerSpec spec = config.learner;
  spec.cap = config.cap;
  const LearnerFactory learners = make_learner_factory(spec);

  const std::size_t reps = config.reps;
  result.rows.resize(reps);
  std::vector<double> regrets(reps);
  std::vector<Action> best(reps);
  std::vector<std::string> records(transcripts ? reps : 0);
  for_each_replication(
      learners, adversaries, set, reps, *config.seed, config.jobs,
      [&](std::size_t i, Transcript&& tr) {
        const RegretBreakdown b = regret_breakdown(tr, set, config.cap);
        RunRecord& row = result.rows[i];
        row.run_id = i;
        row.dims = dims;
        row.horizon = horizon;
        row.adversary = config.theorem4() ? "theorem4" : "gaussian";
        row.noise = config.noise;
        row.clipped = config.clipped;
        row.sigma = tr.config.sigma;
        row.epsilon = tr.config.epsilon;
        row.learner = config.learner.kind;
        row.tuning = result.tuning;
        row.seed = *config.seed;
        row.regret = b.regret;
        row.hindsight_best_loss = b.hindsight_best_loss;
        row.cum_loss = b.learner_loss;
        regrets[i] = b.regret;
        best[i] = b.hindsight_best;
        if (transcripts) {
          std::ostringstream os;
          write_transcript(os, tr, config.record_hidden);
          records[i] = os.str();
        }
      });
  if (transcripts) {
    for (const auto& r : records) *transcripts << r;
  }

  double bound = std::nan("");
  if (config.noise == NoiseMode::Correlated) {
    if (config.theorem4()) {
      bound = lower_bound_value(loss_dims(dims), horizon, BoundForm::Theorem4);
    } else if (!config.clipped) {
      bound = lower_bound_value(loss_dims(dims), horizon,
                                dims.family == Family::Matching
                                    ? BoundForm::Lemma3
                                    : BoundForm::Lemma1,
                                result.sigma);
    }
  }
  result.summary = summarize(std::move(regrets), std::move(best), bound);
  if (config.theorem4() && config.noise == NoiseMode::Correlated) {
    result.bound_check = result.summary.mean_minus_2se() >= bound;
  }
  return result;
}

SweepResult sweep(const ExperimentConfig& config_template,
                  const std::vector<std::size_t>& ks,
                  std::optional<std::size_t> t_factor) {
  if (ks.size() < 3) reject("sweep needs at least 3 k values");
  SweepResult out;
  for (NoiseMode mode : {NoiseMode::Correlated, NoiseMode::Independent}) {
    std::vector<ScalingPoint> normalized, raw;
    auto& results =
        mode == NoiseMode::Correlated ? out.correlated : out.independent;
    for (std::size_t k : ks) {
      ExperimentConfig c = config_template;
      c.k = k;
      c.d = 0;
      c.noise = mode;
      const Dimensions dims = c.dimensions();
      if (t_factor) c.horizon = *t_factor * dims.k * dims.d;
      c.seed = derive_seed(*config_template.seed, k);
      results.push_back(simulate(c));
      const double mean = results.back().summary.mean;
      const double scale = std::sqrt(static_cast<double>(dims.d) *
                                     static_cast<double>(c.horizon));
      normalized.push_back({static_cast<double>(k), mean / scale});
      raw.push_back({static_cast<double>(k), mean});
    }
    (mode == NoiseMode::Correlated ? out.correlated_fit : out.independent_fit) =
        scaling_fit(normalized);
    (mode == NoiseMode::Correlated ? out.correlated_raw_fit
                                   : out.independent_raw_fit) =
        scaling_fit(raw);
  }
  return out;
}

std::string summary_document(const SimulationResult& result) {
  return summary_json(result).dump(2) + "\n";
}

std::string sweep_document(const SweepResult& result) {
  ordered_json j;
  const auto points = [](const std::vector<SimulationResult>& rs) {
    ordered_json a = ordered_json::array();
    for (const auto& r : rs) {
      ordered_json s = summary_json(r);
      s.erase("regrets");
      s.erase("hindsight_best");
      a.push_back(s);
    }
    return a;
  };
  j["fit_quantity"] = "mean_regret/sqrt(d*T)";
  j["correlated"] = {{"points", points(result.correlated)},
                     {"fit", fit_json(result.correlated_fit)},
                     {"raw_fit", fit_json(result.correlated_raw_fit)}};
  j["independent"] = {{"points", points(result.independent)},
                      {"fit", fit_json(result.independent_fit)},
                      {"raw_fit", fit_json(result.independent_raw_fit)}};
  j["exponent_gap"] =
      result.correlated_fit.exponent - result.independent_fit.exponent;
  return j.dump(2) + "\n";
}

}  // namespace combandit
