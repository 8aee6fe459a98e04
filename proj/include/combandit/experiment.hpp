#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "combandit/action_sets.hpp"
#include "combandit/analysis.hpp"
#include "combandit/environments.hpp"
#include "combandit/learners.hpp"

namespace combandit {

// Flags of the batch runner. Adversary recipe:
//   no sigma, clipped   -> clipped recipe (sigma = sigma(T), T >= kd)
//   no sigma, unclipped -> Gaussian adversary with sigma = sigma(T)
//   sigma given         -> Gaussian adversary with that sigma
struct ExperimentConfig {
  Family family = Family::Multitask;
  std::size_t k = 0;
  std::size_t n = 0;  // arms / columns / intermediates per layer
  std::size_t d = 0;  // optional; derived from k and n when 0
  std::size_t horizon = 0;
  NoiseMode noise = NoiseMode::Correlated;
  bool clipped = false;
  std::optional<double> sigma;
  LearnerSpec learner;
  std::size_t reps = 0;
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 1;
  std::uint64_t cap = kDefaultEnumerationCap;
  bool record_hidden = false;

  Dimensions dimensions() const;
  bool theorem4() const { return clipped && !sigma; }
  // Re-validates every upstream admissibility rule; throws
  // std::invalid_argument.
  void validate() const;
};

// One replication, echoing the effective configuration.
struct RunRecord {
  std::size_t run_id = 0;
  Dimensions dims;
  std::size_t horizon = 0;
  std::string adversary;
  NoiseMode noise = NoiseMode::Correlated;
  bool clipped = false;
  double sigma = 0.0;
  double epsilon = 0.0;
  LearnerKind learner = LearnerKind::UniformRandom;
  std::optional<Tuning> tuning;
  std::uint64_t seed = 0;
  double regret = 0.0;
  double hindsight_best_loss = 0.0;
  double cum_loss = 0.0;
};

std::string csv_header();
std::string csv_row(const RunRecord& record);

struct SimulationResult {
  ExperimentConfig config;
  double sigma = 0.0;
  double epsilon = 0.0;
  std::optional<Tuning> tuning;
  std::vector<RunRecord> rows;
  RegretSummary summary;
  // mean - 2 se >= bound_value, for correlated runs of the clipped recipe.
  std::optional<bool> bound_check;
};

// Runs config.reps replications. If `transcripts` is given, every game's
// transcript is written to it in replication order (hidden losses
// included when config.record_hidden).
SimulationResult simulate(const ExperimentConfig& config,
                          std::ostream* transcripts = nullptr);

struct SweepResult {
  std::vector<SimulationResult> correlated;
  std::vector<SimulationResult> independent;
  // ln(mean regret / sqrt(dT)) against ln k.
  ScalingFit correlated_fit;
  ScalingFit independent_fit;
  // ln(mean regret) against ln k, for reference.
  ScalingFit correlated_raw_fit;
  ScalingFit independent_raw_fit;
};

// Runs the template at every k in `ks` under both noise modes. When
// t_factor is set, T = t_factor * k * d at each point; otherwise the
// template's horizon is used throughout.
SweepResult sweep(const ExperimentConfig& config_template,
                  const std::vector<std::size_t>& ks,
                  std::optional<std::size_t> t_factor);

void write_csv(std::ostream& os, const std::vector<RunRecord>& rows);
// Single JSON record mirroring RegretSummary plus the configuration echo.
std::string summary_document(const SimulationResult& result);
std::string sweep_document(const SweepResult& result);

}  // namespace combandit
