#include <boost/math/distributions/binomial.hpp>
#include <cmath>
#include <stdexcept>
#include <string>

#include "combandit/analysis.hpp"

namespace combandit {
namespace {

[[noreturn]] void reject(const std::string& what) {
  throw std::invalid_argument(what);
}

// Unclipped correlated law with the planted coordinate of slot j switched
// off. The noise key depends on `seed` only, so every x shares one
// realization.
AdversaryConfig masked_law(const ActionSet& set, const Action& x,
                           std::size_t j, std::size_t horizon, double sigma,
                           std::uint64_t seed) {
  AdversaryConfig config;
  config.dims = set.dims();
  config.horizon = horizon;
  config.sigma = sigma;
  config.epsilon = compute_epsilon(sigma, loss_dims(set.dims()), horizon,
                                   gap_variant_for(set.family()));
  config.noise_mode = NoiseMode::Correlated;
  config.clipped = false;
  config.x_star = x;
  config.seed = seed;
  config.masked_coordinate = x.support().at(j);
  config.validate();
  return config;
}

std::size_t masked_count(const LearnerFactory& learners, const ActionSet& set,
                         const Action& x, std::size_t j, std::size_t horizon,
                         double sigma, std::uint64_t seed) {
  const AdversaryConfig config = masked_law(set, x, j, horizon, sigma, seed);
  auto learner =
      learners(set, horizon, derive_seed(seed, stream_tag::kLearner));
  if (!learner->is_deterministic()) {
    reject("learner '" + learner->name() +
           "' is randomized; the counting identities need a deterministic one");
  }
  return run_game(*learner, config, set).planted_counts.at(j);
}

}  // namespace

double AverageCountReport::average() const {
  return cardinality ? static_cast<double>(total) /
                           static_cast<double>(cardinality)
                     : 0.0;
}

RowIdentityReport verify_tj_row_identity(
    const LearnerFactory& learners, const ActionSet& set,
    std::span<const std::size_t> fixed_choices, std::size_t j,
    std::size_t horizon, double sigma, std::uint64_t seed) {
  if (set.family() != Family::Multitask) {
    reject("row identity check needs a multitask set");
  }
  if (j >= set.dims().k) reject("block index out of range");
  std::vector<std::size_t> choices(fixed_choices.begin(), fixed_choices.end());
  if (choices.size() != set.dims().k) reject("need one fixed arm per block");

  RowIdentityReport report;
  report.horizon = horizon;
  for (std::size_t arm = 0; arm < set.dims().n; ++arm) {
    choices[j] = arm;
    const Action x = set.from_choices(choices);
    const std::size_t count =
        horizon ? masked_count(learners, set, x, j, horizon, sigma, seed) : 0;
    report.counts.push_back(count);
    report.total += count;
  }
  report.holds = report.total == horizon;
  return report;
}

AverageCountReport verify_tj_average(const LearnerFactory& learners,
                                     const ActionSet& set, std::size_t j,
                                     std::size_t horizon, double sigma,
                                     std::uint64_t seed) {
  if (set.family() != Family::Multitask) {
    reject("averaging identity needs a multitask set");
  }
  if (j >= set.dims().k) reject("block index out of range");
  AverageCountReport report;
  report.horizon = horizon;
  report.n = set.dims().n;
  report.k = set.dims().k;
  for (const Action& x : set.enumerate()) {
    ++report.cardinality;
    if (horizon) {
      report.total += masked_count(learners, set, x, j, horizon, sigma, seed);
    }
  }
  report.holds = report.total * report.n == report.cardinality * horizon;
  return report;
}

AverageCountReport verify_ranking_tj_bound(const LearnerFactory& learners,
                                           const ActionSet& set, std::size_t j,
                                           std::size_t horizon, double sigma,
                                           std::uint64_t seed,
                                           std::uint64_t cap) {
  if (set.family() != Family::Matching) {
    reject("ranking bound check needs a matching set");
  }
  const auto& dims = set.dims();
  if (2 * dims.k > dims.n) reject("ranking bound check requires k <= n/2");
  if (j >= dims.k) reject("row index out of range");
  AverageCountReport report;
  report.horizon = horizon;
  report.n = dims.n;
  report.k = dims.k;
  for (const Action& x : set.enumerate(cap)) {
    ++report.cardinality;
    if (horizon) {
      report.total += masked_count(learners, set, x, j, horizon, sigma, seed);
    }
  }
  report.holds = report.total * (dims.n - dims.k + 1) <=
                 static_cast<std::uint64_t>(horizon) * report.cardinality;
  return report;
}

ClipEventReport verify_clip_event(const AdversaryConfig& adversary,
                                  std::size_t reps, std::uint64_t seed,
                                  double confidence) {
  if (reps < 1) reject("clip-event check needs at least one game");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    reject("confidence must lie in (0, 1)");
  }
  ClipEventReport report;
  report.reps = reps;
  report.confidence = confidence;
  report.epsilon_ok = adversary.epsilon <= 0.25;
  report.target = adversary.epsilon / 8.0;
  const double s2 = adversary.sigma * adversary.sigma;
  report.union_bound =
      s2 > 0.0 ? static_cast<double>(adversary.horizon) *
                     std::exp(-(0.25 * 0.25) / (2.0 * s2))
               : 0.0;

  AdversaryConfig game = adversary;
  game.clipped = false;
  for (std::size_t r = 0; r < reps; ++r) {
    game.seed = derive_seed(seed, stream_tag::kReplication, r);
    bool noise_event = !report.epsilon_ok;
    bool clip_event = false;
    for (std::size_t t = 1; t <= game.horizon; ++t) {
      const LossDraw draw = draw_loss(game, t);
      for (double z : draw.noise) noise_event = noise_event || z > 0.25;
      for (double v : draw.loss.values) {
        clip_event = clip_event || v < 0.0 || v > 1.0;
      }
    }
    report.events += noise_event;
    report.clip_events += clip_event;
  }
  report.frequency =
      static_cast<double>(report.events) / static_cast<double>(reps);
  report.upper_confidence =
      boost::math::binomial_distribution<>::find_upper_bound_on_p(
          static_cast<double>(reps), static_cast<double>(report.events),
          1.0 - confidence);
  report.holds = report.epsilon_ok && report.upper_confidence <= report.target;
  return report;
}

}  // namespace combandit
