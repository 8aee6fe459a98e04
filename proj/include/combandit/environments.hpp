#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "combandit/action_sets.hpp"

namespace combandit {

enum class NoiseMode { Correlated, Independent };
enum class GapVariant { Multitask, Ranking };

std::string_view noise_mode_name(NoiseMode mode);
NoiseMode parse_noise_mode(std::string_view name);

// Per-round loss, one entry per coordinate of the action set.
struct LossVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  friend bool operator==(const LossVector&, const LossVector&) = default;
};

// Randomized oblivious adversary:
//   L'_t(i) = 1/2 - epsilon * x*(i) + Z_t      (Z_t shared across i), or
//   L'_t(i) = 1/2 - epsilon * x*(i) + Z_t(i)   (independent control),
// optionally clipped coordinate-wise to [0,1]. A LayeredPath instance
// draws the losses of its induced multitask problem and places them on
// the fan-out edges (fan-in edges carry 0).
struct AdversaryConfig {
  Dimensions dims;
  std::size_t horizon = 0;
  double sigma = 0.0;
  double epsilon = 0.0;
  NoiseMode noise_mode = NoiseMode::Correlated;
  bool clipped = false;
  Action x_star;
  std::uint64_t seed = 0;
  // Coordinate of x* that receives no gap (the law with block j's planted
  // arm "switched off"); used by the averaging-identity checks.
  std::optional<std::size_t> masked_coordinate;
  // Built by make_theorem4_adversary.
  bool theorem4 = false;

  // Throws std::invalid_argument when an invariant fails.
  void validate() const;
};

double clip(double a);

double compute_epsilon(double sigma, const Dimensions& dims,
                       std::size_t horizon, GapVariant variant);
// 1 / sqrt(192 + 96 ln T).
double compute_sigma(std::size_t horizon);

// Gap variant used for a family: Ranking for matchings, Multitask otherwise.
GapVariant gap_variant_for(Family family);
// Dimensions whose (k, d) enter epsilon and the regret bound: the induced
// multitask problem for paths, the instance itself otherwise.
Dimensions loss_dims(const Dimensions& dims);

Action sample_optimal_action(const ActionSet& set, std::uint64_t seed);

// Unclipped Gaussian adversary with a given noise scale; epsilon follows
// the family's schedule.
AdversaryConfig make_gaussian_adversary(const ActionSet& set,
                                        std::size_t horizon, double sigma,
                                        NoiseMode mode, bool clipped,
                                        std::uint64_t seed);

// Clipped correlated adversary with sigma = compute_sigma(T) and the
// family's epsilon; requires T >= k*d.
AdversaryConfig make_theorem4_adversary(const ActionSet& set,
                                        std::size_t horizon,
                                        std::uint64_t seed,
                                        NoiseMode mode = NoiseMode::Correlated);

struct LossDraw {
  LossVector loss;
  // Z_t: one value (correlated) or one per loss coordinate (independent).
  std::vector<double> noise;
};

// Round t is 1-based, 1 <= t <= horizon. A pure function of (config, t).
LossDraw draw_loss(const AdversaryConfig& config, std::size_t t);

// Maps multitask losses of the induced problem (d/2 coordinates) onto the
// d edges of the layered graph.
LossVector shortest_path_losses(const LossVector& multitask_losses,
                                const ActionSet& graph);

}  // namespace combandit
