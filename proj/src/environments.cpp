#include "combandit/environments.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace combandit {
namespace {

[[noreturn]] void reject(const std::string& what) {
  throw std::invalid_argument(what);
}

}  // namespace

std::string_view noise_mode_name(NoiseMode mode) {
  return mode == NoiseMode::Correlated ? "correlated" : "independent";
}

NoiseMode parse_noise_mode(std::string_view name) {
  if (name == "correlated") return NoiseMode::Correlated;
  if (name == "independent") return NoiseMode::Independent;
  reject("unknown noise mode '" + std::string(name) + "'");
}

double clip(double a) { return std::max(std::min(a, 1.0), 0.0); }

double compute_epsilon(double sigma, const Dimensions& dims,
                       std::size_t horizon, GapVariant variant) {
  if (horizon < 1) reject("horizon must be at least 1");
  if (!(sigma >= 0.0)) reject("sigma must be nonnegative");
  const double divisor = variant == GapVariant::Multitask ? 4.0 : 8.0;
  const double kd = static_cast<double>(dims.k) * static_cast<double>(dims.d);
  return sigma * std::sqrt(kd / (divisor * static_cast<double>(horizon)));
}

double compute_sigma(std::size_t horizon) {
  if (horizon < 1) reject("horizon must be at least 1");
  return 1.0 / std::sqrt(192.0 + 96.0 * std::log(static_cast<double>(horizon)));
}

GapVariant gap_variant_for(Family family) {
  return family == Family::Matching ? GapVariant::Ranking
                                    : GapVariant::Multitask;
}

Dimensions loss_dims(const Dimensions& dims) {
  return dims.family == Family::LayeredPath ? induced_multitask_dims(dims)
                                            : dims;
}

Action sample_optimal_action(const ActionSet& set, std::uint64_t seed) {
  RandomStream rng(derive_seed(seed, stream_tag::kOptimum));
  return set.sample(rng);
}

void AdversaryConfig::validate() const {
  dims.validate();
  if (horizon < 1) reject("horizon must be at least 1");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    reject("sigma must be finite and nonnegative");
  }
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    reject("epsilon must be finite and nonnegative");
  }
  if (!build_action_set(dims).contains(x_star)) {
    reject("x_star " + x_star.to_string() + " is not in the action set");
  }
  if (masked_coordinate && !x_star.test(*masked_coordinate)) {
    reject("masked coordinate must be active in x_star");
  }
  if (theorem4 && horizon < dims.k * dims.d) {
    reject("clipped recipe requires T >= k*d");
  }
}

AdversaryConfig make_gaussian_adversary(const ActionSet& set,
                                        std::size_t horizon, double sigma,
                                        NoiseMode mode, bool clipped,
                                        std::uint64_t seed) {
  AdversaryConfig config;
  config.dims = set.dims();
  config.horizon = horizon;
  config.sigma = sigma;
  config.epsilon = compute_epsilon(sigma, loss_dims(set.dims()), horizon,
                                   gap_variant_for(set.family()));
  config.noise_mode = mode;
  config.clipped = clipped;
  config.x_star = sample_optimal_action(set, seed);
  config.seed = seed;
  config.validate();
  return config;
}

AdversaryConfig make_theorem4_adversary(const ActionSet& set,
                                        std::size_t horizon,
                                        std::uint64_t seed, NoiseMode mode) {
  const Dimensions& dims = set.dims();
  if (horizon < dims.k * dims.d) {
    reject("clipped recipe requires T >= k*d (T=" +
           std::to_string(horizon) +
           ", k*d=" + std::to_string(dims.k * dims.d) + ")");
  }
  AdversaryConfig config = make_gaussian_adversary(
      set, horizon, compute_sigma(horizon), mode, /*clipped=*/true, seed);
  config.theorem4 = true;
  return config;
}

LossDraw draw_loss(const AdversaryConfig& config, std::size_t t) {
  if (t < 1 || t > config.horizon) {
    reject("round " + std::to_string(t) + " outside [1, " +
           std::to_string(config.horizon) + "]");
  }
  const bool is_path = config.dims.family == Family::LayeredPath;
  const Dimensions base = loss_dims(config.dims);

  // Planted coordinates in the loss-generating problem.
  std::vector<double> gap(base.d, 0.0);
  std::optional<ActionSet> paths;
  if (is_path) {
    paths = build_layered_path_graph(config.dims.k, config.dims.d);
    const Action arms = path_to_multitask(*paths, config.x_star);
    for (std::size_t i : arms.support()) gap[i] = config.epsilon;
    if (config.masked_coordinate) {
      const LayeredGraph& g = paths->graph();
      const std::size_t e = *config.masked_coordinate;
      const std::size_t layer = e / (2 * g.width);
      const std::size_t offset = e % (2 * g.width);
      if (offset < g.width) gap[layer * g.width + offset] = 0.0;
    }
  } else {
    for (std::size_t i : config.x_star.support()) gap[i] = config.epsilon;
    if (config.masked_coordinate) gap[*config.masked_coordinate] = 0.0;
  }

  const std::uint64_t key = derive_seed(config.seed, stream_tag::kNoise);
  LossDraw draw;
  draw.loss.values.resize(base.d);
  if (config.noise_mode == NoiseMode::Correlated) {
    const double z = config.sigma * counter_gaussian(key, t - 1);
    draw.noise = {z};
    for (std::size_t i = 0; i < base.d; ++i) {
      draw.loss.values[i] = 0.5 - gap[i] + z;
    }
  } else {
    draw.noise.resize(base.d);
    for (std::size_t i = 0; i < base.d; ++i) {
      const double z = config.sigma * counter_gaussian(key, (t - 1) * base.d + i);
      draw.noise[i] = z;
      draw.loss.values[i] = 0.5 - gap[i] + z;
    }
  }
  if (config.clipped) {
    for (double& v : draw.loss.values) v = clip(v);
  }
  if (is_path) draw.loss = shortest_path_losses(draw.loss, *paths);
  return draw;
}

LossVector shortest_path_losses(const LossVector& multitask_losses,
                                const ActionSet& graph) {
  if (graph.family() != Family::LayeredPath) {
    reject("shortest_path_losses needs a layered path set");
  }
  const LayeredGraph& g = graph.graph();
  if (multitask_losses.size() != g.layers * g.width) {
    reject("expected " + std::to_string(g.layers * g.width) +
           " multitask losses, got " +
           std::to_string(multitask_losses.size()));
  }
  LossVector edges;
  edges.values.assign(g.edge_count(), 0.0);
  for (std::size_t layer = 0; layer < g.layers; ++layer) {
    for (std::size_t i = 0; i < g.width; ++i) {
      edges.values[g.fan_out_edge(layer, i)] =
          multitask_losses.values[layer * g.width + i];
    }
  }
  return edges;
}

}  // namespace combandit
