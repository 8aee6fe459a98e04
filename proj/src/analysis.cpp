#include "combandit/analysis.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace combandit {
namespace {

[[noreturn]] void reject(const std::string& what) {
  throw std::invalid_argument(what);
}

}  // namespace

RegretBreakdown regret_breakdown(const Transcript& tr, const ActionSet& set,
                                 std::uint64_t cap) {
  if (tr.hidden_losses.size() != tr.actions.size()) {
    reject("transcript has no hidden losses");
  }
  const auto actions = set.enumerate(cap);
  RegretBreakdown out;
  for (double lambda : tr.observed) out.learner_loss += lambda;

  out.hindsight_best_loss = std::numeric_limits<double>::infinity();
  for (const Action& x : actions) {
    double total = 0.0;
    for (const LossVector& loss : tr.hidden_losses) total += x.dot(loss.values);
    if (total < out.hindsight_best_loss) {
      out.hindsight_best_loss = total;
      out.hindsight_best = x;
    }
  }
  out.regret = out.learner_loss - out.hindsight_best_loss;
  return out;
}

double empirical_regret(const Transcript& tr, const ActionSet& set,
                        std::uint64_t cap) {
  return regret_breakdown(tr, set, cap).regret;
}

double uniform_regret_closed_form(double epsilon, std::size_t k,
                                  std::size_t horizon, std::size_t n) {
  return epsilon * static_cast<double>(k) * static_cast<double>(horizon) *
         (1.0 - 1.0 / static_cast<double>(n));
}

double lower_bound_value(const Dimensions& dims, std::size_t horizon,
                         BoundForm form, double sigma) {
  dims.validate();
  if (horizon < 1) reject("horizon must be at least 1");
  double divisor = 8.0;
  if (form == BoundForm::Theorem4) {
    if (horizon < dims.k * dims.d) reject("the clipped-recipe bound requires T >= kd");
    sigma = compute_sigma(horizon);
    divisor = 16.0;
  } else if (!(sigma >= 0.0)) {
    reject("sigma must be nonnegative");
  }
  const double k = static_cast<double>(dims.k);
  return sigma * k * std::sqrt(k) *
         std::sqrt(static_cast<double>(dims.d) * static_cast<double>(horizon)) /
         divisor;
}

RegretSummary summarize(std::vector<double> regrets,
                        std::vector<Action> hindsight_best,
                        double bound_value) {
  if (regrets.empty()) reject("cannot summarize zero replications");
  RegretSummary s;
  const double reps = static_cast<double>(regrets.size());
  double sum = 0.0;
  for (double r : regrets) sum += r;
  s.mean = sum / reps;
  if (regrets.size() > 1) {
    double ss = 0.0;
    for (double r : regrets) ss += (r - s.mean) * (r - s.mean);
    s.standard_error = std::sqrt(ss / (reps - 1.0)) / std::sqrt(reps);
  }
  s.regrets = std::move(regrets);
  s.hindsight_best = std::move(hindsight_best);
  s.bound_value = bound_value;
  return s;
}

ScalingFit scaling_fit(std::span<const ScalingPoint> points) {
  if (points.size() < 3) reject("scaling fit needs at least 3 points");
  std::vector<double> distinct;
  for (const auto& p : points) {
    if (!(p.k > 0.0)) reject("scaling fit needs positive k");
    if (!(p.value > 0.0)) {
      reject("scaling fit needs positive values (got " +
             std::to_string(p.value) + " at k=" + std::to_string(p.k) + ")");
    }
    bool seen = false;
    for (double k : distinct) seen = seen || k == p.k;
    if (!seen) distinct.push_back(p.k);
  }
  if (distinct.size() < 3) reject("scaling fit needs 3 distinct k values");

  const double m = static_cast<double>(points.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& p : points) {
    sx += std::log(p.k);
    sy += std::log(p.value);
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    const double dx = std::log(p.k) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(p.value) - my);
  }
  ScalingFit fit;
  fit.points.assign(points.begin(), points.end());
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  double rss = 0.0;
  for (const auto& p : points) {
    const double r =
        std::log(p.value) - (fit.intercept + fit.exponent * std::log(p.k));
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / m);
  return fit;
}

double gaussian_kl(double mean_gap, double variance) {
  if (!(variance > 0.0)) reject("variance must be positive");
  return mean_gap * mean_gap / (2.0 * variance);
}

double gaussian_kl_quadrature(double mean_gap, double variance) {
  if (!(variance > 0.0)) reject("variance must be positive");
  // Composite Simpson over mu_p +- 16 sd; the integrand is smooth and
  // negligible outside that window.
  const double sd = std::sqrt(variance);
  const double lo = -16.0 * sd, hi = 16.0 * sd;
  constexpr int kIntervals = 20000;
  const double h = (hi - lo) / kIntervals;
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * variance);
  const auto integrand = [&](double x) {
    const double log_p = -x * x / (2.0 * variance);
    const double log_q = -(x - mean_gap) * (x - mean_gap) / (2.0 * variance);
    return norm * std::exp(log_p) * (log_p - log_q);
  };
  double sum = integrand(lo) + integrand(hi);
  for (int i = 1; i < kIntervals; ++i) {
    sum += (i % 2 ? 4.0 : 2.0) * integrand(lo + i * h);
  }
  return sum * h / 3.0;
}

double VarianceReport::relative_error() const {
  if (target == 0.0) return estimate == 0.0 ? 0.0 : INFINITY;
  return std::abs(estimate - target) / target;
}

VarianceReport variance_report(const AdversaryConfig& adversary,
                               const Action& x, std::size_t samples) {
  if (adversary.clipped) reject("variance report needs an unclipped adversary");
  if (samples < 2) reject("variance report needs at least 2 samples");
  AdversaryConfig config = adversary;
  config.horizon = samples;

  // Welford's running variance.
  double mean = 0.0, m2 = 0.0;
  for (std::size_t t = 1; t <= samples; ++t) {
    const double v = x.dot(draw_loss(config, t).loss.values);
    const double delta = v - mean;
    mean += delta / static_cast<double>(t);
    m2 += delta * (v - mean);
  }

  const double active = static_cast<double>(loss_dims(adversary.dims).k);
  const double s2 = adversary.sigma * adversary.sigma;
  VarianceReport report;
  report.samples = samples;
  report.estimate = m2 / static_cast<double>(samples - 1);
  report.target = adversary.noise_mode == NoiseMode::Correlated
                      ? active * active * s2
                      : active * s2;
  return report;
}

Transcript path_transcript_to_multitask(const Transcript& tr,
                                        const ActionSet& paths) {
  const LayeredGraph& g = paths.graph();
  Transcript out;
  out.config = tr.config;
  out.config.dims = induced_multitask_dims(paths.dims());
  out.config.x_star = path_to_multitask(paths, tr.config.x_star);
  out.config.masked_coordinate.reset();
  out.observed = tr.observed;
  out.noise = tr.noise;
  for (const Action& x : tr.actions) {
    out.actions.push_back(path_to_multitask(paths, x));
  }
  for (const LossVector& loss : tr.hidden_losses) {
    LossVector arms;
    arms.values.resize(g.layers * g.width);
    for (std::size_t layer = 0; layer < g.layers; ++layer) {
      for (std::size_t i = 0; i < g.width; ++i) {
        arms.values[layer * g.width + i] =
            loss.values[g.fan_out_edge(layer, i)];
      }
    }
    out.hidden_losses.push_back(std::move(arms));
  }
  const auto& planted = out.config.x_star.support();
  out.planted_counts.assign(planted.size(), 0);
  for (const Action& x : out.actions) {
    for (std::size_t j = 0; j < planted.size(); ++j) {
      if (x.test(planted[j])) ++out.planted_counts[j];
    }
  }
  return out;
}

}  // namespace combandit
