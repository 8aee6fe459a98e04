#include "combandit/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace combandit {
namespace {

[[noreturn]] void reject(const std::string& what) {
  throw std::invalid_argument(what);
}

// log-sum-exp normalization in place; returns the normalized probabilities.
std::vector<double> normalize_log_weights(std::vector<double>& log_w) {
  const double top = *std::max_element(log_w.begin(), log_w.end());
  double total = 0.0;
  for (double v : log_w) total += std::exp(v - top);
  const double log_z = top + std::log(total);
  std::vector<double> p(log_w.size());
  for (std::size_t i = 0; i < log_w.size(); ++i) {
    log_w[i] -= log_z;
    p[i] = std::exp(log_w[i]);
  }
  return p;
}

std::vector<double> softmax(const std::vector<double>& log_w) {
  std::vector<double> copy = log_w;
  return normalize_log_weights(copy);
}

std::size_t sample_index(std::span<const double> p, RandomStream& rng) {
  const double u = rng.next_uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return i;
  }
  // Rounding left u above the accumulated mass: take the last positive entry.
  for (std::size_t i = p.size(); i-- > 0;) {
    if (p[i] > 0.0) return i;
  }
  return p.size() - 1;
}

class FixedActionLearner final : public Learner {
 public:
  explicit FixedActionLearner(Action x) : x_(std::move(x)) {}
  Action choose(const History&) override { return x_; }
  void observe(double) override {}
  bool is_deterministic() const override { return true; }
  std::string name() const override { return "fixed"; }

 private:
  Action x_;
};

class UniformRandomLearner final : public Learner {
 public:
  UniformRandomLearner(const ActionSet& set, std::uint64_t seed)
      : set_(&set), rng_(seed) {}
  Action choose(const History&) override { return set_->sample(rng_); }
  void observe(double) override {}
  bool is_deterministic() const override { return false; }
  std::string name() const override { return "uniform"; }

 private:
  const ActionSet* set_;
  RandomStream rng_;
};

class RoundRobinLearner final : public Learner {
 public:
  explicit RoundRobinLearner(const ActionSet& set) : set_(&set) {}
  Action choose(const History& h) override {
    return set_->cyclic(h.round() - 1);
  }
  void observe(double) override {}
  bool is_deterministic() const override { return true; }
  std::string name() const override { return "round_robin"; }

 private:
  const ActionSet* set_;
};

class GreedyLearner final : public Learner {
 public:
  GreedyLearner(const ActionSet& set, std::uint64_t cap)
      : set_(&set),
        actions_(set.enumerate(cap)),
        sums_(set.dims().d, 0.0),
        counts_(set.dims().d, 0) {}

  Action choose(const History& h) override {
    const std::size_t t = h.round();
    if (t <= set_->choice_range()) {
      last_ = set_->cyclic(t - 1);
      return last_;
    }
    std::vector<double> mean(sums_.size(), 0.0);
    for (std::size_t i = 0; i < sums_.size(); ++i) {
      if (counts_[i]) mean[i] = sums_[i] / static_cast<double>(counts_[i]);
    }
    std::size_t best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < actions_.size(); ++a) {
      const double v = actions_[a].dot(mean);
      if (v < best_value) {
        best_value = v;
        best = a;
      }
    }
    last_ = actions_[best];
    return last_;
  }

  void observe(double lambda) override {
    const double surrogate = lambda / static_cast<double>(set_->dims().k);
    for (std::size_t i : last_.support()) {
      sums_[i] += surrogate;
      ++counts_[i];
    }
  }

  bool is_deterministic() const override { return true; }
  std::string name() const override { return "greedy"; }

 private:
  const ActionSet* set_;
  std::vector<Action> actions_;
  std::vector<double> sums_;
  std::vector<std::size_t> counts_;
  Action last_;
};

}  // namespace

std::string_view learner_kind_name(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::FixedAction:
      return "fixed";
    case LearnerKind::UniformRandom:
      return "uniform";
    case LearnerKind::RoundRobin:
      return "round_robin";
    case LearnerKind::Greedy:
      return "greedy";
    case LearnerKind::PerTaskExp3:
      return "exp3";
    case LearnerKind::EnumeratedExp2:
      return "exp2";
  }
  return "unknown";
}

LearnerKind parse_learner_kind(std::string_view name) {
  for (auto kind : {LearnerKind::FixedAction, LearnerKind::UniformRandom,
                    LearnerKind::RoundRobin, LearnerKind::Greedy,
                    LearnerKind::PerTaskExp3, LearnerKind::EnumeratedExp2}) {
    if (learner_kind_name(kind) == name) return kind;
  }
  reject("unknown learner '" + std::string(name) + "'");
}

bool uses_tuning(LearnerKind kind) {
  return kind == LearnerKind::PerTaskExp3 ||
         kind == LearnerKind::EnumeratedExp2;
}

void LearnerSpec::validate() const {
  if (eta && !(std::isfinite(*eta) && *eta >= 0.0)) {
    reject("eta must be finite and nonnegative");
  }
  if (gamma && !(std::isfinite(*gamma) && *gamma >= 0.0 && *gamma <= 1.0)) {
    reject("gamma must lie in [0, 1]");
  }
}

Tuning default_tuning(const ActionSet& set, std::size_t horizon) {
  if (horizon < 1) reject("horizon must be at least 1");
  // ln|S| as a sum of logs, so huge sets do not saturate.
  double log_size = 0.0;
  const auto& dims = set.dims();
  for (std::size_t j = 0; j < set.choice_slots(); ++j) {
    const std::size_t factor =
        set.family() == Family::Matching ? dims.n - j : dims.n;
    log_size += std::log(static_cast<double>(factor));
  }
  const double T = static_cast<double>(horizon);
  const double k = static_cast<double>(dims.k);
  return {std::sqrt(log_size / (T * k * k)),
          std::min(0.5, std::sqrt(static_cast<double>(dims.d) / T))};
}

Tuning effective_tuning(const LearnerSpec& spec, const ActionSet& set,
                        std::size_t horizon) {
  const Tuning defaults = default_tuning(set, horizon);
  return {spec.eta.value_or(defaults.eta), spec.gamma.value_or(defaults.gamma)};
}

LearnerFactory make_learner_factory(const LearnerSpec& spec) {
  spec.validate();
  return [spec](const ActionSet& set, std::size_t horizon,
                std::uint64_t seed) -> std::unique_ptr<Learner> {
    const Tuning tuning = effective_tuning(spec, set, horizon);
    switch (spec.kind) {
      case LearnerKind::FixedAction:
        return fixed_action(set,
                            spec.action ? *spec.action : set.cyclic(0));
      case LearnerKind::UniformRandom:
        return uniform_random(set, seed);
      case LearnerKind::RoundRobin:
        return round_robin(set);
      case LearnerKind::Greedy:
        return greedy(set, spec.cap);
      case LearnerKind::PerTaskExp3:
        return per_task_exp3(set, tuning.eta, tuning.gamma, seed);
      case LearnerKind::EnumeratedExp2:
        return enumerated_exp2(set, tuning.eta, tuning.gamma, seed, spec.cap);
    }
    reject("unknown learner kind");
  };
}

std::unique_ptr<Learner> fixed_action(const ActionSet& set, Action x) {
  if (!set.contains(x)) {
    reject("fixed action " + x.to_string() + " is not in the action set");
  }
  return std::make_unique<FixedActionLearner>(std::move(x));
}

std::unique_ptr<Learner> uniform_random(const ActionSet& set,
                                        std::uint64_t seed) {
  return std::make_unique<UniformRandomLearner>(set, seed);
}

std::unique_ptr<Learner> round_robin(const ActionSet& set) {
  return std::make_unique<RoundRobinLearner>(set);
}

std::unique_ptr<Learner> greedy(const ActionSet& set, std::uint64_t cap) {
  return std::make_unique<GreedyLearner>(set, cap);
}

std::vector<double> mix_uniform(std::span<const double> q, double gamma) {
  std::vector<double> p(q.size());
  const double floor = gamma / static_cast<double>(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    p[i] = (1.0 - gamma) * q[i] + floor;
  }
  return p;
}

// -- PerTaskExp3 --------------------------------------------------------------

PerTaskExp3::PerTaskExp3(const ActionSet& set, double eta, double gamma,
                         std::uint64_t seed)
    : set_(&set), eta_(eta), gamma_(gamma), rng_(seed) {
  if (set.family() != Family::Multitask) {
    reject("per-task EXP3 needs a multitask action set");
  }
  if (!(eta >= 0.0) || !(gamma >= 0.0 && gamma <= 1.0)) {
    reject("per-task EXP3 needs eta >= 0 and gamma in [0, 1]");
  }
  const auto& dims = set.dims();
  log_weights_.assign(
      dims.k, std::vector<double>(dims.n, -std::log(static_cast<double>(dims.n))));
  chosen_.assign(dims.k, 0);
  chosen_prob_.assign(dims.k, 0.0);
}

std::vector<double> PerTaskExp3::weights(std::size_t task) const {
  return softmax(log_weights_.at(task));
}

std::vector<double> PerTaskExp3::probabilities(std::size_t task) const {
  return mix_uniform(weights(task), gamma_);
}

Action PerTaskExp3::choose(const History&) {
  for (std::size_t j = 0; j < log_weights_.size(); ++j) {
    const auto p = probabilities(j);
    chosen_[j] = sample_index(p, rng_);
    chosen_prob_[j] = p[chosen_[j]];
  }
  return set_->from_choices(chosen_);
}

void PerTaskExp3::observe(double lambda) {
  const double surrogate = lambda / static_cast<double>(set_->dims().k);
  ++rounds_;
  baseline_ += (surrogate - baseline_) / static_cast<double>(rounds_);
  const double centered = surrogate - baseline_;
  for (std::size_t j = 0; j < log_weights_.size(); ++j) {
    log_weights_[j][chosen_[j]] -= eta_ * centered / chosen_prob_[j];
    normalize_log_weights(log_weights_[j]);
  }
}

std::unique_ptr<PerTaskExp3> per_task_exp3(const ActionSet& set, double eta,
                                           double gamma, std::uint64_t seed) {
  return std::make_unique<PerTaskExp3>(set, eta, gamma, seed);
}

// -- EnumeratedExp2 -----------------------------------------------------------

EnumeratedExp2::EnumeratedExp2(const ActionSet& set, double eta, double gamma,
                               std::uint64_t seed, std::uint64_t cap)
    : actions_(set.enumerate(cap)),
      dim_(set.dims().d),
      span_rank_(span_rank(actions_)),
      eta_(eta),
      gamma_(gamma),
      rng_(seed) {
  if (!(eta >= 0.0) || !(gamma >= 0.0 && gamma <= 1.0)) {
    reject("EXP2 needs eta >= 0 and gamma in [0, 1]");
  }
  log_weights_.assign(actions_.size(),
                      -std::log(static_cast<double>(actions_.size())));
}

std::vector<double> EnumeratedExp2::weights() const {
  return softmax(log_weights_);
}

std::vector<double> EnumeratedExp2::probabilities() const {
  return mix_uniform(weights(), gamma_);
}

Action EnumeratedExp2::choose(const History&) {
  current_p_ = probabilities();
  chosen_ = sample_index(current_p_, rng_);
  return actions_[chosen_];
}

void EnumeratedExp2::observe(double lambda) {
  const auto estimate = least_squares_loss_estimate(
      actions_, current_p_, actions_[chosen_], lambda, span_rank_);
  for (std::size_t a = 0; a < actions_.size(); ++a) {
    log_weights_[a] -= eta_ * actions_[a].dot(estimate);
  }
  normalize_log_weights(log_weights_);
}

std::unique_ptr<EnumeratedExp2> enumerated_exp2(const ActionSet& set,
                                                double eta, double gamma,
                                                std::uint64_t seed,
                                                std::uint64_t cap) {
  return std::make_unique<EnumeratedExp2>(set, eta, gamma, seed, cap);
}

}  // namespace combandit
