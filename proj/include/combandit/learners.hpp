#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "combandit/action_sets.hpp"
#include "combandit/game.hpp"

namespace combandit {

enum class LearnerKind {
  FixedAction,
  UniformRandom,
  RoundRobin,
  Greedy,
  PerTaskExp3,
  EnumeratedExp2,
};

// "fixed", "uniform", "round_robin", "greedy", "exp3", "exp2".
std::string_view learner_kind_name(LearnerKind kind);
LearnerKind parse_learner_kind(std::string_view name);
bool uses_tuning(LearnerKind kind);

struct Tuning {
  double eta = 0.0;
  double gamma = 0.0;
};

struct LearnerSpec {
  LearnerKind kind = LearnerKind::UniformRandom;
  // Unset values fall back to default_tuning().
  std::optional<double> eta;
  std::optional<double> gamma;
  // FixedAction plays this; unset means the first action in canonical order.
  std::optional<Action> action;
  std::uint64_t cap = kDefaultEnumerationCap;

  void validate() const;
};

// eta = sqrt(ln|S| / (T k^2)), gamma = min(1/2, sqrt(d/T)).
Tuning default_tuning(const ActionSet& set, std::size_t horizon);
Tuning effective_tuning(const LearnerSpec& spec, const ActionSet& set,
                        std::size_t horizon);

LearnerFactory make_learner_factory(const LearnerSpec& spec);

std::unique_ptr<Learner> fixed_action(const ActionSet& set, Action x);
std::unique_ptr<Learner> uniform_random(const ActionSet& set,
                                        std::uint64_t seed);
// Plays set.cyclic(t - 1) in round t.
std::unique_ptr<Learner> round_robin(const ActionSet& set);
// Follow-the-leader on per-coordinate averages of lambda_t / k, after one
// cyclic sweep that covers every coordinate. Ties go to the earliest
// action in canonical order. Deterministic.
std::unique_ptr<Learner> greedy(const ActionSet& set,
                                std::uint64_t cap = kDefaultEnumerationCap);

// k independent EXP3 instances over n arms (Multitask only). Task j mixes
// its exponential weights with uniform exploration gamma, and after each
// round feeds its chosen arm the importance-weighted surrogate
//   (lambda_t / k - b_t) / p_{t,j}(arm),
// where b_t is the running mean of lambda_s / k over s <= t. Weights are
// kept as normalized log-probabilities.
class PerTaskExp3 final : public Learner {
 public:
  PerTaskExp3(const ActionSet& set, double eta, double gamma,
              std::uint64_t seed);

  Action choose(const History& history) override;
  void observe(double observed_loss) override;
  bool is_deterministic() const override { return false; }
  std::string name() const override { return "exp3"; }

  // Exponential-weights distribution of task j (before exploration mixing).
  std::vector<double> weights(std::size_t task) const;
  // Sampling distribution of task j.
  std::vector<double> probabilities(std::size_t task) const;

 private:
  const ActionSet* set_;
  double eta_;
  double gamma_;
  RandomStream rng_;
  std::vector<std::vector<double>> log_weights_;
  std::vector<std::size_t> chosen_;
  std::vector<double> chosen_prob_;
  double baseline_ = 0.0;
  std::size_t rounds_ = 0;
};

// Exponential weights over the enumerated action set with uniform
// exploration and the least-squares loss estimate
//   est = M^+ x_t lambda_t,   M = E_{x ~ p_t}[x x^T],
// where the pseudo-inverse is taken on span(S).
class EnumeratedExp2 final : public Learner {
 public:
  EnumeratedExp2(const ActionSet& set, double eta, double gamma,
                 std::uint64_t seed, std::uint64_t cap);

  Action choose(const History& history) override;
  void observe(double observed_loss) override;
  bool is_deterministic() const override { return false; }
  std::string name() const override { return "exp2"; }

  const std::vector<Action>& actions() const { return actions_; }
  std::vector<double> weights() const;
  std::vector<double> probabilities() const;

 private:
  std::vector<Action> actions_;
  std::size_t dim_;
  std::size_t span_rank_;
  double eta_;
  double gamma_;
  RandomStream rng_;
  std::vector<double> log_weights_;
  std::vector<double> current_p_;
  std::size_t chosen_ = 0;
};

std::unique_ptr<PerTaskExp3> per_task_exp3(const ActionSet& set, double eta,
                                           double gamma, std::uint64_t seed);
std::unique_ptr<EnumeratedExp2> enumerated_exp2(
    const ActionSet& set, double eta, double gamma, std::uint64_t seed,
    std::uint64_t cap = kDefaultEnumerationCap);

// Dimension of span(actions).
std::size_t span_rank(std::span<const Action> actions);

// M^+ x lambda for M = sum_x p(x) x x^T, restricted to the top `rank`
// eigen-directions of M. Throws NumericalError if M is singular on that
// subspace.
std::vector<double> least_squares_loss_estimate(std::span<const Action> actions,
                                                std::span<const double> p,
                                                const Action& played,
                                                double observed,
                                                std::size_t rank);

// Mixes a distribution with the uniform one: (1 - gamma) q + gamma / |q|.
std::vector<double> mix_uniform(std::span<const double> q, double gamma);

}  // namespace combandit
