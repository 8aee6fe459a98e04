#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "combandit/action_sets.hpp"
#include "combandit/environments.hpp"
#include "combandit/game.hpp"

namespace combandit {

// -- Regret -------------------------------------------------------------------

struct RegretBreakdown {
  double regret = 0.0;
  double learner_loss = 0.0;         // sum_t lambda_t
  double hindsight_best_loss = 0.0;  // min_x sum_t <L_t, x>
  Action hindsight_best;             // first minimizer in canonical order
};

// Hindsight minimum by full enumeration of S; throws CapExceeded.
RegretBreakdown regret_breakdown(const Transcript& transcript,
                                 const ActionSet& set,
                                 std::uint64_t cap = kDefaultEnumerationCap);
double empirical_regret(const Transcript& transcript, const ActionSet& set,
                        std::uint64_t cap = kDefaultEnumerationCap);

// Expected regret of the uniform learner against an unclipped, noiseless
// multitask adversary: eps * k * T * (1 - 1/n).
double uniform_regret_closed_form(double epsilon, std::size_t k,
                                  std::size_t horizon, std::size_t n);

enum class BoundForm { Lemma1, Theorem4, Lemma3 };

// sigma k^{3/2} sqrt(dT) / 8 for Lemma1 and Lemma3 (caller's sigma), and
// with sigma = compute_sigma(T) and divisor 16 for Theorem4 (the sigma
// argument is ignored; requires T >= kd).
double lower_bound_value(const Dimensions& dims, std::size_t horizon,
                         BoundForm form, double sigma = 0.0);

struct RegretSummary {
  std::vector<double> regrets;
  double mean = 0.0;
  double standard_error = 0.0;
  std::vector<Action> hindsight_best;
  double bound_value = 0.0;

  std::size_t reps() const { return regrets.size(); }
  double mean_minus_2se() const { return mean - 2.0 * standard_error; }
};

// Mean and normal-approximation standard error (sample sd / sqrt(reps)).
RegretSummary summarize(std::vector<double> regrets,
                        std::vector<Action> hindsight_best,
                        double bound_value);

// -- Scaling ------------------------------------------------------------------

struct ScalingPoint {
  double k = 0.0;
  double value = 0.0;
};

struct ScalingFit {
  std::vector<ScalingPoint> points;
  double exponent = 0.0;
  double intercept = 0.0;
  // Root-mean-square residual of the log-log regression.
  double residual = 0.0;
};

// Ordinary least squares of ln(value) on ln(k). Needs >= 3 distinct k
// values and positive values.
ScalingFit scaling_fit(std::span<const ScalingPoint> points);

// -- Proof kernels ------------------------------------------------------------

// KL between two Gaussians with common variance whose means differ by gap.
double gaussian_kl(double mean_gap, double variance);

// The same divergence by direct numerical integration of p log(p/q);
// used by the verification suites.
double gaussian_kl_quadrature(double mean_gap, double variance);

struct VarianceReport {
  double estimate = 0.0;
  double target = 0.0;
  std::size_t samples = 0;

  double relative_error() const;
};

// Sample variance of <L'_t, x> over `samples` rounds of an unclipped
// adversary, against k^2 sigma^2 (correlated) or k sigma^2 (independent),
// k counting the loss-carrying coordinates of x.
VarianceReport variance_report(const AdversaryConfig& adversary,
                               const Action& x, std::size_t samples);

struct RowIdentityReport {
  std::vector<std::size_t> counts;  // T_j for each candidate arm of block j
  std::size_t total = 0;
  std::size_t horizon = 0;
  bool holds = false;
};

// Fixes the planted arms of every block except j (fixed_choices[j] is
// ignored), and for each candidate arm of block j runs the learner under
// the law where that arm gets no gap (unclipped, correlated, sigma as
// given, epsilon from the multitask schedule, one shared noise
// realization). Counts must sum to T exactly.
RowIdentityReport verify_tj_row_identity(const LearnerFactory& learners,
                                         const ActionSet& set,
                                         std::span<const std::size_t> fixed_choices,
                                         std::size_t j, std::size_t horizon,
                                         double sigma, std::uint64_t seed);

struct AverageCountReport {
  std::uint64_t total = 0;        // sum over x in S of T_j under P_{x,-j}
  std::uint64_t cardinality = 0;  // |S|
  std::size_t horizon = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  bool holds = false;

  double average() const;  // total / |S|
};

// (1/n^k) sum_{x in S} T_j == T/n, checked as total * n == |S| * T.
AverageCountReport verify_tj_average(const LearnerFactory& learners,
                                     const ActionSet& set, std::size_t j,
                                     std::size_t horizon, double sigma,
                                     std::uint64_t seed);

// ((n-k)!/n!) sum_{x in S} T_j <= T/(n-k+1) on a matching set, checked as
// total * (n-k+1) <= T * |S|.
AverageCountReport verify_ranking_tj_bound(
    const LearnerFactory& learners, const ActionSet& set, std::size_t j,
    std::size_t horizon, double sigma, std::uint64_t seed,
    std::uint64_t cap = kDefaultEnumerationCap);

struct ClipEventReport {
  std::size_t reps = 0;
  std::size_t events = 0;       // games with eps > 1/4 or some Z_t > 1/4
  std::size_t clip_events = 0;  // games where some L'_t(i) left [0, 1]
  double frequency = 0.0;
  double confidence = 0.99;
  double upper_confidence = 0.0;  // one-sided Clopper-Pearson
  double union_bound = 0.0;       // T exp(-(1/4)^2 / (2 sigma^2))
  double target = 0.0;            // epsilon / 8
  bool epsilon_ok = false;        // epsilon <= 1/4
  bool holds = false;
};

// Monte Carlo over `reps` games of the adversary's law (fresh noise per
// game, derived from `seed`).
ClipEventReport verify_clip_event(const AdversaryConfig& adversary,
                                  std::size_t reps, std::uint64_t seed,
                                  double confidence = 0.99);

// Maps a layered-path transcript onto the multitask problem it simulates:
// actions through path_to_multitask, losses from the fan-out edges.
Transcript path_transcript_to_multitask(const Transcript& transcript,
                                        const ActionSet& paths);

}  // namespace combandit
