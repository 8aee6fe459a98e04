#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "combandit/analysis.hpp"
#include "combandit/game.hpp"
#include "combandit/learners.hpp"

using namespace combandit;

namespace {

Transcript hand_transcript(const std::vector<std::string>& played,
                           const std::vector<std::vector<double>>& losses) {
  Transcript tr;
  for (std::size_t t = 0; t < played.size(); ++t) {
    tr.actions.push_back(Action::from_string(played[t]));
    tr.hidden_losses.push_back(LossVector{losses[t]});
    tr.observed.push_back(tr.actions.back().dot(losses[t]));
  }
  return tr;
}

LearnerFactory factory_of(LearnerKind kind) {
  LearnerSpec spec;
  spec.kind = kind;
  return make_learner_factory(spec);
}

}  // namespace

TEST_CASE("empirical regret on a hand instance") {
  const ActionSet s = build_multitask(1, 2);
  const auto tr = hand_transcript({"10", "10"}, {{1, 0}, {1, 0}});
  const RegretBreakdown r = regret_breakdown(tr, s);
  CHECK(r.regret == 2.0);
  CHECK(r.hindsight_best.to_string() == "01");
  CHECK(empirical_regret(hand_transcript({"01", "01"}, {{1, 0}, {1, 0}}), s) ==
        0.0);
  Transcript missing = tr;
  missing.hidden_losses.clear();
  CHECK_THROWS_AS(empirical_regret(missing, s), std::invalid_argument);
}

TEST_CASE("playing the hindsight best gives exactly zero regret") {
  const ActionSet s = build_matching(2, 4);
  const AdversaryConfig a = make_theorem4_adversary(s, 64, 12);
  auto probe = uniform_random(s, 1);
  const Transcript first = run_game(*probe, a, s);
  const Action best = regret_breakdown(first, s).hindsight_best;
  auto replay = fixed_action(s, best);
  CHECK(empirical_regret(run_game(*replay, a, s), s) == 0.0);
}

TEST_CASE("zero-overlap fixed action loses eps*k*T") {
  const ActionSet s = build_multitask(3, 2);
  const std::size_t T = 25;
  AdversaryConfig a =
      make_gaussian_adversary(s, T, 0.05, NoiseMode::Correlated, false, 2);
  a.sigma = 0.0;
  std::vector<std::size_t> flipped;
  for (std::size_t i = 0; i < s.dims().d; ++i) {
    if (!a.x_star.test(i)) flipped.push_back(i);
  }
  auto learner = fixed_action(s, Action(s.dims().d, flipped));
  const double regret = empirical_regret(run_game(*learner, a, s), s);
  CHECK(regret == doctest::Approx(a.epsilon * 3 * T).epsilon(1e-12));
}

TEST_CASE("lower bound values") {
  const double s32 = 1.0 / std::sqrt(192.0 + 96.0 * std::log(32.0));
  CHECK(lower_bound_value(multitask_dims(4, 2), 32, BoundForm::Theorem4) ==
        doctest::Approx(8.0 * s32));
  CHECK(lower_bound_value(multitask_dims(4, 2), 32, BoundForm::Theorem4) ==
        doctest::Approx(0.34933).epsilon(1e-4));
  // k = 1, d = 2, T = 2: sqrt(dT) / 8 = 1/4.
  CHECK(lower_bound_value(multitask_dims(1, 2), 2, BoundForm::Lemma1, 1.0) ==
        doctest::Approx(0.25));
  CHECK(lower_bound_value(multitask_dims(1, 2), 2, BoundForm::Lemma1, 0.0) ==
        0.0);
  CHECK(lower_bound_value(matching_dims(2, 4), 8, BoundForm::Lemma3, 0.5) ==
        doctest::Approx(0.5 * std::pow(2.0, 1.5) * 8.0 / 8.0));
  CHECK_THROWS(lower_bound_value(multitask_dims(4, 2), 16, BoundForm::Theorem4));
}

TEST_CASE("summary statistics") {
  const RegretSummary s = summarize({1.0, 2.0, 3.0, 4.0}, {}, 1.5);
  CHECK(s.mean == 2.5);
  // sample sd = sqrt(5/3), se = sd / 2
  CHECK(s.standard_error == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
  CHECK(s.mean_minus_2se() == doctest::Approx(2.5 - std::sqrt(5.0 / 3.0)));
}

TEST_CASE("scaling fit") {
  std::vector<ScalingPoint> exact, flat, noisy;
  RandomStream rng(4);
  for (double k : {2.0, 4.0, 8.0, 16.0}) {
    exact.push_back({k, 3.0 * std::pow(k, 1.5)});
    flat.push_back({k, 7.0});
    noisy.push_back({k, 2.0 * k * (1.0 + 0.01 * rng.next_gaussian())});
  }
  const ScalingFit e = scaling_fit(exact);
  CHECK(e.exponent == doctest::Approx(1.5));
  CHECK(e.intercept == doctest::Approx(std::log(3.0)));
  CHECK(e.residual < 1e-12);
  CHECK(std::abs(scaling_fit(flat).exponent) < 1e-12);
  const double b = scaling_fit(noisy).exponent;
  CHECK(b >= 0.9);
  CHECK(b <= 1.1);
  CHECK_THROWS(scaling_fit(std::vector<ScalingPoint>{{2, 1}, {4, 2}}));
  CHECK_THROWS(
      scaling_fit(std::vector<ScalingPoint>{{2, 1}, {4, 0}, {8, 1}}));
}

TEST_CASE("gaussian kl") {
  CHECK(gaussian_kl(0.0, 1.0) == 0.0);
  CHECK(gaussian_kl(0.1, 4.0 * 0.25) == doctest::Approx(0.005));
  // Oracle written out here: KL(N(a,v) || N(b,v)) = (a-b)^2 / (2v).
  for (double gap : {0.0, 0.01, 0.3, 1.5}) {
    for (double var : {0.01, 1.0, 9.0}) {
      CHECK(std::abs(gaussian_kl(gap, var) - gap * gap / (2.0 * var)) < 1e-15);
      CHECK(std::abs(gaussian_kl_quadrature(gap, var) -
                     gap * gap / (2.0 * var)) < 1e-6);
    }
  }
}

TEST_CASE("variance report") {
  const ActionSet s = build_multitask(4, 2);
  for (auto [mode, target] :
       {std::pair{NoiseMode::Correlated, 0.16},
        std::pair{NoiseMode::Independent, 0.04}}) {
    const AdversaryConfig a =
        make_gaussian_adversary(s, 100000, 0.1, mode, false, 31);
    const VarianceReport r = variance_report(a, a.x_star, 100000);
    CHECK(r.target == doctest::Approx(target));
    CHECK(r.relative_error() < 0.05);
  }
  AdversaryConfig quiet =
      make_gaussian_adversary(s, 1000, 0.0, NoiseMode::Correlated, false, 3);
  CHECK(variance_report(quiet, quiet.x_star, 1000).estimate == 0.0);
}

TEST_CASE("row identity") {
  const ActionSet one = build_multitask(1, 2);
  const std::size_t none[] = {0};
  const auto rr = verify_tj_row_identity(factory_of(LearnerKind::RoundRobin),
                                         one, none, 0, 4, 0.1, 5);
  CHECK(rr.counts == std::vector<std::size_t>{2, 2});
  CHECK(rr.holds);

  const ActionSet two = build_multitask(2, 2);
  const std::size_t fixed[] = {0, 1};
  for (std::size_t j = 0; j < 2; ++j) {
    const auto g = verify_tj_row_identity(factory_of(LearnerKind::Greedy), two,
                                          fixed, j, 8, 0.1, 5);
    CHECK(g.total == 8);
    CHECK(g.holds);
  }
  CHECK_THROWS(verify_tj_row_identity(factory_of(LearnerKind::UniformRandom),
                                      two, fixed, 0, 8, 0.1, 5));
}

TEST_CASE("average count identity") {
  const ActionSet s = build_multitask(2, 2);
  for (LearnerKind kind : {LearnerKind::RoundRobin, LearnerKind::Greedy,
                           LearnerKind::FixedAction}) {
    for (std::size_t j = 0; j < 2; ++j) {
      const auto r = verify_tj_average(factory_of(kind), s, j, 8, 0.1, 9);
      CHECK(r.holds);
      CHECK(r.total * 2 == 4 * 8);
      CHECK(r.average() == 4.0);
    }
  }
}

TEST_CASE("ranking count bound") {
  const ActionSet small = build_matching(1, 2);
  const auto fixed = verify_ranking_tj_bound(
      factory_of(LearnerKind::FixedAction), small, 0, 4, 0.1, 1);
  CHECK(fixed.holds);
  // A loss-blind learner meets the bound with equality: sum T_j = T |S| / n.
  CHECK(fixed.total * 2 == 4 * 2);

  const ActionSet s = build_matching(2, 4);
  for (LearnerKind kind : {LearnerKind::RoundRobin, LearnerKind::Greedy,
                           LearnerKind::FixedAction}) {
    for (std::size_t j = 0; j < 2; ++j) {
      const auto r = verify_ranking_tj_bound(factory_of(kind), s, j, 8, 0.1, 2);
      CHECK(r.cardinality == 12);
      CHECK(r.holds);
      CHECK(r.average() <= 8.0 / 3.0);
    }
  }
  const auto empty = verify_ranking_tj_bound(
      factory_of(LearnerKind::Greedy), s, 0, 0, 0.1, 2);
  CHECK(empty.total == 0);
  CHECK(empty.holds);
  CHECK_THROWS(verify_ranking_tj_bound(factory_of(LearnerKind::Greedy),
                                       build_matching(3, 4), 0, 8, 0.1, 2));
}

TEST_CASE("clip event under the clipped recipe") {
  const ActionSet s = build_multitask(4, 2);
  const AdversaryConfig a = make_theorem4_adversary(s, 32, 1);
  const ClipEventReport r = verify_clip_event(a, 10000, 17);
  CHECK(r.events == 0);
  CHECK(r.epsilon_ok);
  CHECK(r.holds);
  // Per-round tail exp(-1/(32 sigma^2)) = e^-6 / T^3.
  CHECK(r.union_bound == doctest::Approx(32.0 * std::exp(-6.0) / 32768.0));
  CHECK(r.target == doctest::Approx(a.epsilon / 8.0));
}

TEST_CASE("clip event rate grows with sigma") {
  const ActionSet s = build_multitask(4, 2);
  AdversaryConfig a = make_theorem4_adversary(s, 32, 1);
  const std::size_t base = verify_clip_event(a, 4000, 3).events;
  a.sigma *= 2.0;
  CHECK(verify_clip_event(a, 4000, 3).events > base);
}

TEST_CASE("corrupted sigma fails the clip check") {
  // Fixture: sigma formula with the constants divided by ten.
  const ActionSet s = build_multitask(4, 2);
  AdversaryConfig a = make_theorem4_adversary(s, 256, 1);
  a.sigma = 1.0 / std::sqrt(19.2 + 9.6 * std::log(256.0));
  const ClipEventReport r = verify_clip_event(a, 2000, 3);
  CHECK(r.events > 0);
  CHECK_FALSE(r.holds);
}

TEST_CASE("path transcripts map to multitask transcripts") {
  const ActionSet p = build_layered_path_graph(4, 16);
  const ActionSet mt = build_multitask(2, 4);
  const AdversaryConfig a = make_theorem4_adversary(p, 64, 6);
  auto learner = uniform_random(p, 4);
  const Transcript tr = run_game(*learner, a, p);
  const Transcript mapped = path_transcript_to_multitask(tr, p);
  CHECK(mapped.observed == tr.observed);
  for (std::size_t t = 0; t < tr.horizon(); ++t) {
    CHECK(mt.contains(mapped.actions[t]));
    CHECK(mapped.actions[t].dot(mapped.hidden_losses[t].values) ==
          tr.observed[t]);
  }
  CHECK(empirical_regret(mapped, mt) == doctest::Approx(empirical_regret(tr, p)));
}
