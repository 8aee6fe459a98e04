#include "combandit/suites.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "combandit/action_sets.hpp"
#include "combandit/analysis.hpp"
#include "combandit/environments.hpp"
#include "combandit/learners.hpp"
#include "combandit/text.hpp"

namespace combandit {
namespace {

LearnerSpec spec_of(LearnerKind kind) {
  LearnerSpec spec;
  spec.kind = kind;
  return spec;
}

template <typename... Parts>
std::string cat(const Parts&... parts) {
  std::ostringstream os;
  (os << ... << parts);
  return os.str();
}

std::uint64_t falling_factorial(std::uint64_t n, std::uint64_t k) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < k; ++i) r *= n - i;
  return r;
}

std::uint64_t power(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  while (exp--) r *= base;
  return r;
}

void check_size(std::vector<CheckResult>& out, const ActionSet& set,
                std::uint64_t expected) {
  const auto actions = set.enumerate();
  bool members = true;
  for (const auto& x : actions) members = members && set.contains(x);
  const bool ok = actions.size() == expected && set.cardinality() == expected &&
                  members;
  out.push_back({"cardinality", set.describe(), ok,
                 cat("enumerated=", actions.size(), " expected=", expected)});
}

std::vector<CheckResult> cardinality_suite() {
  constexpr std::uint64_t kLimit = 100000;
  std::vector<CheckResult> out;
  for (std::uint64_t n = 2; n <= 10; ++n) {
    for (std::uint64_t k = 1; power(n, k) <= kLimit; ++k) {
      check_size(out, build_multitask(k, n), power(n, k));
    }
  }
  for (std::uint64_t m = 2; m <= 10; ++m) {
    for (std::uint64_t k = 2; power(m, k / 2) <= kLimit; k += 2) {
      check_size(out, build_layered_path_graph(k, k * m), power(m, k / 2));
    }
  }
  for (std::uint64_t n = 1; n <= 9; ++n) {
    for (std::uint64_t k = 1; k <= n && falling_factorial(n, k) <= kLimit; ++k) {
      check_size(out, build_matching(k, n), falling_factorial(n, k));
    }
  }
  return out;
}

std::vector<CheckResult> bijection_suite(std::uint64_t seed) {
  const ActionSet paths = build_layered_path_graph(4, 16);
  const auto all = paths.enumerate();
  const ActionSet tasks = build_multitask(2, 4);
  RandomStream rng(derive_seed(seed, 0x626a));
  bool round_trip = true;
  for (const auto& x : all) {
    round_trip = round_trip &&
                 multitask_to_path(paths, path_to_multitask(paths, x)) == x;
  }
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    LossVector arms;
    for (std::size_t i = 0; i < tasks.dims().d; ++i) {
      arms.values.push_back(rng.next_uniform());
    }
    const LossVector edges = shortest_path_losses(arms, paths);
    for (const auto& x : all) {
      if (x.dot(edges.values) != path_to_multitask(paths, x).dot(arms.values)) {
        ++mismatches;
      }
    }
  }
  return {
      {"bijection", "round_trip k=4 d=16", round_trip && all.size() == 16,
       cat("paths=", all.size())},
      {"bijection", "loss_preservation k=4 d=16", mismatches == 0,
       cat("vectors=1000 paths=", all.size(), " mismatches=", mismatches)},
  };
}

std::vector<CheckResult> variance_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  for (std::size_t k : {2, 4, 8}) {
    const ActionSet set = build_multitask(k, 2);
    for (NoiseMode mode : {NoiseMode::Correlated, NoiseMode::Independent}) {
      const AdversaryConfig adv = make_gaussian_adversary(
          set, 100000, 0.1, mode, /*clipped=*/false, derive_seed(seed, k));
      const VarianceReport r = variance_report(adv, set.cyclic(0), 100000);
      out.push_back({"variance",
                     cat("k=", k, " ", noise_mode_name(mode)),
                     r.relative_error() <= 0.05,
                     cat("estimate=", format_double(r.estimate),
                         " target=", format_double(r.target),
                         " rel_err=", format_double(r.relative_error()))});
    }
  }
  return out;
}

std::vector<CheckResult> kl_suite() {
  std::vector<CheckResult> out;
  for (double gap : {0.0, 0.01, 0.1, 1.0}) {
    for (double var : {0.01, 1.0, 25.0}) {
      const double closed = gaussian_kl(gap, var);
      const double quad = gaussian_kl_quadrature(gap, var);
      out.push_back({"kl", cat("gap=", gap, " var=", var),
                     std::abs(closed - quad) <= 1e-6,
                     cat("closed=", format_double(closed),
                         " quadrature=", format_double(quad))});
    }
  }
  return out;
}

std::vector<CheckResult> play_count_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  const ActionSet set = build_multitask(2, 2);
  const double sigma = compute_sigma(8);
  for (LearnerKind kind : {LearnerKind::RoundRobin, LearnerKind::Greedy}) {
    const LearnerFactory f = make_learner_factory(spec_of(kind));
    for (std::size_t j = 0; j < 2; ++j) {
      const std::size_t fixed[] = {0, 1};
      const auto row = verify_tj_row_identity(f, set, fixed, j, 8, sigma, seed);
      out.push_back({"play_counts",
                     cat("row_identity ", learner_kind_name(kind), " j=", j),
                     row.holds, cat("sum=", row.total, " T=", row.horizon)});
      const auto avg = verify_tj_average(f, set, j, 8, sigma, seed);
      out.push_back({"play_counts",
                     cat("average ", learner_kind_name(kind), " j=", j),
                     avg.holds,
                     cat("sum=", avg.total, " |S|=", avg.cardinality,
                         " average=", format_double(avg.average()),
                         " T/n=", format_double(8.0 / 2.0))});
    }
  }
  return out;
}

std::vector<CheckResult> ranking_count_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  struct Case {
    std::size_t k, n, horizon;
  };
  for (Case c : {Case{2, 4, 8}, Case{1, 2, 4}}) {
    const ActionSet set = build_matching(c.k, c.n);
    const double sigma = compute_sigma(c.horizon);
    for (LearnerKind kind : {LearnerKind::RoundRobin, LearnerKind::Greedy,
                             LearnerKind::FixedAction}) {
      const LearnerFactory f = make_learner_factory(spec_of(kind));
      for (std::size_t j = 0; j < c.k; ++j) {
        const auto r =
            verify_ranking_tj_bound(f, set, j, c.horizon, sigma, seed);
        out.push_back(
            {"ranking_counts",
             cat("k=", c.k, " n=", c.n, " T=", c.horizon, " ",
                 learner_kind_name(kind), " j=", j),
             r.holds,
             cat("average=", format_double(r.average()), " bound=",
                 format_double(static_cast<double>(c.horizon) /
                               static_cast<double>(c.n - c.k + 1)),
                 " |S|=", r.cardinality)});
      }
    }
  }
  return out;
}

std::vector<CheckResult> clip_suite(const VerifyOptions& options) {
  std::vector<CheckResult> out;
  const ActionSet set = build_multitask(4, 2);
  AdversaryConfig adv =
      make_theorem4_adversary(set, 256, derive_seed(options.seed, 0x636c));
  if (options.clip_sigma) {
    adv.sigma = *options.clip_sigma;
    adv.epsilon = compute_epsilon(adv.sigma, set.dims(), 256,
                                  GapVariant::Multitask);
  }
  const ClipEventReport r = verify_clip_event(adv, 10000, options.seed);
  out.push_back({"clip", "event_rate k=4 n=2 T=256", r.holds,
                 cat("events=", r.events, "/", r.reps,
                     " clip_events=", r.clip_events,
                     " upper99=", format_double(r.upper_confidence),
                     " target=eps/8=", format_double(r.target),
                     " union_bound=", format_double(r.union_bound),
                     " sigma=", format_double(adv.sigma))});

  // eps <= 1/4 for every T >= kd under the clipped recipe.
  bool all_small = true;
  double worst = 0.0;
  for (std::size_t k : {1, 2, 4, 8, 16}) {
    for (std::size_t n : {2, 4, 8}) {
      const Dimensions dims = multitask_dims(k, n);
      for (std::size_t T = k * dims.d; T <= 4'000'000; T = T * 2 + 1) {
        const double eps =
            compute_epsilon(compute_sigma(T), dims, T, GapVariant::Multitask);
        worst = std::max(worst, eps);
        all_small = all_small && eps <= 0.25;
      }
    }
  }
  out.push_back({"clip", "epsilon_at_most_quarter", all_small,
                 cat("max_epsilon=", format_double(worst))});
  return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "cardinality", "bijection", "variance", "kl",
      "play_counts",      "ranking_counts",    "clip"};
  return names;
}

std::vector<CheckResult> run_suite(std::string_view name,
                                   const VerifyOptions& options) {
  if (name == "all") {
    std::vector<CheckResult> out;
    for (const auto& s : suite_names()) {
      auto part = run_suite(s, options);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  if (name == "cardinality") return cardinality_suite();
  if (name == "bijection") return bijection_suite(options.seed);
  if (name == "variance") return variance_suite(options.seed);
  if (name == "kl") return kl_suite();
  if (name == "play_counts") return play_count_suite(options.seed);
  if (name == "ranking_counts") return ranking_count_suite(options.seed);
  if (name == "clip") return clip_suite(options);
  throw std::invalid_argument("unknown suite '" + std::string(name) + "'");
}

}  // namespace combandit
