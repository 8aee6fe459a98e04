#include "combandit/game.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "combandit/errors.hpp"

namespace combandit {

Transcript run_game(Learner& learner, const AdversaryConfig& adversary,
                    const ActionSet& set) {
  if (!(adversary.dims == set.dims())) {
    throw std::invalid_argument("adversary and action set dimensions differ");
  }
  const std::size_t horizon = adversary.horizon;

  Transcript tr;
  tr.config = adversary;
  tr.hidden_losses.reserve(horizon);
  tr.noise.reserve(horizon);
  for (std::size_t t = 1; t <= horizon; ++t) {
    LossDraw draw = draw_loss(adversary, t);
    tr.hidden_losses.push_back(std::move(draw.loss));
    tr.noise.push_back(std::move(draw.noise));
  }

  tr.actions.reserve(horizon);
  tr.observed.reserve(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    const History history{tr.actions, tr.observed};
    Action x = learner.choose(history);
    if (x.dim() != set.dims().d || !set.contains(x)) {
      throw ProtocolViolation(learner.name() + " played " + x.to_string() +
                              " in round " + std::to_string(t + 1) +
                              ", which is not in the action set");
    }
    const double lambda = x.dot(tr.hidden_losses[t].values);
    tr.actions.push_back(std::move(x));
    tr.observed.push_back(lambda);
    learner.observe(lambda);
  }

  const auto& planted = adversary.x_star.support();
  tr.planted_counts.assign(planted.size(), 0);
  for (const Action& x : tr.actions) {
    for (std::size_t j = 0; j < planted.size(); ++j) {
      if (x.test(planted[j])) ++tr.planted_counts[j];
    }
  }
  return tr;
}

ReplicationSeeds replication_seeds(std::uint64_t seed, std::size_t index) {
  const std::uint64_t rep = derive_seed(seed, stream_tag::kReplication, index);
  return {derive_seed(rep, stream_tag::kAdversary),
          derive_seed(rep, stream_tag::kLearner)};
}

void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)>& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (failure) std::rethrow_exception(failure);
}

void for_each_replication(
    const LearnerFactory& learners, const AdversaryFactory& adversaries,
    const ActionSet& set, std::size_t reps, std::uint64_t seed,
    std::size_t jobs,
    const std::function<void(std::size_t, Transcript&&)>& consume) {
  if (reps < 1) throw std::invalid_argument("reps must be at least 1");
  parallel_for(reps, jobs, [&](std::size_t i) {
    const ReplicationSeeds seeds = replication_seeds(seed, i);
    const AdversaryConfig adversary = adversaries(set, seeds.adversary);
    auto learner = learners(set, adversary.horizon, seeds.learner);
    consume(i, run_game(*learner, adversary, set));
  });
}

std::vector<Transcript> replicate(const LearnerFactory& learners,
                                  const AdversaryFactory& adversaries,
                                  const ActionSet& set, std::size_t reps,
                                  std::uint64_t seed, std::size_t jobs) {
  std::vector<Transcript> out(reps);
  for_each_replication(learners, adversaries, set, reps, seed, jobs,
                       [&](std::size_t i, Transcript&& tr) {
                         out[i] = std::move(tr);
                       });
  return out;
}

}  // namespace combandit
