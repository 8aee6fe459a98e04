#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "combandit/action_sets.hpp"
#include "combandit/environments.hpp"

namespace combandit {

// Everything a learner may look at when choosing x_t: its own past
// actions and the scalars it observed. Losses vectors never appear here.
struct History {
  std::span<const Action> actions;
  std::span<const double> observed;

  std::size_t round() const { return actions.size() + 1; }
};

class Learner {
 public:
  virtual ~Learner() = default;

  virtual Action choose(const History& history) = 0;
  // Receives lambda_t = <loss_t, x_t> and nothing else.
  virtual void observe(double observed_loss) = 0;

  // True when choices are a deterministic function of the observed
  // scalars (no internal randomness).
  virtual bool is_deterministic() const = 0;
  virtual std::string name() const = 0;
};

// A learner sees the action set and the horizon at construction; the seed
// feeds its private random stream.
using LearnerFactory = std::function<std::unique_ptr<Learner>(
    const ActionSet& set, std::size_t horizon, std::uint64_t seed)>;
using AdversaryFactory =
    std::function<AdversaryConfig(const ActionSet& set, std::uint64_t seed)>;

struct Transcript {
  AdversaryConfig config;
  std::vector<Action> actions;
  std::vector<double> observed;
  std::vector<LossVector> hidden_losses;
  std::vector<std::vector<double>> noise;
  // T_j for the sorted active coordinates i*_1 < ... < i*_k of x*.
  std::vector<std::size_t> planted_counts;

  std::size_t horizon() const { return actions.size(); }
};

// Plays config.horizon rounds. The whole loss sequence is drawn before
// round 1. Throws ProtocolViolation if the learner leaves S.
Transcript run_game(Learner& learner, const AdversaryConfig& adversary,
                    const ActionSet& set);

// Seeds used by replication `index` of an experiment seeded with `seed`.
struct ReplicationSeeds {
  std::uint64_t adversary;
  std::uint64_t learner;
};
ReplicationSeeds replication_seeds(std::uint64_t seed, std::size_t index);

// Runs `reps` independent games (fresh x*, fresh learner each) and hands
// each transcript to `consume(index, transcript)`. Up to `jobs` games run
// concurrently; `consume` must be safe to call from several threads for
// distinct indices.
void for_each_replication(
    const LearnerFactory& learners, const AdversaryFactory& adversaries,
    const ActionSet& set, std::size_t reps, std::uint64_t seed,
    std::size_t jobs,
    const std::function<void(std::size_t, Transcript&&)>& consume);

std::vector<Transcript> replicate(const LearnerFactory& learners,
                                  const AdversaryFactory& adversaries,
                                  const ActionSet& set, std::size_t reps,
                                  std::uint64_t seed, std::size_t jobs = 1);

// Calls fn(i) for i in [0, count) on up to `jobs` threads.
void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)>& fn);

// Line-oriented transcript record:
//   # combandit transcript v1
//   # family=... d=... k=... n=... T=... sigma=... epsilon=... noise_mode=...
//   #   clipped=... theorem4=... seed=... x_star=... [masked=...]
//   t,action,lambda,z[,loss]
//   1,0110,1.49...,0.01...[,l1;l2;...]
// Multi-valued fields (independent noise, hidden losses) are ';'-joined.
// Doubles are written in shortest round-trip form.
void write_transcript(std::ostream& os, const Transcript& transcript,
                      bool include_hidden);
Transcript read_transcript(std::istream& is);

}  // namespace combandit
