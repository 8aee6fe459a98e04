#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "combandit/rng.hpp"

namespace combandit {

enum class Family { Multitask, LayeredPath, Matching };

std::string_view family_name(Family family);
// Accepts "multitask", "path" (or "layered_path") and "matching".
Family parse_family(std::string_view name);

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

// Instance triple. For LayeredPath, k is the path length (edges per path),
// d the edge count and n = d/k the number of intermediate vertices per layer.
struct Dimensions {
  Family family = Family::Multitask;
  std::size_t d = 0;
  std::size_t k = 0;
  std::size_t n = 0;

  // Throws std::invalid_argument naming the violated rule.
  void validate() const;

  friend bool operator==(const Dimensions&, const Dimensions&) = default;
};

Dimensions multitask_dims(std::size_t k, std::size_t n);
Dimensions layered_path_dims(std::size_t k, std::size_t d);
Dimensions matching_dims(std::size_t k, std::size_t n);

// A k-sparse binary vector in {0,1}^d, stored as its sorted support.
// Coordinates are 0-based here; the string form puts coordinate 1 leftmost.
class Action {
 public:
  Action() = default;
  Action(std::size_t dim, std::vector<std::size_t> support);

  static Action from_string(std::string_view bits);

  std::size_t dim() const { return dim_; }
  std::size_t weight() const { return support_.size(); }
  const std::vector<std::size_t>& support() const { return support_; }
  bool test(std::size_t coordinate) const;

  // Sum of loss over the support, accumulated in increasing coordinate
  // order. Throws on a length mismatch.
  double dot(std::span<const double> loss) const;
  std::size_t overlap(const Action& other) const;

  std::string to_string() const;

  friend bool operator==(const Action&, const Action&) = default;
  friend auto operator<=>(const Action&, const Action&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<std::size_t> support_;
};

// The DAG of the shortest-path construction: k/2 layers, each an incoming
// hub fanning out to `width` intermediate vertices that all join at the
// next hub. Vertices: hubs 0..layers (0 = s, layers = t), then
// intermediates. Edges are numbered layer-major; inside layer j the
// fan-out edges come first, then the fan-in edges.
struct LayeredGraph {
  struct Edge {
    std::size_t from;
    std::size_t to;
  };

  std::size_t layers = 0;
  std::size_t width = 0;
  std::vector<Edge> edges;

  std::size_t vertex_count() const { return layers + 1 + layers * width; }
  std::size_t edge_count() const { return edges.size(); }
  std::size_t source() const { return 0; }
  std::size_t sink() const { return layers; }
  std::size_t intermediate(std::size_t layer, std::size_t i) const {
    return layers + 1 + layer * width + i;
  }
  std::size_t fan_out_edge(std::size_t layer, std::size_t i) const {
    return 2 * width * layer + i;
  }
  std::size_t fan_in_edge(std::size_t layer, std::size_t i) const {
    return 2 * width * layer + width + i;
  }
};

// One of the three structured families. Immutable after construction.
//
// Every member is described by a choice vector: for Multitask the arm of
// each task, for Matching the column of each row (pairwise distinct), for
// LayeredPath the intermediate vertex of each layer. Canonical order is
// lexicographic over choice vectors.
class ActionSet {
 public:
  const Dimensions& dims() const { return dims_; }
  Family family() const { return dims_.family; }

  // Closed-form |S|, saturating at UINT64_MAX.
  std::uint64_t cardinality() const;

  // Throws std::invalid_argument if x has the wrong length.
  bool contains(const Action& x) const;

  // Throws CapExceeded if cardinality() > cap.
  std::vector<Action> enumerate(
      std::uint64_t cap = kDefaultEnumerationCap) const;

  // Uniform draw over S.
  Action sample(RandomStream& rng) const;

  // Deterministic member indexed by round: every choice slot advances by
  // one per round, so all coordinates are covered every choice_range()
  // rounds.
  Action cyclic(std::size_t t) const;

  std::size_t choice_slots() const;
  std::size_t choice_range() const;
  Action from_choices(std::span<const std::size_t> choices) const;
  // Requires contains(x).
  std::vector<std::size_t> choices_of(const Action& x) const;

  // LayeredPath only.
  const LayeredGraph& graph() const;

  // "family=... d=... k=... n=... cardinality=..."
  std::string describe() const;

 private:
  explicit ActionSet(Dimensions dims);

  bool walks_source_to_sink(const Action& x) const;

  Dimensions dims_;
  LayeredGraph graph_;

  friend ActionSet build_multitask(std::size_t k, std::size_t n);
  friend ActionSet build_layered_path_graph(std::size_t k, std::size_t d);
  friend ActionSet build_matching(std::size_t k, std::size_t n);
};

ActionSet build_multitask(std::size_t k, std::size_t n);
ActionSet build_layered_path_graph(std::size_t k, std::size_t d);
ActionSet build_matching(std::size_t k, std::size_t n);
ActionSet build_action_set(const Dimensions& dims);

// Dimensions of the multitask problem a path instance simulates:
// k/2 tasks of d/k arms (d/2 coordinates).
Dimensions induced_multitask_dims(const Dimensions& path_dims);

// Path <-> multitask-arm-tuple bijection. Both throw std::invalid_argument
// on inputs outside the respective family.
Action path_to_multitask(const ActionSet& paths, const Action& path);
Action multitask_to_path(const ActionSet& paths, const Action& arms);

}  // namespace combandit
