#include "combandit/action_sets.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "combandit/errors.hpp"

namespace combandit {
namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

[[noreturn]] void reject(const std::string& what) {
  throw std::invalid_argument(what);
}

// Advances a choice vector to its lexicographic successor inside
// [0, range)^slots. Returns false after the last vector.
bool next_tuple(std::vector<std::size_t>& c, std::size_t range) {
  for (std::size_t pos = c.size(); pos-- > 0;) {
    if (++c[pos] < range) return true;
    c[pos] = 0;
  }
  return false;
}

bool pairwise_distinct(const std::vector<std::size_t>& c) {
  std::vector<std::size_t> sorted = c;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

}  // namespace

CapExceeded::CapExceeded(std::uint64_t cardinality, std::uint64_t cap)
    : std::runtime_error("action set has " +
                         (cardinality == kSaturated
                              ? std::string("more than 2^64")
                              : std::to_string(cardinality)) +
                         " elements, above the enumeration cap of " +
                         std::to_string(cap)),
      cardinality_(cardinality),
      cap_(cap) {}

std::string_view family_name(Family family) {
  switch (family) {
    case Family::Multitask:
      return "multitask";
    case Family::LayeredPath:
      return "path";
    case Family::Matching:
      return "matching";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "multitask") return Family::Multitask;
  if (name == "path" || name == "layered_path") return Family::LayeredPath;
  if (name == "matching" || name == "ranking") return Family::Matching;
  reject("unknown action family '" + std::string(name) + "'");
}

// -- Dimensions ---------------------------------------------------------------

void Dimensions::validate() const {
  if (k < 1) reject("k must be at least 1");
  if (k > d) reject("k must not exceed d");
  switch (family) {
    case Family::Multitask:
      if (n < 2) reject("multitask requires n >= 2");
      if (d != k * n) reject("multitask requires d = k*n");
      break;
    case Family::LayeredPath:
      if (k % 2 != 0) reject("layered path requires k even");
      if (d % 2 != 0) reject("layered path requires d even");
      if (d % k != 0) reject("layered path requires d divisible by k");
      if (2 * k > d) reject("layered path requires k <= d/2");
      if (n != d / k) reject("layered path requires n = d/k");
      break;
    case Family::Matching:
      if (n < 1) reject("matching requires n >= 1");
      if (k > n) reject("matching requires k <= n");
      if (d != k * n) reject("matching requires d = k*n");
      break;
  }
}

Dimensions multitask_dims(std::size_t k, std::size_t n) {
  Dimensions dims{Family::Multitask, k * n, k, n};
  dims.validate();
  return dims;
}

Dimensions layered_path_dims(std::size_t k, std::size_t d) {
  if (k == 0) reject("k must be at least 1");
  Dimensions dims{Family::LayeredPath, d, k, d / k};
  dims.validate();
  return dims;
}

Dimensions matching_dims(std::size_t k, std::size_t n) {
  Dimensions dims{Family::Matching, k * n, k, n};
  dims.validate();
  return dims;
}

// -- Action -------------------------------------------------------------------

Action::Action(std::size_t dim, std::vector<std::size_t> support)
    : dim_(dim), support_(std::move(support)) {
  std::sort(support_.begin(), support_.end());
  if (std::adjacent_find(support_.begin(), support_.end()) != support_.end()) {
    reject("action support has a repeated coordinate");
  }
  if (!support_.empty() && support_.back() >= dim_) {
    reject("action support coordinate out of range");
  }
}

Action Action::from_string(std::string_view bits) {
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      support.push_back(i);
    } else if (bits[i] != '0') {
      reject("action string must contain only '0' and '1'");
    }
  }
  return Action(bits.size(), std::move(support));
}

bool Action::test(std::size_t coordinate) const {
  return std::binary_search(support_.begin(), support_.end(), coordinate);
}

double Action::dot(std::span<const double> loss) const {
  if (loss.size() != dim_) {
    reject("loss length " + std::to_string(loss.size()) +
           " does not match action length " + std::to_string(dim_));
  }
  double sum = 0.0;
  for (std::size_t i : support_) sum += loss[i];
  return sum;
}

std::size_t Action::overlap(const Action& other) const {
  std::size_t count = 0;
  auto a = support_.begin();
  auto b = other.support_.begin();
  while (a != support_.end() && b != other.support_.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      ++count;
      ++a;
      ++b;
    }
  }
  return count;
}

std::string Action::to_string() const {
  std::string s(dim_, '0');
  for (std::size_t i : support_) s[i] = '1';
  return s;
}

// -- ActionSet ----------------------------------------------------------------

ActionSet::ActionSet(Dimensions dims) : dims_(dims) { dims_.validate(); }

ActionSet build_multitask(std::size_t k, std::size_t n) {
  if (k < 1) reject("multitask requires k >= 1");
  if (n < 2) reject("multitask requires n >= 2");
  return ActionSet(Dimensions{Family::Multitask, k * n, k, n});
}

ActionSet build_layered_path_graph(std::size_t k, std::size_t d) {
  ActionSet set(layered_path_dims(k, d));
  LayeredGraph& g = set.graph_;
  g.layers = k / 2;
  g.width = d / k;
  g.edges.reserve(d);
  for (std::size_t layer = 0; layer < g.layers; ++layer) {
    for (std::size_t i = 0; i < g.width; ++i) {
      g.edges.push_back({layer, g.intermediate(layer, i)});
    }
    for (std::size_t i = 0; i < g.width; ++i) {
      g.edges.push_back({g.intermediate(layer, i), layer + 1});
    }
  }
  return set;
}

ActionSet build_matching(std::size_t k, std::size_t n) {
  if (k < 1) reject("matching requires k >= 1");
  if (k > n) reject("matching requires k <= n");
  return ActionSet(Dimensions{Family::Matching, k * n, k, n});
}

ActionSet build_action_set(const Dimensions& dims) {
  dims.validate();
  switch (dims.family) {
    case Family::Multitask:
      return build_multitask(dims.k, dims.n);
    case Family::LayeredPath:
      return build_layered_path_graph(dims.k, dims.d);
    case Family::Matching:
      return build_matching(dims.k, dims.n);
  }
  reject("unknown family");
}

std::size_t ActionSet::choice_slots() const {
  return family() == Family::LayeredPath ? dims_.k / 2 : dims_.k;
}

std::size_t ActionSet::choice_range() const { return dims_.n; }

std::uint64_t ActionSet::cardinality() const {
  std::uint64_t total = 1;
  const std::uint64_t range = choice_range();
  for (std::size_t j = 0; j < choice_slots(); ++j) {
    const std::uint64_t factor =
        family() == Family::Matching ? range - j : range;
    total = saturating_mul(total, factor);
  }
  return total;
}

Action ActionSet::from_choices(std::span<const std::size_t> choices) const {
  if (choices.size() != choice_slots()) reject("wrong number of choices");
  std::vector<std::size_t> support;
  support.reserve(dims_.k);
  for (std::size_t j = 0; j < choices.size(); ++j) {
    const std::size_t c = choices[j];
    if (c >= choice_range()) reject("choice out of range");
    if (family() == Family::LayeredPath) {
      support.push_back(graph_.fan_out_edge(j, c));
      support.push_back(graph_.fan_in_edge(j, c));
    } else {
      support.push_back(j * dims_.n + c);
    }
  }
  if (family() == Family::Matching &&
      !pairwise_distinct({choices.begin(), choices.end()})) {
    reject("matching choices must use distinct columns");
  }
  return Action(dims_.d, std::move(support));
}

std::vector<std::size_t> ActionSet::choices_of(const Action& x) const {
  if (!contains(x)) reject("action " + x.to_string() + " is not in the set");
  std::vector<std::size_t> choices;
  choices.reserve(choice_slots());
  if (family() == Family::LayeredPath) {
    // Support alternates fan-out, fan-in per layer in increasing order.
    for (std::size_t j = 0; j < choice_slots(); ++j) {
      choices.push_back(x.support()[2 * j] - 2 * graph_.width * j);
    }
  } else {
    for (std::size_t j = 0; j < choice_slots(); ++j) {
      choices.push_back(x.support()[j] - j * dims_.n);
    }
  }
  return choices;
}

bool ActionSet::walks_source_to_sink(const Action& x) const {
  std::size_t vertex = graph_.source();
  std::size_t consumed = 0;
  while (vertex != graph_.sink()) {
    std::size_t next = 0;
    std::size_t taken = 0;
    for (std::size_t e : x.support()) {
      if (graph_.edges[e].from == vertex) {
        next = graph_.edges[e].to;
        ++taken;
      }
    }
    if (taken != 1) return false;
    vertex = next;
    ++consumed;
  }
  return consumed == x.weight();
}

bool ActionSet::contains(const Action& x) const {
  if (x.dim() != dims_.d) {
    reject("action length " + std::to_string(x.dim()) +
           " does not match d = " + std::to_string(dims_.d));
  }
  if (x.weight() != dims_.k) return false;
  if (family() == Family::LayeredPath) return walks_source_to_sink(x);

  std::vector<std::size_t> per_row(dims_.k, 0);
  std::vector<std::size_t> per_column(dims_.n, 0);
  for (std::size_t i : x.support()) {
    ++per_row[i / dims_.n];
    ++per_column[i % dims_.n];
  }
  const auto one = [](std::size_t c) { return c == 1; };
  if (!std::all_of(per_row.begin(), per_row.end(), one)) return false;
  if (family() == Family::Matching) {
    return std::all_of(per_column.begin(), per_column.end(),
                       [](std::size_t c) { return c <= 1; });
  }
  return true;
}

std::vector<Action> ActionSet::enumerate(std::uint64_t cap) const {
  const std::uint64_t size = cardinality();
  if (size > cap) throw CapExceeded(size, cap);

  std::vector<Action> out;
  out.reserve(static_cast<std::size_t>(size));
  std::vector<std::size_t> c(choice_slots(), 0);
  do {
    if (family() == Family::Matching && !pairwise_distinct(c)) continue;
    out.push_back(from_choices(c));
  } while (next_tuple(c, choice_range()));
  return out;
}

Action ActionSet::sample(RandomStream& rng) const {
  std::vector<std::size_t> c(choice_slots());
  if (family() == Family::Matching) {
    // Sequential sampling without replacement: a uniform injection.
    std::vector<std::size_t> free(dims_.n);
    std::iota(free.begin(), free.end(), std::size_t{0});
    for (std::size_t j = 0; j < c.size(); ++j) {
      const std::size_t pick = rng.next_index(free.size());
      c[j] = free[pick];
      free.erase(free.begin() + static_cast<std::ptrdiff_t>(pick));
    }
  } else {
    for (auto& v : c) v = rng.next_index(choice_range());
  }
  return from_choices(c);
}

Action ActionSet::cyclic(std::size_t t) const {
  std::vector<std::size_t> c(choice_slots());
  for (std::size_t j = 0; j < c.size(); ++j) {
    // Row offsets keep matching columns distinct.
    c[j] = family() == Family::Matching ? (t + j) % dims_.n : t % dims_.n;
  }
  return from_choices(c);
}

const LayeredGraph& ActionSet::graph() const {
  if (family() != Family::LayeredPath) {
    throw std::logic_error("graph() is only defined for layered paths");
  }
  return graph_;
}

std::string ActionSet::describe() const {
  std::ostringstream os;
  os << "family=" << family_name(family()) << " d=" << dims_.d
     << " k=" << dims_.k << " n=" << dims_.n
     << " cardinality=" << cardinality();
  return os.str();
}

// -- Path <-> multitask -------------------------------------------------------

Dimensions induced_multitask_dims(const Dimensions& path_dims) {
  if (path_dims.family != Family::LayeredPath) {
    reject("induced multitask dims need a layered path instance");
  }
  return multitask_dims(path_dims.k / 2, path_dims.d / path_dims.k);
}

Action path_to_multitask(const ActionSet& paths, const Action& path) {
  if (paths.family() != Family::LayeredPath) {
    reject("path_to_multitask needs a layered path set");
  }
  if (!paths.contains(path)) {
    reject("action " + path.to_string() + " is not an s-t path");
  }
  const auto choices = paths.choices_of(path);
  const Dimensions mt = induced_multitask_dims(paths.dims());
  std::vector<std::size_t> support;
  for (std::size_t j = 0; j < choices.size(); ++j) {
    support.push_back(j * mt.n + choices[j]);
  }
  return Action(mt.d, std::move(support));
}

Action multitask_to_path(const ActionSet& paths, const Action& arms) {
  if (paths.family() != Family::LayeredPath) {
    reject("multitask_to_path needs a layered path set");
  }
  const Dimensions mt = induced_multitask_dims(paths.dims());
  const ActionSet tasks = build_multitask(mt.k, mt.n);
  if (!tasks.contains(arms)) {
    reject("action " + arms.to_string() + " is not a multitask arm tuple");
  }
  return paths.from_choices(tasks.choices_of(arms));
}

}  // namespace combandit
