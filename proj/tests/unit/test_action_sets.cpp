#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "combandit/action_sets.hpp"
#include "combandit/errors.hpp"
#include "combandit/rng.hpp"

using namespace combandit;

namespace {

Action from_mask(std::size_t d, std::uint64_t mask) {
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < d; ++i) {
    if (mask >> i & 1U) support.push_back(i);
  }
  return Action(d, support);
}

// Brute-force oracles: filter {0,1}^d by the defining constraints.
std::set<Action> multitask_oracle(std::size_t k, std::size_t n) {
  const std::size_t d = k * n;
  std::set<Action> out;
  for (std::uint64_t m = 0; m < (1ULL << d); ++m) {
    bool ok = true;
    for (std::size_t j = 0; j < k && ok; ++j) {
      ok = std::popcount((m >> (j * n)) & ((1ULL << n) - 1)) == 1;
    }
    if (ok) out.insert(from_mask(d, m));
  }
  return out;
}

std::set<Action> matching_oracle(std::size_t k, std::size_t n) {
  const std::size_t d = k * n;
  std::set<Action> out;
  for (std::uint64_t m = 0; m < (1ULL << d); ++m) {
    bool ok = true;
    for (std::size_t r = 0; r < k && ok; ++r) {
      ok = std::popcount((m >> (r * n)) & ((1ULL << n) - 1)) == 1;
    }
    for (std::size_t c = 0; c < n && ok; ++c) {
      int column = 0;
      for (std::size_t r = 0; r < k; ++r) column += (m >> (r * n + c)) & 1U;
      ok = column <= 1;
    }
    if (ok) out.insert(from_mask(d, m));
  }
  return out;
}

// Every edge subset that forms a walk from source to sink.
std::set<Action> path_oracle(const ActionSet& set) {
  const LayeredGraph& g = set.graph();
  const std::size_t d = g.edge_count();
  std::set<Action> out;
  for (std::uint64_t m = 0; m < (1ULL << d); ++m) {
    std::size_t at = g.source();
    std::uint64_t left = m;
    bool moved = true;
    while (at != g.sink() && moved) {
      moved = false;
      for (std::size_t e = 0; e < d; ++e) {
        if ((left >> e & 1U) && g.edges[e].from == at) {
          at = g.edges[e].to;
          left &= ~(1ULL << e);
          moved = true;
          break;
        }
      }
    }
    if (m != 0 && at == g.sink() && left == 0) out.insert(from_mask(d, m));
  }
  return out;
}

std::set<Action> as_set(const std::vector<Action>& v) {
  return {v.begin(), v.end()};
}

}  // namespace

TEST_CASE("multitask examples") {
  const ActionSet s = build_multitask(2, 2);
  std::vector<std::string> listed;
  for (const auto& x : s.enumerate()) listed.push_back(x.to_string());
  CHECK(listed == std::vector<std::string>{"1010", "1001", "0110", "0101"});
  CHECK(build_multitask(1, 2).cardinality() == 2);
  CHECK(build_multitask(3, 4).cardinality() == 64);
  CHECK(s.contains(Action::from_string("1010")));
  CHECK_FALSE(s.contains(Action::from_string("1100")));
  CHECK_THROWS_AS(s.contains(Action::from_string("101")),
                  std::invalid_argument);
}

TEST_CASE("enumeration matches brute-force oracles") {
  for (std::size_t k = 1; k <= 4; ++k) {
    for (std::size_t n = 2; n <= 4; ++n) {
      if (k * n > 16) continue;
      const ActionSet mt = build_multitask(k, n);
      const auto listed = mt.enumerate();
      CHECK(as_set(listed) == multitask_oracle(k, n));
      CHECK(std::is_sorted(listed.begin(), listed.end(),
                           [&](const Action& a, const Action& b) {
                             return mt.choices_of(a) < mt.choices_of(b);
                           }));
      if (k <= n) {
        const ActionSet mm = build_matching(k, n);
        CHECK(as_set(mm.enumerate()) == matching_oracle(k, n));
        CHECK(mm.cardinality() == matching_oracle(k, n).size());
      }
    }
  }
  for (auto [k, d] : {std::pair<std::size_t, std::size_t>{2, 4}, {2, 6},
                      {4, 8}, {4, 12}, {6, 12}, {4, 16}}) {
    const ActionSet p = build_layered_path_graph(k, d);
    CHECK(as_set(p.enumerate()) == path_oracle(p));
  }
}

TEST_CASE("layered graph shape") {
  const ActionSet p = build_layered_path_graph(4, 8);
  CHECK(p.graph().vertex_count() == 7);
  CHECK(p.graph().edge_count() == 8);
  CHECK(p.graph().layers == 2);
  const auto paths = p.enumerate();
  CHECK(paths.size() == 4);
  for (const auto& x : paths) {
    CHECK(x.weight() == 4);
    CHECK(p.contains(x));
  }
  const ActionSet small = build_layered_path_graph(2, 4);
  CHECK(small.graph().width == 2);
  CHECK(small.cardinality() == 2);
  CHECK(build_layered_path_graph(4, 16).cardinality() == 16);
  CHECK_THROWS(build_layered_path_graph(3, 6));
  CHECK_THROWS(build_layered_path_graph(4, 10));
}

TEST_CASE("matching examples") {
  CHECK(build_matching(2, 3).enumerate().size() == 6);
  CHECK(build_matching(2, 3).dims().d == 6);
  CHECK(build_matching(1, 3).cardinality() == 3);
  CHECK(build_matching(2, 4).cardinality() == 12);
  CHECK_THROWS(build_matching(3, 2));
}

TEST_CASE("closed-form cardinalities") {
  CHECK(build_multitask(5, 3).cardinality() == 243);
  CHECK(build_matching(3, 7).cardinality() == 210);
  CHECK(build_layered_path_graph(6, 18).cardinality() == 27);
  CHECK(build_multitask(64, 4).cardinality() == UINT64_MAX);
  CHECK_THROWS_AS(build_multitask(3, 1), std::invalid_argument);
}

TEST_CASE("enumeration cap") {
  const ActionSet big = build_multitask(10, 4);
  CHECK(big.cardinality() == 1'048'576);
  CHECK_THROWS_AS(big.enumerate(1'000'000), CapExceeded);
  try {
    (void)big.enumerate(1'000'000);
  } catch (const CapExceeded& e) {
    CHECK(std::string(e.what()).find("1048576") != std::string::npos);
  }
}

TEST_CASE("action string round trip") {
  const Action x = Action::from_string("0110");
  CHECK(x.support() == std::vector<std::size_t>{1, 2});
  CHECK(x.to_string() == "0110");
  const double loss[] = {1.0, 2.0, 4.0, 8.0};
  CHECK(x.dot(loss) == 6.0);
  CHECK(x.overlap(Action::from_string("0101")) == 1);
  CHECK_THROWS(Action::from_string("01x0"));
}

TEST_CASE("path bijection examples") {
  const ActionSet p2 = build_layered_path_graph(2, 4);
  const Action via_first = p2.from_choices(std::vector<std::size_t>{0});
  CHECK(path_to_multitask(p2, via_first).to_string() == "10");

  const ActionSet p4 = build_layered_path_graph(4, 8);
  const Action path = p4.from_choices(std::vector<std::size_t>{1, 0});
  CHECK(path_to_multitask(p4, path).to_string() == "0110");
}

TEST_CASE("path bijection is a bijection") {
  const ActionSet p = build_layered_path_graph(4, 16);
  const ActionSet mt = build_multitask(2, 4);
  std::set<Action> images;
  for (const auto& x : p.enumerate()) {
    const Action arms = path_to_multitask(p, x);
    CHECK(mt.contains(arms));
    CHECK(multitask_to_path(p, arms) == x);
    images.insert(arms);
  }
  CHECK(images == as_set(mt.enumerate()));
  CHECK_THROWS(path_to_multitask(p, Action::from_string("1111000000000000")));
}

TEST_CASE("cyclic rounds are members and cover every coordinate") {
  for (const ActionSet& s :
       {build_multitask(3, 4), build_matching(2, 5),
        build_layered_path_graph(4, 12)}) {
    std::vector<int> hit(s.dims().d, 0);
    for (std::size_t t = 0; t < s.choice_range(); ++t) {
      const Action x = s.cyclic(t);
      REQUIRE(s.contains(x));
      for (auto i : x.support()) hit[i] = 1;
    }
    CHECK(std::count(hit.begin(), hit.end(), 1) ==
          static_cast<long>(s.dims().d));
  }
}

TEST_CASE("uniform sampling over S") {
  for (const ActionSet& s : {build_multitask(2, 2), build_matching(2, 3)}) {
    RandomStream rng(derive_seed(7, stream_tag::kOptimum));
    std::map<Action, int> freq;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) ++freq[s.sample(rng)];
    CHECK(freq.size() == s.cardinality());
    const double expected = 1.0 / static_cast<double>(s.cardinality());
    for (const auto& [x, c] : freq) {
      CHECK(std::abs(static_cast<double>(c) / draws - expected) < 0.02);
    }
  }
}
