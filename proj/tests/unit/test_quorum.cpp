// Copyright 2026 The quorumlens Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "catch_amalgamated.hpp"

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace quorumlens;

namespace {

std::vector<oracle::Mask> masks(const std::vector<NodeSet>& sets) {
  std::vector<oracle::Mask> out;
  for (const auto& s : sets) out.push_back(oracle::to_mask(s));
  return out;
}

// Fig-1 with a Byzantine node 7 inside every honest slice.
Btn fig1_with_byzantine_bridge() {
  SliceDraft d;
  d.nodes = fixtures::labels(7);
  d.byzantine = {"7"};
  d.vetoed = true;
  for (const char* a : {"1", "2", "3"}) d.slices[a] = {{"1", "2", "3", "7"}};
  for (const char* a : {"4", "5", "6"}) d.slices[a] = {{"4", "5", "6", "7"}};
  return validate_network(d).take();
}

Btn random_btn(std::uint64_t seed) {
  return random_vetoed_btn({4 + seed % 7, 2 + seed % 3, 1 + seed % 3, seed % 3, seed});
}

}  // namespace

TEST_CASE("quorum membership", "[quorum]") {
  const Btn fig1 = fixtures::fig1();
  CHECK(is_quorum(fig1, make_set(6, {0, 1, 2})));
  CHECK_FALSE(is_quorum(fig1, make_set(6, {0, 1})));
  CHECK(is_quorum(fig1, full_set(6)));
  CHECK_FALSE(is_quorum(fig1, NodeSet(6)));
  CHECK(is_quorum(fixtures::unanimity(4), full_set(4)));
  CHECK_THROWS_AS(is_quorum(fig1, NodeSet(5)), PreconditionError);
}

TEST_CASE("greatest quorum inside a set", "[quorum]") {
  const Btn fig1 = fixtures::fig1();
  CHECK(max_quorum_within(fig1, make_set(6, {0, 1, 2, 3})) == make_set(6, {0, 1, 2}));
  CHECK(max_quorum_within(fig1, full_set(6)) == full_set(6));
  CHECK(max_quorum_within(fig1, NodeSet(6)).none());
}

TEST_CASE("minimal quora", "[quorum]") {
  auto fig1 = minimal_quora(fixtures::fig1());
  REQUIRE(fig1.verdict == Verdict::holds);
  CHECK(fig1.quora == std::vector<NodeSet>{make_set(6, {0, 1, 2}), make_set(6, {3, 4, 5})});
  CHECK(minimal_quora(fixtures::example2()).quora == std::vector<NodeSet>{make_set(6, {3, 4, 5})});
  CHECK(minimal_quora(fixtures::single_vetoed()).quora == std::vector<NodeSet>{make_set(1, {0})});
  CHECK(minimal_quora(fixtures::fig1(), Budget{3, 64}).verdict == Verdict::budget_exceeded);
}

TEST_CASE("quorum intersection on the reference networks", "[quorum]") {
  const auto fig1 = check_quorum_intersection(fixtures::fig1(), {}, true);
  REQUIRE(fig1.verdict == Verdict::violated);
  CHECK(fig1.witness->first == make_set(6, {0, 1, 2}));
  CHECK(fig1.witness->second == make_set(6, {3, 4, 5}));
  CHECK(fig1.minimal_quora->size() == 2);

  CHECK(check_quorum_intersection(fixtures::example2()).holds());
  CHECK(check_quorum_intersection(fixtures::unanimity(4)).holds());
  CHECK(check_quorum_intersection(fixtures::fig1(), Budget{5, 64}).verdict == Verdict::budget_exceeded);
}

TEST_CASE("honest quorum intersection", "[quorum]") {
  const Btn bridged = fig1_with_byzantine_bridge();
  const auto r = check_qi_honest(bridged);
  REQUIRE(r.verdict == Verdict::violated);
  CHECK_FALSE((r.witness->first & r.witness->second).intersects(bridged.honest()));
  CHECK(is_quorum(bridged, r.witness->first));
  CHECK(is_quorum(bridged, r.witness->second));

  for (const char* b : {"1", "2", "3"}) CHECK(check_qi_honest(fixtures::unanimity(4, {b})).holds());

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Btn net = random_vetoed_btn({6, 3, 2, 0, seed});
    CHECK(check_qi_honest(net).verdict == check_quorum_intersection(net).verdict);
  }
}

TEST_CASE("quorum search matches subset enumeration", "[quorum][property]") {
  int violated = 0;
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const Btn net = random_btn(seed);
    const auto flat = oracle::flatten(net);
    CAPTURE(seed);
    const auto qi = check_quorum_intersection(net, {}, true);
    CHECK(qi.holds() == oracle::has_qi(flat));
    CHECK(masks(*qi.minimal_quora) == oracle::minimal_quora(flat));
    if (!qi.holds()) {
      ++violated;
      CHECK(is_quorum(net, qi.witness->first));
      CHECK(is_quorum(net, qi.witness->second));
      CHECK_FALSE(qi.witness->first.intersects(qi.witness->second));
    }
    const auto honest = check_qi_honest(net);
    CHECK(honest.holds() == oracle::has_honest_qi(flat));
    if (!honest.holds()) {
      CHECK(is_quorum(net, honest.witness->first));
      CHECK(is_quorum(net, honest.witness->second));
      CHECK_FALSE((honest.witness->first & honest.witness->second).intersects(net.honest()));
    }
  }
  CHECK(violated > 0);
  CHECK(violated < 150);
}

TEST_CASE("quota networks go through the same search", "[quorum][property]") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    GenParams p;
    p.node_count = 6 + seed % 3;
    p.trust_size = 3 + seed % 3;
    p.byzantine_count = seed % 2;
    p.seed = seed;
    p.topology = seed % 2 ? Topology::overlapping_groups : Topology::clique;
    p.overlap = 0.2;
    const Qbtn net = random_qbtn(p);
    CAPTURE(seed);
    CHECK(check_quorum_intersection(net).holds() == oracle::has_qi(oracle::flatten(net)));
    CHECK(check_qi_honest(net).holds() == oracle::has_honest_qi(oracle::flatten(net)));
  }
}

TEST_CASE("quora are closed under union", "[quorum][property]") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const Btn net = random_btn(seed);
    const auto qs = oracle::all_quora(oracle::flatten(net));
    for (std::size_t a = 0; a < qs.size(); a += 3)
      for (std::size_t b = a; b < qs.size(); b += 5)
        CHECK(is_quorum(net, oracle::to_set(net.size(), qs[a] | qs[b])));
  }
}

TEST_CASE("greatest quorum contains every quorum inside the set", "[quorum][property]") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const Btn net = random_btn(seed);
    const auto qs = oracle::all_quora(oracle::flatten(net));
    Rng rng(seed);
    for (int trial = 0; trial < 10; ++trial) {
      const auto s = static_cast<oracle::Mask>(rng.below(std::uint64_t{1} << net.size()));
      const NodeSet m = max_quorum_within(net, oracle::to_set(net.size(), s));
      CHECK((m.none() || is_quorum(net, m)));
      CHECK(oracle::to_mask(m) == (oracle::to_mask(m) & s));
      for (auto q : qs)
        if ((q & s) == q) CHECK(oracle::to_set(net.size(), q).is_subset_of(m));
    }
  }
}

TEST_CASE("slice addition", "[quorum]") {
  const Btn ex2 = fixtures::example2();
  const auto broken = check_slice_addition(ex2, 2, make_set(6, {0, 1, 2}));
  REQUIRE(broken.verdict == Verdict::violated);
  CHECK(broken.witness->first == make_set(6, {0, 1, 2}));
  CHECK(broken.witness->second == make_set(6, {3, 4, 5}));

  CHECK(check_slice_addition(ex2, 2, make_set(6, {0, 1, 2, 4})).holds());
  CHECK_THROWS_AS(check_slice_addition(fixtures::fig1(), 0, make_set(6, {0, 1, 2})), PreconditionError);
  CHECK_THROWS_AS(check_slice_addition(ex2, 0, make_set(6, {0, 5})), PreconditionError);
}

TEST_CASE("slice addition agrees with a full check", "[quorum][property]") {
  int bases = 0;
  for (std::uint64_t seed = 1; seed <= 400 && bases < 60; ++seed) {
    const std::size_t n = 4 + seed % 4;
    const Btn net = seed % 2 ? random_vetoed_btn({n, n, 3, seed % 2, seed})
                             : expand_qbtn(random_qbtn({n, n - 1, make_rational(3, 4), 0, seed}));
    if (!check_quorum_intersection(net).holds()) continue;
    Rng rng(seed);
    const NodeIndex node = rng.below(net.size());
    if (net.is_byzantine(node)) continue;
    ++bases;
    NodeSet slice = make_set(net.size(), {node});
    for (auto k : members(net.trust(node)))
      if (rng.coin()) slice.set(k);
    CAPTURE(seed);
    const auto inc = check_slice_addition(net, node, slice);
    const auto full = check_quorum_intersection(net.with_slice(node, slice));
    CHECK(inc.verdict == full.verdict);
    CHECK(inc.holds() == oracle::has_qi(oracle::flatten(net.with_slice(node, slice))));
  }
  CHECK(bases >= 30);
}
