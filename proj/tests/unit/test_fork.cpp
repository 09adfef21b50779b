// Copyright 2026 The quorumlens Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "catch_amalgamated.hpp"

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace quorumlens;

namespace {

// Honest nodes never hold both values; the witness must validate as claimed.
template <class N>
void check_witness(const N& net, const ForkWitness& w) {
  CHECK(check_profile(net, w.profile).empty());
  CHECK(w.node_a != w.node_b);
  CHECK(net.is_honest(w.node_a));
  CHECK(net.is_honest(w.node_b));
  CHECK(validates(net, w.profile, w.node_a, w.value_a));
  CHECK(validates(net, w.profile, w.node_b, w.value_b));
  CHECK(w.value_a == opposite(w.value_b));
}

}  // namespace

TEST_CASE("fork oracle agrees on the reference networks", "[fork][oracle]") {
  CHECK(oracle::fork_exists(oracle::flatten(fixtures::fig1())));
  CHECK_FALSE(oracle::fork_exists(oracle::flatten(fixtures::unanimity(4))));
  CHECK(oracle::fork_exists(oracle::flatten(fixtures::example1())));
  CHECK_FALSE(oracle::fork_exists(oracle::flatten(fixtures::example4())));
  CHECK(oracle::strong_fork_exists(oracle::flatten(fixtures::fig1())));
  CHECK_FALSE(oracle::strong_fork_exists(oracle::flatten(fixtures::example2())));
}

TEST_CASE("pairwise fork criterion matches profile enumeration", "[fork][property]") {
  int forks = 0;
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    const std::size_t n = 4 + seed % 3;
    const Btn net = random_vetoed_btn({n, 3, 3, seed % 3, seed});
    const auto r = find_fork(net);
    REQUIRE(r.verdict != Verdict::budget_exceeded);
    const bool expected = oracle::fork_exists(oracle::flatten(net));
    CAPTURE(seed);
    CHECK((r.verdict == Verdict::violated) == expected);
    if (r.witness) {
      check_witness(net, *r.witness);
      ++forks;
    }
  }
  // Both verdicts must be exercised.
  CHECK(forks > 0);
  CHECK(forks < 120);
}

TEST_CASE("quota fork route matches profile enumeration", "[fork][property]") {
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    GenParams p;
    p.node_count = 5 + seed % 2;
    p.trust_size = 3 + seed % 3;
    p.quota = seed % 2 ? make_rational(3, 4) : make_rational(4, 5);
    p.byzantine_count = seed % 3;
    p.seed = seed;
    p.topology = seed % 4 == 0 ? Topology::overlapping_groups : Topology::clique;
    const Qbtn net = random_qbtn(p);
    const auto r = find_fork(net);
    CAPTURE(seed);
    CHECK((r.verdict == Verdict::violated) == oracle::fork_exists(oracle::flatten(net)));
    if (r.witness) check_witness(net, *r.witness);
  }
}

TEST_CASE("strong fork search matches selector enumeration", "[fork][property]") {
  int strong = 0;
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    const std::size_t n = 4 + seed % 4;
    const Btn net = random_vetoed_btn({n, 3, 3, seed % 3, seed});
    const auto r = find_strong_fork(net);
    CAPTURE(seed);
    CHECK((r.verdict == Verdict::violated) == oracle::strong_fork_exists(oracle::flatten(net)));
    if (r.witness) {
      ++strong;
      const auto& w = *r.witness;
      CHECK_FALSE((w.support_a & w.support_b).intersects(net.honest()));
      CHECK(w.support_a.test(w.node_a));
      CHECK(w.support_b.test(w.node_b));
    }
  }
  CHECK(strong > 0);
  CHECK(strong < 120);
}

TEST_CASE("safety implies weak safety", "[fork][property]") {
  int safe = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const Btn net = random_vetoed_btn({5 + seed % 3, 4, 2, seed % 2, seed});
    if (find_fork(net).verdict != Verdict::holds) continue;
    ++safe;
    CAPTURE(seed);
    CHECK(find_strong_fork(net).verdict == Verdict::holds);
  }
  CHECK(safe > 0);
}

TEST_CASE("weak safety does not imply safety", "[fork]") {
  // A 4-cycle of pair slices: 1 and 2 have honest-disjoint slices, yet
  // every closure runs round the whole cycle.
  SliceDraft d;
  d.nodes = fixtures::labels(4);
  d.vetoed = true;
  d.slices["1"] = {{"1", "3"}};
  d.slices["2"] = {{"2", "4"}};
  d.slices["3"] = {{"3", "2"}};
  d.slices["4"] = {{"4", "1"}};
  const Btn net = validate_network(d).take();
  CHECK(find_fork(net).verdict == Verdict::violated);
  CHECK(find_strong_fork(net).verdict == Verdict::holds);
  CHECK_FALSE(oracle::strong_fork_exists(oracle::flatten(net)));
  CHECK(oracle::fork_exists(oracle::flatten(net)));

  const Btn u = fixtures::unanimity(4, {"4"});
  CHECK(find_strong_fork(u).verdict == Verdict::holds);
  CHECK(find_fork(u).verdict == Verdict::holds);
}
