// Copyright 2026 The quorumlens Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. Instance sets come from fixed seed loops.

#include "quorumlens/quorumlens.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace quorumlens;

namespace {

const std::string nets = QUORUMLENS_NETWORKS;

// Collects failed checks for one criterion.
struct Check {
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void note(const std::string& s) { notes.push_back(s); }
};

struct Criterion {
  int id;
  std::string name;
  double limit_s;  // 0: no runtime bound
  std::function<void(Check&)> body;
};

std::string str(const NodeSet& s) {
  std::ostringstream o;
  o << "{";
  bool first = true;
  for_each_member(s, [&](NodeIndex k) {
    o << (first ? "" : ",") << k + 1;
    first = false;
  });
  return o.str() + "}";
}

Budget roomy(const Btn& net) { return Budget{net.size(), net.total_slices()}; }

void figure1(Check& c) {
  const Btn fig1 = std::get<Btn>(load_network(nets + "/fig1.json").network);
  const auto qi = check_quorum_intersection(fig1);
  c.expect(qi.verdict == Verdict::violated, "fig1: QI should be violated");
  if (qi.witness) {
    const NodeSet a = make_set(6, {0, 1, 2}), b = make_set(6, {3, 4, 5});
    const auto& [x, y] = *qi.witness;
    c.expect((x == a && y == b) || (x == b && y == a), "fig1: witness " + str(x) + " / " + str(y));
  }
  const Btn ex2 = std::get<Btn>(load_network(nets + "/example2.json").network);
  c.expect(check_quorum_intersection(ex2).holds(), "example 2: QI should hold");
  const auto mq = minimal_quora(ex2);
  c.expect(mq.quora == std::vector<NodeSet>{make_set(6, {3, 4, 5})}, "example 2: minimal quora");
}

void banzhaf_golden(Check& c) {
  const Qbtn ex4 = std::get<Qbtn>(load_network(nets + "/example4.json").network);
  for (NodeIndex i = 0; i < 5; ++i) {
    const auto raw = banzhaf_raw(ex4, i);
    const auto row = banzhaf_row(ex4, i);
    for (NodeIndex j = 0; j < 5; ++j) {
      c.expect(raw[j] == make_rational(2, 8), "raw index " + std::to_string(i + 1) + "," + std::to_string(j + 1));
      c.expect(row[j] == make_rational(1, 5), "normalised index " + std::to_string(i + 1) + "," + std::to_string(j + 1));
    }
    c.expect(raw[5] == 0 && row[5] == 0, "node 6 has influence");
  }
}

void limit_golden(Check& c) {
  const auto m = influence_matrix(std::get<Qbtn>(load_network(nets + "/example4.json").network));
  c.expect(multiply(m.entries, m.entries) == m.entries, "I^2 != I");
  const auto r = limit_matrix(m);
  c.expect(r.classification == Regularity::fully_regular, "all-honest: not fully regular");
  c.expect(r.limit && max_abs_diff(*r.limit, m.to_double()) < 1e-9, "all-honest: limit differs from I");

  const auto byz = influence_matrix(std::get<Qbtn>(load_network(nets + "/example4-byz5.json").network));
  const auto b = limit_matrix(byz);
  c.expect(b.limit.has_value(), "byzantine: no limit");
  if (!b.limit) return;
  for (NodeIndex i = 0; i < 6; ++i) {
    c.expect(std::abs((*b.limit)[i][4] - 1) < 1e-9, "byzantine: column 5 row " + std::to_string(i + 1));
    for (NodeIndex k = 0; k < 6; ++k) {
      if (k == 4) continue;
      c.expect((*b.limit)[i][k] == 0.0 && !b.structural_support[i][k],
               "byzantine: entry " + std::to_string(i + 1) + "," + std::to_string(k + 1) + " not a structural zero");
    }
  }
}

void reduction_suite(Check& c) {
  int formulas = 0, sat = 0, eligible = 0;
  for (std::uint64_t seed = 1; formulas < 120; ++seed) {
    // Random 3CNF at this scale is nearly always satisfiable unless the
    // variable count is small, so half the instances use at most 3.
    const int n = seed % 2 ? 1 + static_cast<int>(seed / 2 % 3) : 1 + static_cast<int>(seed / 2 % 6);
    const std::size_t m = seed % 2 ? 12 : 1 + seed / 2 % 12;
    const Cnf f = random_cnf(n, m, 1000 + seed);
    ++formulas;
    const Btn net = reduce_sat_to_btn(f);
    const auto qi = check_quorum_intersection(net, roomy(net));
    const auto model = brute_sat(f);
    const std::string tag = "seed " + std::to_string(1000 + seed);
    c.expect(qi.verdict != Verdict::budget_exceeded, tag + ": budget");
    c.expect(qi.holds() == !model.has_value(), tag + ": QI verdict disagrees with brute force");
    if (qi.verdict == Verdict::violated) {
      ++sat;
      const ReductionLayout at{f.num_vars, f.clauses.size()};
      const auto& side = qi.witness->first.test(at.z0) ? qi.witness->first : qi.witness->second;
      c.expect(evaluate(f, decode_assignment(f, side)), tag + ": witness does not decode to a model");
    }
    if (!brute_sat(with_fixed(f, 1, false))) {
      ++eligible;
      const auto inst = reduce_slice_addition_instance(f);
      const Budget b = roomy(inst.base);
      c.expect(check_quorum_intersection(inst.base, b).holds(), tag + ": slice-addition base lacks QI");
      c.expect(check_slice_addition(inst.base, inst.node, inst.slice, b).holds() == !model.has_value(),
               tag + ": slice addition disagrees with brute force");
    }
  }
  c.note(std::to_string(formulas) + " formulas, " + std::to_string(sat) + " satisfiable, " +
         std::to_string(eligible) + " slice-addition instances");
  c.expect(eligible >= 10, "too few slice-addition instances");
}

void safe_networks_overlap(Check& c) {
  int networks = 0, certified = 0, overlap_fail = 0, common_fail = 0;
  std::string first;
  for (std::uint64_t seed = 1; networks < 240; ++seed) {
    GenParams p;
    p.node_count = 5 + seed % 6;
    p.trust_size = std::min<std::size_t>(p.node_count, 3 + seed % 6);
    p.quota = seed % 2 ? make_rational(3, 4) : make_rational(4, 5);
    p.topology = static_cast<Topology>(seed % 3);
    p.overlap = 0.25 * (seed % 5);
    p.seed = 5000 + seed;
    std::optional<Qbtn> made;
    try {
      made = random_qbtn(p);
    } catch (const PreconditionError&) {
      continue;
    }
    const Qbtn& net = *made;
    ++networks;
    const auto cert = certify_safe_under_failure_model(net);
    c.expect(cert.verdict != Verdict::budget_exceeded, "certification budget");
    if (cert.verdict != Verdict::holds) continue;
    ++certified;
    const bool overlap = overlap_bounds_pass(check_overlap_bounds(net));
    const bool common = common_trust_set(net).any();
    if (!overlap) ++overlap_fail;
    if (!common) ++common_fail;
    if ((!overlap || !common) && first.empty())
      first = "seed " + std::to_string(p.seed) + " (n=" + std::to_string(p.node_count) +
              ", |T|=" + std::to_string(p.trust_size) + ", q=" + to_string(p.quota) + ", " + to_string(p.topology) + ")";
  }
  c.note(std::to_string(networks) + " networks, " + std::to_string(certified) + " certified safe, " +
         std::to_string(overlap_fail) + " violate the overlap bound, " + std::to_string(common_fail) +
         " lack common trust");
  if (!first.empty()) c.note("first counterexample: " + first);
  c.expect(overlap_fail == 0 && common_fail == 0, std::to_string(overlap_fail + common_fail) + " counterexamples");
}

void weak_safety_equivalence(Check& c) {
  int checked = 0, weakly_safe = 0;
  for (std::uint64_t seed = 1; checked < 80; ++seed) {
    const std::size_t n = 4 + seed % 5;
    const Btn net = random_vetoed_btn({n, 2 + seed % (n - 1), 1 + seed % 3, seed % 3, 7000 + seed});
    ++checked;
    const auto sf = find_strong_fork(net);
    const auto hq = check_qi_honest(net, roomy(net));
    const std::string tag = "seed " + std::to_string(7000 + seed);
    c.expect(sf.verdict != Verdict::budget_exceeded && hq.verdict != Verdict::budget_exceeded, tag + ": budget");
    c.expect((sf.verdict == Verdict::violated) == !hq.holds(), tag + ": strong fork and honest QI disagree");
    if (sf.verdict == Verdict::holds) ++weakly_safe;
  }
  c.note(std::to_string(checked) + " networks, " + std::to_string(weakly_safe) + " weakly safe");
}

void observation_bounds(Check& c) {
  int networks = 0;
  std::size_t profiles = 0;
  for (std::uint64_t seed = 1; networks < 24 && seed < 2000; ++seed) {
    GenParams p;
    p.node_count = 5 + seed % 2;
    p.trust_size = 3 + seed % 3;
    p.quota = seed % 2 ? make_rational(3, 4) : make_rational(4, 5);
    p.byzantine_count = seed % 3 ? 1 : 0;
    p.topology = static_cast<Topology>(seed % 2);
    p.seed = 9000 + seed;
    const Qbtn net = random_qbtn(p);
    if (!respects_failure_model(net, net.byzantine())) continue;
    ++networks;
    bool ok = true;
    oracle::for_each_opinion_profile(net, [&](const OpinionProfile& prof) {
      ++profiles;
      for (NodeIndex i = 0; i < net.size(); ++i)
        for (NodeIndex j = 0; j < net.size(); ++j) {
          if (net.is_byzantine(i) || net.is_byzantine(j)) continue;
          for (Opinion x : {Opinion::zero, Opinion::one}) {
            if (observed_set(net, prof, i, x).none()) continue;
            const auto r = check_observation_bounds(net, prof, i, j, x);
            if (!r.lower_holds || !r.upper_holds) ok = false;
          }
        }
    });
    c.expect(ok, "seed " + std::to_string(p.seed) + ": a bound fails");
  }
  c.expect(networks >= 20, "too few networks respecting the failure model");
  c.note(std::to_string(networks) + " networks, " + std::to_string(profiles) + " profiles");

  const Qbtn ex1 = std::get<Qbtn>(load_network(nets + "/example1.json").network);
  const auto r = check_observation_bounds(ex1, fixtures::example1_profile(), 0, 3, Opinion::one);
  c.expect(r.upper_holds && r.upper == Rational(r.opposite_seen_by_j), "example 1: upper bound not attained");
}

void centralised_limits(Check& c) {
  int total = 0, claim1 = 0, claim2_cases = 0, claim2_fail = 0, claim3_cases = 0, claim3_fail = 0;
  int claim2_fail_unreached = 0;
  for (std::uint64_t seed = 1; total < 220; ++seed) {
    GenParams p;
    p.node_count = 5 + seed % 4;
    p.trust_size = std::min<std::size_t>(p.node_count, 3 + seed % 4);
    p.quota = seed % 2 ? make_rational(3, 4) : make_rational(4, 5);
    p.byzantine_count = seed % 3;
    p.topology = Topology::centralised;
    p.seed = 11000 + seed;
    const Btn net = expand_qbtn(random_qbtn(p));
    ++total;
    const auto r = verify_centralised_claims(net, 1e-12);
    if (r.regular == ClaimStatus::holds) ++claim1;
    if (r.fully_regular_if_few_byzantine != ClaimStatus::not_applicable) {
      ++claim2_cases;
      if (r.fully_regular_if_few_byzantine == ClaimStatus::fails) {
        ++claim2_fail;
        if (!r.byzantine_reaches_core) ++claim2_fail_unreached;
      }
    }
    if (r.byzantine_capture != ClaimStatus::not_applicable) {
      ++claim3_cases;
      if (r.byzantine_capture == ClaimStatus::fails) ++claim3_fail;
    }
    if (r.limit.limit && r.limit.classification == Regularity::fully_regular) {
      const auto& lim = *r.limit.limit;
      for (const auto& row : lim) c.expect(max_abs_diff({row}, {lim.front()}) < 1e-9, "fully regular rows differ");
    }
  }
  c.note(std::to_string(total) + " networks; claim 1 holds on " + std::to_string(claim1) + "; claim 2 fails on " +
         std::to_string(claim2_fail) + " of " + std::to_string(claim2_cases) + " (" +
         std::to_string(claim2_fail_unreached) + " with the Byzantine node untrusted by the core); claim 3 fails on " +
         std::to_string(claim3_fail) + " of " + std::to_string(claim3_cases));
  c.expect(claim1 == total, "claim 1 fails");
  c.expect(claim2_fail == 0, "claim 2 fails");
  c.expect(claim3_fail == 0, "claim 3 fails");
}

void representation(Check& c) {
  std::vector<Qbtn> cases{std::get<Qbtn>(load_network(nets + "/example4.json").network),
                          std::get<Qbtn>(load_network(nets + "/example4-byz5.json").network),
                          std::get<Qbtn>(load_network(nets + "/example1.json").network)};
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    GenParams p;
    p.node_count = 4 + seed % 5;
    p.trust_size = std::min<std::size_t>(p.node_count, 2 + seed % 6);
    p.quota = seed % 2 ? make_rational(3, 4) : make_rational(4, 5);
    p.byzantine_count = seed % 3;
    p.topology = static_cast<Topology>(seed % 3);
    p.seed = 13000 + seed;
    cases.push_back(random_qbtn(p));
  }
  int compared = 0;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const Qbtn& q = cases[k];
    const Btn e = expand_qbtn(q);
    const std::string tag = "case " + std::to_string(k);
    c.expect(find_fork(q).verdict == find_fork(e, Budget{e.size(), std::size_t(-1)}).verdict, tag + ": fork verdicts differ");
    const Budget b{q.size(), std::size_t(-1)};
    c.expect(check_quorum_intersection(q, b).verdict == check_quorum_intersection(e, b).verdict,
             tag + ": QI verdicts differ");
    c.expect(check_qi_honest(q, b).verdict == check_qi_honest(e, b).verdict, tag + ": honest QI verdicts differ");
    ++compared;
  }
  c.note(std::to_string(compared) + " networks");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "quorum intersection golden test", 1, figure1},
      {2, "Banzhaf golden test", 0, banzhaf_golden},
      {3, "limit golden tests", 1, limit_golden},
      {4, "SAT reduction oracle suite", 120, reduction_suite},
      {5, "overlap bound and common trust of safe networks", 300, safe_networks_overlap},
      {6, "strong fork iff no honest quorum intersection", 120, weak_safety_equivalence},
      {7, "observation bounds", 120, observation_bounds},
      {8, "centralised limit claims", 300, centralised_limits},
      {9, "quota expansion equivalence", 0, representation},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.body(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (cr.limit_s > 0 && secs >= cr.limit_s)
      c.expect(false, "runtime " + std::to_string(secs) + " s exceeds " + std::to_string(cr.limit_s) + " s");
    const bool pass = c.failures.empty();
    if (!pass) ++failed;
    std::printf("%s criterion %d: %s (%.2f s)\n", pass ? "PASS" : "FAIL", cr.id, cr.name.c_str(), secs);
    for (const auto& n : c.notes) std::printf("    %s\n", n.c_str());
    for (std::size_t k = 0; k < c.failures.size() && k < 5; ++k) std::printf("    - %s\n", c.failures[k].c_str());
    if (c.failures.size() > 5) std::printf("    - ... %zu more\n", c.failures.size() - 5);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
