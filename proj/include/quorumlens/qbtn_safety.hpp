// Copyright 2026 The quorumlens Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "quorumlens/fork.hpp"
#include "quorumlens/network.hpp"
#include "quorumlens/profile.hpp"
#include "quorumlens/rational.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace quorumlens {

/// Nodes trusted by every honest node.
template <class N>
NodeSet common_trust_set(const N& net) {
  NodeSet out = full_set(net.size());
  for (NodeIndex i = 0; i < net.size(); ++i)
    if (net.is_honest(i)) out &= net.trust(i);
  return out;
}

/// Cap on the Byzantine nodes two honest trust sets can share:
/// min{|T_i ∩ T_j|, b_i |T_i|, b_j |T_j|}, unrounded.
inline Rational beta(const Qbtn& net, NodeIndex i, NodeIndex j) {
  net.require_honest(i, "beta");
  net.require_honest(j, "beta");
  const Rational shared = static_cast<long>((net.trust(i) & net.trust(j)).count());
  const Rational cap_i = net.byz_fraction(i) * static_cast<long>(net.trust(i).count());
  const Rational cap_j = net.byz_fraction(j) * static_cast<long>(net.trust(j).count());
  return std::min({shared, cap_i, cap_j});
}

/// True iff every honest k has at most b_k |T_k| Byzantine nodes in T_k.
inline bool respects_failure_model(const Qbtn& net, const NodeSet& byzantine) {
  for (NodeIndex k = 0; k < net.size(); ++k) {
    if (byzantine.test(k)) continue;
    const Rational cap = net.byz_fraction(k) * static_cast<long>(net.trust(k).count());
    if (Rational(static_cast<long>((byzantine & net.trust(k)).count())) > cap) return false;
  }
  return true;
}

struct ObservationBounds {
  // (1): honest_seen_by_j >= lower
  Rational lower;
  std::size_t honest_seen_by_j = 0;
  bool lower_holds = false;
  // (2): opposite_seen_by_j <= upper
  Rational upper;
  std::size_t opposite_seen_by_j = 0;
  bool upper_holds = false;
  Rational beta;
  bool failure_model = true;  // false: the bounds are reported, not promised
};

/// Evaluates both observation bounds for (i, j, x) in profile p.
inline ObservationBounds check_observation_bounds(const Qbtn& net, const OpinionProfile& p, NodeIndex i, NodeIndex j,
                                                  Opinion x) {
  net.require_honest(i, "check_observation_bounds");
  net.require_honest(j, "check_observation_bounds");
  const NodeSet seen_i = observed_set(net, p, i, x);
  if (seen_i.none())
    throw PreconditionError("check_observation_bounds: node '" + net.label(i) + "' observes nobody holding " +
                            std::to_string(to_int(x)));
  const long t_i = static_cast<long>(net.trust(i).count());
  const long t_j = static_cast<long>(net.trust(j).count());
  const long shared = static_cast<long>((net.trust(i) & net.trust(j)).count());
  const long seen = static_cast<long>(seen_i.count());

  ObservationBounds r;
  r.beta = beta(net, i, j);
  r.lower = Rational(shared + seen - t_i) - r.beta;
  r.honest_seen_by_j = (observed_set(net, p, j, x) & net.honest()).count();
  r.lower_holds = Rational(static_cast<long>(r.honest_seen_by_j)) >= r.lower;
  r.upper = Rational(t_j - shared - seen + t_i) + r.beta;
  r.opposite_seen_by_j = observed_set(net, p, j, opposite(x)).count();
  r.upper_holds = Rational(static_cast<long>(r.opposite_seen_by_j)) <= r.upper;
  r.failure_model = respects_failure_model(net, net.byzantine());
  return r;
}

struct OverlapReport {
  NodeIndex i = 0;
  NodeIndex j = 0;
  std::size_t intersection_size = 0;
  Rational bound;  // b/(1-b) (|T_i| + |T_j|)
  Rational beta;
  bool satisfies = false;
};

/// Uniform b of a uniform-quota network; throws otherwise.
inline Rational uniform_byz_fraction(const Qbtn& net) {
  if (!net.uniform_quota()) throw PreconditionError("overlap bounds need a uniform quota");
  std::optional<Rational> b;
  for (NodeIndex i = 0; i < net.size(); ++i) {
    if (net.is_byzantine(i)) continue;
    if (b && *b != net.byz_fraction(i)) throw PreconditionError("overlap bounds need a uniform byz_fraction");
    b = net.byz_fraction(i);
  }
  return b.value_or(Rational(0));
}

/// One report per unordered honest pair, ordered by index.
inline std::vector<OverlapReport> check_overlap_bounds(const Qbtn& net) {
  const Rational b = uniform_byz_fraction(net);
  const Rational factor = b / (1 - b);
  std::vector<OverlapReport> out;
  for (NodeIndex i = 0; i < net.size(); ++i) {
    if (net.is_byzantine(i)) continue;
    for (NodeIndex j = i + 1; j < net.size(); ++j) {
      if (net.is_byzantine(j)) continue;
      OverlapReport r;
      r.i = i;
      r.j = j;
      r.intersection_size = (net.trust(i) & net.trust(j)).count();
      r.bound = factor * static_cast<long>(net.trust(i).count() + net.trust(j).count());
      r.beta = beta(net, i, j);
      r.satisfies = Rational(static_cast<long>(r.intersection_size)) > r.bound;
      out.push_back(std::move(r));
    }
  }
  return out;
}

inline bool overlap_bounds_pass(const std::vector<OverlapReport>& rs) {
  return std::all_of(rs.begin(), rs.end(), [](const OverlapReport& r) { return r.satisfies; });
}

namespace detail {

inline BigInt binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  BigInt r = 1;
  for (std::size_t t = 1; t <= k; ++t) r = r * (n - k + t) / t;
  return r;
}

}  // namespace detail

/// Explicit form of a quota network: every ceil(q_i |T_i|)-subset of T_i
/// becomes a slice. Byzantine nodes keep an empty slice list.
inline Btn expand_qbtn(const Qbtn& net, std::size_t max_slices_per_node = 1u << 16) {
  Btn::Parts p;
  p.nodes = net.nodes();
  p.byzantine = net.byzantine();
  p.vetoed = false;
  for (NodeIndex i = 0; i < net.size(); ++i) {
    p.trust.push_back(net.trust(i));
    p.slices.emplace_back();
    if (net.is_byzantine(i)) continue;
    const auto pool = members(net.trust(i));
    const auto t = net.threshold(i);
    if (detail::binomial(pool.size(), t) > max_slices_per_node)
      throw BudgetExceeded("expand_qbtn: node '" + net.label(i) + "' would need more than " +
                           std::to_string(max_slices_per_node) + " slices");
    // Walk t-combinations of pool in lexicographic order.
    std::vector<std::size_t> pick(t);
    for (std::size_t k = 0; k < t; ++k) pick[k] = k;
    for (;;) {
      NodeSet c(net.size());
      for (auto k : pick) c.set(pool[k]);
      p.slices.back().push_back(std::move(c));
      std::size_t k = t;
      while (k > 0 && pick[k - 1] == pool.size() - t + k - 1) --k;
      if (k == 0) break;
      ++pick[k - 1];
      for (std::size_t m = k; m < t; ++m) pick[m] = pick[m - 1] + 1;
    }
  }
  return Btn::create(std::move(p)).take();
}

enum class ForkRoute { quota, expanded };

struct SafetyCertificate {
  Verdict verdict = Verdict::holds;  // holds: no fork under any admissible placement
  std::size_t placements = 0;
  std::optional<NodeSet> placement;  // Byzantine set of the counterexample
  std::optional<ForkWitness> witness;
};

/// Safety under the failure model: no fork for any Byzantine set B with a
/// non-empty honest part and |B ∩ T_k| <= b_k |T_k| for every honest k. The
/// network's own Byzantine marking is ignored, except that nodes without a
/// trust set can only be Byzantine.
inline SafetyCertificate certify_safe_under_failure_model(const Qbtn& net, ForkRoute route = ForkRoute::quota,
                                                          const Budget& budget = Budget{20, 1u << 16}) {
  SafetyCertificate out;
  const auto n = net.size();
  if (n > budget.max_nodes || n >= 63) {
    out.verdict = Verdict::budget_exceeded;
    return out;
  }
  NodeSet forced(n);
  for (NodeIndex k = 0; k < n; ++k)
    if (net.trust(k).size() != n || net.trust(k).none()) forced.set(k);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    NodeSet b(n, mask);
    if (!forced.is_subset_of(b) || b.count() == n || !respects_failure_model(net, b)) continue;
    ++out.placements;
    const Qbtn placed = net.with_byzantine(b);
    ForkResult f = route == ForkRoute::quota ? find_fork(placed)
                                             : find_fork(expand_qbtn(placed, budget.max_total_slices),
                                                         Budget{budget.max_nodes, std::size_t(-1)});
    if (f.verdict == Verdict::budget_exceeded) {
      out.verdict = Verdict::budget_exceeded;
      return out;
    }
    if (f.verdict == Verdict::violated) {
      out.verdict = Verdict::violated;
      out.placement = std::move(b);
      out.witness = std::move(f.witness);
      return out;
    }
  }
  return out;
}

}  // namespace quorumlens
