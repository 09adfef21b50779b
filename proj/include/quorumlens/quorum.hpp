// Copyright 2026 The quorumlens Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "quorumlens/network.hpp"

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

namespace quorumlens {

/// A non-empty set in which every member has one of its slices.
template <SliceSystem N>
bool is_quorum(const N& net, const NodeSet& q) {
  if (q.size() != net.size()) throw PreconditionError("is_quorum: set does not belong to this network");
  if (q.none()) return false;
  for (auto i = q.find_first(); i != NodeSet::npos; i = q.find_next(i))
    if (!net.has_slice_within(i, q)) return false;
  return true;
}

/// Greatest quorum inside `s` (empty if none): repeatedly drop members that
/// have no slice within the survivors.
template <SliceSystem N>
NodeSet max_quorum_within(const N& net, NodeSet s) {
  for (;;) {
    NodeSet kept = s;
    for (auto i = s.find_first(); i != NodeSet::npos; i = s.find_next(i))
      if (!net.has_slice_within(i, kept)) kept.reset(i);
    if (kept == s) return s;
    s = std::move(kept);
  }
}

namespace detail {

// Shrinks quorum q to an inclusion-minimal quorum that still meets `anchor`.
template <SliceSystem N>
NodeSet minimalize(const N& net, NodeSet q, const NodeSet& anchor) {
  for (auto v = q.find_first(); v != NodeSet::npos; v = q.find_next(v)) {
    NodeSet without = q;
    without.reset(v);
    NodeSet sub = max_quorum_within(net, std::move(without));
    if (sub.intersects(anchor)) q = std::move(sub);
  }
  return q;
}

template <SliceSystem N>
NodeSet perimeter(const N& net, const NodeSet& committed) {
  NodeSet p(net.size());
  for_each_member(committed, [&](NodeIndex k) {
    if (!net.is_byzantine(k)) p |= net.trust(k);
  });
  return p;
}

// Branch and bound for a pair of quora, each meeting `anchor`, whose
// intersection lies inside `shared`. Nodes in `shared` are never branched on:
// adding them to a quorum keeps it a quorum, so the first side may be assumed
// to contain all of them.
template <SliceSystem N>
class DisjointQuorumSearch {
 public:
  DisjointQuorumSearch(const N& net, NodeSet shared, NodeSet anchor)
      : net_(net), all_(full_set(net.size())), shared_(std::move(shared)), anchor_(std::move(anchor)) {}

  bool run(const NodeSet& committed) { return search(committed, NodeSet(net_.size())); }

  std::size_t examined() const { return examined_; }
  const std::pair<NodeSet, NodeSet>& found() const { return *found_; }

 private:
  bool search(const NodeSet& committed, const NodeSet& excluded) {
    ++examined_;
    const NodeSet room = max_quorum_within(net_, all_ - excluded);
    if (!committed.is_subset_of(room) || !room.intersects(anchor_)) return false;

    const NodeSet core = max_quorum_within(net_, committed | shared_);
    if (core.intersects(anchor_)) {
      // Every candidate extending `committed` contains `core`, so the partner
      // must fit in its complement.
      NodeSet partner = max_quorum_within(net_, (all_ - core) | shared_);
      if (!partner.intersects(anchor_)) return false;
      found_ = {core, std::move(partner)};
      return true;
    }
    if (!max_quorum_within(net_, (all_ - committed) | shared_).intersects(anchor_)) return false;

    const NodeSet open = room - committed - shared_;
    NodeSet preferred = open & perimeter(net_, committed);
    const NodeSet& pool = preferred.any() ? preferred : open;
    const auto v = pool.find_first();
    if (v == NodeSet::npos) return false;

    NodeSet with = committed;
    with.set(v);
    if (search(with, excluded)) return true;
    NodeSet without = excluded;
    without.set(v);
    return search(committed, without);
  }

  const N& net_;
  NodeSet all_;
  NodeSet shared_;
  NodeSet anchor_;
  std::size_t examined_ = 0;
  std::optional<std::pair<NodeSet, NodeSet>> found_;
};

}  // namespace detail

struct QuorumReport {
  Verdict verdict = Verdict::holds;
  std::optional<std::pair<NodeSet, NodeSet>> witness;
  std::size_t quora_examined = 0;
  std::optional<std::vector<NodeSet>> minimal_quora;

  bool holds() const { return verdict == Verdict::holds; }
};

struct QuoraList {
  Verdict verdict = Verdict::holds;  // budget_exceeded: list is absent
  std::vector<NodeSet> quora;
};

/// All inclusion-minimal quora in lexicographic order.
template <SliceSystem N>
QuoraList minimal_quora(const N& net, const Budget& budget = {}) {
  QuoraList out;
  if (net.size() > budget.max_nodes) {
    out.verdict = Verdict::budget_exceeded;
    return out;
  }
  const NodeSet all = full_set(net.size());
  // Any quorum inside `committed` is contained in every extension, so once
  // one appears the only minimal quorum left on this branch is `committed`
  // itself.
  auto rec = [&](auto&& self, const NodeSet& committed, const NodeSet& excluded) -> void {
    const NodeSet room = max_quorum_within(net, all - excluded);
    if (room.none() || !committed.is_subset_of(room)) return;
    const NodeSet core = max_quorum_within(net, committed);
    if (core.any()) {
      if (core == committed && detail::minimalize(net, core, all) == core) out.quora.push_back(core);
      return;
    }
    const NodeSet open = room - committed;
    NodeSet preferred = open & detail::perimeter(net, committed);
    const NodeSet& pool = preferred.any() ? preferred : open;
    const auto v = pool.find_first();
    if (v == NodeSet::npos) return;
    NodeSet with = committed;
    with.set(v);
    self(self, with, excluded);
    NodeSet without = excluded;
    without.set(v);
    self(self, committed, without);
  };
  rec(rec, NodeSet(net.size()), NodeSet(net.size()));
  std::sort(out.quora.begin(), out.quora.end(), lex_less);
  return out;
}

namespace detail {

template <SliceSystem N>
QuorumReport run_disjoint_search(const N& net, const NodeSet& shared, const NodeSet& anchor, const NodeSet& committed) {
  QuorumReport r;
  DisjointQuorumSearch<N> search(net, shared, anchor);
  const bool hit = search.run(committed);
  r.quora_examined = search.examined();
  if (!hit) return r;
  const NodeSet all = full_set(net.size());
  NodeSet q1 = minimalize(net, search.found().first, anchor);
  NodeSet q2 = minimalize(net, max_quorum_within(net, (all - q1) | shared), anchor);
  if (lex_less(q2, q1)) std::swap(q1, q2);
  r.verdict = Verdict::violated;
  r.witness = {std::move(q1), std::move(q2)};
  return r;
}

}  // namespace detail

/// Decides whether every two quora intersect. Quora range over all nodes;
/// Byzantine nodes take part through their trivial slice {i}.
template <SliceSystem N>
QuorumReport check_quorum_intersection(const N& net, const Budget& budget = {}, bool list_minimal = false) {
  if (net.size() > budget.max_nodes) return QuorumReport{Verdict::budget_exceeded, {}, 0, {}};
  const NodeSet all = full_set(net.size());
  auto r = detail::run_disjoint_search(net, NodeSet(net.size()), all, NodeSet(net.size()));
  if (list_minimal) r.minimal_quora = minimal_quora(net, budget).quora;
  return r;
}

/// Weak-safety form: every two quora that contain an honest node must share
/// an honest node. Quora made only of Byzantine nodes are not compared.
template <SliceSystem N>
QuorumReport check_qi_honest(const N& net, const Budget& budget = {}) {
  if (net.size() > budget.max_nodes) return QuorumReport{Verdict::budget_exceeded, {}, 0, {}};
  return detail::run_disjoint_search(net, net.byzantine(), net.honest(), NodeSet(net.size()));
}

/// QI after adding `slice` to `node` in a network that already has QI. Any
/// new disjoint pair must use the new slice on one side, so that side starts
/// committed to node ∪ slice.
inline QuorumReport check_slice_addition(const Btn& base, NodeIndex node, const NodeSet& slice,
                                         const Budget& budget = {}) {
  base.require_honest(node, "check_slice_addition");
  if (slice.size() != base.size() || !slice.is_subset_of(base.trust(node)))
    throw PreconditionError("check_slice_addition: new slice is not inside the trust set of '" + base.label(node) + "'");
  const auto before = check_quorum_intersection(base, budget);
  if (before.verdict == Verdict::budget_exceeded) return before;
  if (!before.holds()) throw PreconditionError("check_slice_addition: base network does not satisfy quorum intersection");
  const Btn extended = base.with_slice(node, slice);
  NodeSet committed = slice;
  committed.set(node);
  auto r = detail::run_disjoint_search(extended, NodeSet(base.size()), full_set(base.size()), committed);
  r.quora_examined += before.quora_examined;
  return r;
}

}  // namespace quorumlens
