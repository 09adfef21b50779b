// Copyright 2026 The quorumlens Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "quorumlens/network.hpp"
#include "quorumlens/profile.hpp"

#include <optional>
#include <vector>

namespace quorumlens {

enum class ForkKind { fork, strong_fork };

struct ForkWitness {
  NodeIndex node_a = 0;
  NodeIndex node_b = 0;
  Opinion value_a = Opinion::one;
  Opinion value_b = Opinion::zero;
  OpinionProfile profile;
  ForkKind kind = ForkKind::fork;
  // The agreeing slice of each side, or for strong forks the closed sets.
  NodeSet support_a;
  NodeSet support_b;
};

struct ForkResult {
  Verdict verdict = Verdict::holds;  // holds: (weakly) safe
  std::optional<ForkWitness> witness;
};

namespace detail {

// Honest members of side_a hold x, those of side_b hold !x, everyone else 0.
// Byzantine nodes reveal x to observers in reveal_a and !x to the rest.
template <class N>
OpinionProfile split_profile(const N& net, const NodeSet& side_a, const NodeSet& side_b, const NodeSet& reveal_a,
                             Opinion x) {
  OpinionProfile p(net.size());
  for (NodeIndex k = 0; k < net.size(); ++k) {
    if (net.is_honest(k)) p.hold(k, side_a.test(k) ? x : side_b.test(k) ? opposite(x) : Opinion::zero);
  }
  for (NodeIndex b = 0; b < net.size(); ++b) {
    if (net.is_honest(b)) continue;
    for (NodeIndex o = 0; o < net.size(); ++o) {
      if (net.is_byzantine(o) || !net.trust(o).test(b)) continue;
      p.reveal(b, o, reveal_a.test(o) ? x : opposite(x));
    }
  }
  return p;
}

template <class N>
ForkWitness make_fork_witness(const N& net, NodeIndex i, const NodeSet& c, NodeIndex j, const NodeSet& c2) {
  NodeSet observers_a(net.size());
  observers_a.set(i);
  ForkWitness w;
  w.node_a = i;
  w.node_b = j;
  w.value_a = Opinion::one;
  w.value_b = Opinion::zero;
  w.profile = split_profile(net, c, c2, observers_a, Opinion::one);
  w.kind = ForkKind::fork;
  w.support_a = c;
  w.support_b = c2;
  return w;
}

}  // namespace detail

/// Exact fork search on explicit slices. Two distinct honest nodes can be
/// driven to opposite values iff they have slices C, C' with C ∩ C' ∩ H = ∅:
/// honest nodes hold one value, while Byzantine nodes in the overlap reveal
/// per observer.
inline ForkResult find_fork(const Btn& net, const Budget& budget = {}) {
  ForkResult r;
  if (net.size() > budget.max_nodes || net.total_slices() > budget.max_total_slices) {
    r.verdict = Verdict::budget_exceeded;
    return r;
  }
  const NodeSet honest = net.honest();
  std::vector<std::vector<NodeSet>> honest_part(net.size());
  for (NodeIndex i = 0; i < net.size(); ++i) {
    if (net.is_byzantine(i)) continue;
    for (const auto& c : net.slices(i)) honest_part[i].push_back(c & honest);
  }
  for (NodeIndex i = 0; i < net.size(); ++i) {
    if (net.is_byzantine(i)) continue;
    for (NodeIndex j = i + 1; j < net.size(); ++j) {
      if (net.is_byzantine(j)) continue;
      for (std::size_t a = 0; a < honest_part[i].size(); ++a) {
        for (const auto& c2 : net.slices(j)) {
          if (honest_part[i][a].intersects(c2)) continue;
          r.verdict = Verdict::violated;
          r.witness = detail::make_fork_witness(net, i, net.slices(i)[a], j, c2);
          return r;
        }
      }
    }
  }
  return r;
}

/// Fork search on quota form without expanding slices. For a pair (i, j) the
/// cheapest coalitions fill up with nodes private to each side, then with
/// shared Byzantine nodes (usable by both), and split the shared honest nodes.
inline ForkResult find_fork(const Qbtn& net, const Budget& = {}) {
  ForkResult r;
  const NodeSet honest = net.honest();
  for (NodeIndex i = 0; i < net.size(); ++i) {
    if (net.is_byzantine(i)) continue;
    for (NodeIndex j = i + 1; j < net.size(); ++j) {
      if (net.is_byzantine(j)) continue;
      const NodeSet shared = net.trust(i) & net.trust(j);
      const NodeSet only_i = net.trust(i) - shared;
      const NodeSet only_j = net.trust(j) - shared;
      const NodeSet shared_byz = shared - honest;
      const auto shared_honest = members(shared & honest);
      auto need = [&](std::size_t threshold, const NodeSet& own) {
        const auto free = own.count() + shared_byz.count();
        return threshold > free ? threshold - free : std::size_t{0};
      };
      const auto need_i = need(net.threshold(i), only_i);
      const auto need_j = need(net.threshold(j), only_j);
      if (need_i + need_j > shared_honest.size()) continue;

      NodeSet c(net.size());
      NodeSet c2(net.size());
      std::size_t take_i = net.threshold(i);
      std::size_t take_j = net.threshold(j);
      auto fill = [](NodeSet& dst, const NodeSet& src, std::size_t& left) {
        for (auto k = src.find_first(); k != NodeSet::npos && left > 0; k = src.find_next(k), --left) dst.set(k);
      };
      fill(c, only_i, take_i);
      fill(c, shared_byz, take_i);
      fill(c2, only_j, take_j);
      fill(c2, shared_byz, take_j);
      for (std::size_t k = 0; k < take_i; ++k) c.set(shared_honest[k]);
      for (std::size_t k = 0; k < take_j; ++k) c2.set(shared_honest[shared_honest.size() - 1 - k]);
      r.verdict = Verdict::violated;
      r.witness = detail::make_fork_witness(net, i, c, j, c2);
      return r;
    }
  }
  return r;
}

/// A selector picks one slice per node; Byzantine nodes pick {i}.
using Selector = std::vector<NodeSet>;

inline void check_selector(const Btn& net, const Selector& s) {
  if (s.size() != net.size()) throw PreconditionError("selector size does not match network");
  for (NodeIndex i = 0; i < net.size(); ++i) {
    if (net.is_byzantine(i)) {
      if (s[i] != make_set(net.size(), {i})) throw PreconditionError("selector picks a non-slice for '" + net.label(i) + "'");
      continue;
    }
    const auto& cs = net.slices(i);
    if (std::find(cs.begin(), cs.end(), s[i]) == cs.end())
      throw PreconditionError("selector picks a non-slice for '" + net.label(i) + "'");
  }
}

/// F_s(seed): union of the selected slices of the seed's members.
inline NodeSet closure_step(const Btn& net, const Selector& s, const NodeSet& seed) {
  check_selector(net, s);
  NodeSet out(net.size());
  for_each_member(seed, [&](NodeIndex k) { out |= s[k]; });
  return out;
}

/// Union of F_s^m(seed) over m >= 1: the least F_s-closed set containing
/// F_s(seed).
inline NodeSet closure(const Btn& net, const Selector& s, const NodeSet& seed) {
  NodeSet acc = closure_step(net, s, seed);
  for (;;) {
    NodeSet next = acc | closure_step(net, s, acc);
    if (next == acc) return acc;
    acc = std::move(next);
  }
}

namespace detail {

// Backtracking over slice choices for the nodes reached from two honest
// roots, keeping the two closures free of shared honest nodes.
class StrongForkSearch {
 public:
  explicit StrongForkSearch(const Btn& net) : net_(net), honest_(net.honest()), choice_(net.size()) {}

  bool from(NodeIndex i, NodeIndex j) {
    for (auto& c : choice_) c.reset();
    NodeSet a(net_.size());
    NodeSet b(net_.size());
    a.set(i);
    b.set(j);
    return extend(std::move(a), std::move(b));
  }

  const NodeSet& side_a() const { return side_a_; }
  const NodeSet& side_b() const { return side_b_; }

 private:
  bool extend(NodeSet a, NodeSet b) {
    if ((a & b).intersects(honest_)) return false;
    const NodeSet reached = (a | b) & honest_;
    NodeIndex next = net_.size();
    for (auto k = reached.find_first(); k != NodeSet::npos; k = reached.find_next(k)) {
      if (!choice_[k]) {
        next = k;
        break;
      }
    }
    if (next == net_.size()) {
      side_a_ = std::move(a);
      side_b_ = std::move(b);
      return true;
    }
    const bool in_a = a.test(next);
    const auto& slices = net_.slices(next);
    for (std::size_t c = 0; c < slices.size(); ++c) {
      choice_[next] = c;
      if (extend(in_a ? (a | slices[c]) : a, in_a ? b : (b | slices[c]))) return true;
    }
    choice_[next].reset();
    return false;
  }

  const Btn& net_;
  NodeSet honest_;
  std::vector<std::optional<std::size_t>> choice_;
  NodeSet side_a_;
  NodeSet side_b_;
};

}  // namespace detail

/// Searches for a strongly forked profile of a vetoed network: two distinct
/// honest nodes and a selector whose closures share no honest node.
inline ForkResult find_strong_fork(const Btn& net, const Budget& budget = Budget{16, 64}) {
  if (!net.vetoed()) throw PreconditionError("find_strong_fork: network is not vetoed");
  ForkResult r;
  if (net.size() > budget.max_nodes) {
    r.verdict = Verdict::budget_exceeded;
    return r;
  }
  detail::StrongForkSearch search(net);
  for (NodeIndex i = 0; i < net.size(); ++i) {
    if (net.is_byzantine(i)) continue;
    for (NodeIndex j = i + 1; j < net.size(); ++j) {
      if (net.is_byzantine(j) || !search.from(i, j)) continue;
      ForkWitness w;
      w.node_a = i;
      w.node_b = j;
      w.kind = ForkKind::strong_fork;
      w.support_a = search.side_a();
      w.support_b = search.side_b();
      w.profile = detail::split_profile(net, w.support_a, w.support_b, w.support_a, Opinion::one);
      r.verdict = Verdict::violated;
      r.witness = std::move(w);
      return r;
    }
  }
  return r;
}

}  // namespace quorumlens
