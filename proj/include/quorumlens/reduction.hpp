// Copyright 2026 The quorumlens Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "quorumlens/cnf.hpp"
#include "quorumlens/network.hpp"
#include "quorumlens/quorum.hpp"

#include <string>
#include <vector>

namespace quorumlens {

/// Index layout of a reduced network: z0, z1, c1..cm, then (y_i, p_i, n_i)
/// for each variable.
struct ReductionLayout {
  int num_vars = 0;
  std::size_t num_clauses = 0;

  static constexpr NodeIndex z0 = 0;
  static constexpr NodeIndex z1 = 1;
  NodeIndex c(std::size_t j) const { return 2 + j; }               // j in [0, m)
  NodeIndex y(int v) const { return 2 + num_clauses + 3 * (v - 1); }  // v in [1, n]
  NodeIndex p(int v) const { return y(v) + 1; }
  NodeIndex n(int v) const { return y(v) + 2; }
  std::size_t size() const { return 2 + num_clauses + 3 * static_cast<std::size_t>(num_vars); }
  NodeIndex literal_node(Literal l) const { return l > 0 ? p(l) : n(-l); }
};

/// Command game whose quorum intersection fails exactly when f is
/// satisfiable. All nodes are honest and each node's own index is in every
/// one of its slices, so the network is vetoed.
inline Btn reduce_sat_to_btn(const Cnf& f) {
  if (f.num_vars < 0) throw PreconditionError("reduce_sat_to_btn: negative variable count");
  const ReductionLayout at{f.num_vars, f.clauses.size()};
  const auto size = at.size();
  std::vector<std::string> labels(size);
  labels[at.z0] = "z0";
  labels[at.z1] = "z1";
  for (std::size_t j = 0; j < f.clauses.size(); ++j) labels[at.c(j)] = "c" + std::to_string(j + 1);
  for (int v = 1; v <= f.num_vars; ++v) {
    labels[at.y(v)] = "y" + std::to_string(v);
    labels[at.p(v)] = "p" + std::to_string(v);
    labels[at.n(v)] = "n" + std::to_string(v);
  }

  Btn::Parts parts;
  parts.nodes = NodeTable(std::move(labels));
  parts.byzantine = NodeSet(size);
  parts.slices.assign(size, {});
  parts.vetoed = true;
  auto add = [&](NodeIndex owner, std::initializer_list<NodeIndex> extra) {
    NodeSet c = make_set(size, extra);
    c.set(owner);
    parts.slices[owner].push_back(std::move(c));
  };

  NodeSet z0_slice = make_set(size, {at.z0});
  for (int v = 1; v <= f.num_vars; ++v) z0_slice.set(at.y(v));
  parts.slices[at.z0].push_back(std::move(z0_slice));

  NodeSet z1_slice = make_set(size, {at.z1});
  for (std::size_t j = 0; j < f.clauses.size(); ++j) z1_slice.set(at.c(j));
  parts.slices[at.z1].push_back(std::move(z1_slice));

  for (int v = 1; v <= f.num_vars; ++v) {
    add(at.y(v), {at.p(v)});
    add(at.y(v), {at.n(v)});
  }
  for (std::size_t j = 0; j < f.clauses.size(); ++j)
    for (Literal l : f.clauses[j]) {
      if (l == 0 || std::abs(l) > f.num_vars) throw PreconditionError("reduce_sat_to_btn: literal out of range");
      add(at.c(j), {at.literal_node(l)});
    }
  for (int v = 1; v <= f.num_vars; ++v) {
    add(at.p(v), {at.z0});
    add(at.p(v), {at.z1});
    add(at.n(v), {at.z0});
    add(at.n(v), {at.z1});
  }

  parts.trust.assign(size, NodeSet(size));
  for (NodeIndex i = 0; i < size; ++i)
    for (const auto& c : parts.slices[i]) parts.trust[i] |= c;
  return Btn::create(std::move(parts)).take();
}

/// Reads a truth assignment off the side of a disjoint pair that contains
/// z0: n_i present means x_i true, p_i present means x_i false.
inline Assignment decode_assignment(const Cnf& f, const NodeSet& z0_side) {
  const ReductionLayout at{f.num_vars, f.clauses.size()};
  if (z0_side.size() != at.size() || !z0_side.test(at.z0))
    throw PreconditionError("decode_assignment: set is not the z0 side of a reduced network");
  Assignment a(f.num_vars, false);
  for (int v = 1; v <= f.num_vars; ++v) a[v - 1] = z0_side.test(at.n(v));
  return a;
}

struct SliceAdditionInstance {
  Btn base;
  NodeIndex node;
  NodeSet slice;
};

/// Reduced network of f with {y1, n1} taken out of y1's slices. Without it
/// every z0-side quorum contains p1, which encodes x1 = false, so the base
/// keeps quorum intersection exactly when f[x1 := false] is unsatisfiable.
/// That premise is checked; putting the slice back breaks intersection iff f
/// is satisfiable.
inline SliceAdditionInstance reduce_slice_addition_instance(const Cnf& f) {
  if (f.num_vars < 1) throw PreconditionError("slice-addition instance needs at least one variable");
  if (brute_sat(with_fixed(f, 1, false)))
    throw PreconditionError("slice-addition premise fails: formula stays satisfiable with x1 = false");
  const ReductionLayout at{f.num_vars, f.clauses.size()};
  const Btn full = reduce_sat_to_btn(f);
  auto parts = full.parts();
  NodeSet removed = make_set(at.size(), {at.y(1), at.n(1)});
  auto& ys = parts.slices[at.y(1)];
  ys.erase(std::remove(ys.begin(), ys.end(), removed), ys.end());
  SliceAdditionInstance out{Btn::create(std::move(parts)).take(), at.y(1), std::move(removed)};
  const auto qi = check_quorum_intersection(out.base, Budget{out.base.size(), out.base.total_slices()});
  if (!qi.holds()) throw Error("slice-addition base unexpectedly lacks quorum intersection");
  return out;
}

}  // namespace quorumlens
