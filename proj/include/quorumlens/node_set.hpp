// Copyright 2026 The quorumlens Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace quorumlens {

using NodeIndex = std::size_t;

// Sets of nodes are bitsets sized to the network. All sets belonging to one
// network share the same size, so the bitset operators apply directly.
using NodeSet = boost::dynamic_bitset<std::uint64_t>;

inline NodeSet make_set(std::size_t universe, std::initializer_list<NodeIndex> members) {
  NodeSet s(universe);
  for (auto m : members) s.set(m);
  return s;
}

inline NodeSet make_set(std::size_t universe, const std::vector<NodeIndex>& members) {
  NodeSet s(universe);
  for (auto m : members) s.set(m);
  return s;
}

inline NodeSet full_set(std::size_t universe) {
  NodeSet s(universe);
  s.set();
  return s;
}

template <class F>
void for_each_member(const NodeSet& s, F&& f) {
  for (auto i = s.find_first(); i != NodeSet::npos; i = s.find_next(i)) f(static_cast<NodeIndex>(i));
}

inline std::vector<NodeIndex> members(const NodeSet& s) {
  std::vector<NodeIndex> out;
  out.reserve(s.count());
  for_each_member(s, [&](NodeIndex i) { out.push_back(i); });
  return out;
}

// Total order used for deterministic output: compare sorted member lists
// lexicographically.
inline bool lex_less(const NodeSet& a, const NodeSet& b) {
  auto ia = a.find_first();
  auto ib = b.find_first();
  while (ia != NodeSet::npos && ib != NodeSet::npos) {
    if (ia != ib) return ia < ib;
    ia = a.find_next(ia);
    ib = b.find_next(ib);
  }
  return ia == NodeSet::npos && ib != NodeSet::npos;
}

}  // namespace quorumlens
