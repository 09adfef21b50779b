// Copyright 2026 The quorumlens Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "quorumlens/cnf.hpp"
#include "quorumlens/network.hpp"
#include "quorumlens/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace quorumlens {

// std::mt19937_64's output sequence is fixed by the standard, but the
// standard distributions are not, so sampling is done by hand to keep
// generated instances identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
      const std::uint64_t x = engine_();
      if (x < limit) return x % n;
    }
  }
  bool coin() { return engine_() >> 63; }

  /// k distinct members of pool in pool order (partial Fisher–Yates).
  std::vector<NodeIndex> sample(std::vector<NodeIndex> pool, std::size_t k) {
    k = std::min(k, pool.size());
    for (std::size_t t = 0; t < k; ++t) std::swap(pool[t], pool[t + below(pool.size() - t)]);
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

 private:
  std::mt19937_64 engine_;
};

enum class Topology { clique, overlapping_groups, centralised };

inline const char* to_string(Topology t) {
  switch (t) {
    case Topology::clique: return "clique";
    case Topology::overlapping_groups: return "overlapping-groups";
    case Topology::centralised: return "centralised";
  }
  return "?";
}

inline Topology parse_topology(const std::string& s) {
  if (s == "clique") return Topology::clique;
  if (s == "overlapping-groups") return Topology::overlapping_groups;
  if (s == "centralised" || s == "centralized") return Topology::centralised;
  throw InputError("unknown topology '" + s + "' (clique, overlapping-groups, centralised)");
}

/// clique: i trusts itself and trust_size - 1 uniformly chosen others (the
///   complete graph when trust_size = node_count).
/// overlapping-groups: nodes are split into `groups` contiguous blocks; i
///   draws round((1 - overlap) * trust_size) trustees from its own block
///   (itself first) and the rest from outside.
/// centralised: nodes 0..core_size-1 are trusted by everyone; each node adds
///   trust_size - core_size trustees drawn from the rest.
struct GenParams {
  std::size_t node_count = 6;
  std::size_t trust_size = 5;
  Rational quota = make_rational(4, 5);
  std::size_t byzantine_count = 0;
  std::uint64_t seed = 1;
  Topology topology = Topology::clique;
  double overlap = 0.5;
  std::size_t groups = 2;
  std::size_t core_size = 0;  // 0: ceil(trust_size / 2)
};

namespace detail {

inline void check_params(const GenParams& p) {
  auto bad = [](const std::string& why) { throw PreconditionError("infeasible generator parameters: " + why); };
  if (p.node_count == 0) bad("node_count must be positive");
  if (p.trust_size == 0 || p.trust_size > p.node_count) bad("trust_size must be in [1, node_count]");
  if (p.quota <= make_rational(1, 2) || p.quota > 1) bad("quota must be in (0.5, 1]");
  if (p.byzantine_count >= p.node_count) bad("byzantine_count must leave an honest node");
  if (p.topology == Topology::overlapping_groups) {
    if (p.groups == 0 || p.groups > p.node_count) bad("groups must be in [1, node_count]");
    if (!(p.overlap >= 0.0 && p.overlap <= 1.0)) bad("overlap must be in [0, 1]");
  }
  if (p.topology == Topology::centralised && p.core_size > p.trust_size) bad("core_size exceeds trust_size");
}

inline std::vector<NodeIndex> range_pool(std::size_t lo, std::size_t hi, std::size_t skip = static_cast<std::size_t>(-1)) {
  std::vector<NodeIndex> v;
  for (auto k = lo; k < hi; ++k)
    if (k != skip) v.push_back(k);
  return v;
}

inline std::vector<NodeSet> random_trust(const GenParams& p, Rng& rng) {
  const auto n = p.node_count;
  std::vector<NodeSet> trust(n, NodeSet(n));
  for (NodeIndex i = 0; i < n; ++i) {
    NodeSet& t = trust[i];
    switch (p.topology) {
      case Topology::clique: {
        t.set(i);
        for (auto k : rng.sample(range_pool(0, n, i), p.trust_size - 1)) t.set(k);
        break;
      }
      case Topology::overlapping_groups: {
        const std::size_t g = i * p.groups / n;
        const std::size_t lo = (g * n + p.groups - 1) / p.groups;
        const std::size_t hi = ((g + 1) * n + p.groups - 1) / p.groups;
        const std::size_t block = hi - lo;
        const std::size_t outside = n - block;
        auto inside = static_cast<std::size_t>(std::llround((1.0 - p.overlap) * static_cast<double>(p.trust_size)));
        inside = std::clamp(inside, std::size_t{1}, block);
        if (p.trust_size - inside > outside) inside = p.trust_size - outside;
        t.set(i);
        for (auto k : rng.sample(range_pool(lo, hi, i), inside - 1)) t.set(k);
        std::vector<NodeIndex> rest;
        for (NodeIndex k = 0; k < n; ++k)
          if (k < lo || k >= hi) rest.push_back(k);
        for (auto k : rng.sample(rest, p.trust_size - inside)) t.set(k);
        break;
      }
      case Topology::centralised: {
        const std::size_t core = p.core_size ? p.core_size : (p.trust_size + 1) / 2;
        for (NodeIndex k = 0; k < core; ++k) t.set(k);
        for (auto k : rng.sample(range_pool(core, n), p.trust_size - core)) t.set(k);
        break;
      }
    }
  }
  return trust;
}

inline std::vector<std::string> numbered_labels(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t k = 1; k <= n; ++k) labels.push_back(std::to_string(k));
  return labels;
}

}  // namespace detail

/// Deterministic for a fixed parameter set. Labels are "1".."n".
inline Qbtn random_qbtn(const GenParams& p) {
  detail::check_params(p);
  Rng rng(p.seed);
  const auto n = p.node_count;
  Qbtn::Parts parts;
  parts.nodes = NodeTable(detail::numbered_labels(n));
  parts.trust = detail::random_trust(p, rng);
  parts.byzantine = NodeSet(n);
  for (auto k : rng.sample(detail::range_pool(0, n), p.byzantine_count)) parts.byzantine.set(k);
  parts.quota.assign(n, p.quota);
  parts.byz_fraction.assign(n, std::nullopt);
  return Qbtn::create(std::move(parts)).take();
}

struct BtnGenParams {
  std::size_t node_count = 6;
  std::size_t trust_size = 4;
  std::size_t max_slices = 3;
  std::size_t byzantine_count = 0;
  std::uint64_t seed = 1;
};

/// Random vetoed network: each honest node gets 1..max_slices random slices
/// of its trust set, each containing the node itself.
inline Btn random_vetoed_btn(const BtnGenParams& p) {
  if (p.node_count == 0 || p.trust_size == 0 || p.trust_size > p.node_count || p.max_slices == 0 ||
      p.byzantine_count >= p.node_count)
    throw PreconditionError("infeasible generator parameters for random_vetoed_btn");
  Rng rng(p.seed);
  const auto n = p.node_count;
  Btn::Parts parts;
  parts.nodes = NodeTable(detail::numbered_labels(n));
  parts.vetoed = true;
  parts.byzantine = NodeSet(n);
  for (auto k : rng.sample(detail::range_pool(0, n), p.byzantine_count)) parts.byzantine.set(k);
  for (NodeIndex i = 0; i < n; ++i) {
    NodeSet t(n);
    t.set(i);
    for (auto k : rng.sample(detail::range_pool(0, n, i), p.trust_size - 1)) t.set(k);
    const auto others = members(t - make_set(n, {i}));
    const auto count = 1 + rng.below(p.max_slices);
    std::vector<NodeSet> slices;
    for (std::size_t s = 0; s < count; ++s) {
      NodeSet c(n);
      c.set(i);
      for (auto k : rng.sample(others, rng.below(others.size() + 1))) c.set(k);
      if (std::find(slices.begin(), slices.end(), c) == slices.end()) slices.push_back(std::move(c));
    }
    parts.trust.push_back(std::move(t));
    parts.slices.push_back(std::move(slices));
  }
  return Btn::create(std::move(parts)).take();
}

/// Uniform random 3CNF: each literal picks a variable and a sign.
inline Cnf random_cnf(int num_vars, std::size_t num_clauses, std::uint64_t seed) {
  if (num_vars < 1) throw PreconditionError("random_cnf needs at least one variable");
  Rng rng(seed);
  Cnf f{num_vars, {}};
  for (std::size_t j = 0; j < num_clauses; ++j) {
    Clause c{};
    for (auto& l : c) {
      l = static_cast<Literal>(1 + rng.below(static_cast<std::uint64_t>(num_vars)));
      if (rng.coin()) l = -l;
    }
    f.clauses.push_back(c);
  }
  return f;
}

}  // namespace quorumlens
