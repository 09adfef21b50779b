// Copyright 2026 The quorumlens Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "quorumlens/network.hpp"
#include "quorumlens/qbtn_safety.hpp"
#include "quorumlens/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <thread>
#include <vector>

namespace quorumlens {

inline constexpr std::size_t kMaxBanzhafPlayers = 24;

namespace detail {

// win[mask] over the players of T_i (bit k = k-th member).
inline std::vector<std::uint8_t> winning_table(const Btn& net, NodeIndex i, const std::vector<NodeIndex>& players) {
  const std::size_t k = players.size();
  std::vector<std::uint8_t> win(std::size_t{1} << k, 0);
  for (const auto& c : net.slices(i)) {
    std::uint32_t m = 0;
    for (std::size_t b = 0; b < k; ++b)
      if (c.test(players[b])) m |= 1u << b;
    win[m] = 1;
  }
  // Close upwards: a superset of a winning coalition wins.
  for (std::size_t b = 0; b < k; ++b)
    for (std::size_t m = 0; m < win.size(); ++m)
      if ((m >> b) & 1u) win[m] |= win[m ^ (std::size_t{1} << b)];
  return win;
}

inline void check_players(const NetworkBase& net, NodeIndex i, std::size_t k) {
  if (k > kMaxBanzhafPlayers)
    throw BudgetExceeded("banzhaf: node '" + net.label(i) + "' trusts " + std::to_string(k) + " nodes (limit " +
                         std::to_string(kMaxBanzhafPlayers) + ")");
}

}  // namespace detail

/// Raw Penrose–Banzhaf indices of i's game over N: the fraction of
/// coalitions of the other players in which j is pivotal. Non-trusted nodes
/// are dummies and get 0.
inline std::vector<Rational> banzhaf_raw(const Btn& net, NodeIndex i) {
  net.require_honest(i, "banzhaf_raw");
  const auto players = members(net.trust(i));
  const std::size_t k = players.size();
  detail::check_players(net, i, k);
  const auto win = detail::winning_table(net, i, players);
  std::vector<Rational> out(net.size(), Rational(0));
  const BigInt denom = BigInt(1) << (k - 1);
  for (std::size_t b = 0; b < k; ++b) {
    const std::size_t bit = std::size_t{1} << b;
    std::uint64_t swings = 0;
    for (std::size_t m = 0; m < win.size(); ++m)
      if (!(m & bit) && win[m | bit] && !win[m]) ++swings;
    out[players[b]] = Rational(BigInt(swings), denom);
  }
  return out;
}

/// Quota games need no enumeration: j swings exactly when the others hold
/// t - 1 votes.
inline std::vector<Rational> banzhaf_raw(const Qbtn& net, NodeIndex i) {
  net.require_honest(i, "banzhaf_raw");
  const std::size_t k = net.trust(i).count();
  detail::check_players(net, i, k);
  const std::size_t t = net.threshold(i);
  const Rational value(detail::binomial(k - 1, t - 1), BigInt(1) << (k - 1));
  std::vector<Rational> out(net.size(), Rational(0));
  for_each_member(net.trust(i), [&](NodeIndex j) { out[j] = value; });
  return out;
}

/// Raw indices scaled to sum to one. Throws when nobody is ever pivotal.
template <class N>
std::vector<Rational> banzhaf_row(const N& net, NodeIndex i) {
  auto row = banzhaf_raw(net, i);
  Rational total = 0;
  for (const auto& v : row) total += v;
  if (total == 0) throw PreconditionError("banzhaf_row: node '" + net.label(i) + "' has a degenerate game (no swings)");
  for (auto& v : row) v /= total;
  return row;
}

using Matrix = std::vector<std::vector<double>>;
using ExactMatrix = std::vector<std::vector<Rational>>;

struct InfluenceMatrix {
  NodeTable order;
  ExactMatrix entries;
  NodeSet byzantine_rows;

  std::size_t size() const { return entries.size(); }
  Matrix to_double() const {
    Matrix m(size(), std::vector<double>(size()));
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < size(); ++j) m[i][j] = quorumlens::to_double(entries[i][j]);
    return m;
  }
};

/// Normalised Banzhaf rows for honest nodes, identity rows for Byzantine
/// ones. Rows are computed on up to `threads` workers.
template <class N>
InfluenceMatrix influence_matrix(const N& net, unsigned threads = 1) {
  const auto n = net.size();
  InfluenceMatrix m{net.nodes(), ExactMatrix(n), net.byzantine()};
  std::vector<std::exception_ptr> failures(n);
  auto work = [&](std::size_t start, std::size_t stride) {
    for (NodeIndex i = start; i < n; i += stride) {
      try {
        if (net.is_byzantine(i)) {
          m.entries[i].assign(n, Rational(0));
          m.entries[i][i] = 1;
        } else {
          m.entries[i] = banzhaf_row(net, i);
        }
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& th : pool) th.join();
  }
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);
  return m;
}

inline ExactMatrix multiply(const ExactMatrix& a, const ExactMatrix& b) {
  const auto n = a.size();
  ExactMatrix c(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  const auto n = a.size();
  Matrix c(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a[i][k];
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c[i][j] += aik * b[k][j];
    }
  return c;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) d = std::max(d, std::abs(a[i][j] - b[i][j]));
  return d;
}

/// Influence digraph: edge j -> i whenever I_ij > 0 (j influences i).
struct InfluenceGraph {
  std::vector<std::vector<NodeIndex>> influenced_by;  // in-neighbours j of i
  std::vector<std::vector<NodeIndex>> influences;     // out-neighbours i of j
  std::vector<std::size_t> component;                 // node -> component index
  std::vector<NodeSet> components;                    // ordered by smallest member
  std::vector<bool> closed;                           // no edge enters from outside
  std::vector<std::size_t> period;                    // 1 also for acyclic singletons

  std::size_t size() const { return component.size(); }
  bool has_edge(NodeIndex from, NodeIndex to) const {
    const auto& in = influenced_by[to];
    return std::find(in.begin(), in.end(), from) != in.end();
  }
  std::vector<std::size_t> closed_components() const {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < components.size(); ++c)
      if (closed[c]) out.push_back(c);
    return out;
  }
};

namespace detail {

// Tarjan's algorithm, iterative so deep chains cannot overflow the stack.
inline std::vector<std::size_t> strong_components(const std::vector<std::vector<NodeIndex>>& out, std::size_t& count) {
  const auto n = out.size();
  constexpr auto unseen = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unseen), low(n, 0), comp(n, unseen);
  std::vector<bool> on_stack(n, false);
  std::vector<NodeIndex> stack;
  std::size_t next = 0;
  count = 0;
  struct Frame {
    NodeIndex v;
    std::size_t edge;
  };
  for (NodeIndex root = 0; root < n; ++root) {
    if (index[root] != unseen) continue;
    std::vector<Frame> calls{{root, 0}};
    index[root] = low[root] = next++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!calls.empty()) {
      auto& f = calls.back();
      if (f.edge < out[f.v].size()) {
        const NodeIndex w = out[f.v][f.edge++];
        if (index[w] == unseen) {
          index[w] = low[w] = next++;
          stack.push_back(w);
          on_stack[w] = true;
          calls.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const NodeIndex v = f.v;
      calls.pop_back();
      if (!calls.empty()) low[calls.back().v] = std::min(low[calls.back().v], low[v]);
      if (low[v] == index[v]) {
        for (;;) {
          const NodeIndex w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = count;
          if (w == v) break;
        }
        ++count;
      }
    }
  }
  return comp;
}

}  // namespace detail

inline InfluenceGraph analyze_graph(const ExactMatrix& m) {
  const auto n = m.size();
  InfluenceGraph g;
  g.influenced_by.assign(n, {});
  g.influences.assign(n, {});
  for (NodeIndex i = 0; i < n; ++i)
    for (NodeIndex j = 0; j < n; ++j)
      if (m[i][j] > 0) {
        g.influenced_by[i].push_back(j);
        g.influences[j].push_back(i);
      }

  std::size_t count = 0;
  const auto raw = detail::strong_components(g.influences, count);
  // Renumber by smallest member for stable output.
  std::vector<std::size_t> rename(count, static_cast<std::size_t>(-1));
  std::size_t fresh = 0;
  for (NodeIndex v = 0; v < n; ++v)
    if (rename[raw[v]] == static_cast<std::size_t>(-1)) rename[raw[v]] = fresh++;
  g.component.resize(n);
  g.components.assign(count, NodeSet(n));
  for (NodeIndex v = 0; v < n; ++v) {
    g.component[v] = rename[raw[v]];
    g.components[g.component[v]].set(v);
  }

  g.closed.assign(count, true);
  for (NodeIndex i = 0; i < n; ++i)
    for (NodeIndex j : g.influenced_by[i])
      if (g.component[j] != g.component[i]) g.closed[g.component[i]] = false;

  // Period: gcd of level[u] + 1 - level[v] over internal edges u -> v, with
  // BFS levels from any member.
  g.period.assign(count, 0);
  std::vector<std::size_t> level(n, static_cast<std::size_t>(-1));
  for (std::size_t c = 0; c < count; ++c) {
    const NodeIndex root = g.components[c].find_first();
    std::vector<NodeIndex> queue{root};
    level[root] = 0;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const NodeIndex u = queue[h];
      for (NodeIndex v : g.influences[u]) {
        if (g.component[v] != c || level[v] != static_cast<std::size_t>(-1)) continue;
        level[v] = level[u] + 1;
        queue.push_back(v);
      }
    }
    std::size_t d = 0;
    for (NodeIndex u : queue)
      for (NodeIndex v : g.influences[u]) {
        if (g.component[v] != c) continue;
        const auto diff = static_cast<long long>(level[u]) + 1 - static_cast<long long>(level[v]);
        d = std::gcd(d, static_cast<std::size_t>(diff < 0 ? -diff : diff));
      }
    g.period[c] = d == 0 ? 1 : d;
  }
  return g;
}

inline InfluenceGraph analyze_graph(const InfluenceMatrix& m) { return analyze_graph(m.entries); }

enum class Regularity { not_regular, regular, fully_regular, not_regular_numerically };

inline const char* to_string(Regularity r) {
  switch (r) {
    case Regularity::not_regular: return "not-regular";
    case Regularity::regular: return "regular";
    case Regularity::fully_regular: return "fully-regular";
    case Regularity::not_regular_numerically: return "not-regular-numerically";
  }
  return "?";
}

/// Structural class of a stochastic matrix from its graph alone.
inline Regularity classify(const InfluenceGraph& g) {
  const auto closed = g.closed_components();
  for (auto c : closed)
    if (g.period[c] != 1) return Regularity::not_regular;
  return closed.size() == 1 ? Regularity::fully_regular : Regularity::regular;
}

/// mask[i][k]: the limit entry can be non-zero. k must sit in a closed
/// component S, and S must reach i along influence edges.
inline std::vector<std::vector<bool>> structural_support(const InfluenceGraph& g) {
  const auto n = g.size();
  std::vector<std::vector<bool>> mask(n, std::vector<bool>(n, false));
  for (auto c : g.closed_components()) {
    NodeSet reach = g.components[c];
    std::vector<NodeIndex> queue = members(reach);
    for (std::size_t h = 0; h < queue.size(); ++h)
      for (NodeIndex v : g.influences[queue[h]])
        if (!reach.test(v)) {
          reach.set(v);
          queue.push_back(v);
        }
    for_each_member(reach, [&](NodeIndex i) {
      for_each_member(g.components[c], [&](NodeIndex k) { mask[i][k] = true; });
    });
  }
  return mask;
}

struct LimitReport {
  Regularity classification = Regularity::not_regular;
  std::optional<Matrix> limit;
  double residual = 0;  // max-norm change of the last squaring
  std::size_t squarings = 0;
  std::vector<std::vector<bool>> structural_support;
  InfluenceGraph graph;
};

/// Limit of I^t via repeated squaring, computed only for regular matrices.
/// Entries outside the structural support are forced to exact zero.
inline LimitReport limit_matrix(const ExactMatrix& m, double tol = 1e-12, std::size_t max_squarings = 40) {
  if (!(tol > 0)) throw PreconditionError("limit_matrix: tolerance must be positive");
  LimitReport r;
  r.graph = analyze_graph(m);
  r.classification = classify(r.graph);
  r.structural_support = structural_support(r.graph);
  if (r.classification == Regularity::not_regular) return r;

  Matrix p(m.size(), std::vector<double>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) p[i][j] = to_double(m[i][j]);
  bool converged = false;
  r.residual = 0;
  while (r.squarings < max_squarings) {
    Matrix next = multiply(p, p);
    // Squaring doubles any row-sum drift, so pull rows back onto the simplex.
    for (auto& row : next) {
      double s = 0;
      for (double v : row) s += v;
      for (double& v : row) v /= s;
    }
    ++r.squarings;
    r.residual = max_abs_diff(next, p);
    p = std::move(next);
    if (r.residual < tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    r.classification = Regularity::not_regular_numerically;
    return r;
  }
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j)
      if (!r.structural_support[i][j]) p[i][j] = 0.0;
  r.limit = std::move(p);
  return r;
}

inline LimitReport limit_matrix(const InfluenceMatrix& m, double tol = 1e-12, std::size_t max_squarings = 40) {
  return limit_matrix(m.entries, tol, max_squarings);
}

enum class ClaimStatus { holds, fails, not_applicable };

inline const char* to_string(ClaimStatus s) {
  switch (s) {
    case ClaimStatus::holds: return "holds";
    case ClaimStatus::fails: return "fails";
    case ClaimStatus::not_applicable: return "not-applicable";
  }
  return "?";
}

struct CentralisedReport {
  NodeSet common_trust;
  ClaimStatus regular = ClaimStatus::not_applicable;
  ClaimStatus fully_regular_if_few_byzantine = ClaimStatus::not_applicable;
  ClaimStatus byzantine_capture = ClaimStatus::not_applicable;
  // Diagnostic: fully regular is expected when no Byzantine node exists or
  // the single one influences an all-trusted honest node.
  bool byzantine_reaches_core = false;
  LimitReport limit;
};

/// Checks the three limit-influence claims for a network with a non-empty
/// common trust set: regularity, full regularity when |B| <= 1, and honest
/// nodes losing all limit influence once an all-trusted honest node trusts a
/// Byzantine node.
template <class N>
CentralisedReport verify_centralised_claims(const N& net, double tol = 1e-12, std::size_t max_squarings = 40,
                                            unsigned threads = 1) {
  CentralisedReport r;
  r.common_trust = common_trust_set(net);
  if (r.common_trust.none()) throw PreconditionError("no node is trusted by every honest node");
  const auto m = influence_matrix(net, threads);
  r.limit = limit_matrix(m, tol, max_squarings);
  const bool regular = r.limit.classification == Regularity::regular ||
                       r.limit.classification == Regularity::fully_regular;
  r.regular = regular ? ClaimStatus::holds : ClaimStatus::fails;

  const NodeSet honest = net.honest();
  const NodeSet core = r.common_trust & honest;
  NodeSet core_trust(net.size());
  for_each_member(core, [&](NodeIndex j) { core_trust |= net.trust(j); });
  r.byzantine_reaches_core = core_trust.intersects(net.byzantine());

  if (net.byzantine().count() <= 1)
    r.fully_regular_if_few_byzantine =
        r.limit.classification == Regularity::fully_regular ? ClaimStatus::holds : ClaimStatus::fails;

  if (r.byzantine_reaches_core) {
    bool ok = regular;
    for_each_member(honest, [&](NodeIndex j) {
      for_each_member(honest, [&](NodeIndex k) {
        if (r.limit.structural_support[j][k]) ok = false;
      });
    });
    r.byzantine_capture = ok ? ClaimStatus::holds : ClaimStatus::fails;
  }
  return r;
}

}  // namespace quorumlens
