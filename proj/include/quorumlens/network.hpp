// Copyright 2026 The quorumlens Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "quorumlens/error.hpp"
#include "quorumlens/node_set.hpp"
#include "quorumlens/rational.hpp"

#include <algorithm>
#include <concepts>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace quorumlens {

/// Bidirectional map between node labels and dense indices. Index order is
/// the order in which labels were declared and fixes every output ordering.
class NodeTable {
 public:
  NodeTable() = default;

  // Labels must be unique and non-empty; callers validate first.
  explicit NodeTable(std::vector<std::string> labels) : labels_(std::move(labels)) {
    for (NodeIndex i = 0; i < labels_.size(); ++i) index_.emplace(labels_[i], i);
  }

  std::size_t size() const { return labels_.size(); }
  const std::string& label(NodeIndex i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }

  std::optional<NodeIndex> find(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  NodeIndex index(const std::string& label) const {
    if (auto i = find(label)) return *i;
    throw InputError("unknown node '" + label + "'");
  }

  std::vector<std::string> labels_of(const NodeSet& s) const {
    std::vector<std::string> out;
    for_each_member(s, [&](NodeIndex i) { out.push_back(labels_[i]); });
    return out;
  }

  NodeSet set_of(const std::vector<std::string>& ls) const {
    NodeSet s(size());
    for (const auto& l : ls) s.set(index(l));
    return s;
  }

  std::string format(const NodeSet& s) const {
    std::string out = "{";
    bool first = true;
    for_each_member(s, [&](NodeIndex i) {
      if (!first) out += ",";
      out += labels_[i];
      first = false;
    });
    return out + "}";
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeIndex> index_;
};

struct Violation {
  std::string node;  // empty for network-wide violations
  std::string message;

  std::string to_string() const { return node.empty() ? message : "node '" + node + "': " + message; }
};

/// Outcome of network validation: the value iff no errors, plus warnings
/// (e.g. quotas below the recommended range) either way.
template <class T>
struct Validated {
  std::optional<T> value;
  std::vector<Violation> errors;
  std::vector<std::string> warnings;

  bool ok() const { return value.has_value(); }

  T take() && {
    if (!value) {
      std::string msg = "invalid network:";
      for (const auto& e : errors) msg += "\n  " + e.to_string();
      throw InputError(msg);
    }
    return std::move(*value);
  }
};

/// Resource limits for the exponential searches.
struct Budget {
  std::size_t max_nodes = 20;
  std::size_t max_total_slices = 64;
};

namespace detail {

class NetworkBase {
 public:
  const NodeTable& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  const std::string& label(NodeIndex i) const { return nodes_.label(i); }

  const NodeSet& byzantine() const { return byzantine_; }
  NodeSet honest() const { return ~byzantine_; }
  bool is_byzantine(NodeIndex i) const { return byzantine_.test(i); }
  bool is_honest(NodeIndex i) const { return !byzantine_.test(i); }

  // Trust set T_i. Stored for Byzantine nodes too but never consulted.
  const NodeSet& trust(NodeIndex i) const { return trust_.at(i); }

  void require_honest(NodeIndex i, const char* what) const {
    if (i >= size()) throw PreconditionError(std::string(what) + ": node index out of range");
    if (is_byzantine(i)) throw PreconditionError(std::string(what) + ": node '" + label(i) + "' is not honest");
  }

 protected:
  NetworkBase() = default;
  NetworkBase(NodeTable nodes, NodeSet byzantine, std::vector<NodeSet> trust)
      : nodes_(std::move(nodes)), byzantine_(std::move(byzantine)), trust_(std::move(trust)) {}

  static void check_common(const NodeTable& nodes, const NodeSet& byzantine, const std::vector<NodeSet>& trust,
                           std::vector<Violation>& errors) {
    const auto n = nodes.size();
    if (n == 0) {
      errors.push_back({"", "network has no nodes"});
      return;
    }
    if (byzantine.size() != n || trust.size() != n) {
      errors.push_back({"", "per-node tables do not match the node count"});
      return;
    }
    if (byzantine.count() == n) errors.push_back({"", "no honest nodes"});
    for (NodeIndex i = 0; i < n; ++i) {
      if (byzantine.test(i)) continue;
      if (trust[i].size() != n) {
        errors.push_back({nodes.label(i), "trust set has wrong universe"});
      } else if (trust[i].none()) {
        errors.push_back({nodes.label(i), "empty trust set"});
      }
    }
  }

  NodeTable nodes_;
  NodeSet byzantine_;
  std::vector<NodeSet> trust_;
};

}  // namespace detail

/// A Byzantine trust network with explicit slice (winning-coalition) lists.
/// A node validates or closes a quorum when one of its slices is contained in
/// the relevant set; slices act as generators of a superset-closed family.
class Btn : public detail::NetworkBase {
 public:
  struct Parts {
    NodeTable nodes;
    NodeSet byzantine;
    std::vector<NodeSet> trust;
    std::vector<std::vector<NodeSet>> slices;
    bool vetoed = false;
  };

  static Validated<Btn> create(Parts parts) {
    Validated<Btn> out;
    check_common(parts.nodes, parts.byzantine, parts.trust, out.errors);
    if (!out.errors.empty()) return out;
    const auto n = parts.nodes.size();
    if (parts.slices.size() != n) {
      out.errors.push_back({"", "slice table does not match the node count"});
      return out;
    }
    for (NodeIndex i = 0; i < n; ++i) {
      if (parts.byzantine.test(i)) continue;
      const auto& label = parts.nodes.label(i);
      if (parts.slices[i].empty()) out.errors.push_back({label, "no slices"});
      for (const auto& c : parts.slices[i]) {
        if (c.size() != n) {
          out.errors.push_back({label, "slice has wrong universe"});
          continue;
        }
        if (c.none()) out.errors.push_back({label, "empty slice"});
        if (!c.is_subset_of(parts.trust[i])) out.errors.push_back({label, "slice outside trust set"});
        if (parts.vetoed && !c.test(i)) out.errors.push_back({label, "vetoed network but node missing from its own slice"});
      }
    }
    if (out.errors.empty()) out.value = Btn(std::move(parts));
    return out;
  }

  const std::vector<NodeSet>& slices(NodeIndex i) const { return slices_.at(i); }
  bool vetoed() const { return vetoed_; }

  /// True iff some slice of `i` lies inside `s`. Byzantine nodes carry the
  /// trivial generator {i}.
  bool has_slice_within(NodeIndex i, const NodeSet& s) const {
    if (is_byzantine(i)) return s.test(i);
    return std::any_of(slices_[i].begin(), slices_[i].end(), [&](const NodeSet& c) { return c.is_subset_of(s); });
  }

  std::size_t total_slices() const {
    std::size_t total = 0;
    for (NodeIndex i = 0; i < size(); ++i)
      if (is_honest(i)) total += slices_[i].size();
    return total;
  }

  Parts parts() const { return Parts{nodes_, byzantine_, trust_, slices_, vetoed_}; }

  Btn with_byzantine(NodeSet byzantine) const {
    auto p = parts();
    p.byzantine = std::move(byzantine);
    return create(std::move(p)).take();
  }

  Btn with_slice(NodeIndex i, NodeSet slice) const {
    auto p = parts();
    p.slices.at(i).push_back(std::move(slice));
    return create(std::move(p)).take();
  }

 private:
  explicit Btn(Parts p)
      : NetworkBase(std::move(p.nodes), std::move(p.byzantine), std::move(p.trust)),
        slices_(std::move(p.slices)),
        vetoed_(p.vetoed) {}

  std::vector<std::vector<NodeSet>> slices_;
  bool vetoed_ = false;
};

/// A quota network: node i is satisfied by any ceil(q_i |T_i|) members of
/// T_i. b_i is the assumed Byzantine fraction inside T_i.
class Qbtn : public detail::NetworkBase {
 public:
  struct Parts {
    NodeTable nodes;
    NodeSet byzantine;
    std::vector<NodeSet> trust;
    std::vector<Rational> quota;
    std::vector<std::optional<Rational>> byz_fraction;  // nullopt: 1 - q_i
  };

  static Validated<Qbtn> create(Parts parts) {
    Validated<Qbtn> out;
    check_common(parts.nodes, parts.byzantine, parts.trust, out.errors);
    if (!out.errors.empty()) return out;
    const auto n = parts.nodes.size();
    if (parts.quota.size() != n || parts.byz_fraction.size() != n) {
      out.errors.push_back({"", "quota table does not match the node count"});
      return out;
    }
    const Rational half = make_rational(1, 2);
    const Rational recommended = make_rational(3, 4);
    const Rational quarter = make_rational(1, 4);
    std::vector<Rational> b(n);
    for (NodeIndex i = 0; i < n; ++i) {
      const auto& label = parts.nodes.label(i);
      const Rational& q = parts.quota[i];
      b[i] = parts.byz_fraction[i].value_or(Rational(1 - q));
      if (parts.byzantine.test(i)) continue;
      if (q <= half || q > 1) {
        out.errors.push_back({label, "quota " + to_string(q) + " out of range (0.5, 1]"});
        continue;
      }
      if (q < recommended) out.warnings.push_back("node '" + label + "': quota " + to_string(q) + " below recommended 0.75");
      if (b[i] < 0 || b[i] >= 1) {
        out.errors.push_back({label, "byz_fraction " + to_string(b[i]) + " out of range [0, 1)"});
        continue;
      }
      if (b[i] > 1 - q)
        out.warnings.push_back("node '" + label + "': byz_fraction " + to_string(b[i]) + " exceeds 1 - quota");
      if (b[i] >= quarter)
        out.warnings.push_back("node '" + label + "': byz_fraction " + to_string(b[i]) + " not below 0.25");
    }
    if (out.errors.empty()) {
      out.value = Qbtn(std::move(parts), std::move(b));
    }
    return out;
  }

  const Rational& quota(NodeIndex i) const { return quota_.at(i); }
  const Rational& byz_fraction(NodeIndex i) const { return byz_.at(i); }
  bool byz_fraction_explicit(NodeIndex i) const { return byz_explicit_.at(i); }

  /// Minimum coalition size ceil(q_i |T_i|); 1 for Byzantine nodes.
  std::size_t threshold(NodeIndex i) const { return threshold_.at(i); }

  bool has_slice_within(NodeIndex i, const NodeSet& s) const {
    if (is_byzantine(i)) return s.test(i);
    return (s & trust_[i]).count() >= threshold_[i];
  }

  bool uniform_quota() const {
    std::optional<Rational> q;
    for (NodeIndex i = 0; i < size(); ++i) {
      if (is_byzantine(i)) continue;
      if (q && *q != quota_[i]) return false;
      q = quota_[i];
    }
    return true;
  }

  Parts parts() const {
    Parts p{nodes_, byzantine_, trust_, quota_, {}};
    for (NodeIndex i = 0; i < size(); ++i)
      p.byz_fraction.push_back(byz_explicit_[i] ? std::optional<Rational>(byz_[i]) : std::nullopt);
    return p;
  }

  Qbtn with_byzantine(NodeSet byzantine) const {
    auto p = parts();
    p.byzantine = std::move(byzantine);
    return create(std::move(p)).take();
  }

 private:
  Qbtn(Parts p, std::vector<Rational> b)
      : NetworkBase(std::move(p.nodes), std::move(p.byzantine), std::move(p.trust)),
        quota_(std::move(p.quota)),
        byz_(std::move(b)) {
    for (NodeIndex i = 0; i < size(); ++i) {
      byz_explicit_.push_back(p.byz_fraction[i].has_value());
      if (is_byzantine(i)) {
        threshold_.push_back(1);
      } else {
        threshold_.push_back(ceil_of(quota_[i] * static_cast<long>(trust_[i].count())).convert_to<std::size_t>());
      }
    }
  }

  std::vector<Rational> quota_;
  std::vector<Rational> byz_;
  std::vector<bool> byz_explicit_;
  std::vector<std::size_t> threshold_;
};

using Network = std::variant<Btn, Qbtn>;

/// Anything the quorum machinery can run on.
template <class N>
concept SliceSystem = requires(const N& net, NodeIndex i, const NodeSet& s) {
  { net.size() } -> std::convertible_to<std::size_t>;
  { net.is_byzantine(i) } -> std::convertible_to<bool>;
  { net.has_slice_within(i, s) } -> std::convertible_to<bool>;
  { net.nodes() } -> std::convertible_to<const NodeTable&>;
};

// ---------------------------------------------------------------------------
// Label-level drafts, as read from files. validate_network turns them into
// checked networks, reporting every violation found.

struct SliceDraft {
  std::vector<std::string> nodes;
  std::vector<std::string> byzantine;
  std::map<std::string, std::vector<std::vector<std::string>>> slices;
  std::optional<std::map<std::string, std::vector<std::string>>> trust;  // default: union of slices
  bool vetoed = false;
};

struct QuotaDraft {
  std::vector<std::string> nodes;
  std::vector<std::string> byzantine;
  std::map<std::string, std::vector<std::string>> trust;
  std::map<std::string, Rational> quota;
  std::map<std::string, Rational> byz_fraction;
};

using NetworkDraft = std::variant<SliceDraft, QuotaDraft>;

namespace detail {

inline std::optional<NodeTable> check_labels(const std::vector<std::string>& labels, std::vector<Violation>& errors) {
  std::unordered_map<std::string, int> seen;
  bool bad = false;
  for (const auto& l : labels) {
    if (l.empty()) {
      errors.push_back({"", "empty node label"});
      bad = true;
    } else if (seen[l]++ == 1) {
      errors.push_back({l, "duplicate node label"});
      bad = true;
    }
  }
  if (bad) return std::nullopt;
  return NodeTable(labels);
}

inline std::optional<NodeSet> resolve(const NodeTable& table, const std::vector<std::string>& labels,
                                      const std::string& owner, const char* where, std::vector<Violation>& errors) {
  NodeSet s(table.size());
  bool ok = true;
  for (const auto& l : labels) {
    if (auto i = table.find(l)) {
      s.set(*i);
    } else {
      errors.push_back({owner, std::string("unknown node '") + l + "' in " + where});
      ok = false;
    }
  }
  if (!ok) return std::nullopt;
  return s;
}

template <class Map>
void check_keys(const NodeTable& table, const Map& m, const char* where, std::vector<Violation>& errors) {
  for (const auto& [label, _] : m)
    if (!table.find(label)) errors.push_back({label, std::string("unknown node in ") + where});
}

}  // namespace detail

inline Validated<Btn> validate_network(const SliceDraft& d) {
  Validated<Btn> out;
  auto table = detail::check_labels(d.nodes, out.errors);
  if (!table) return out;
  const auto n = table->size();
  Btn::Parts p;
  p.byzantine = detail::resolve(*table, d.byzantine, "", "byzantine list", out.errors).value_or(NodeSet(n));
  p.trust.assign(n, NodeSet(n));
  p.slices.assign(n, {});
  p.vetoed = d.vetoed;
  detail::check_keys(*table, d.slices, "slices", out.errors);
  if (d.trust) detail::check_keys(*table, *d.trust, "trust", out.errors);
  for (NodeIndex i = 0; i < n; ++i) {
    const auto& label = table->label(i);
    if (auto it = d.slices.find(label); it != d.slices.end()) {
      for (const auto& c : it->second)
        if (auto s = detail::resolve(*table, c, label, "slice", out.errors)) p.slices[i].push_back(*s);
    }
    if (d.trust) {
      if (auto it = d.trust->find(label); it != d.trust->end())
        if (auto s = detail::resolve(*table, it->second, label, "trust set", out.errors)) p.trust[i] = *s;
    } else {
      for (const auto& c : p.slices[i]) p.trust[i] |= c;
    }
  }
  p.nodes = std::move(*table);
  if (!out.errors.empty()) return out;
  auto built = Btn::create(std::move(p));
  built.warnings.insert(built.warnings.begin(), out.warnings.begin(), out.warnings.end());
  return built;
}

inline Validated<Qbtn> validate_network(const QuotaDraft& d) {
  Validated<Qbtn> out;
  auto table = detail::check_labels(d.nodes, out.errors);
  if (!table) return out;
  const auto n = table->size();
  Qbtn::Parts p;
  p.byzantine = detail::resolve(*table, d.byzantine, "", "byzantine list", out.errors).value_or(NodeSet(n));
  p.trust.assign(n, NodeSet(n));
  p.quota.assign(n, Rational(1));
  p.byz_fraction.assign(n, std::nullopt);
  detail::check_keys(*table, d.trust, "trust", out.errors);
  detail::check_keys(*table, d.quota, "quota", out.errors);
  detail::check_keys(*table, d.byz_fraction, "byz_fraction", out.errors);
  for (NodeIndex i = 0; i < n; ++i) {
    const auto& label = table->label(i);
    if (auto it = d.trust.find(label); it != d.trust.end())
      if (auto s = detail::resolve(*table, it->second, label, "trust set", out.errors)) p.trust[i] = *s;
    if (auto it = d.quota.find(label); it != d.quota.end()) {
      p.quota[i] = it->second;
    } else if (!p.byzantine.test(i)) {
      out.errors.push_back({label, "missing quota"});
    }
    if (auto it = d.byz_fraction.find(label); it != d.byz_fraction.end()) p.byz_fraction[i] = it->second;
  }
  p.nodes = std::move(*table);
  if (!out.errors.empty()) return out;
  auto built = Qbtn::create(std::move(p));
  built.warnings.insert(built.warnings.begin(), out.warnings.begin(), out.warnings.end());
  return built;
}

inline Validated<Network> validate_network(const NetworkDraft& draft) {
  return std::visit(
      [](const auto& d) {
        auto r = validate_network(d);
        Validated<Network> out;
        out.errors = std::move(r.errors);
        out.warnings = std::move(r.warnings);
        if (r.value) out.value = Network(std::move(*r.value));
        return out;
      },
      draft);
}

}  // namespace quorumlens
