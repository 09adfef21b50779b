// Copyright 2026 The quorumlens Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "quorumlens/network.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace quorumlens {

enum class Opinion : std::uint8_t { zero = 0, one = 1 };

constexpr Opinion opposite(Opinion x) { return x == Opinion::zero ? Opinion::one : Opinion::zero; }
constexpr int to_int(Opinion x) { return static_cast<int>(x); }

/// Honest nodes hold one opinion; Byzantine nodes reveal a value per honest
/// observer. An absent reveal means the Byzantine node abstains towards that
/// observer and counts for neither value.
class OpinionProfile {
 public:
  OpinionProfile() = default;
  explicit OpinionProfile(std::size_t n) : opinions_(n), reveals_(n) {}

  std::size_t size() const { return opinions_.size(); }

  void hold(NodeIndex i, Opinion x) { opinions_.at(i) = x; }
  void reveal(NodeIndex byzantine, NodeIndex observer, Opinion x) {
    auto& row = reveals_.at(byzantine);
    if (row.empty()) row.resize(size());
    row.at(observer) = x;
  }

  std::optional<Opinion> opinion(NodeIndex i) const { return opinions_.at(i); }
  std::optional<Opinion> revealed(NodeIndex byzantine, NodeIndex observer) const {
    const auto& row = reveals_.at(byzantine);
    if (row.empty()) return std::nullopt;
    return row.at(observer);
  }

  /// What `observer` sees from `k`, interpreting `k` per the network's
  /// honest/Byzantine split.
  template <class N>
  std::optional<Opinion> seen_by(const N& net, NodeIndex observer, NodeIndex k) const {
    return net.is_byzantine(k) ? revealed(k, observer) : opinion(k);
  }

  friend bool operator==(const OpinionProfile&, const OpinionProfile&) = default;

 private:
  std::vector<std::optional<Opinion>> opinions_;
  std::vector<std::vector<std::optional<Opinion>>> reveals_;
};

/// Checks that every honest node holds an opinion and every Byzantine node
/// reveals to each honest observer that trusts it.
template <class N>
std::vector<std::string> check_profile(const N& net, const OpinionProfile& p) {
  std::vector<std::string> problems;
  if (p.size() != net.size()) {
    problems.push_back("profile size does not match network");
    return problems;
  }
  for (NodeIndex i = 0; i < net.size(); ++i) {
    if (net.is_honest(i) && !p.opinion(i)) problems.push_back("honest node '" + net.label(i) + "' holds no opinion");
    if (net.is_byzantine(i)) {
      for (NodeIndex o = 0; o < net.size(); ++o)
        if (net.is_honest(o) && net.trust(o).test(i) && !p.revealed(i, o))
          problems.push_back("byzantine node '" + net.label(i) + "' reveals nothing to '" + net.label(o) + "'");
    }
  }
  return problems;
}

/// T_observer^O(x): trusted nodes the observer sees holding x.
template <class N>
NodeSet observed_set(const N& net, const OpinionProfile& p, NodeIndex observer, Opinion x) {
  net.require_honest(observer, "observed_set");
  NodeSet out(net.size());
  for_each_member(net.trust(observer), [&](NodeIndex k) {
    if (p.seen_by(net, observer, k) == x) out.set(k);
  });
  return out;
}

/// True iff some winning coalition of i sits inside what i observes for x.
template <class N>
bool validates(const N& net, const OpinionProfile& p, NodeIndex i, Opinion x) {
  net.require_honest(i, "validates");
  return net.has_slice_within(i, observed_set(net, p, i, x));
}

}  // namespace quorumlens
