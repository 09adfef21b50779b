// Copyright 2026 The quorumlens Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

// Network files. One network per JSON document:
//
//   {"kind": "slices", "nodes": [...], "byzantine": [...], "vetoed": bool,
//    "slices": {label: [[label, ...], ...]}, "trust": {label: [...]}}
//   {"kind": "quota", "nodes": [...], "byzantine": [...],
//    "trust": {label: [...]}, "quota_uniform": q | "quota": {label: q},
//    "byz_fraction_uniform": b | "byz_fraction": {label: b}}
//
// Quotas are JSON numbers read through their shortest decimal form (0.8 is
// exactly 4/5) or strings such as "1/3". "trust" is optional for slice
// networks and defaults to the union of each node's slices.

#include "quorumlens/network.hpp"
#include "quorumlens/rational.hpp"

#include "json.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace quorumlens {

using Json = nlohmann::ordered_json;

struct LoadedNetwork {
  Network network;
  std::vector<std::string> warnings;
};

namespace io_detail {

[[noreturn]] inline void schema_error(const std::string& path, const std::string& what) {
  throw InputError("schema error at " + path + ": " + what);
}

inline void only_keys(const Json& j, const std::string& path, const std::set<std::string>& allowed) {
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) schema_error(path, "unknown key '" + key + "'");
}

inline std::string label_at(const Json& j, const std::string& path) {
  if (!j.is_string()) schema_error(path, "expected a node label string");
  return j.get<std::string>();
}

inline std::vector<std::string> labels_at(const Json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array of node labels");
  std::vector<std::string> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(label_at(j[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

inline Rational rational_at(const Json& j, const std::string& path) {
  try {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number()) return from_decimal(j.get<double>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const InputError& e) {
    schema_error(path, e.what());
  }
  schema_error(path, "expected a number or a \"p/q\" string");
}

inline const Json& object_at(const Json& j, const std::string& path) {
  if (!j.is_object()) schema_error(path, "expected an object");
  return j;
}

inline std::map<std::string, Rational> rational_map(const Json& doc, const char* uniform_key, const char* map_key,
                                                    const std::vector<std::string>& nodes) {
  std::map<std::string, Rational> out;
  const bool has_uniform = doc.contains(uniform_key);
  const bool has_map = doc.contains(map_key);
  if (has_uniform && has_map)
    schema_error("$", std::string("give either '") + uniform_key + "' or '" + map_key + "', not both");
  if (has_uniform) {
    const Rational v = rational_at(doc[uniform_key], std::string("$.") + uniform_key);
    for (const auto& l : nodes) out[l] = v;
  } else if (has_map) {
    const std::string base = std::string("$.") + map_key;
    for (const auto& [label, v] : object_at(doc[map_key], base).items()) out[label] = rational_at(v, base + "." + label);
  }
  return out;
}

inline NetworkDraft draft_from_json(const Json& doc) {
  if (!doc.is_object()) schema_error("$", "expected an object");
  if (!doc.contains("kind")) schema_error("$", "missing key 'kind'");
  if (!doc.contains("nodes")) schema_error("$", "missing key 'nodes'");
  const std::string kind = label_at(doc["kind"], "$.kind");
  auto nodes = labels_at(doc["nodes"], "$.nodes");
  std::vector<std::string> byz;
  if (doc.contains("byzantine")) byz = labels_at(doc["byzantine"], "$.byzantine");

  auto trust_map = [&](const Json& t) {
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& [label, v] : object_at(t, "$.trust").items()) out[label] = labels_at(v, "$.trust." + label);
    return out;
  };

  if (kind == "slices") {
    only_keys(doc, "$", {"kind", "nodes", "byzantine", "slices", "trust", "vetoed"});
    SliceDraft d;
    d.nodes = std::move(nodes);
    d.byzantine = std::move(byz);
    if (doc.contains("vetoed")) {
      if (!doc["vetoed"].is_boolean()) schema_error("$.vetoed", "expected a boolean");
      d.vetoed = doc["vetoed"].get<bool>();
    }
    if (!doc.contains("slices")) schema_error("$", "missing key 'slices'");
    for (const auto& [label, list] : object_at(doc["slices"], "$.slices").items()) {
      const std::string path = "$.slices." + label;
      if (!list.is_array()) schema_error(path, "expected an array of slices");
      auto& slices = d.slices[label];
      for (std::size_t k = 0; k < list.size(); ++k) slices.push_back(labels_at(list[k], path + "[" + std::to_string(k) + "]"));
    }
    if (doc.contains("trust")) d.trust = trust_map(doc["trust"]);
    return d;
  }
  if (kind == "quota") {
    only_keys(doc, "$",
              {"kind", "nodes", "byzantine", "trust", "quota_uniform", "quota", "byz_fraction_uniform", "byz_fraction"});
    QuotaDraft d;
    if (!doc.contains("trust")) schema_error("$", "missing key 'trust'");
    if (!doc.contains("quota_uniform") && !doc.contains("quota")) schema_error("$", "missing 'quota_uniform' or 'quota'");
    d.trust = trust_map(doc["trust"]);
    d.quota = rational_map(doc, "quota_uniform", "quota", nodes);
    d.byz_fraction = rational_map(doc, "byz_fraction_uniform", "byz_fraction", nodes);
    d.nodes = std::move(nodes);
    d.byzantine = std::move(byz);
    return d;
  }
  schema_error("$.kind", "expected \"slices\" or \"quota\", got \"" + kind + "\"");
}

inline Json labels_json(const NodeTable& t, const NodeSet& s) { return Json(t.labels_of(s)); }

// Terminating decimals go out as numbers, everything else as "p/q".
inline Json rational_json(const Rational& r) {
  BigInt d = boost::multiprecision::denominator(r);
  while (d % 2 == 0) d /= 2;
  while (d % 5 == 0) d /= 5;
  if (d != 1) return to_string(r);
  if (boost::multiprecision::denominator(r) == 1) return boost::multiprecision::numerator(r).convert_to<long long>();
  return to_double(r);
}

}  // namespace io_detail

/// Parses and validates a network document. `source` names it in messages.
inline LoadedNetwork parse_network(const std::string& text, const std::string& source = "<input>") {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(source + ": invalid JSON: " + e.what());
  }
  NetworkDraft draft;
  try {
    draft = io_detail::draft_from_json(doc);
  } catch (const InputError& e) {
    throw InputError(source + ": " + e.what());
  }
  auto v = validate_network(draft);
  if (!v.ok()) {
    std::string msg = source + ": invalid network";
    for (const auto& e : v.errors) msg += "\n  " + e.to_string();
    throw InputError(msg);
  }
  return LoadedNetwork{std::move(*v.value), std::move(v.warnings)};
}

inline LoadedNetwork load_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_network(ss.str(), path);
}

inline Json to_json(const Btn& net) {
  const auto& t = net.nodes();
  Json doc;
  doc["kind"] = "slices";
  doc["nodes"] = t.labels();
  doc["byzantine"] = io_detail::labels_json(t, net.byzantine());
  doc["vetoed"] = net.vetoed();
  Json slices = Json::object();
  Json trust = Json::object();
  for (NodeIndex i = 0; i < net.size(); ++i) {
    if (net.is_byzantine(i)) continue;
    Json list = Json::array();
    for (const auto& c : net.slices(i)) list.push_back(io_detail::labels_json(t, c));
    slices[t.label(i)] = std::move(list);
    trust[t.label(i)] = io_detail::labels_json(t, net.trust(i));
  }
  doc["slices"] = std::move(slices);
  doc["trust"] = std::move(trust);
  return doc;
}

inline Json to_json(const Qbtn& net) {
  const auto& t = net.nodes();
  Json doc;
  doc["kind"] = "quota";
  doc["nodes"] = t.labels();
  doc["byzantine"] = io_detail::labels_json(t, net.byzantine());
  Json trust = Json::object();
  Json quota = Json::object();
  Json byz = Json::object();
  for (NodeIndex i = 0; i < net.size(); ++i) {
    if (net.is_byzantine(i)) continue;
    trust[t.label(i)] = io_detail::labels_json(t, net.trust(i));
    quota[t.label(i)] = io_detail::rational_json(net.quota(i));
    if (net.byz_fraction_explicit(i)) byz[t.label(i)] = io_detail::rational_json(net.byz_fraction(i));
  }
  doc["trust"] = std::move(trust);
  const auto first_honest = net.honest().find_first();
  if (net.uniform_quota()) {
    doc["quota_uniform"] = io_detail::rational_json(net.quota(first_honest));
  } else {
    doc["quota"] = std::move(quota);
  }
  if (!byz.empty()) doc["byz_fraction"] = std::move(byz);
  return doc;
}

inline Json to_json(const Network& net) {
  return std::visit([](const auto& n) { return to_json(n); }, net);
}

inline void save_network(const Network& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << to_json(net).dump(2) << "\n";
}

}  // namespace quorumlens
