// Copyright 2026 The quorumlens Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

// Command-line front end. Every command builds one JSON report; the text
// output is rendered from that report alone.
//
// Exit codes: 0 property holds / success, 1 property violated, 2 input
// error, 3 budget exceeded.

#include "quorumlens/quorumlens.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace quorumlens::cli {

using NetworkBase = quorumlens::detail::NetworkBase;

enum Exit : int { ok = 0, violated = 1, input_error = 2, budget = 3 };

inline int exit_for(Verdict v) {
  switch (v) {
    case Verdict::holds: return ok;
    case Verdict::violated: return violated;
    case Verdict::budget_exceeded: return budget;
  }
  return ok;
}

namespace detail {

inline Json set_json(const NodeTable& t, const NodeSet& s) { return Json(t.labels_of(s)); }

template <class... T>
Json row_of(T&&... cells) {
  Json r = Json::array();
  (r.push_back(Json(std::forward<T>(cells))), ...);
  return r;
}

inline Json table(std::vector<std::string> columns) {
  Json t;
  t["columns"] = std::move(columns);
  t["rows"] = Json::array();
  return t;
}

inline std::string fixed(double x, int digits = 6) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << x;
  return s.str();
}

inline Json profile_json(const NodeTable& t, const NetworkBase& net, const OpinionProfile& p) {
  Json opinions = Json::object();
  Json reveals = Json::object();
  for (NodeIndex i = 0; i < net.size(); ++i) {
    if (net.is_honest(i)) {
      opinions[t.label(i)] = to_int(*p.opinion(i));
      continue;
    }
    Json row = Json::object();
    for (NodeIndex o = 0; o < net.size(); ++o)
      if (auto v = p.revealed(i, o)) row[t.label(o)] = to_int(*v);
    reveals[t.label(i)] = std::move(row);
  }
  Json j;
  j["opinions"] = std::move(opinions);
  j["reveals"] = std::move(reveals);
  return j;
}

inline Json fork_json(const NetworkBase& net, const ForkWitness& w) {
  const auto& t = net.nodes();
  Json j;
  j["kind"] = w.kind == ForkKind::fork ? "fork" : "strong-fork";
  j["node_a"] = t.label(w.node_a);
  j["value_a"] = to_int(w.value_a);
  j["support_a"] = set_json(t, w.support_a);
  j["node_b"] = t.label(w.node_b);
  j["value_b"] = to_int(w.value_b);
  j["support_b"] = set_json(t, w.support_b);
  j["profile"] = profile_json(t, net, w.profile);
  return j;
}

inline const NetworkBase& base_of(const Network& n) {
  return std::visit([](const auto& x) -> const NetworkBase& { return x; }, n);
}

inline Json network_summary(const Network& net) {
  const auto& b = base_of(net);
  Json j;
  j["kind"] = std::holds_alternative<Btn>(net) ? "slices" : "quota";
  j["nodes"] = b.size();
  j["byzantine"] = set_json(b.nodes(), b.byzantine());
  if (const auto* btn = std::get_if<Btn>(&net)) {
    j["vetoed"] = btn->vetoed();
    j["total_slices"] = btn->total_slices();
  } else {
    const auto& q = std::get<Qbtn>(net);
    j["uniform_quota"] = q.uniform_quota();
  }
  return j;
}

// --- human rendering -------------------------------------------------------

inline std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "-";
  if (v.is_array()) {
    bool flat = std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_primitive(); });
    if (flat) {
      std::string s = "{";
      for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + scalar_text(v[k]);
      return s + "}";
    }
  }
  return v.dump();
}

inline void render_table(const std::string& name, const Json& t, std::ostream& out) {
  const auto& cols = t["columns"];
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width(cols.size(), 0);
  std::vector<std::string> head;
  for (const auto& c : cols) head.push_back(c.get<std::string>());
  cells.push_back(head);
  for (const auto& r : t["rows"]) {
    std::vector<std::string> row;
    for (const auto& v : r) row.push_back(scalar_text(v));
    cells.push_back(std::move(row));
  }
  for (const auto& r : cells)
    for (std::size_t k = 0; k < r.size() && k < width.size(); ++k) width[k] = std::max(width[k], r[k].size());
  out << name << ":\n";
  for (const auto& r : cells) {
    out << " ";
    for (std::size_t k = 0; k < r.size(); ++k) {
      out << " " << r[k];
      if (k + 1 < r.size()) out << std::string(width[k] - r[k].size(), ' ');
    }
    out << "\n";
  }
}

inline void render_value(const std::string& key, const Json& v, int indent, std::ostream& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  if (v.is_object() && !v.empty()) {
    out << pad << key << ":\n";
    for (const auto& [k, x] : v.items()) render_value(k, x, indent + 1, out);
    return;
  }
  if (v.is_array() && !v.empty() && v[0].is_object()) {
    out << pad << key << ":\n";
    for (std::size_t k = 0; k < v.size(); ++k) render_value("[" + std::to_string(k) + "]", v[k], indent + 1, out);
    return;
  }
  out << pad << key << ": " << scalar_text(v) << "\n";
}

}  // namespace detail

/// Text form of a report.
inline void render_human(const Json& report, std::ostream& out) {
  for (const auto& [key, v] : report.items()) {
    if (key == "tables") {
      for (const auto& [name, t] : v.items()) detail::render_table(name, t, out);
    } else if (key == "warnings") {
      for (const auto& w : v) out << "warning: " << w.get<std::string>() << "\n";
    } else if (key == "timing_ms") {
      out << "time: " << detail::fixed(v.get<double>(), 1) << " ms\n";
    } else {
      detail::render_value(key, v, 0, out);
    }
  }
}

struct Context {
  std::vector<std::string> args;
  bool json = false;
  bool quiet = false;
  unsigned threads = 1;
};

namespace detail {

inline Json start_report(const Context& ctx, const std::string& command) {
  Json r;
  r["command"] = command;
  std::string line = "quorumlens";
  for (const auto& a : ctx.args) line += " " + a;
  r["command_line"] = line;
  r["seed"] = nullptr;
  r["verdict"] = nullptr;
  return r;
}

inline Json qi_report(const Network& net, bool honest, std::size_t max_nodes) {
  return std::visit(
      [&](const auto& n) {
        const Budget b{max_nodes, std::size_t(-1)};
        const QuorumReport q = honest ? check_qi_honest(n, b) : check_quorum_intersection(n, b);
        Json r;
        r["verdict"] = to_string(q.verdict);
        r["variant"] = honest ? "honest-intersection" : "plain";
        r["quora_examined"] = q.quora_examined;
        if (q.witness) {
          Json w;
          w["quorum_a"] = set_json(n.nodes(), q.witness->first);
          w["quorum_b"] = set_json(n.nodes(), q.witness->second);
          w["intersection"] = set_json(n.nodes(), q.witness->first & q.witness->second);
          r["witness"] = std::move(w);
        } else {
          r["witness"] = nullptr;
        }
        if (q.verdict != Verdict::budget_exceeded) {
          const auto mq = minimal_quora(n, b);
          Json t = table({"minimal_quorum"});
          for (const auto& s : mq.quora) t["rows"].push_back(row_of(set_json(n.nodes(), s)));
          r["tables"]["minimal_quora"] = std::move(t);
        }
        r["exit"] = exit_for(q.verdict);
        return r;
      },
      net);
}

}  // namespace detail

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args) {
    ctx_.args = args;
    CLI::App app{"quorumlens: safety, quorum and influence analysis of Byzantine trust networks", "quorumlens"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_flag("--json", ctx_.json, "Machine-readable JSON report");
    app.add_flag("--quiet", ctx_.quiet, "No report, exit code only");
    std::optional<unsigned> threads;
    app.add_option("--threads", threads, "Worker threads (default: QUORUMLENS_THREADS or 1)")->check(CLI::Range(1u, 256u));

    std::string file;
    auto* check = app.add_subcommand("check", "Validate a network file");
    check->add_option("FILE", file, "Network JSON")->required();

    bool honest = false;
    std::size_t max_nodes = 20;
    auto* qi = app.add_subcommand("qi", "Quorum intersection with witness");
    qi->add_option("FILE", file, "Network JSON")->required();
    qi->add_flag("--honest", honest, "Require an honest node in every intersection");
    qi->add_option("--max-nodes", max_nodes, "Node budget")->capture_default_str();

    bool strong = false;
    std::optional<std::size_t> fork_max;
    auto* fork = app.add_subcommand("fork", "Fork or strong-fork search");
    fork->add_option("FILE", file, "Network JSON")->required();
    fork->add_flag("--strong", strong, "Strong forks (vetoed slice networks)");
    fork->add_option("--max-nodes", fork_max, "Node budget (default 20, 16 with --strong)");

    auto* safety = app.add_subcommand("safety", "Overlap, common trust and failure-model safety of a quota network");
    safety->add_option("FILE", file, "Network JSON")->required();
    std::size_t safety_max = 20;
    safety->add_option("--max-nodes", safety_max, "Node budget for the placement enumeration")->capture_default_str();

    bool limit = false, exact = false;
    double tol = 1e-12;
    std::size_t max_iter = 40;
    auto* influence = app.add_subcommand("influence", "Banzhaf influence matrix and its limit");
    influence->add_option("FILE", file, "Network JSON")->required();
    influence->add_flag("--limit", limit, "Compute the limit matrix");
    influence->add_option("--tol", tol, "Convergence tolerance")->capture_default_str()->check(CLI::PositiveNumber);
    influence->add_option("--max-iter", max_iter, "Maximum squarings")->capture_default_str();
    influence->add_flag("--exact", exact, "Print exact rationals");

    auto* gen = app.add_subcommand("gen", "Instance generators");
    gen->require_subcommand(1);
    std::string dimacs, output;
    bool slice_addition = false;
    auto* gen_sat = gen->add_subcommand("sat", "Network from a 3CNF formula");
    gen_sat->add_option("--dimacs", dimacs, "DIMACS CNF file")->required();
    gen_sat->add_flag("--slice-addition", slice_addition, "Emit the slice-addition base instead");
    gen_sat->add_option("-o,--output", output, "Output network JSON")->required();

    GenParams gp;
    std::string quota_text = "0.8", topology = "clique";
    auto* gen_random = gen->add_subcommand("random", "Random quota network");
    gen_random->add_option("--nodes", gp.node_count, "Node count")->required();
    gen_random->add_option("--trust", gp.trust_size, "Trust set size")->required();
    gen_random->add_option("--quota", quota_text, "Quota (decimal or p/q)")->required();
    gen_random->add_option("--byz", gp.byzantine_count, "Byzantine node count")->capture_default_str();
    gen_random->add_option("--seed", gp.seed, "64-bit seed")->required();
    gen_random->add_option("--topology", topology, "clique | overlapping-groups | centralised")->capture_default_str();
    gen_random->add_option("--overlap", gp.overlap, "Outside-group trust fraction")->capture_default_str();
    gen_random->add_option("--groups", gp.groups, "Group count")->capture_default_str();
    gen_random->add_option("--core", gp.core_size, "Core size (0: half the trust size)")->capture_default_str();
    gen_random->add_option("-o,--output", output, "Output network JSON")->required();

    try {
      std::vector<std::string> reversed(args.rbegin(), args.rend());
      app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
      out_ << app.help();
      return ok;
    } catch (const CLI::CallForAllHelp&) {
      out_ << app.help("", CLI::AppFormatMode::All);
      return ok;
    } catch (const CLI::ParseError& e) {
      err_ << "error: " << e.what() << "\n\n" << app.help();
      return input_error;
    }

    ctx_.threads = threads.value_or(env_threads());
    const auto started = std::chrono::steady_clock::now();
    Json report;
    try {
      if (check->parsed()) report = cmd_check(file);
      else if (qi->parsed()) report = cmd_qi(file, honest, max_nodes);
      else if (fork->parsed()) report = cmd_fork(file, strong, fork_max.value_or(strong ? 16 : 20));
      else if (safety->parsed()) report = cmd_safety(file, safety_max);
      else if (influence->parsed()) report = cmd_influence(file, limit, tol, max_iter, exact);
      else if (gen_sat->parsed()) report = cmd_gen_sat(dimacs, slice_addition, output);
      else if (gen_random->parsed()) report = cmd_gen_random(gp, quota_text, topology, output);
    } catch (const BudgetExceeded& e) {
      err_ << "budget exceeded: " << e.what() << "\n";
      return budget;
    } catch (const Error& e) {
      err_ << "error: " << e.what() << "\n";
      return input_error;
    } catch (const Json::exception& e) {
      err_ << "error: " << e.what() << "\n";
      return input_error;
    }
    const int code = report["exit"].get<int>();
    report.erase("exit");
    report["timing_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    if (!ctx_.quiet) {
      if (ctx_.json) {
        out_ << report.dump(2) << "\n";
      } else {
        render_human(report, out_);
      }
    }
    return code;
  }

 private:
  static unsigned env_threads() {
    if (const char* v = std::getenv("QUORUMLENS_THREADS")) {
      char* end = nullptr;
      const long n = std::strtol(v, &end, 10);
      if (end != v && *end == '\0' && n >= 1 && n <= 256) return static_cast<unsigned>(n);
    }
    return 1;
  }

  Network load(const std::string& file, Json& report) {
    auto loaded = load_network(file);
    for (const auto& w : loaded.warnings) warnings_.push_back(w);
    report["network"] = detail::network_summary(loaded.network);
    return std::move(loaded.network);
  }

  void finish(Json& r) {
    r["warnings"] = warnings_;
    if (!r.contains("witness")) r["witness"] = nullptr;
  }

  Json cmd_check(const std::string& file) {
    Json r = detail::start_report(ctx_, "check");
    load(file, r);
    r["verdict"] = "valid";
    r["exit"] = ok;
    finish(r);
    return r;
  }

  Json cmd_qi(const std::string& file, bool honest, std::size_t max_nodes) {
    Json r = detail::start_report(ctx_, "qi");
    const Network net = load(file, r);
    const Json q = detail::qi_report(net, honest, max_nodes);
    for (const auto& [k, v] : q.items()) r[k] = v;
    finish(r);
    return r;
  }

  Json cmd_fork(const std::string& file, bool strong, std::size_t max_nodes) {
    Json r = detail::start_report(ctx_, strong ? "fork --strong" : "fork");
    const Network net = load(file, r);
    ForkResult f;
    if (strong) {
      const auto* btn = std::get_if<Btn>(&net);
      if (!btn) throw InputError("strong-fork search needs a vetoed slice network");
      f = find_strong_fork(*btn, Budget{max_nodes, std::size_t(-1)});
    } else {
      f = std::visit([&](const auto& n) { return find_fork(n, Budget{max_nodes, 64}); }, net);
    }
    r["verdict"] = to_string(f.verdict);
    r["witness"] = f.witness ? detail::fork_json(detail::base_of(net), *f.witness) : Json(nullptr);
    r["exit"] = exit_for(f.verdict);
    finish(r);
    return r;
  }

  Json cmd_safety(const std::string& file, std::size_t max_nodes) {
    Json r = detail::start_report(ctx_, "safety");
    const Network net = load(file, r);
    const auto* q = std::get_if<Qbtn>(&net);
    if (!q) throw InputError("safety analysis needs a quota network");
    const auto& t = q->nodes();

    Json beta_t = detail::table({"i", "j", "shared", "beta"});
    for (NodeIndex i = 0; i < q->size(); ++i)
      for (NodeIndex j = i + 1; j < q->size(); ++j) {
        if (q->is_byzantine(i) || q->is_byzantine(j)) continue;
        beta_t["rows"].push_back(detail::row_of(t.label(i), t.label(j), (q->trust(i) & q->trust(j)).count(),
                                                to_string(beta(*q, i, j))));
      }
    r["tables"]["beta"] = std::move(beta_t);

    std::optional<bool> overlap_ok;
    if (q->uniform_quota()) {
      try {
        const auto reports = check_overlap_bounds(*q);
        Json ov = detail::table({"i", "j", "shared", "bound", "satisfies"});
        for (const auto& o : reports)
          ov["rows"].push_back(detail::row_of(t.label(o.i), t.label(o.j), o.intersection_size, to_string(o.bound),
                                              o.satisfies ? "yes" : "no"));
        r["tables"]["overlap"] = std::move(ov);
        overlap_ok = overlap_bounds_pass(reports);
      } catch (const PreconditionError& e) {
        warnings_.push_back(std::string("overlap table skipped: ") + e.what());
      }
    } else {
      warnings_.push_back("overlap table skipped: quota is not uniform");
    }

    const NodeSet common = common_trust_set(*q);
    const auto cert = certify_safe_under_failure_model(*q, ForkRoute::quota, Budget{max_nodes, 1u << 16});
    Json summary;
    summary["common_trust"] = detail::set_json(t, common);
    summary["overlap_bounds_pass"] = overlap_ok ? Json(*overlap_ok) : Json(nullptr);
    summary["placements_checked"] = cert.placements;
    summary["safe_under_failure_model"] =
        cert.verdict == Verdict::budget_exceeded ? Json(nullptr) : Json(cert.verdict == Verdict::holds);
    // A safe uniform network is expected to have a non-empty common trust set.
    if (cert.verdict == Verdict::holds && q->uniform_quota())
      summary["safe_implies_common_trust"] = common.any();
    r["summary"] = std::move(summary);
    r["verdict"] = to_string(cert.verdict);
    if (cert.witness) {
      Json w = detail::fork_json(q->with_byzantine(*cert.placement), *cert.witness);
      w["byzantine_placement"] = detail::set_json(t, *cert.placement);
      r["witness"] = std::move(w);
    }
    r["exit"] = exit_for(cert.verdict);
    finish(r);
    return r;
  }

  Json cmd_influence(const std::string& file, bool limit, double tol, std::size_t max_iter, bool exact) {
    Json r = detail::start_report(ctx_, "influence");
    const Network net = load(file, r);
    const auto& base = detail::base_of(net);
    const auto& t = base.nodes();
    const InfluenceMatrix m = std::visit([&](const auto& n) { return influence_matrix(n, ctx_.threads); }, net);

    std::vector<std::string> cols{"row"};
    for (const auto& l : t.labels()) cols.push_back(l);
    auto matrix_table = [&](auto cell) {
      Json tab = detail::table(cols);
      for (NodeIndex i = 0; i < m.size(); ++i) {
        Json row = detail::row_of(t.label(i));
        for (NodeIndex j = 0; j < m.size(); ++j) row.push_back(cell(i, j));
        tab["rows"].push_back(std::move(row));
      }
      return tab;
    };
    r["tables"]["influence"] = matrix_table([&](NodeIndex i, NodeIndex j) -> Json {
      if (exact) return to_string(m.entries[i][j]);
      return to_double(m.entries[i][j]);
    });

    const InfluenceGraph g = analyze_graph(m);
    Json comps = detail::table({"component", "closed", "period"});
    for (std::size_t c = 0; c < g.components.size(); ++c)
      comps["rows"].push_back(detail::row_of(detail::set_json(t, g.components[c]), g.closed[c] ? "yes" : "no", g.period[c]));
    r["tables"]["components"] = std::move(comps);
    r["classification"] = to_string(classify(g));

    if (limit) {
      const LimitReport lr = limit_matrix(m, tol, max_iter);
      r["classification"] = to_string(lr.classification);
      Json lj;
      lj["squarings"] = lr.squarings;
      lj["residual"] = lr.residual;
      r["convergence"] = std::move(lj);
      if (lr.limit) {
        r["tables"]["limit"] = matrix_table([&](NodeIndex i, NodeIndex j) -> Json { return (*lr.limit)[i][j]; });
      }
    }

    const NodeSet common = std::visit([](const auto& n) { return common_trust_set(n); }, net);
    if (common.any()) {
      const auto c = std::visit(
          [&](const auto& n) { return verify_centralised_claims(n, tol, max_iter, ctx_.threads); }, net);
      Json cj;
      cj["common_trust"] = detail::set_json(t, c.common_trust);
      cj["regular"] = to_string(c.regular);
      cj["fully_regular_if_at_most_one_byzantine"] = to_string(c.fully_regular_if_few_byzantine);
      cj["honest_influence_vanishes"] = to_string(c.byzantine_capture);
      cj["byzantine_trusted_by_core"] = c.byzantine_reaches_core;
      r["centralised_claims"] = std::move(cj);
    }
    r["verdict"] = "ok";
    r["exit"] = ok;
    finish(r);
    return r;
  }

  Json cmd_gen_sat(const std::string& dimacs, bool slice_addition, const std::string& output) {
    Json r = detail::start_report(ctx_, slice_addition ? "gen sat --slice-addition" : "gen sat");
    std::ifstream in(dimacs, std::ios::binary);
    if (!in) throw InputError("cannot read '" + dimacs + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    auto parsed = parse_dimacs(ss.str());
    for (const auto& w : parsed.warnings) warnings_.push_back(dimacs + ": " + w);
    const Cnf& f = parsed.cnf;
    r["formula"] = {{"variables", f.num_vars}, {"clauses", f.clauses.size()}};
    if (slice_addition) {
      auto inst = reduce_slice_addition_instance(f);
      save_network(Network(inst.base), output);
      r["added_slice"] = {{"node", inst.base.label(inst.node)},
                          {"slice", detail::set_json(inst.base.nodes(), inst.slice)}};
      r["network"] = detail::network_summary(Network(inst.base));
    } else {
      const Btn net = reduce_sat_to_btn(f);
      save_network(Network(net), output);
      r["network"] = detail::network_summary(Network(net));
    }
    r["output"] = output;
    r["verdict"] = "ok";
    r["exit"] = ok;
    finish(r);
    return r;
  }

  Json cmd_gen_random(GenParams gp, const std::string& quota_text, const std::string& topology,
                      const std::string& output) {
    Json r = detail::start_report(ctx_, "gen random");
    gp.quota = parse_rational(quota_text);
    gp.topology = parse_topology(topology);
    const Qbtn net = random_qbtn(gp);
    save_network(Network(net), output);
    r["seed"] = gp.seed;
    r["network"] = detail::network_summary(Network(net));
    r["output"] = output;
    r["verdict"] = "ok";
    r["exit"] = ok;
    finish(r);
    return r;
  }

  std::ostream& out_;
  std::ostream& err_;
  Context ctx_;
  std::vector<std::string> warnings_;
};

/// Entry point shared by the binary and the tests. `args` excludes argv[0].
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return Runner(out, err).run(args);
}

}  // namespace quorumlens::cli
