// Copyright 2026 The cspiso Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cspiso/application.hpp"
#include "cspiso/boolfun.hpp"
#include "cspiso/error.hpp"
#include "cspiso/graph.hpp"
#include "cspiso/reduce.hpp"
#include "json.hpp"

namespace cspiso::io {

namespace detail {

// Splits text into (line number, tokens), skipping blanks and comments
// ('#' anywhere, or a leading 'c' token).
inline std::vector<std::pair<int, std::vector<std::string>>> tokenize(std::string_view text) {
  std::vector<std::pair<int, std::vector<std::string>>> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (toks.empty() || toks[0] == "c") continue;
    out.emplace_back(ln, std::move(toks));
  }
  return out;
}

[[noreturn]] inline void fail(int ln, const std::string& msg) {
  throw invalid_input("line " + std::to_string(ln) + ": " + msg);
}

inline int parse_int(int ln, const std::string& s) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    fail(ln, "expected an integer, got '" + s + "'");
  }
  if (pos != s.size()) fail(ln, "expected an integer, got '" + s + "'");
  return v;
}

}  // namespace detail

// ---- constraints: `name arity bits` ----

inline constraint_set parse_constraints(std::string_view text, unsigned max_arity = default_max_arity) {
  constraint_set cs;
  for (const auto& [ln, t] : detail::tokenize(text)) {
    if (t.size() != 3) detail::fail(ln, "expected 'name arity bits'");
    const int k = detail::parse_int(ln, t[1]);
    if (k < 0 || static_cast<unsigned>(k) > max_arity) detail::fail(ln, "arity " + t[1] + " out of range");
    if (t[2].size() != (std::size_t{1} << k)) {
      detail::fail(ln, "table has " + std::to_string(t[2].size()) + " bits, arity " + t[1] + " needs " +
                           std::to_string(std::size_t{1} << k));
    }
    try {
      cs.add(constraint(t[0], truth_table::from_string(t[2]), max_arity));
    } catch (const invalid_input& e) {
      detail::fail(ln, e.what());
    }
  }
  return cs;
}

/// "a,b,c" of built-in names.
inline constraint_set builtin_constraints(std::string_view names) {
  constraint_set cs;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    auto c = builtin::by_name(cur);
    if (!c) throw invalid_input("unknown built-in constraint '" + cur + "'");
    cs.add(*c);
    cur.clear();
  };
  for (char ch : names) {
    if (ch == ',') {
      flush();
    } else {
      cur += ch;
    }
  }
  flush();
  if (cs.empty()) throw invalid_input("empty built-in constraint list");
  return cs;
}

inline std::string print_constraints(const constraint_set& cs) {
  std::string out;
  for (const auto& c : cs) out += c->name() + " " + std::to_string(c->arity()) + " " + c->table().to_string() + "\n";
  return out;
}

// ---- instances: `vars ...` then `apply name args...` ----

inline instance_set parse_instance(std::string_view text, const constraint_set& cs, bool allow_constants = true) {
  variable_list vars;
  std::vector<application> apps;
  bool header = false;
  for (const auto& [ln, t] : detail::tokenize(text)) {
    if (t[0] == "vars") {
      for (std::size_t i = 1; i < t.size(); ++i) {
        if (t[i] == "0" || t[i] == "1") detail::fail(ln, "'" + t[i] + "' is not a variable name");
        vars.push_back(t[i]);
      }
      header = true;
    } else if (t[0] == "apply") {
      if (!header) detail::fail(ln, "'apply' before the 'vars' header");
      if (t.size() < 2) detail::fail(ln, "'apply' needs a constraint name");
      auto c = cs.find(t[1]);
      if (!c) detail::fail(ln, "unknown constraint '" + t[1] + "'");
      if (t.size() - 2 != c->arity()) {
        detail::fail(ln, "constraint '" + t[1] + "' expects " + std::to_string(c->arity()) + " arguments, got " +
                             std::to_string(t.size() - 2));
      }
      std::vector<argument> args;
      for (std::size_t i = 2; i < t.size(); ++i) {
        if (t[i] == "0" || t[i] == "1") {
          if (!allow_constants) detail::fail(ln, "constants are not allowed here");
          args.push_back(argument::constant(t[i] == "1"));
        } else {
          args.push_back(argument::var(t[i]));
        }
      }
      apps.emplace_back(std::move(c), std::move(args));
    } else {
      detail::fail(ln, "unknown directive '" + t[0] + "'");
    }
  }
  if (!header) throw invalid_input("instance file has no 'vars' header");
  return instance_set::over_occurring(std::move(apps), std::move(vars));
}

inline std::string print_instance(const instance_set& s) {
  std::string out = "vars";
  for (const auto& v : s.universe()) out += " " + v;
  out += "\n";
  for (const auto& a : s.apps()) {
    out += "apply " + a.fn().name();
    for (const auto& g : a.args()) out += " " + g.to_string();
    out += "\n";
  }
  return out;
}

// ---- graphs: `p n m` then `e i j` ----

inline graph parse_graph(std::string_view text) {
  int n = -1, m = -1;
  std::vector<graph::edge> es;
  for (const auto& [ln, t] : detail::tokenize(text)) {
    if (t[0] == "p") {
      if (n >= 0) detail::fail(ln, "duplicate 'p' header");
      // tolerate the DIMACS form `p edge n m`
      const std::size_t off = (t.size() == 4) ? 2 : 1;
      if (t.size() != off + 2) detail::fail(ln, "expected 'p n m'");
      n = detail::parse_int(ln, t[off]);
      m = detail::parse_int(ln, t[off + 1]);
      if (n < 0 || m < 0) detail::fail(ln, "negative count");
    } else if (t[0] == "e") {
      if (n < 0) detail::fail(ln, "edge before the 'p' header");
      if (t.size() != 3) detail::fail(ln, "expected 'e i j'");
      es.emplace_back(detail::parse_int(ln, t[1]), detail::parse_int(ln, t[2]));
    } else {
      detail::fail(ln, "unknown directive '" + t[0] + "'");
    }
  }
  if (n < 0) throw invalid_input("graph file has no 'p' header");
  if (static_cast<int>(es.size()) != m) {
    throw invalid_input("graph header declares " + std::to_string(m) + " edges, found " + std::to_string(es.size()));
  }
  return graph(n, std::move(es));
}

inline std::string print_graph(const graph& g) {
  std::string out = "p " + std::to_string(g.n()) + " " + std::to_string(g.m()) + "\n";
  for (auto [a, b] : g.edges()) out += "e " + std::to_string(a) + " " + std::to_string(b) + "\n";
  return out;
}

// ---- JSON ----

inline nlohmann::json to_json(const instance_set& s) {
  nlohmann::json apps = nlohmann::json::array();
  for (const auto& a : s.apps()) {
    nlohmann::json args = nlohmann::json::array();
    for (const auto& g : a.args()) args.push_back(g.to_string());
    apps.push_back({{"constraint", a.fn().name()}, {"args", args}});
  }
  return {{"vars", s.universe()}, {"apply", apps}};
}

inline nlohmann::json to_json(const reduction_transcript& t) {
  return {{"preprocessing",
           {{"isolated_removed", t.stats.isolated_removed},
            {"n1", t.stats.n1},
            {"n2", t.stats.n2},
            {"m2", t.stats.m2},
            {"n3", t.stats.n3},
            {"m3", t.stats.m3},
            {"materialized", t.materialized}}},
          {"form", t.form},
          {"realization", t.realization},
          {"gadget", {{"target", t.gadget_target}, {"name", t.gadget_name}, {"mode", t.gadget_mode}, {"applications", t.gadget}}}};
}

}  // namespace cspiso::io
