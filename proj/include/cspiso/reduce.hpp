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

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cspiso/application.hpp"
#include "cspiso/boolfun.hpp"
#include "cspiso/encode.hpp"
#include "cspiso/error.hpp"
#include "cspiso/graph.hpp"
#include "cspiso/instances.hpp"

namespace cspiso {

// ---- witness substitution ----

enum class witness_mode { non_bijunctive, non_affine };

struct witness_result {
  application app;  // B applied to x,y,z,x',y',z' and constants
  std::size_t s = 0, t = 0, u = 0;
};

inline const std::array<std::string, 6>& hat_vars() {
  static const std::array<std::string, 6> v = {"x", "y", "z", "x'", "y'", "z'"};
  return v;
}

/// B-hat at the point given as a 6-character 0/1 string over (x,y,z,x',y',z').
inline bool eval_hat(const application& a, std::string_view bits) {
  if (bits.size() != 6) throw invalid_input("eval_hat: expects 6 bits");
  return a.eval([&](const std::string& v) {
    for (std::size_t i = 0; i < 6; ++i) {
      if (hat_vars()[i] == v) return bits[i] == '1';
    }
    throw invalid_input("eval_hat: unexpected variable " + v);
  });
}

/// Picks the first satisfying s,t,u (in row order) whose majority (or
/// xor) is not satisfying and substitutes by the pattern (s_i,t_i,u_i):
/// 000->0 111->1 001->x 110->x' 010->y 101->y' 011->z 100->z'.
inline witness_result witness_substitution(const constraint_ptr& b, witness_mode mode) {
  const auto& tt = b->table();
  const unsigned k = b->arity();
  std::vector<std::size_t> sat;
  for (std::size_t r = 0; r < tt.num_bits(); ++r) {
    if (tt.get(r)) sat.push_back(r);
  }
  for (auto s : sat) {
    for (auto t : sat) {
      for (auto u : sat) {
        const std::size_t m = mode == witness_mode::non_bijunctive ? ((s & t) | (s & u) | (t & u)) : (s ^ t ^ u);
        if (tt.get(m)) continue;
        std::vector<argument> args;
        for (unsigned i = 0; i < k; ++i) {
          const int pat = (row_bit(s, k, i) << 2) | (row_bit(t, k, i) << 1) | static_cast<int>(row_bit(u, k, i));
          switch (pat) {
            case 0: args.push_back(argument::zero()); break;
            case 7: args.push_back(argument::one()); break;
            case 1: args.push_back(argument::var("x")); break;
            case 6: args.push_back(argument::var("x'")); break;
            case 2: args.push_back(argument::var("y")); break;
            case 5: args.push_back(argument::var("y'")); break;
            case 3: args.push_back(argument::var("z")); break;
            default: args.push_back(argument::var("z'")); break;
          }
        }
        return {application(b, std::move(args)), s, t, u};
      }
    }
  }
  throw invalid_input(std::string("witness_substitution: '") + b->name() + "' is " +
                      (mode == witness_mode::non_bijunctive ? "bijunctive" : "affine"));
}

/// The truth-table checkpoints: s, t, u survive and the designated point fails.
inline bool witness_checkpoints_hold(const witness_result& w, witness_mode mode) {
  if (!eval_hat(w.app, "000111") || !eval_hat(w.app, "011100") || !eval_hat(w.app, "101010")) return false;
  if (mode == witness_mode::non_bijunctive) {
    if (eval_hat(w.app, "001110")) return false;
    // an affine B keeps s^t^u
    if (detect_properties(w.app.fn()).affine && !eval_hat(w.app, "110001")) return false;
    return true;
  }
  return !eval_hat(w.app, "110001");
}

// ---- constants, canonical forms, S_{i,D} ----

/// 0 -> f and 1 -> t.
inline instance_set lift_constants(const instance_set& s) {
  if (s.has_variable("f") || s.has_variable("t")) throw invalid_input("lift_constants: input already uses f or t");
  std::vector<application> out;
  variable_list x = s.universe();
  bool used_f = false, used_t = false;
  for (const auto& a : s.apps()) {
    out.push_back(a.map_args([&](const argument& g) {
      if (g.is_variable()) return g;
      (g.constant_value() ? used_t : used_f) = true;
      return argument::var(g.constant_value() ? "t" : "f");
    }));
  }
  if (used_f) x.push_back("f");
  if (used_t) x.push_back("t");
  return instance_set(std::move(x), std::move(out));
}

/// Canonical forms 1..6 over x,y (1-3), x,y,x',y' (4) or x,y,z,x',y',z' (5-6).
inline bool_function canonical_form(int i) {
  switch (i) {
    case 1: return bool_function::from_lambda({"x", "y"}, [](auto a) { return a[0] || a[1]; });
    case 2: return bool_function::from_lambda({"x", "y"}, [](auto a) { return !a[0] || a[1]; });
    case 3: return bool_function::from_lambda({"x", "y"}, [](auto a) { return !a[0] || !a[1]; });
    case 4:
      return bool_function::from_lambda({"x", "y", "x'", "y'"},
                                        [](auto a) { return (a[0] || a[1]) && a[0] != a[2] && a[1] != a[3]; });
    case 5:
      return bool_function::from_lambda({"x", "y", "z", "x'", "y'", "z'"}, [](auto a) {
        return int(a[0]) + int(a[1]) + int(a[2]) == 1 && a[0] != a[3] && a[1] != a[4] && a[2] != a[5];
      });
    case 6:
      return bool_function::from_lambda({"x", "y", "z", "x'", "y'", "z'"}, [](auto a) {
        return ((a[0] != a[1]) != a[2]) && a[0] != a[3] && a[1] != a[4] && a[2] != a[5];
      });
    default: throw invalid_input("canonical form index must be 1..6");
  }
}

namespace detail {

inline instance_set rename_set(const instance_set& d, const std::map<std::string, std::string, std::less<>>& m,
                               std::vector<application>& out) {
  std::map<std::string, argument, std::less<>> am;
  for (const auto& [a, b] : m) am.emplace(a, argument::var(b));
  for (const auto& a : d.apps()) out.push_back(a.rename(am));
  return d;
}

inline bool equivalent_to(const instance_set& s, const bool_function& target) {
  variable_list vars = target.vars;
  sort_variables(vars);
  const instance_set aligned(vars, s.apps());
  const compiled_instance ci(aligned);
  const auto k = static_cast<unsigned>(target.vars.size());
  for (std::size_t r = 0; r < target.table.num_bits(); ++r) {
    std::uint64_t a = 0;
    for (unsigned j = 0; j < k; ++j) {
      const auto at = std::lower_bound(vars.begin(), vars.end(), target.vars[j], natural_order{}) - vars.begin();
      if (row_bit(r, k, j)) a |= std::uint64_t{1} << at;
    }
    if (eval_all(ci, a) != target.table.get(r)) return false;
  }
  return true;
}

}  // namespace detail

/// One copy of the lifted realization D per edge, f and t shared.
inline instance_set build_SiD(int i, const instance_set& d, const graph& g) {
  {
    instance_set with_ft = d;
    with_ft.add_variables({"f", "t"});
    const auto restricted = substitute(with_ft, {{"f", false}, {"t", true}});
    for (const auto& v : restricted.universe()) {
      const auto& cv = canonical_form(i).vars;
      if (std::find(cv.begin(), cv.end(), v) == cv.end()) {
        throw invalid_input("build_SiD: realization uses variable '" + v + "' outside the canonical form");
      }
    }
    if (!detail::equivalent_to(restricted, canonical_form(i))) {
      throw invalid_input("build_SiD: realization does not restrict to canonical form " + std::to_string(i));
    }
  }
  std::vector<application> out;
  int k = 0;
  for (auto [a, b] : g.edges()) {
    ++k;
    switch (i) {
      case 1:
      case 3: detail::rename_set(d, {{"x", vx(a)}, {"y", vx(b)}}, out); break;
      case 2:
        detail::rename_set(d, {{"x", vy(k)}, {"y", vx(a)}}, out);
        detail::rename_set(d, {{"x", vy(k)}, {"y", vx(b)}}, out);
        break;
      case 4: detail::rename_set(d, {{"x", vx(a)}, {"y", vx(b)}, {"x'", vxp(a)}, {"y'", vxp(b)}}, out); break;
      default:
        detail::rename_set(
            d, {{"x", vx(a)}, {"y", vx(b)}, {"z", vy(k)}, {"x'", vxp(a)}, {"y'", vxp(b)}, {"z'", vyp(k)}}, out);
        break;
    }
  }
  return instance_set::over_occurring(std::move(out), {"f", "t"});
}

// ---- gadgets ----

struct gadget_target {
  int id;
  std::string name;
  bool_function fn;
  bool direct;  // encoded without S_{i,D}
};

/// The ten targets in search order.
inline const std::vector<gadget_target>& gadget_targets() {
  static const std::vector<gadget_target> t = [] {
    using bf = bool_function;
    std::vector<gadget_target> v;
    v.push_back({1, "~x&y", bf::from_lambda({"x", "y"}, [](auto a) { return !a[0] && a[1]; }), false});
    v.push_back({2, "~x|y", bf::from_lambda({"x", "y"}, [](auto a) { return !a[0] || a[1]; }), true});
    v.push_back({3, "x^y", bf::from_lambda({"x", "y"}, [](auto a) { return a[0] != a[1]; }), false});
    v.push_back({4, "x<->y", bf::from_lambda({"x", "y"}, [](auto a) { return a[0] == a[1]; }), false});
    v.push_back({5, "t&(~x|y)", bf::from_lambda({"t", "x", "y"}, [](auto a) { return a[0] && (!a[1] || a[2]); }), true});
    v.push_back({6, "t&(x<->y)", bf::from_lambda({"t", "x", "y"}, [](auto a) { return a[0] && a[1] == a[2]; }), false});
    v.push_back({7, "t&(x|y)", bf::from_lambda({"t", "x", "y"}, [](auto a) { return a[0] && (a[1] || a[2]); }), true});
    v.push_back({8, "~f&(~x|y)", bf::from_lambda({"f", "x", "y"}, [](auto a) { return !a[0] && (!a[1] || a[2]); }), true});
    v.push_back({9, "~f&(x<->y)", bf::from_lambda({"f", "x", "y"}, [](auto a) { return !a[0] && a[1] == a[2]; }), false});
    v.push_back({10, "~f&(~x|~y)", bf::from_lambda({"f", "x", "y"}, [](auto a) { return !a[0] && (!a[1] || !a[2]); }), true});
    return v;
  }();
  return t;
}

struct gadget_hit {
  int target = 0;
  instance_set u;
};

/// First target (in order) realizable by cs without constants.
inline std::optional<gadget_hit> find_gadget(const constraint_set& cs) {
  for (const auto& t : gadget_targets()) {
    if (auto m = realize(cs, t.fn, false)) return gadget_hit{t.id, std::move(*m)};
  }
  return std::nullopt;
}

namespace detail {

// U(a,b,...) for a realization over the target's variables.
inline void instantiate(const gadget_hit& u, const std::vector<std::string>& args, std::vector<application>& out) {
  const auto& vars = gadget_targets().at(static_cast<std::size_t>(u.target - 1)).fn.vars;
  std::map<std::string, std::string, std::less<>> m;
  for (std::size_t i = 0; i < vars.size(); ++i) m.emplace(vars[i], args.at(i));
  rename_set(u.u, m, out);
}

}  // namespace detail

/// Adds the gadget copies for targets 1, 3, 4, 6, 9 (cases 1..5).
inline instance_set attach_gadget(const gadget_hit& u, const instance_set& s) {
  std::vector<application> out(s.apps().begin(), s.apps().end());
  switch (u.target) {
    case 1:
      for (auto args : {std::vector<std::string>{"f", "t"}, {"f1", "t"}, {"f2", "t1"}}) detail::instantiate(u, args, out);
      break;
    case 3:
      for (auto args : {std::vector<std::string>{"f", "t"}, {"f1", "t"}, {"f2", "t"}, {"f", "t1"}}) {
        detail::instantiate(u, args, out);
      }
      break;
    case 4:
      for (auto args : {std::vector<std::string>{"f", "f1"}, {"f", "f2"}, {"t", "t1"}}) detail::instantiate(u, args, out);
      break;
    case 6:
      for (auto args : {std::vector<std::string>{"t", "f", "f1"}, {"t1", "f", "f2"}}) detail::instantiate(u, args, out);
      break;
    case 9:
      for (auto args : {std::vector<std::string>{"f", "f", "f1"}, {"f2", "t", "t1"}}) detail::instantiate(u, args, out);
      break;
    default: throw invalid_input("attach_gadget: target " + std::to_string(u.target) + " has no gadget case");
  }
  variable_list x = s.universe();
  for (const char* v : {"f", "t", "f1", "f2", "t1"}) x.push_back(v);
  return instance_set(std::move(x), std::move(out));
}

inline std::pair<instance_set, instance_set> attach_gadget(const gadget_hit& u, const instance_set& left,
                                                           const instance_set& right) {
  return {attach_gadget(u, left), attach_gadget(u, right)};
}

/// The constant-free encodings for targets 2, 5, 7, 8, 10.
inline instance_set direct_encoding(const gadget_hit& u, const graph& g) {
  std::vector<application> out;
  int k = 0;
  for (auto [i, j] : g.edges()) {
    ++k;
    switch (u.target) {
      case 2:
        detail::instantiate(u, {vy(k), vx(i)}, out);
        detail::instantiate(u, {vy(k), vx(j)}, out);
        break;
      case 5:
        detail::instantiate(u, {"t", vy(k), vx(i)}, out);
        detail::instantiate(u, {"t", vy(k), vx(j)}, out);
        break;
      case 7: detail::instantiate(u, {"t", vx(i), vx(j)}, out); break;
      case 8:
        detail::instantiate(u, {"f", vy(k), vx(i)}, out);
        detail::instantiate(u, {"f", vy(k), vx(j)}, out);
        break;
      case 10: detail::instantiate(u, {"f", vx(i), vx(j)}, out); break;
      default: throw invalid_input("direct_encoding: target " + std::to_string(u.target) + " is not direct");
    }
  }
  return instance_set::over_occurring(std::move(out));
}

// ---- the pipeline ----

struct reduction_transcript {
  preprocess_stats stats;
  bool materialized = false;  // preprocessing said no; a fixed non-isomorphic pair was reduced instead
  int form = 0;               // canonical form used, 0 for direct encodings
  std::vector<std::string> realization;
  int gadget_target = 0;
  std::string gadget_name;
  std::string gadget_mode;  // "gadget" or "direct"
  std::vector<std::string> gadget;
};

struct reduction_output {
  instance_set left, right;
  constraint_set constraints;
  reduction_transcript transcript;
};

struct reduction_result {
  bool not_isomorphic = false;
  std::string reason;
  std::optional<reduction_output> output;
};

struct reduce_options {
  bool materialize_not_isomorphic = false;
};

/// The canonical form (by priority) realizable with constants, lifted.
inline std::optional<std::pair<int, instance_set>> realize_canonical(const constraint_set& cs) {
  const std::vector<int> order = is_affine_set(cs) ? std::vector<int>{6} : std::vector<int>{1, 2, 3, 4, 5};
  for (int i : order) {
    if (auto m = realize(cs, canonical_form(i), true)) return std::make_pair(i, lift_constants(*m));
  }
  return std::nullopt;
}

inline reduction_result reduce_gi_to_iso(const constraint_set& cs, const graph& g, const graph& h,
                                         const reduce_options& opt = {}) {
  if (classify_trichotomy(cs) == trichotomy_class::in_p) {
    throw invalid_input("reduce: the constraint set is 2-affine (IN_P); there is no reduction from GI");
  }
  reduction_result res;
  auto pre = preprocess_pair(g, h);
  reduction_transcript tr;
  if (pre.not_isomorphic) {
    res.not_isomorphic = true;
    res.reason = pre.reason;
    if (!opt.materialize_not_isomorphic) return res;
    // P4 against the star K_{1,3}
    pre = preprocess_pair(graph(4, {{1, 2}, {2, 3}, {3, 4}}), graph(4, {{1, 2}, {1, 3}, {1, 4}}));
    tr.materialized = true;
  }
  tr.stats = pre.stats;

  auto gad = find_gadget(cs);
  if (!gad) throw error("reduce: no gadget target is realizable; the constraint set should be 2-affine");
  const auto& target = gadget_targets().at(static_cast<std::size_t>(gad->target - 1));
  tr.gadget_target = target.id;
  tr.gadget_name = target.name;
  for (const auto& a : gad->u.apps()) tr.gadget.push_back(a.to_string());

  reduction_output out{instance_set{}, instance_set{}, cs, {}};
  if (target.direct) {
    tr.gadget_mode = "direct";
    out.left = direct_encoding(*gad, pre.g);
    out.right = direct_encoding(*gad, pre.h);
  } else {
    tr.gadget_mode = "gadget";
    auto d = realize_canonical(cs);
    if (!d) throw error("reduce: no canonical form is realizable with constants");
    tr.form = d->first;
    for (const auto& a : d->second.apps()) tr.realization.push_back(a.to_string());
    out.left = attach_gadget(*gad, build_SiD(d->first, d->second, pre.g));
    out.right = attach_gadget(*gad, build_SiD(d->first, d->second, pre.h));
  }
  auto [l, r] = align(out.left, out.right);
  out.left = std::move(l);
  out.right = std::move(r);
  if (out.left.has_constants() || out.right.has_constants()) throw error("reduce: output contains constants");
  out.transcript = std::move(tr);
  res.output = std::move(out);
  return res;
}

}  // namespace cspiso
