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

#include <string>
#include <vector>

#include "cspiso/application.hpp"
#include "cspiso/boolfun.hpp"
#include "cspiso/error.hpp"
#include "cspiso/graph.hpp"

namespace cspiso {

// Variable names: x_i for vertex i, y_k for edge e_k, primes for copies.
inline std::string vx(int i) { return "x" + std::to_string(i); }
inline std::string vxp(int i) { return vx(i) + "'"; }
inline std::string vy(int k) { return "y" + std::to_string(k); }
inline std::string vyp(int k) { return vy(k) + "'"; }

namespace detail {

inline void require_no_isolated(const graph& g, const char* who) {
  if (g.isolated_count() > 0) throw invalid_input(std::string(who) + ": graph has an isolated vertex");
}

inline application apply(const char* name, std::vector<std::string> vars) {
  std::vector<argument> args;
  for (auto& v : vars) args.push_back(argument::var(std::move(v)));
  return application(builtin::ptr(name), std::move(args));
}

inline void add_pairs(const graph& g, std::vector<application>& out) {
  for (int i = 1; i <= g.n(); ++i) out.push_back(apply("xor2", {vx(i), vxp(i)}));
  for (int k = 1; k <= static_cast<int>(g.m()); ++k) out.push_back(apply("xor2", {vy(k), vyp(k)}));
}

}  // namespace detail

/// variant 0: x_i | x_j per edge; 2: ~x_i | ~x_j; 1: x_i | ~y_k and x_j | ~y_k.
inline instance_set encode_or(int variant, const graph& g) {
  detail::require_no_isolated(g, "encode_or");
  std::vector<application> out;
  int k = 0;
  for (auto [i, j] : g.edges()) {
    ++k;
    switch (variant) {
      case 0: out.push_back(detail::apply("or0", {vx(i), vx(j)})); break;
      case 2: out.push_back(detail::apply("or2", {vx(i), vx(j)})); break;
      case 1:
        out.push_back(detail::apply("or1", {vy(k), vx(i)}));
        out.push_back(detail::apply("or1", {vy(k), vx(j)}));
        break;
      default: throw invalid_input("encode_or: variant must be 0, 1 or 2");
    }
  }
  return instance_set::over_occurring(std::move(out));
}

inline instance_set encode_h4(const graph& g) {
  detail::require_no_isolated(g, "encode_h4");
  std::vector<application> out;
  for (auto [i, j] : g.edges()) out.push_back(detail::apply("h4", {vx(i), vx(j), vxp(i), vxp(j)}));
  return instance_set::over_occurring(std::move(out));
}

/// The 6-ary form, or with `expanded` the equivalent OneInThree(x_i,x_j,y_k) form.
inline instance_set encode_oneinthree(const graph& g, bool expanded = false) {
  detail::require_no_isolated(g, "encode_oneinthree");
  std::vector<application> out;
  int k = 0;
  for (auto [i, j] : g.edges()) {
    ++k;
    if (expanded) {
      out.push_back(detail::apply("one-in-three", {vx(i), vx(j), vy(k)}));
    } else {
      out.push_back(detail::apply("h-one-in-three", {vx(i), vx(j), vy(k), vxp(i), vxp(j), vyp(k)}));
    }
  }
  if (g.m() > 0) detail::add_pairs(g, out);
  return instance_set::over_occurring(std::move(out));
}

/// Four XOR3 applications per edge plus the XOR2 pairs, or with `h_form`
/// one 6-ary application per edge.
inline instance_set encode_xor3(const graph& g, bool h_form = false) {
  detail::require_no_isolated(g, "encode_xor3");
  std::vector<application> out;
  int k = 0;
  for (auto [i, j] : g.edges()) {
    ++k;
    if (h_form) {
      out.push_back(detail::apply("h-xor3", {vx(i), vx(j), vy(k), vxp(i), vxp(j), vyp(k)}));
      continue;
    }
    out.push_back(detail::apply("xor3", {vx(i), vx(j), vy(k)}));
    out.push_back(detail::apply("xor3", {vxp(i), vxp(j), vy(k)}));
    out.push_back(detail::apply("xor3", {vxp(i), vx(j), vyp(k)}));
    out.push_back(detail::apply("xor3", {vx(i), vxp(j), vyp(k)}));
  }
  if (g.m() > 0) detail::add_pairs(g, out);
  return instance_set::over_occurring(std::move(out));
}

/// Encoder by name: or0 or1 or2 h4 oneinthree xor3.
inline instance_set encode(const std::string& name, const graph& g) {
  if (name == "or0") return encode_or(0, g);
  if (name == "or1") return encode_or(1, g);
  if (name == "or2") return encode_or(2, g);
  if (name == "h4") return encode_h4(g);
  if (name == "oneinthree") return encode_oneinthree(g);
  if (name == "xor3") return encode_xor3(g);
  throw invalid_input("unknown encoder '" + name + "'");
}

}  // namespace cspiso
