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

// Independent reference implementations used as test oracles. Everything
// here works on plain vectors and evaluates constraint tables directly so
// it shares no search code with the library.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cspiso/application.hpp"
#include "cspiso/boolfun.hpp"
#include "cspiso/graph.hpp"

namespace oracle {

using assignment = std::map<std::string, bool, std::less<>>;

inline bool eval_app(const cspiso::application& a, const assignment& v) {
  std::size_t row = 0;
  for (const auto& g : a.args()) {
    const bool b = g.is_variable() ? v.at(g.name()) : g.constant_value();
    row = row * 2 + (b ? 1 : 0);
  }
  return a.fn().table().get(row);
}

inline bool eval_set(const cspiso::instance_set& s, const assignment& v) {
  for (const auto& a : s.apps()) {
    if (!eval_app(a, v)) return false;
  }
  return true;
}

template <typename F>
void for_each_assignment(const std::vector<std::string>& vars, F&& f) {
  assignment v;
  const std::size_t n = vars.size();
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    for (std::size_t i = 0; i < n; ++i) v[vars[i]] = (m >> i) & 1u;
    f(v);
  }
}

inline std::uint64_t count(const cspiso::instance_set& s) {
  std::uint64_t c = 0;
  for_each_assignment(s.universe(), [&](const assignment& v) { c += eval_set(s, v) ? 1 : 0; });
  return c;
}

inline bool equivalent(const cspiso::instance_set& s, const cspiso::instance_set& u, const std::vector<std::string>& vars) {
  bool same = true;
  for_each_assignment(vars, [&](const assignment& v) { same = same && eval_set(s, v) == eval_set(u, v); });
  return same;
}

inline std::vector<std::string> union_vars(const cspiso::instance_set& s, const cspiso::instance_set& u) {
  std::vector<std::string> x = s.universe();
  x.insert(x.end(), u.universe().begin(), u.universe().end());
  cspiso::sort_variables(x);
  return x;
}

/// pi(S) equivalent to U for some pi, by trying all |X|! permutations.
inline bool isomorphic(const cspiso::instance_set& s, const cspiso::instance_set& u) {
  const auto x = union_vars(s, u);
  std::vector<std::uint64_t> ts, tu;
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  // tables once, then permute assignment bits
  auto table = [&](const cspiso::instance_set& a) {
    std::vector<bool> t(std::size_t{1} << x.size());
    std::size_t m = 0;
    for_each_assignment(x, [&](const assignment& v) { t[m++] = eval_set(a, v); });
    return t;
  };
  const auto a = table(s), b = table(u);
  if (std::count(a.begin(), a.end(), true) != std::count(b.begin(), b.end(), true)) return false;
  do {
    bool ok = true;
    for (std::size_t m = 0; m < a.size() && ok; ++m) {
      std::size_t pm = 0;
      for (std::size_t i = 0; i < x.size(); ++i) pm |= ((m >> idx[i]) & 1u) << i;
      ok = a[pm] == b[m];
    }
    if (ok) return true;
  } while (std::next_permutation(idx.begin(), idx.end()));
  return false;
}

/// Closure of the satisfying set under a coordinatewise operation, checked
/// on explicit bit vectors.
inline std::vector<std::vector<bool>> models(const cspiso::truth_table& t) {
  std::vector<std::vector<bool>> out;
  const unsigned k = t.num_vars();
  for (std::size_t r = 0; r < t.num_bits(); ++r) {
    if (!t.get(r)) continue;
    std::vector<bool> v(k);
    for (unsigned j = 0; j < k; ++j) v[j] = (r >> (k - 1 - j)) & 1u;
    out.push_back(v);
  }
  return out;
}

template <typename Op>
bool closed3(const cspiso::truth_table& t, Op op) {
  const auto ms = models(t);
  const std::set<std::vector<bool>> in(ms.begin(), ms.end());
  for (const auto& a : ms) {
    for (const auto& b : ms) {
      for (const auto& c : ms) {
        std::vector<bool> r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = op(a[i], b[i], c[i]);
        if (!in.contains(r)) return false;
      }
    }
  }
  return true;
}

inline bool horn(const cspiso::truth_table& t) { return closed3(t, [](bool a, bool b, bool) { return a && b; }); }
inline bool anti_horn(const cspiso::truth_table& t) { return closed3(t, [](bool a, bool b, bool) { return a || b; }); }
inline bool bijunctive(const cspiso::truth_table& t) {
  return closed3(t, [](bool a, bool b, bool c) { return (a && b) || (a && c) || (b && c); });
}
inline bool affine(const cspiso::truth_table& t) { return closed3(t, [](bool a, bool b, bool c) { return a ^ b ^ c; }); }

/// Graph isomorphism by trying every bijection.
inline bool graph_iso(const cspiso::graph& g, const cspiso::graph& h) {
  if (g.n() != h.n() || g.m() != h.m()) return false;
  std::vector<int> p(static_cast<std::size_t>(g.n()));
  std::iota(p.begin(), p.end(), 1);
  do {
    if (cspiso::relabel(g, p) == h) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

// ---- random generators ----

inline cspiso::constraint_ptr ptr(const char* name) { return cspiso::builtin::ptr(name); }

inline std::vector<std::string> names(std::size_t n, const char* prefix = "v") {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

/// Random set of unary and XOR2/IFF clauses over n variables.
inline cspiso::instance_set random_two_affine(std::mt19937_64& rng, std::size_t n, std::size_t clauses) {
  const auto x = names(n);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_int_distribution<int> kind(0, 9);
  std::vector<cspiso::application> apps;
  for (std::size_t i = 0; i < clauses; ++i) {
    const int k = kind(rng);
    const auto a = x[pick(rng)];
    auto b = x[pick(rng)];
    if (k == 0) {
      apps.emplace_back(ptr("id"), std::vector<cspiso::argument>{cspiso::var(a)});
    } else if (k == 1) {
      apps.emplace_back(ptr("not"), std::vector<cspiso::argument>{cspiso::var(a)});
    } else if (a != b) {
      apps.emplace_back(ptr(k % 2 ? "xor2" : "iff"), std::vector<cspiso::argument>{cspiso::var(a), cspiso::var(b)});
    }
  }
  return cspiso::instance_set(x, std::move(apps));
}

/// Random instance over the given constraints (no constants).
inline cspiso::instance_set random_instance(std::mt19937_64& rng, const cspiso::constraint_set& cs, std::size_t n,
                                            std::size_t apps_count) {
  const auto x = names(n);
  std::vector<cspiso::constraint_ptr> pool(cs.begin(), cs.end());
  std::uniform_int_distribution<std::size_t> pv(0, n - 1), pc(0, pool.size() - 1);
  std::vector<cspiso::application> apps;
  for (std::size_t i = 0; i < apps_count; ++i) {
    const auto& c = pool[pc(rng)];
    std::vector<cspiso::argument> args;
    for (unsigned j = 0; j < c->arity(); ++j) args.push_back(cspiso::var(x[pv(rng)]));
    apps.emplace_back(c, std::move(args));
  }
  return cspiso::instance_set(x, std::move(apps));
}

inline cspiso::permutation random_permutation(std::mt19937_64& rng, const std::vector<std::string>& x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  return cspiso::permutation::from_indices(x, idx);
}

}  // namespace oracle
