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


// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <unordered_map>

#include "cspiso/affine_nf.hpp"
#include "cspiso/encode.hpp"
#include "cspiso/graph.hpp"
#include "cspiso/iso.hpp"
#include "cspiso/reduce.hpp"
#include "oracles.hpp"

using namespace cspiso;

namespace {

struct outcome {
  bool pass;
  std::string detail;
};

constraint_set set_of(std::initializer_list<const char*> names) {
  constraint_set cs;
  for (auto n : names) cs.add(*builtin::by_name(n));
  return cs;
}

application app(const char* c, std::vector<std::string> vars) {
  std::vector<argument> args;
  for (auto& v : vars) args.push_back(var(std::move(v)));
  return application(builtin::ptr(c), std::move(args));
}

iso_options raised(std::size_t n) {
  iso_options o;
  o.max_perm_vars = n;
  return o;
}

std::vector<int> shuffled(std::mt19937_64& rng, int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 1);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

std::string count_line(std::size_t checked, std::size_t bad, const char* what) {
  return std::to_string(checked) + " " + what + ", " + std::to_string(bad) + " violations";
}

// ---- 1 ----

outcome trichotomy_table() {
  std::size_t checked = 0, bad = 0;
  auto expect = [&](const constraint_set& cs, trichotomy_class want) {
    ++checked;
    if (classify_trichotomy(cs) != want) ++bad;
  };
  expect(set_of({"xor2"}), trichotomy_class::in_p);
  expect(set_of({"id"}), trichotomy_class::in_p);
  const std::vector<const char*> clauses = {"id", "not", "xor2", "iff"};
  for (unsigned mask = 1; mask < 16; ++mask) {
    constraint_set cs;
    for (unsigned i = 0; i < 4; ++i) {
      if ((mask >> i) & 1u) cs.add(*builtin::by_name(clauses[i]));
    }
    expect(cs, trichotomy_class::in_p);
  }
  for (const char* n : {"or0", "or1", "or2", "xor3"}) expect(set_of({n}), trichotomy_class::gi_equivalent);
  expect(set_of({"one-in-three"}), trichotomy_class::conp_and_gi_hard);
  return {bad == 0, count_line(checked, bad, "sets")};
}

// ---- 2 ----

outcome detector_soundness() {
  std::size_t checked = 0, bad = 0;
  for (unsigned k = 1; k <= 4; ++k) {
    const std::size_t rows = std::size_t{1} << k;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << rows); ++bits) {
      truth_table t(k);
      for (std::size_t r = 0; r < rows; ++r) t.set(r, (bits >> r) & 1u);
      const auto p = detect_properties(t);
      ++checked;
      if (p.two_affine && !(p.affine && p.bijunctive)) ++bad;
      if (p.horn && p.anti_horn && !p.bijunctive) ++bad;
    }
  }
  return {bad == 0, count_line(checked, bad, "tables")};
}

// ---- 3 ----

bool nf_denotes(const affine_normal_form& nf, const instance_set& s) {
  bool ok = true;
  oracle::for_each_assignment(s.universe(), [&](const oracle::assignment& a) {
    ok = ok && eval_normal_form(nf, [&](const std::string& v) { return a.at(v); }) == oracle::eval_set(s, a);
  });
  return ok;
}

outcome normal_form_axioms() {
  std::mt19937_64 rng(1001);
  std::size_t bad = 0, equiv_pairs = 0;
  const std::size_t total = 10000;
  for (std::size_t i = 0; i < total; ++i) {
    const std::size_t n = 1 + rng() % 8;
    const auto s = oracle::random_two_affine(rng, n, rng() % (2 * n + 2));
    const auto nf = normal_form(s);
    if (!nf_denotes(nf, s)) ++bad;
    const auto p = oracle::random_permutation(rng, s.universe());
    if (normal_form(apply_permutation(p, s)) != rename(nf, p)) ++bad;
    // an equivalent rewrite: a random subset of the implied clauses, plus
    // the original clauses in shuffled order
    std::vector<application> apps(s.apps().begin(), s.apps().end());
    const auto closure = xor_clause_closure(s);
    if (const auto* cl = std::get_if<std::vector<xor_clause>>(&closure)) {
      for (const auto& c : *cl) {
        if (rng() % 2) continue;
        if (c.type == xor_clause::kind::unary) {
          apps.push_back(app(c.bit ? "id" : "not", {c.a}));
        } else {
          apps.push_back(app(c.bit ? "xor2" : "iff", {c.a, c.b}));
        }
      }
    }
    std::shuffle(apps.begin(), apps.end(), rng);
    const instance_set t(s.universe(), apps);
    if (oracle::equivalent(s, t, s.universe())) {
      ++equiv_pairs;
      if (normal_form(t) != nf) ++bad;
    } else {
      ++bad;
    }
    // an independent instance, compared only when equivalent
    const auto u = oracle::random_two_affine(rng, n, rng() % (2 * n + 2));
    if (oracle::equivalent(s, u, s.universe())) {
      ++equiv_pairs;
      if (normal_form(u) != nf) ++bad;
    }
  }
  return {bad == 0, count_line(total, bad, "instances") + ", " + std::to_string(equiv_pairs) + " equivalent pairs"};
}

// ---- 4 ----

outcome theorem4_oracle() {
  std::size_t pairs = 0, bad = 0, subsets = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto x = oracle::names(n, "x");
    std::vector<application> clauses;
    for (const auto& v : x) {
      clauses.push_back(app("id", {v}));
      clauses.push_back(app("not", {v}));
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        clauses.push_back(app("xor2", {x[i], x[j]}));
        clauses.push_back(app("iff", {x[i], x[j]}));
      }
    }
    // model mask of each clause over the 2^n assignments
    const std::size_t rows = std::size_t{1} << n;
    std::vector<std::uint32_t> mask(clauses.size(), 0);
    for (std::size_t c = 0; c < clauses.size(); ++c) {
      for (std::size_t r = 0; r < rows; ++r) {
        oracle::assignment a;
        for (std::size_t i = 0; i < n; ++i) a[x[i]] = (r >> i) & 1u;
        if (oracle::eval_app(clauses[c], a)) mask[c] |= std::uint32_t{1} << r;
      }
    }
    auto build = [&](std::uint64_t sub) {
      std::vector<application> apps;
      for (std::size_t c = 0; c < clauses.size(); ++c) {
        if ((sub >> c) & 1u) apps.push_back(clauses[c]);
      }
      return instance_set(x, std::move(apps));
    };
    // every clause subset: its normal form is the one of the first subset
    // denoting the same function, so comparing representatives covers all pairs
    std::unordered_map<std::uint32_t, std::pair<instance_set, affine_normal_form>> rep;
    const std::uint32_t all = rows == 32 ? ~0u : (std::uint32_t{1} << rows) - 1;
    for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << clauses.size()); ++sub) {
      std::uint32_t f = all;
      for (std::size_t c = 0; c < clauses.size(); ++c) {
        if ((sub >> c) & 1u) f &= mask[c];
      }
      ++subsets;
      auto it = rep.find(f);
      if (it == rep.end()) {
        auto s = build(sub);
        auto nf = normal_form(s);
        rep.emplace(f, std::make_pair(std::move(s), std::move(nf)));
      } else if (normal_form(build(sub)) != it->second.second) {
        ++bad;
      }
    }
    std::vector<const instance_set*> reps;
    for (const auto& [f, v] : rep) reps.push_back(&v.first);
    for (const auto* a : reps) {
      for (const auto* b : reps) {
        ++pairs;
        if (iso_2affine(*a, *b) != brute_force_iso(*a, *b).has_value()) ++bad;
      }
    }
  }
  std::mt19937_64 rng(1004);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 1 + rng() % 7;
    const auto s = oracle::random_two_affine(rng, n, rng() % (2 * n + 1));
    const auto u = (i % 2) ? apply_permutation(oracle::random_permutation(rng, s.universe()), s)
                           : oracle::random_two_affine(rng, n, rng() % (2 * n + 1));
    ++pairs;
    if (iso_2affine(s, u) != brute_force_iso(s, u).has_value()) ++bad;
  }
  return {bad == 0, std::to_string(subsets) + " clause subsets, " + count_line(pairs, bad, "pairs")};
}

// ---- 5 ----

outcome encoder_iff() {
  std::size_t pairs = 0, bad = 0, iso_pairs = 0;
  const std::vector<const char*> encoders = {"or0", "or1", "or2", "h4", "oneinthree", "xor3"};
  for (int n = 1; n <= 4; ++n) {
    const auto reps = nonisomorphic_graphs(n);
    const auto all = all_graphs(n);
    for (const auto& g : reps) {
      for (const auto& h : all) {
        if (g.n() - g.isolated_count() < 3 && g.isolated_count() == h.isolated_count() && g.m() == h.m()) continue;
        const auto pre = preprocess_pair(g, h);
        const bool want = brute_force_graph_iso(g, h).has_value();
        if (pre.not_isomorphic) {
          if (want) ++bad;
          continue;
        }
        iso_pairs += want ? 1 : 0;
        for (const char* e : encoders) {
          ++pairs;
          auto [l, r] = align(encode(e, pre.g), encode(e, pre.h));
          if (brute_force_iso(l, r, raised(256)).has_value() != want) ++bad;
        }
      }
    }
  }
  return {bad == 0, count_line(pairs, bad, "encoded pairs") + ", " + std::to_string(iso_pairs) + " isomorphic graph pairs"};
}

// ---- 6 ----

// Every duplicate-free application over cs implied by s, by model enumeration.
instance_set implied_by_models(const constraint_set& cs, const instance_set& s) {
  const auto& x = s.universe();
  std::vector<oracle::assignment> ms;
  oracle::for_each_assignment(x, [&](const oracle::assignment& a) {
    if (oracle::eval_set(s, a)) ms.push_back(a);
  });
  std::vector<application> out;
  for (const auto& c : cs) {
    std::vector<std::size_t> idx(c->arity(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t pos) {
      if (pos == idx.size()) {
        std::vector<argument> args;
        for (auto i : idx) args.push_back(var(x[i]));
        application a(c, std::move(args));
        if (std::all_of(ms.begin(), ms.end(), [&](const auto& m) { return oracle::eval_app(a, m); })) out.push_back(a);
        return;
      }
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (std::find(idx.begin(), idx.begin() + static_cast<long>(pos), i) != idx.begin() + static_cast<long>(pos)) continue;
        idx[pos] = i;
        rec(pos + 1);
      }
    };
    rec(0);
  }
  return instance_set(x, std::move(out));
}

outcome maximality_claims() {
  const std::vector<graph> graphs = {
      graph(4, {{1, 2}, {2, 3}, {3, 4}, {1, 4}}),
      graph(5, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {1, 5}}),
      graph(6, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {1, 6}}),
      graph(5, {{1, 3}, {1, 4}, {1, 5}, {2, 3}, {2, 4}, {2, 5}}),
      graph(7, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {1, 7}}),
  };
  closure_flags fl;
  fl.without_duplicates = true;
  const auto oit = set_of({"one-in-three"});
  const auto xors = set_of({"xor2", "xor3"});
  std::size_t bad = 0, checked = 0, oracle_checked = 0;
  for (const auto& g : graphs) {
    if (g.min_degree() < 2 || !g.triangle_free()) return {false, "graph does not qualify"};
    const auto u = encode_oneinthree(g, true);
    std::vector<application> part;
    for (const auto& a : u.apps()) {
      if (a.fn().name() == "one-in-three") part.push_back(a);
    }
    const auto s = instance_set::over_occurring(part);
    ++checked;
    if (maximal_closure(oit, s.universe(), fl, s) != s) ++bad;
    const auto x = encode_xor3(g);
    ++checked;
    if (maximal_closure(xors, x.universe(), fl, x) != x) ++bad;
    // independent recount on the small ones
    if (s.universe().size() <= 16) {
      ++oracle_checked;
      if (implied_by_models(oit, s) != s) ++bad;
    }
    if (x.universe().size() <= 16) {
      ++oracle_checked;
      if (implied_by_models(xors, x) != x) ++bad;
    }
    // the closure restores an application left out of the XOR3 encoding
    std::vector<application> fewer(x.apps().begin(), x.apps().end());
    fewer.erase(std::find_if(fewer.begin(), fewer.end(), [](const application& a) { return a.fn().name() == "xor3"; }));
    ++checked;
    if (maximal_closure(xors, x.universe(), fl, instance_set(x.universe(), fewer)) != x) ++bad;
  }
  return {bad == 0, count_line(checked, bad, "closures") + ", " + std::to_string(oracle_checked) + " recounted by enumeration"};
}

// ---- 7 ----

outcome gadget_lemma() {
  std::size_t checked = 0, misses = 0;
  for (unsigned k = 1; k <= 3; ++k) {
    const std::size_t rows = std::size_t{1} << k;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << rows); ++bits) {
      truth_table t(k);
      for (std::size_t r = 0; r < rows; ++r) t.set(r, (bits >> r) & 1u);
      if (detect_properties(t).two_affine) continue;
      constraint_set cs;
      cs.add(constraint("c", t));
      ++checked;
      const auto hit = find_gadget(cs);
      if (!hit || hit->target < 1 || hit->target > 10) ++misses;
    }
  }
  return {misses == 0, std::to_string(checked) + " non-2-affine constraints, " + std::to_string(misses) + " misses"};
}

// ---- 8 ----

outcome end_to_end() {
  std::mt19937_64 rng(1008);
  const graph p4(4, {{1, 2}, {2, 3}, {3, 4}});
  const graph star(4, {{1, 2}, {1, 3}, {1, 4}});
  const graph c4(4, {{1, 2}, {2, 3}, {3, 4}, {1, 4}});
  const graph paw(4, {{1, 2}, {2, 3}, {1, 3}, {3, 4}});
  const graph c5(5, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {1, 5}});
  const graph bull(5, {{1, 2}, {2, 3}, {1, 3}, {1, 4}, {2, 5}});
  const std::vector<std::pair<graph, graph>> pairs = {
      {p4, relabel(p4, shuffled(rng, 4))}, {c4, relabel(c4, shuffled(rng, 4))}, {c5, relabel(c5, shuffled(rng, 5))},
      {p4, star},                          {c4, paw},                           {c5, bull},
  };
  std::size_t checked = 0, bad = 0;
  for (const char* name : {"or0", "or1", "or2", "one-in-three", "xor3"}) {
    const auto cs = set_of({name});
    for (const auto& [g, h] : pairs) {
      const bool want = brute_force_graph_iso(g, h).has_value();
      const auto r = reduce_gi_to_iso(cs, g, h);
      ++checked;
      if (r.not_isomorphic || !r.output) {
        ++bad;
        continue;
      }
      const auto& o = *r.output;
      if (o.left.has_constants() || o.right.has_constants()) ++bad;
      if (brute_force_iso(o.left, o.right, raised(512)).has_value() != want) ++bad;
    }
  }
  return {bad == 0, count_line(checked, bad, "reductions")};
}

// ---- 9 ----

outcome witness_checkpoints() {
  std::size_t checked = 0, bad = 0;
  for (unsigned k = 1; k <= 4; ++k) {
    const std::size_t rows = std::size_t{1} << k;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << rows); ++bits) {
      truth_table t(k);
      for (std::size_t r = 0; r < rows; ++r) t.set(r, (bits >> r) & 1u);
      const auto p = detect_properties(t);
      const auto c = std::make_shared<const constraint>("b", t);
      for (auto mode : {witness_mode::non_bijunctive, witness_mode::non_affine}) {
        if (mode == witness_mode::non_bijunctive ? p.bijunctive : p.affine) continue;
        ++checked;
        if (!witness_checkpoints_hold(witness_substitution(c, mode), mode)) ++bad;
      }
    }
  }
  return {bad == 0 && checked >= 100, count_line(checked, bad, "cases")};
}

}  // namespace

int main() {
  struct criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<outcome()> run;
  };
  const std::vector<criterion> all = {
      {1, "trichotomy table", 1, trichotomy_table},
      {2, "detector soundness, arity <= 4", 30, detector_soundness},
      {3, "normal-form axioms, 10^4 instances", 120, normal_form_axioms},
      {4, "2-affine iso vs brute force", 300, theorem4_oracle},
      {5, "encoder iff, graphs <= 4 vertices", 600, encoder_iff},
      {6, "maximality of encoder outputs", 120, maximality_claims},
      {7, "gadget targets, arity <= 3", 300, gadget_lemma},
      {8, "end-to-end reductions", 900, end_to_end},
      {9, "witness checkpoints, arity <= 4", 60, witness_checkpoints},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && s < c.limit_s;
    failed += pass ? 0 : 1;
    std::printf("criterion %d %s: %s (%s; %.2fs, limit %.0fs)\n", c.id, c.name, pass ? "PASS" : "FAIL",
                o.detail.c_str(), s, c.limit_s);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
