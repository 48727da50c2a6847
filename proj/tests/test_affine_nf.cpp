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


#include <gtest/gtest.h>

#include <random>

#include "cspiso/affine_nf.hpp"
#include "cspiso/io.hpp"
#include "oracles.hpp"

using namespace cspiso;

namespace {

application app(const char* c, std::vector<argument> args) { return application(builtin::ptr(c), std::move(args)); }
argument v(const char* n) { return var(n); }

// Every unary and binary xor clause implied by s, found by enumeration.
std::vector<xor_clause> implied_clauses(const instance_set& s) {
  const auto& x = s.universe();
  std::vector<oracle::assignment> ms;
  oracle::for_each_assignment(x, [&](const oracle::assignment& a) {
    if (oracle::eval_set(s, a)) ms.push_back(a);
  });
  std::vector<xor_clause> out;
  for (const auto& a : x) {
    for (bool b : {false, true}) {
      if (std::all_of(ms.begin(), ms.end(), [&](const auto& m) { return m.at(a) == b; })) {
        out.push_back(xor_clause::unary(a, b));
      }
    }
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      for (bool b : {false, true}) {
        if (std::all_of(ms.begin(), ms.end(), [&](const auto& m) { return (m.at(x[i]) != m.at(x[j])) == b; })) {
          out.push_back(xor_clause::binary(x[i], x[j], b));
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool nf_equivalent_to(const affine_normal_form& nf, const instance_set& s) {
  bool ok = true;
  oracle::for_each_assignment(s.universe(), [&](const oracle::assignment& a) {
    ok = ok && eval_normal_form(nf, [&](const std::string& name) { return a.at(name); }) == oracle::eval_set(s, a);
  });
  return ok;
}

}  // namespace

TEST(XorClauseClosure, Examples) {
  const instance_set s({"x", "y", "z"}, {app("xor2", {v("x"), v("y")}), app("iff", {v("y"), v("z")})});
  const auto r = xor_clause_closure(s);
  ASSERT_TRUE(std::holds_alternative<std::vector<xor_clause>>(r));
  const auto& cl = std::get<std::vector<xor_clause>>(r);
  const std::vector<xor_clause> want = {xor_clause::binary("x", "y", true), xor_clause::binary("x", "z", true),
                                        xor_clause::binary("y", "z", false)};
  EXPECT_EQ(cl, want);

  const instance_set bad({"x"}, {app("id", {v("x")}), app("not", {v("x")})});
  EXPECT_TRUE(std::holds_alternative<unsat_t>(xor_clause_closure(bad)));

  const instance_set odd({"x", "y", "z"},
                         {app("xor2", {v("x"), v("y")}), app("xor2", {v("y"), v("z")}), app("xor2", {v("x"), v("z")})});
  EXPECT_TRUE(std::holds_alternative<unsat_t>(xor_clause_closure(odd)));

  EXPECT_THROW(xor_clause_closure(instance_set({"x", "y"}, {app("or0", {v("x"), v("y")})})), invalid_input);
}

TEST(XorClauseClosure, EqualsImpliedClauses) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 500; ++i) {
    const auto s = oracle::random_two_affine(rng, 2 + rng() % 6, rng() % 8);
    const auto r = xor_clause_closure(s);
    if (oracle::count(s) == 0) {
      EXPECT_TRUE(std::holds_alternative<unsat_t>(r));
    } else {
      ASSERT_TRUE(std::holds_alternative<std::vector<xor_clause>>(r));
      EXPECT_EQ(std::get<std::vector<xor_clause>>(r), implied_clauses(s));
    }
  }
}

TEST(NormalForm, Example) {
  const auto cs = io::builtin_constraints("xor2,iff,id,not");
  const auto s = io::parse_instance("vars x y z u v w\napply xor2 x y\napply iff y z\napply id u\napply not v\n", cs);
  const auto nf = normal_form(s);
  EXPECT_EQ(nf.z, (variable_list{"v"}));
  EXPECT_EQ(nf.o, (variable_list{"u"}));
  ASSERT_EQ(nf.classes.size(), 2u);
  EXPECT_EQ(nf.classes[0].x, (variable_list{"w"}));
  EXPECT_TRUE(nf.classes[0].y.empty());
  EXPECT_EQ(nf.classes[1].x, (variable_list{"x"}));
  EXPECT_EQ(nf.classes[1].y, (variable_list{"y", "z"}));
  EXPECT_EQ(to_string(nf), "Z: v\nO: u\nCLASSES: {w|} {x|y,z}\n");
}

TEST(NormalForm, UnsatAndEmpty) {
  const instance_set bad({"x", "y"}, {app("xor2", {v("x"), v("y")}), app("iff", {v("x"), v("y")})});
  EXPECT_TRUE(normal_form(bad).is_unsat);
  EXPECT_EQ(to_string(normal_form(bad)), "UNSAT\n");
  const auto e = normal_form(instance_set({"a", "b"}, {}));
  EXPECT_TRUE(e.z.empty() && e.o.empty());
  EXPECT_EQ(e.classes.size(), 2u);
}

TEST(NormalForm, Axioms) {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 800; ++i) {
    const std::size_t n = 1 + rng() % 7;
    const auto s = oracle::random_two_affine(rng, n, rng() % 9);
    const auto nf = normal_form(s);
    // denotes the same function
    ASSERT_TRUE(nf_equivalent_to(nf, s)) << i;
    // pi-equivariance
    const auto p = oracle::random_permutation(rng, s.universe());
    EXPECT_EQ(normal_form(apply_permutation(p, s)), rename(nf, p));
    // equivalent instances share a normal form
    const auto t = oracle::random_two_affine(rng, n, rng() % 9);
    if (oracle::equivalent(s, t, s.universe())) {
      EXPECT_EQ(normal_form(t), nf);
    }
    // equivalent rewriting: add the implied clauses back
    if (!nf.is_unsat) {
      std::vector<application> apps(s.apps().begin(), s.apps().end());
      const auto closure = xor_clause_closure(s);
      for (const auto& c : std::get<std::vector<xor_clause>>(closure)) {
        if (c.type == xor_clause::kind::unary) {
          apps.emplace_back(builtin::ptr(c.bit ? "id" : "not"), std::vector<argument>{var(c.a)});
        } else {
          apps.emplace_back(builtin::ptr(c.bit ? "xor2" : "iff"), std::vector<argument>{var(c.a), var(c.b)});
        }
      }
      EXPECT_EQ(normal_form(instance_set(s.universe(), apps)), nf);
    }
  }
}

TEST(NormalForm, ZeroAndOneSetsAreForcedValues) {
  std::mt19937_64 rng(47);
  for (int i = 0; i < 300; ++i) {
    const auto s = oracle::random_two_affine(rng, 2 + rng() % 5, rng() % 8);
    const auto nf = normal_form(s);
    if (nf.is_unsat) continue;
    for (const auto& x : s.universe()) {
      bool always0 = true, always1 = true;
      oracle::for_each_assignment(s.universe(), [&](const oracle::assignment& a) {
        if (!oracle::eval_set(s, a)) return;
        always0 = always0 && !a.at(x);
        always1 = always1 && a.at(x);
      });
      EXPECT_EQ(std::count(nf.z.begin(), nf.z.end(), x) == 1, always0);
      EXPECT_EQ(std::count(nf.o.begin(), nf.o.end(), x) == 1, always1);
    }
  }
}

TEST(NormalForm, IndependentOfClauseOrder) {
  std::mt19937_64 rng(53);
  for (int i = 0; i < 300; ++i) {
    const auto s = oracle::random_two_affine(rng, 2 + rng() % 6, rng() % 9);
    std::vector<application> rev(s.apps().rbegin(), s.apps().rend());
    std::shuffle(rev.begin(), rev.end(), rng);
    variable_list xr(s.universe().rbegin(), s.universe().rend());
    EXPECT_EQ(normal_form(instance_set(xr, rev)), normal_form(s));
  }
}

TEST(Iso2Affine, Examples) {
  const instance_set a({"x", "y"}, {app("xor2", {v("x"), v("y")})});
  const instance_set b({"x", "y"}, {app("iff", {v("x"), v("y")})});
  EXPECT_FALSE(iso_2affine(a, b));
  EXPECT_TRUE(iso_2affine(a, a));
  const instance_set c({"x", "y", "z"}, {app("id", {v("x")}), app("xor2", {v("y"), v("z")})});
  const instance_set d({"x", "y", "z"}, {app("id", {v("z")}), app("xor2", {v("x"), v("y")})});
  const auto w = iso_2affine_witness(c, d);
  ASSERT_TRUE(w);
  EXPECT_TRUE(equivalent(apply_permutation(*w, c), d));
  // both unsat
  const instance_set u1({"x", "y"}, {app("id", {v("x")}), app("not", {v("x")})});
  const instance_set u2({"x", "y"}, {app("xor2", {v("x"), v("y")}), app("iff", {v("y"), v("x")})});
  EXPECT_TRUE(iso_2affine(u1, u2));
}

TEST(Iso2Affine, AgreesWithBruteForce) {
  std::mt19937_64 rng(59);
  int positives = 0;
  for (int i = 0; i < 600; ++i) {
    const std::size_t n = 2 + rng() % 6;
    const auto s = oracle::random_two_affine(rng, n, rng() % 7);
    const auto u = (i % 2) ? apply_permutation(oracle::random_permutation(rng, s.universe()), s)
                           : oracle::random_two_affine(rng, n, rng() % 7);
    const bool want = oracle::isomorphic(s, u);
    ASSERT_EQ(iso_2affine(s, u), want) << i;
    const auto w = iso_2affine_witness(s, u);
    ASSERT_EQ(w.has_value(), want);
    if (w) {
      ++positives;
      EXPECT_TRUE(equivalent(apply_permutation(*w, s), u));
    }
  }
  EXPECT_GT(positives, 300);
}
