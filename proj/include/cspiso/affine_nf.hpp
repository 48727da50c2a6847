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

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cspiso/application.hpp"
#include "cspiso/boolfun.hpp"
#include "cspiso/error.hpp"

namespace cspiso {

/// Unary: a = bit. Binary: a xor b = bit, with a before b in natural order.
struct xor_clause {
  enum class kind { unary, binary };
  kind type = kind::unary;
  std::string a, b;
  bool bit = true;

  static xor_clause unary(std::string v, bool positive) { return {kind::unary, std::move(v), {}, positive}; }
  static xor_clause binary(std::string x, std::string y, bool parity) {
    if (x == y) throw invalid_input("binary xor clause needs two distinct variables");
    if (natural_less(y, x)) std::swap(x, y);
    return {kind::binary, std::move(x), std::move(y), parity};
  }

  std::string to_string() const {
    if (type == kind::unary) return bit ? a : "~" + a;
    return bit ? a + "^" + b : "~(" + a + "^" + b + ")";
  }

  friend bool operator==(const xor_clause&, const xor_clause&) = default;
  friend bool operator<(const xor_clause& l, const xor_clause& r) {
    if (l.type != r.type) return l.type < r.type;
    if (l.a != r.a) return natural_less(l.a, r.a);
    if (l.b != r.b) return natural_less(l.b, r.b);
    return l.bit < r.bit;
  }
};

struct unsat_t {
  friend bool operator==(unsat_t, unsat_t) { return true; }
};
inline constexpr unsat_t unsat{};

namespace detail {

// Union-find with parities. Node n stands for the constant 0, so a forced
// value is a parity to that node.
class parity_dsu {
 public:
  explicit parity_dsu(std::size_t n) : parent_(n + 1), parity_(n + 1, false), rank_(n + 1, 0) {
    for (std::size_t i = 0; i <= n; ++i) parent_[i] = i;
  }

  std::size_t zero() const { return parent_.size() - 1; }

  std::pair<std::size_t, bool> find(std::size_t v) {
    bool p = false;
    std::size_t r = v;
    while (parent_[r] != r) {
      p ^= parity_[r];
      r = parent_[r];
    }
    // path compression
    bool q = p;
    while (parent_[v] != v) {
      const std::size_t next = parent_[v];
      const bool pv = parity_[v];
      parent_[v] = r;
      parity_[v] = q;
      q ^= pv;
      v = next;
    }
    return {r, p};
  }

  /// Adds a xor b = bit; false on contradiction.
  bool unite(std::size_t a, std::size_t b, bool bit) {
    auto [ra, pa] = find(a);
    auto [rb, pb] = find(b);
    if (ra == rb) return (pa ^ pb) == bit;
    if (rank_[ra] < rank_[rb]) {
      std::swap(ra, rb);
      std::swap(pa, pb);
    }
    parent_[rb] = ra;
    parity_[rb] = pa ^ pb ^ bit;
    if (rank_[ra] == rank_[rb]) ++rank_[ra];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<bool> parity_;
  std::vector<int> rank_;
};

inline void require_two_affine(const instance_set& s) {
  for (const auto& a : s.apps()) {
    if (!detect_properties(a.fn()).two_affine) {
      throw invalid_input("constraint '" + a.fn().name() + "' is not 2-affine");
    }
  }
}

// The unary and binary clauses an application implies, read off its local
// table. For a 2-affine application their conjunction is the application.
inline std::optional<std::vector<xor_clause>> local_clauses(const application& a) {
  const auto& t = a.local();
  const auto d = t.num_vars();
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < t.num_bits(); ++r) {
    if (t.get(r)) rows.push_back(r);
  }
  if (rows.empty()) return std::nullopt;
  std::vector<xor_clause> out;
  for (unsigned j = 0; j < d; ++j) {
    const bool v = row_bit(rows[0], d, j);
    if (std::all_of(rows.begin(), rows.end(), [&](std::size_t r) { return row_bit(r, d, j) == v; })) {
      out.push_back(xor_clause::unary(a.vars()[j], v));
    }
  }
  for (unsigned j = 0; j < d; ++j) {
    for (unsigned k = j + 1; k < d; ++k) {
      const bool p = row_bit(rows[0], d, j) ^ row_bit(rows[0], d, k);
      if (std::all_of(rows.begin(), rows.end(), [&](std::size_t r) { return (row_bit(r, d, j) ^ row_bit(r, d, k)) == p; })) {
        out.push_back(xor_clause::binary(a.vars()[j], a.vars()[k], p));
      }
    }
  }
  return out;
}

struct solved_parities {
  variable_list universe;
  std::vector<std::size_t> root;
  std::vector<bool> parity;
  std::size_t zero_root = 0;
};

inline std::optional<solved_parities> solve_parities(const instance_set& s) {
  require_two_affine(s);
  const auto& x = s.universe();
  parity_dsu dsu(x.size());
  for (const auto& a : s.apps()) {
    auto cl = local_clauses(a);
    if (!cl) return std::nullopt;
    for (const auto& c : *cl) {
      const bool ok = c.type == xor_clause::kind::unary ? dsu.unite(s.index_of(c.a), dsu.zero(), c.bit)
                                                        : dsu.unite(s.index_of(c.a), s.index_of(c.b), c.bit);
      if (!ok) return std::nullopt;
    }
  }
  solved_parities out;
  out.universe = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto [r, p] = dsu.find(i);
    out.root.push_back(r);
    out.parity.push_back(p);
  }
  // variables tied to the constant node get their forced value as parity
  const auto [zr, pz] = dsu.find(dsu.zero());
  out.zero_root = zr;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (out.root[i] == zr) out.parity[i] = out.parity[i] ^ pz;
  }
  return out;
}

}  // namespace detail

/// Every unary and binary xor clause implied by S, or unsat.
inline std::variant<unsat_t, std::vector<xor_clause>> xor_clause_closure(const instance_set& s) {
  auto sp = detail::solve_parities(s);
  if (!sp) return unsat;
  const auto& x = sp->universe;
  std::vector<xor_clause> out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (sp->root[i] != sp->zero_root) continue;
    out.push_back(xor_clause::unary(x[i], sp->parity[i]));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      if (sp->root[i] == sp->root[j]) out.push_back(xor_clause::binary(x[i], x[j], sp->parity[i] ^ sp->parity[j]));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// One class {X, Y}: X holds the least variable of the class.
struct nf_class {
  variable_list x, y;
  friend bool operator==(const nf_class&, const nf_class&) = default;
};

struct affine_normal_form {
  bool is_unsat = false;
  variable_list z, o;
  std::vector<nf_class> classes;

  friend bool operator==(const affine_normal_form&, const affine_normal_form&) = default;
};

namespace detail {

inline void canonicalize(affine_normal_form& nf) {
  sort_variables(nf.z);
  sort_variables(nf.o);
  for (auto& c : nf.classes) {
    sort_variables(c.x);
    sort_variables(c.y);
    if (c.x.empty() || (!c.y.empty() && natural_less(c.y.front(), c.x.front()))) std::swap(c.x, c.y);
  }
  std::sort(nf.classes.begin(), nf.classes.end(), [](const nf_class& a, const nf_class& b) {
    const auto amin = std::min(a.x.size(), a.y.size()), amax = std::max(a.x.size(), a.y.size());
    const auto bmin = std::min(b.x.size(), b.y.size()), bmax = std::max(b.x.size(), b.y.size());
    if (amin != bmin) return amin < bmin;
    if (amax != bmax) return amax < bmax;
    return natural_less(a.x.front(), b.x.front());
  });
}

}  // namespace detail

/// The normal form of a 2-affine S over universe x (x must contain every
/// variable of S).
inline affine_normal_form normal_form(const instance_set& s, const variable_list& x) {
  variable_list universe = x;
  sort_variables(universe);
  const instance_set aligned(universe, s.apps());
  auto sp = detail::solve_parities(aligned);
  affine_normal_form nf;
  if (!sp) {
    nf.is_unsat = true;
    return nf;
  }
  std::map<std::size_t, std::size_t> class_of;  // root -> class index
  std::map<std::size_t, bool> pivot_parity;
  for (std::size_t i = 0; i < universe.size(); ++i) {
    const auto r = sp->root[i];
    if (r == sp->zero_root) {
      (sp->parity[i] ? nf.o : nf.z).push_back(universe[i]);
      continue;
    }
    auto [it, fresh] = class_of.emplace(r, nf.classes.size());
    if (fresh) {
      nf.classes.push_back({});
      pivot_parity[r] = sp->parity[i];
    }
    auto& c = nf.classes[it->second];
    (sp->parity[i] == pivot_parity[r] ? c.x : c.y).push_back(universe[i]);
  }
  detail::canonicalize(nf);
  return nf;
}

inline affine_normal_form normal_form(const instance_set& s) { return normal_form(s, s.universe()); }

/// pi applied to a normal form, re-canonicalized.
inline affine_normal_form rename(const affine_normal_form& nf, const permutation& p) {
  affine_normal_form out = nf;
  if (out.is_unsat) return out;
  for (auto& v : out.z) v = p(v);
  for (auto& v : out.o) v = p(v);
  for (auto& c : out.classes) {
    for (auto& v : c.x) v = p(v);
    for (auto& v : c.y) v = p(v);
  }
  detail::canonicalize(out);
  return out;
}

/// Value of the formula the normal form denotes.
template <typename Lookup>
bool eval_normal_form(const affine_normal_form& nf, Lookup&& value) {
  if (nf.is_unsat) return false;
  for (const auto& v : nf.z) {
    if (value(v)) return false;
  }
  for (const auto& v : nf.o) {
    if (!value(v)) return false;
  }
  for (const auto& c : nf.classes) {
    auto all = [&](const variable_list& vs, bool b) {
      return std::all_of(vs.begin(), vs.end(), [&](const std::string& v) { return static_cast<bool>(value(v)) == b; });
    };
    if (!((all(c.x, true) && all(c.y, false)) || (all(c.x, false) && all(c.y, true)))) return false;
  }
  return true;
}

inline std::string to_string(const affine_normal_form& nf) {
  if (nf.is_unsat) return "UNSAT\n";
  auto join = [](const variable_list& vs, const char* sep) {
    std::string s;
    for (const auto& v : vs) {
      if (!s.empty()) s += sep;
      s += v;
    }
    return s;
  };
  std::string out = "Z:";
  for (const auto& v : nf.z) out += " " + v;
  out += "\nO:";
  for (const auto& v : nf.o) out += " " + v;
  out += "\nCLASSES:";
  for (const auto& c : nf.classes) out += " {" + join(c.x, ",") + "|" + join(c.y, ",") + "}";
  return out + "\n";
}

/// Cardinality signature: |Z|, |O| and the sorted multiset of {|X|,|Y|}.
struct nf_signature {
  std::size_t z = 0, o = 0;
  std::vector<std::pair<std::size_t, std::size_t>> classes;
  friend bool operator==(const nf_signature&, const nf_signature&) = default;
};

inline nf_signature signature(const affine_normal_form& nf) {
  nf_signature s{nf.z.size(), nf.o.size(), {}};
  for (const auto& c : nf.classes) s.classes.emplace_back(std::min(c.x.size(), c.y.size()), std::max(c.x.size(), c.y.size()));
  std::sort(s.classes.begin(), s.classes.end());
  return s;
}

/// Polynomial-time isomorphism for 2-affine sets; the witness maps Z to Z',
/// O to O' and classes onto classes of the same cardinality pair.
inline std::optional<permutation> iso_2affine_witness(const instance_set& s, const instance_set& u) {
  auto [a, b] = align(s, u);
  const auto nfa = normal_form(a), nfb = normal_form(b);
  if (nfa.is_unsat || nfb.is_unsat) {
    if (nfa.is_unsat && nfb.is_unsat) return permutation::identity(a.universe());
    return std::nullopt;
  }
  if (signature(nfa) != signature(nfb)) return std::nullopt;
  std::map<std::string, std::string, natural_order> m;
  auto zip = [&](const variable_list& from, const variable_list& to) {
    for (std::size_t i = 0; i < from.size(); ++i) m.emplace(from[i], to[i]);
  };
  zip(nfa.z, nfb.z);
  zip(nfa.o, nfb.o);
  // classes are sorted by cardinalities first, so equal signatures line them up
  for (std::size_t i = 0; i < nfa.classes.size(); ++i) {
    const auto& ca = nfa.classes[i];
    const auto& cb = nfb.classes[i];
    if (ca.x.size() == cb.x.size()) {
      zip(ca.x, cb.x);
      zip(ca.y, cb.y);
    } else {
      zip(ca.x, cb.y);
      zip(ca.y, cb.x);
    }
  }
  return permutation(a.universe(), std::move(m));
}

inline bool iso_2affine(const instance_set& s, const instance_set& u) {
  auto [a, b] = align(s, u);
  const auto nfa = normal_form(a), nfb = normal_form(b);
  if (nfa.is_unsat || nfb.is_unsat) return nfa.is_unsat && nfb.is_unsat;
  return signature(nfa) == signature(nfb);
}

}  // namespace cspiso
