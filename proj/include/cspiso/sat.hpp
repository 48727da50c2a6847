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
#include <bit>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "cspiso/application.hpp"

namespace cspiso {

/// Index-based view of an instance set: each application becomes its local
/// table over universe indices (ascending, first one most significant).
struct compiled_instance {
  struct item {
    std::vector<int> vars;
    std::vector<std::uint32_t> sat_rows;
    bool affine = false;
  };

  std::size_t num_vars = 0;
  std::vector<item> items;
  std::vector<std::vector<int>> occurs;  // variable -> items
  bool trivially_unsat = false;

  compiled_instance() = default;

  explicit compiled_instance(const instance_set& s) : num_vars(s.universe().size()), occurs(num_vars) {
    for (const auto& a : s.apps()) {
      if (a.is_tautology()) continue;
      item it;
      for (const auto& v : a.vars()) it.vars.push_back(static_cast<int>(s.index_of(v)));
      for (std::size_t r = 0; r < a.local().num_bits(); ++r) {
        if (a.local().get(r)) it.sat_rows.push_back(static_cast<std::uint32_t>(r));
      }
      if (it.sat_rows.empty()) trivially_unsat = true;
      it.affine = is_affine_rows(it.sat_rows);
      const int idx = static_cast<int>(items.size());
      for (int v : it.vars) occurs[static_cast<std::size_t>(v)].push_back(idx);
      items.push_back(std::move(it));
    }
  }

  bool all_affine() const {
    return std::all_of(items.begin(), items.end(), [](const item& i) { return i.affine; });
  }

  /// A set of rows is affine iff its translate by any member is XOR-closed.
  static bool is_affine_rows(const std::vector<std::uint32_t>& rows) {
    if (rows.empty()) return true;
    if (!std::has_single_bit(rows.size())) return false;
    std::vector<std::uint32_t> sorted(rows);
    std::sort(sorted.begin(), sorted.end());
    const auto base = sorted.front();
    for (auto a : sorted) {
      for (auto b : sorted) {
        if (!std::binary_search(sorted.begin(), sorted.end(), a ^ b ^ base)) return false;
      }
    }
    return true;
  }
};

using model = std::vector<std::int8_t>;
using literal = std::pair<int, bool>;

/// Satisfiability of a compiled instance under assumptions. Uses Gaussian
/// elimination over GF(2) when every item is affine and a DPLL search with
/// generalized arc consistency on the local tables otherwise.
class solver {
 public:
  explicit solver(compiled_instance ci) : ci_(std::move(ci)) {
    words_ = (ci_.num_vars + 1 + 63) / 64;
    linear_ = ci_.all_affine();
    if (linear_) build_linear();
    order_.resize(ci_.num_vars);
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
      return ci_.occurs[static_cast<std::size_t>(a)].size() > ci_.occurs[static_cast<std::size_t>(b)].size();
    });
  }

  const compiled_instance& instance() const { return ci_; }
  bool linear() const { return linear_; }

  std::optional<model> solve(const std::vector<literal>& assumptions = {}, std::mt19937_64* rng = nullptr) const {
    if (ci_.trivially_unsat) return std::nullopt;
    return linear_ ? solve_linear(assumptions, rng) : solve_search(assumptions, rng);
  }

 private:
  using row = std::vector<std::uint64_t>;

  // --- GF(2) ---------------------------------------------------------------

  bool get(const row& r, std::size_t i) const { return (r[i >> 6] >> (i & 63)) & 1u; }
  void flip(row& r, std::size_t i) const { r[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  std::optional<std::size_t> lowest_var(const row& r) const {
    for (std::size_t w = 0; w < r.size(); ++w) {
      std::uint64_t bits = r[w];
      if (w == ci_.num_vars >> 6) bits &= (std::uint64_t{1} << (ci_.num_vars & 63)) - 1;
      if (w > ci_.num_vars >> 6) bits = 0;
      if (bits) return w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
    }
    return std::nullopt;
  }

  // Inserts into a reduced echelon basis; false when 0 = 1 is derived.
  bool insert(std::vector<row>& basis, std::vector<std::size_t>& pivots, row r) const {
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (get(r, pivots[i])) {
        for (std::size_t w = 0; w < words_; ++w) r[w] ^= basis[i][w];
      }
    }
    auto p = lowest_var(r);
    if (!p) return !get(r, ci_.num_vars);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (get(basis[i], *p)) {
        for (std::size_t w = 0; w < words_; ++w) basis[i][w] ^= r[w];
      }
    }
    basis.push_back(std::move(r));
    pivots.push_back(*p);
    return true;
  }

  void build_linear() {
    for (const auto& it : ci_.items) {
      if (it.sat_rows.empty()) {
        consistent_ = false;
        return;
      }
      const auto d = static_cast<unsigned>(it.vars.size());
      for (std::uint32_t a = 1; a < (1u << d); ++a) {
        const int parity = std::popcount(a & it.sat_rows.front()) & 1;
        bool constant = true;
        for (auto m : it.sat_rows) {
          if ((std::popcount(a & m) & 1) != parity) {
            constant = false;
            break;
          }
        }
        if (!constant) continue;
        row r(words_, 0);
        for (unsigned j = 0; j < d; ++j) {
          if ((a >> (d - 1 - j)) & 1u) flip(r, static_cast<std::size_t>(it.vars[j]));
        }
        if (parity) flip(r, ci_.num_vars);
        if (!insert(basis_, pivots_, std::move(r))) {
          consistent_ = false;
          return;
        }
      }
    }
  }

  std::optional<model> solve_linear(const std::vector<literal>& assumptions, std::mt19937_64* rng) const {
    if (!consistent_) return std::nullopt;
    auto basis = basis_;
    auto pivots = pivots_;
    for (const auto& [v, b] : assumptions) {
      row r(words_, 0);
      flip(r, static_cast<std::size_t>(v));
      if (b) flip(r, ci_.num_vars);
      if (!insert(basis, pivots, std::move(r))) return std::nullopt;
    }
    model m(ci_.num_vars, -1);
    for (auto p : pivots) m[p] = 0;
    for (std::size_t v = 0; v < ci_.num_vars; ++v) {
      if (m[v] == -1) m[v] = rng ? static_cast<std::int8_t>((*rng)() & 1u) : 0;
    }
    for (std::size_t i = 0; i < basis.size(); ++i) {
      bool val = get(basis[i], ci_.num_vars);
      for (std::size_t v = 0; v < ci_.num_vars; ++v) {
        if (v != pivots[i] && get(basis[i], v) && m[v] == 1) val = !val;
      }
      m[pivots[i]] = val ? 1 : 0;
    }
    return m;
  }

  // --- DPLL ----------------------------------------------------------------

  struct search_state {
    model vals;
    std::vector<int> trail;
    std::vector<int> queue;
    std::vector<char> queued;
  };

  void assign(search_state& st, int v, bool b) const {
    st.vals[static_cast<std::size_t>(v)] = b ? 1 : 0;
    st.trail.push_back(v);
    for (int it : ci_.occurs[static_cast<std::size_t>(v)]) {
      if (!st.queued[static_cast<std::size_t>(it)]) {
        st.queued[static_cast<std::size_t>(it)] = 1;
        st.queue.push_back(it);
      }
    }
  }

  bool propagate(search_state& st) const {
    while (!st.queue.empty()) {
      const int idx = st.queue.back();
      st.queue.pop_back();
      st.queued[static_cast<std::size_t>(idx)] = 0;
      const auto& it = ci_.items[static_cast<std::size_t>(idx)];
      const auto d = static_cast<unsigned>(it.vars.size());
      std::uint32_t fixed_mask = 0, fixed_val = 0;
      for (unsigned j = 0; j < d; ++j) {
        const auto v = st.vals[static_cast<std::size_t>(it.vars[j])];
        if (v >= 0) {
          fixed_mask |= 1u << (d - 1 - j);
          if (v) fixed_val |= 1u << (d - 1 - j);
        }
      }
      std::uint32_t sup1 = 0, sup0 = 0;
      bool any = false;
      for (auto r : it.sat_rows) {
        if ((r & fixed_mask) == fixed_val) {
          any = true;
          sup1 |= r;
          sup0 |= ~r;
        }
      }
      if (!any) {
        for (int q : st.queue) st.queued[static_cast<std::size_t>(q)] = 0;
        st.queue.clear();
        return false;
      }
      for (unsigned j = 0; j < d; ++j) {
        const auto bit = 1u << (d - 1 - j);
        if (fixed_mask & bit) continue;
        const bool can1 = sup1 & bit, can0 = sup0 & bit;
        if (!can1) assign(st, it.vars[j], false);
        else if (!can0) assign(st, it.vars[j], true);
      }
    }
    return true;
  }

  std::optional<model> solve_search(const std::vector<literal>& assumptions, std::mt19937_64* rng) const {
    search_state st;
    st.vals.assign(ci_.num_vars, -1);
    st.queued.assign(ci_.items.size(), 0);
    for (const auto& [v, b] : assumptions) {
      const auto cur = st.vals[static_cast<std::size_t>(v)];
      if (cur >= 0) {
        if ((cur == 1) != b) return std::nullopt;
        continue;
      }
      assign(st, v, b);
    }
    for (std::size_t i = 0; i < ci_.items.size(); ++i) {
      if (!st.queued[i]) {
        st.queued[i] = 1;
        st.queue.push_back(static_cast<int>(i));
      }
    }
    std::vector<int> order = order_;
    if (rng) std::shuffle(order.begin(), order.end(), *rng);

    struct decision {
      int var;
      bool value;
      bool flipped;
      std::size_t trail_size;
    };
    std::vector<decision> stack;
    bool ok = propagate(st);
    while (true) {
      if (!ok) {
        // chronological backtracking
        while (!stack.empty() && stack.back().flipped) stack.pop_back();
        if (stack.empty()) return std::nullopt;
        auto& top = stack.back();
        while (st.trail.size() > top.trail_size) {
          st.vals[static_cast<std::size_t>(st.trail.back())] = -1;
          st.trail.pop_back();
        }
        top.flipped = true;
        top.value = !top.value;
        assign(st, top.var, top.value);
        ok = propagate(st);
        continue;
      }
      int next = -1;
      for (int v : order) {
        if (st.vals[static_cast<std::size_t>(v)] < 0 && !ci_.occurs[static_cast<std::size_t>(v)].empty()) {
          next = v;
          break;
        }
      }
      if (next < 0) break;
      const bool value = rng ? ((*rng)() & 1u) != 0 : false;
      stack.push_back({next, value, false, st.trail.size()});
      assign(st, next, value);
      ok = propagate(st);
    }
    for (std::size_t v = 0; v < ci_.num_vars; ++v) {
      if (st.vals[v] < 0) st.vals[v] = rng ? static_cast<std::int8_t>((*rng)() & 1u) : 0;
    }
    return st.vals;
  }

  compiled_instance ci_;
  std::size_t words_ = 1;
  bool linear_ = false;
  bool consistent_ = true;
  std::vector<row> basis_;
  std::vector<std::size_t> pivots_;
  std::vector<int> order_;
};

}  // namespace cspiso
