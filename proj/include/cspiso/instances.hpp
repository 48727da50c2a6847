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
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cspiso/application.hpp"
#include "cspiso/boolfun.hpp"
#include "cspiso/error.hpp"
#include "cspiso/sat.hpp"

namespace cspiso {

inline constexpr std::size_t default_max_vars = 20;
inline constexpr std::size_t default_max_perm_vars = 10;

namespace detail {

inline void check_enum_guard(std::size_t n, std::size_t guard, const char* what) {
  if (n > guard || n > 40) {
    throw guard_exceeded(std::string(what) + ": universe of " + std::to_string(n) + " variables exceeds the guard of " +
                         std::to_string(guard));
  }
}

// Assignment bit i holds the value of universe variable i.
inline bool eval_item(const compiled_instance::item& it, std::uint64_t a) {
  const auto d = it.vars.size();
  std::uint32_t row = 0;
  for (std::size_t j = 0; j < d; ++j) row = (row << 1) | static_cast<std::uint32_t>((a >> it.vars[j]) & 1u);
  return std::binary_search(it.sat_rows.begin(), it.sat_rows.end(), row);
}

inline bool eval_all(const compiled_instance& ci, std::uint64_t a) {
  if (ci.trivially_unsat) return false;
  for (const auto& it : ci.items) {
    if (!eval_item(it, a)) return false;
  }
  return true;
}

/// Every satisfying assignment, as bit masks over the universe.
inline std::vector<std::uint64_t> enumerate_models(const compiled_instance& ci) {
  std::vector<std::uint64_t> out;
  if (ci.trivially_unsat) return out;
  const std::uint64_t total = std::uint64_t{1} << ci.num_vars;
  for (std::uint64_t a = 0; a < total; ++a) {
    if (eval_all(ci, a)) out.push_back(a);
  }
  return out;
}

}  // namespace detail

/// Number of assignments to the whole universe satisfying every application.
inline std::uint64_t count_sat(const instance_set& s, std::size_t guard = default_max_vars) {
  detail::check_enum_guard(s.universe().size(), guard, "count_sat");
  const compiled_instance ci(s);
  if (ci.trivially_unsat) return 0;
  std::uint64_t n = 0;
  const std::uint64_t total = std::uint64_t{1} << ci.num_vars;
  for (std::uint64_t a = 0; a < total; ++a) n += detail::eval_all(ci, a) ? 1 : 0;
  return n;
}

/// Truth table of the conjunction over the universe (variable 0 most significant).
inline truth_table instance_table(const instance_set& s, std::size_t guard = default_max_vars) {
  detail::check_enum_guard(s.universe().size(), guard, "instance_table");
  const compiled_instance ci(s);
  const auto n = static_cast<unsigned>(ci.num_vars);
  truth_table t(n);
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << n); ++a) {
    if (!detail::eval_all(ci, a)) continue;
    std::size_t row = 0;
    for (unsigned i = 0; i < n; ++i) row = (row << 1) | static_cast<std::size_t>((a >> i) & 1u);
    t.set(row, true);
  }
  return t;
}

/// Logical equivalence by enumeration; both sets must share the universe.
inline bool equivalent(const instance_set& s, const instance_set& u, std::size_t guard = default_max_vars) {
  if (s.universe() != u.universe()) throw invalid_input("equivalent: universes differ; align them first");
  detail::check_enum_guard(s.universe().size(), guard, "equivalent");
  const compiled_instance cs(s), cu(u);
  const std::uint64_t total = std::uint64_t{1} << cs.num_vars;
  for (std::uint64_t a = 0; a < total; ++a) {
    if (detail::eval_all(cs, a) != detail::eval_all(cu, a)) return false;
  }
  return true;
}

/// A Boolean function over an explicit tuple of named variables; row i has
/// vars[0] as the most significant bit.
struct bool_function {
  variable_list vars;
  truth_table table;

  static bool_function from_lambda(variable_list vars, const std::function<bool(std::span<const bool>)>& f) {
    const auto k = static_cast<unsigned>(vars.size());
    truth_table t(k);
    bool buf[32];
    for (std::size_t r = 0; r < t.num_bits(); ++r) {
      for (unsigned j = 0; j < k; ++j) buf[j] = row_bit(r, k, j);
      t.set(r, f(std::span<const bool>(buf, k)));
    }
    return {std::move(vars), std::move(t)};
  }

  bool operator()(const std::map<std::string, bool, std::less<>>& a) const {
    std::size_t row = 0;
    for (const auto& v : vars) row = (row << 1) | static_cast<std::size_t>(a.at(v));
    return table.get(row);
  }
};

/// Decides S -> A exactly. Keeps a pool of models of S (stored transposed,
/// one bit per model) to refute most candidates without search; when the
/// pool holds every model it is the whole answer.
class implication_oracle {
 public:
  explicit implication_oracle(const instance_set& s, std::size_t enum_guard = default_max_vars,
                              std::uint64_t seed = 0x5eed)
      : universe_(s.universe()), solver_(compiled_instance(s)), rng_(seed) {
    const auto n = universe_.size();
    bits_.assign(n, {});
    if (n <= enum_guard && n <= 24) {
      const auto models = detail::enumerate_models(solver_.instance());
      if (models.size() <= max_pool_) {
        for (auto m : models) add_mask(m);
        complete_ = true;
        satisfiable_ = !models.empty();
        return;
      }
    }
    auto first = solver_.solve();
    satisfiable_ = first.has_value();
    if (!satisfiable_) {
      complete_ = true;
      return;
    }
    add_model(*first);
    for (int i = 0; i < 63; ++i) {
      if (auto m = solver_.solve({}, &rng_)) add_model(*m);
    }
  }

  /// Oracle whose models are given explicitly (the full model set).
  static implication_oracle from_models(const variable_list& universe, const std::vector<model>& models) {
    implication_oracle o(universe);
    for (const auto& m : models) o.add_model(m);
    o.complete_ = true;
    o.satisfiable_ = !models.empty();
    return o;
  }

  const variable_list& universe() const { return universe_; }
  bool satisfiable() const { return satisfiable_; }
  bool complete() const { return complete_; }
  std::size_t pool_size() const { return pool_size_; }

  /// Index of `v` in the universe.
  int index(const std::string& v) const {
    auto it = std::lower_bound(universe_.begin(), universe_.end(), v, natural_order{});
    if (it == universe_.end() || *it != v) throw invalid_input("variable '" + v + "' not in universe");
    return static_cast<int>(it - universe_.begin());
  }

  /// Pool check for a raw tuple: entries >= 0 are variable indices, -1 is
  /// constant 0 and -2 constant 1. True when some pooled model falsifies it.
  bool refuted_by_pool(const constraint& c, std::span<const int> args) const {
    const unsigned k = c.arity();
    const std::size_t words = word_count();
    for (std::size_t r = 0; r < c.table().num_bits(); ++r) {
      if (c(r)) continue;
      for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t acc = valid_mask(w);
        for (unsigned j = 0; j < k && acc; ++j) {
          const bool want = row_bit(r, k, j);
          const int a = args[j];
          if (a >= 0) {
            const auto b = bits_[static_cast<std::size_t>(a)][w];
            acc &= want ? b : ~b;
          } else if ((a == -2) != want) {
            acc = 0;
          }
        }
        if (acc) return true;
      }
    }
    return false;
  }

  bool implies(const application& a) {
    if (a.is_tautology()) return true;
    if (a.is_falsum() && a.vars().empty()) return !satisfiable_;
    std::vector<int> idx;
    for (const auto& v : a.vars()) idx.push_back(index(v));
    return implies_indexed(idx, a.local());
  }

  /// Implication of a local table whose j-th variable is universe index idx[j].
  bool implies_indexed(const std::vector<int>& idx, const truth_table& local) {
    if (local.is_const_true()) return true;
    if (!satisfiable_) return true;
    const auto d = static_cast<unsigned>(idx.size());
    for (std::size_t r = 0; r < local.num_bits(); ++r) {
      if (!local.get(r) && pool_hits(idx, d, r)) return false;
    }
    if (complete_) return true;
    for (std::size_t r = 0; r < local.num_bits(); ++r) {
      if (local.get(r)) continue;
      std::vector<literal> assume;
      for (unsigned j = 0; j < d; ++j) assume.emplace_back(idx[j], row_bit(r, d, j));
      if (auto m = solver_.solve(assume, &rng_)) {
        add_model(*m);
        return false;
      }
    }
    return true;
  }

  /// Is there a model extending the partial assignment?
  bool feasible(const std::vector<literal>& assume) {
    if (!satisfiable_) return false;
    if (pool_hits_literals(assume)) return true;
    if (complete_) return false;
    if (auto m = solver_.solve(assume, &rng_)) {
      add_model(*m);
      return true;
    }
    return false;
  }

  /// Adds up to `k` random models to the pool.
  void sample(std::size_t k) {
    if (complete_ || !satisfiable_) return;
    for (std::size_t i = 0; i < k && pool_size_ < max_pool_; ++i) {
      if (auto m = solver_.solve({}, &rng_)) add_model(*m);
    }
  }

  /// Pooled models, one per entry.
  std::vector<model> pool() const {
    std::vector<model> out(pool_size_, model(universe_.size(), 0));
    for (std::size_t v = 0; v < universe_.size(); ++v) {
      for (std::size_t i = 0; i < pool_size_; ++i) out[i][v] = static_cast<std::int8_t>((bits_[v][i >> 6] >> (i & 63)) & 1u);
    }
    return out;
  }

  /// Per-variable pool bit words (for bulk projection queries).
  const std::vector<std::vector<std::uint64_t>>& pool_bits() const { return bits_; }
  std::uint64_t valid_mask(std::size_t w) const {
    const std::size_t lo = w * 64;
    if (pool_size_ >= lo + 64) return ~std::uint64_t{0};
    if (pool_size_ <= lo) return 0;
    return (std::uint64_t{1} << (pool_size_ - lo)) - 1;
  }
  std::size_t word_count() const { return (pool_size_ + 63) / 64; }

 private:
  explicit implication_oracle(const variable_list& universe)
      : universe_(universe), solver_(compiled_instance()), rng_(0), bits_(universe.size()) {}

  bool pool_hits(const std::vector<int>& idx, unsigned d, std::size_t r) const {
    for (std::size_t w = 0; w < word_count(); ++w) {
      std::uint64_t acc = valid_mask(w);
      for (unsigned j = 0; j < d && acc; ++j) {
        const auto b = bits_[static_cast<std::size_t>(idx[j])][w];
        acc &= row_bit(r, d, j) ? b : ~b;
      }
      if (acc) return true;
    }
    return false;
  }

  bool pool_hits_literals(const std::vector<literal>& lits) const {
    for (std::size_t w = 0; w < word_count(); ++w) {
      std::uint64_t acc = valid_mask(w);
      for (const auto& [v, b] : lits) {
        const auto x = bits_[static_cast<std::size_t>(v)][w];
        acc &= b ? x : ~x;
        if (!acc) break;
      }
      if (acc) return true;
    }
    return false;
  }

  void add_mask(std::uint64_t m) {
    if (pool_size_ >= max_pool_) return;
    const std::size_t i = pool_size_++;
    for (std::size_t v = 0; v < universe_.size(); ++v) {
      if (bits_[v].size() <= (i >> 6)) bits_[v].push_back(0);
      if ((m >> v) & 1u) bits_[v][i >> 6] |= std::uint64_t{1} << (i & 63);
    }
  }

  void add_model(const model& m) {
    if (pool_size_ >= max_pool_) return;
    const std::size_t i = pool_size_++;
    for (std::size_t v = 0; v < universe_.size(); ++v) {
      if (bits_[v].size() <= (i >> 6)) bits_[v].push_back(0);
      if (m[v] == 1) bits_[v][i >> 6] |= std::uint64_t{1} << (i & 63);
    }
  }

  static constexpr std::size_t max_pool_ = 4096;

  variable_list universe_;
  solver solver_;
  std::mt19937_64 rng_;
  std::vector<std::vector<std::uint64_t>> bits_;
  std::size_t pool_size_ = 0;
  bool complete_ = false;
  bool satisfiable_ = false;
};

/// S -> A, exactly.
inline bool implies(const instance_set& s, const application& a) {
  for (const auto& v : a.vars()) {
    if (!s.has_variable(v)) throw invalid_input("implies: variable '" + v + "' not in universe");
  }
  implication_oracle o(s);
  return o.implies(a);
}

/// Satisfiability without an enumeration guard.
inline bool satisfiable(const instance_set& s) { return solver(compiled_instance(s)).solve().has_value(); }

struct closure_flags {
  bool with_constants = false;
  bool without_duplicates = false;
};

struct closure_options {
  std::size_t max_candidates = 4'000'000;
  std::size_t enum_guard = default_max_vars;
};

namespace detail {

// Enumerates every argument tuple of every constraint over the universe
// (plus constants) and keeps the non-tautological applications the oracle
// proves implied.
inline std::vector<application> closure_apps(const constraint_set& cs, const variable_list& x, closure_flags flags,
                                             implication_oracle& oracle, const closure_options& opt) {
  const bool consts = flags.with_constants && !flags.without_duplicates;
  std::vector<int> domain;
  for (std::size_t i = 0; i < x.size(); ++i) domain.push_back(static_cast<int>(i));
  if (consts) {
    domain.push_back(-1);
    domain.push_back(-2);
  }
  std::size_t budget = 0;
  for (const auto& c : cs) {
    std::size_t n = 1;
    for (unsigned j = 0; j < c->arity(); ++j) {
      n *= domain.size();
      if (n > opt.max_candidates) break;
    }
    budget += n;
    if (budget > opt.max_candidates) {
      throw guard_exceeded("maximal_closure: application space exceeds " + std::to_string(opt.max_candidates) +
                           " candidates");
    }
  }

  std::set<application> seen;
  std::vector<application> out;
  for (const auto& c : cs) {
    const unsigned k = c->arity();
    std::vector<std::size_t> pos(k, 0);
    std::vector<int> args(k);
    if (domain.empty()) continue;
    while (true) {
      bool ok = true;
      for (unsigned j = 0; j < k; ++j) args[j] = domain[pos[j]];
      if (flags.without_duplicates) {
        for (unsigned i = 0; i < k && ok; ++i) {
          for (unsigned j = i + 1; j < k && ok; ++j) ok = args[i] != args[j];
        }
      }
      if (ok && !oracle.refuted_by_pool(*c, args)) {
        std::vector<argument> as;
        as.reserve(k);
        for (int a : args) {
          as.push_back(a >= 0 ? argument::var(x[static_cast<std::size_t>(a)]) : argument::constant(a == -2));
        }
        application app(c, std::move(as));
        if (!app.is_tautology() && seen.insert(app).second && oracle.implies(app)) out.push_back(std::move(app));
      }
      unsigned j = k;
      while (j > 0) {
        --j;
        if (++pos[j] < domain.size()) break;
        pos[j] = 0;
        if (j == 0) {
          j = k + 1;
          break;
        }
      }
      if (j == k + 1 || k == 0) break;
    }
  }
  return out;
}

}  // namespace detail

/// All applications of `cs` over `x` (respecting `flags`) implied by `s`.
inline instance_set maximal_closure(const constraint_set& cs, const variable_list& x, closure_flags flags,
                                    const instance_set& s, const closure_options& opt = {}) {
  variable_list universe = x;
  sort_variables(universe);
  const instance_set aligned(universe, s.apps());
  implication_oracle oracle(aligned, opt.enum_guard);
  return instance_set(universe, detail::closure_apps(cs, universe, flags, oracle, opt));
}

/// A set of applications of `cs` over exactly the target's variables whose
/// conjunction equals the target, or nothing. Complete for realizations
/// without auxiliary variables: any realization is a subset of the closure.
inline std::optional<instance_set> realize(const constraint_set& cs, const bool_function& target, bool with_constants,
                                           std::size_t max_vars = 8, const closure_options& opt = {}) {
  if (target.vars.size() > max_vars) {
    throw guard_exceeded("realize: target has " + std::to_string(target.vars.size()) + " variables, guard is " +
                         std::to_string(max_vars));
  }
  variable_list universe = target.vars;
  sort_variables(universe);
  if (universe.size() != target.vars.size()) throw invalid_input("realize: target variables must be distinct");
  std::vector<model> models;
  const auto k = static_cast<unsigned>(target.vars.size());
  for (std::size_t r = 0; r < target.table.num_bits(); ++r) {
    if (!target.table.get(r)) continue;
    model m(universe.size(), 0);
    for (unsigned j = 0; j < k; ++j) {
      const auto at = std::lower_bound(universe.begin(), universe.end(), target.vars[j], natural_order{}) - universe.begin();
      m[static_cast<std::size_t>(at)] = row_bit(r, k, j) ? 1 : 0;
    }
    models.push_back(std::move(m));
  }
  auto oracle = implication_oracle::from_models(universe, models);
  closure_flags flags;
  flags.with_constants = with_constants;
  instance_set closure(universe, detail::closure_apps(cs, universe, flags, oracle, opt));

  // the conjunction must hit every row of the target exactly
  for (std::size_t r = 0; r < target.table.num_bits(); ++r) {
    std::map<std::string, bool, std::less<>> a;
    for (unsigned j = 0; j < k; ++j) a.emplace(target.vars[j], row_bit(r, k, j));
    bool all = true;
    for (const auto& app : closure.apps()) {
      if (!app.eval([&](const std::string& v) { return a.at(v); })) {
        all = false;
        break;
      }
    }
    if (all != target.table.get(r)) return std::nullopt;
  }
  return closure;
}

}  // namespace cspiso
