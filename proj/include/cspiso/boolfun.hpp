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
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cspiso/error.hpp"
#include "cspiso/truth_table.hpp"

namespace cspiso {

inline constexpr unsigned default_max_arity = 16;

/// A Boolean function of fixed arity, stored as a truth table.
class constraint {
 public:
  constraint(std::string name, truth_table table, unsigned max_arity = default_max_arity)
      : name_(std::move(name)), table_(std::move(table)) {
    if (name_.empty()) throw invalid_input("constraint name must not be empty");
    if (table_.num_vars() == 0) throw invalid_input("constraint '" + name_ + "' must have positive arity");
    if (table_.num_vars() > max_arity) {
      throw invalid_input("constraint '" + name_ + "' has arity " + std::to_string(table_.num_vars()) +
                          " above the cap of " + std::to_string(max_arity));
    }
  }

  /// Builds the table by evaluating `f` on every row (a_1 first).
  static constraint from_function(std::string name, unsigned arity,
                                  const std::function<bool(std::span<const bool>)>& f) {
    if (arity > 32) throw invalid_input("constraint '" + name + "' arity too large");
    truth_table t(arity);
    bool buf[32];
    for (std::size_t row = 0; row < t.num_bits(); ++row) {
      for (unsigned j = 0; j < arity; ++j) buf[j] = row_bit(row, arity, j);
      t.set(row, f(std::span<const bool>(buf, arity)));
    }
    return constraint(std::move(name), std::move(t), std::max(arity, default_max_arity));
  }

  const std::string& name() const { return name_; }
  unsigned arity() const { return table_.num_vars(); }
  const truth_table& table() const { return table_; }

  bool operator()(std::size_t row) const { return table_.get(row); }

  friend bool operator==(const constraint& a, const constraint& b) {
    return a.name_ == b.name_ && a.table_ == b.table_;
  }

 private:
  std::string name_;
  truth_table table_;
};

using constraint_ptr = std::shared_ptr<const constraint>;

/// A finite set of constraints with unique names, in insertion order.
class constraint_set {
 public:
  constraint_set() = default;
  constraint_set(std::initializer_list<constraint> cs) {
    for (const auto& c : cs) add(c);
  }

  const constraint_ptr& add(constraint c) {
    if (find(c.name())) throw invalid_input("duplicate constraint name '" + c.name() + "'");
    items_.push_back(std::make_shared<const constraint>(std::move(c)));
    return items_.back();
  }

  constraint_ptr find(std::string_view name) const {
    for (const auto& c : items_) {
      if (c->name() == name) return c;
    }
    return nullptr;
  }

  const constraint_ptr& at(std::string_view name) const {
    for (const auto& c : items_) {
      if (c->name() == name) return c;
    }
    throw invalid_input("unknown constraint '" + std::string(name) + "'");
  }

  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

 private:
  std::vector<constraint_ptr> items_;
};

/// Looks up the bit for assignment `a` (a_1 most significant).
inline bool eval_constraint(const constraint& c, std::span<const bool> a) {
  if (a.size() != c.arity()) {
    throw invalid_input("constraint '" + c.name() + "' has arity " + std::to_string(c.arity()) +
                        ", got " + std::to_string(a.size()) + " values");
  }
  std::size_t row = 0;
  for (bool b : a) row = (row << 1) | static_cast<std::size_t>(b);
  return c(row);
}

inline bool eval_constraint(const constraint& c, std::initializer_list<bool> a) {
  return eval_constraint(c, std::span<const bool>(a.begin(), a.size()));
}

struct property_set {
  bool zero_valid = false;
  bool one_valid = false;
  bool horn = false;
  bool anti_horn = false;
  bool bijunctive = false;
  bool affine = false;
  bool two_affine = false;
  bool complementative = false;

  bool schaefer() const { return horn || anti_horn || bijunctive || affine; }

  friend bool operator==(const property_set&, const property_set&) = default;
};

enum class trichotomy_class { conp_and_gi_hard, gi_equivalent, in_p };

inline std::string_view to_string(trichotomy_class c) {
  switch (c) {
    case trichotomy_class::conp_and_gi_hard:
      return "CONP_AND_GI_HARD";
    case trichotomy_class::gi_equivalent:
      return "GI_EQUIVALENT";
    case trichotomy_class::in_p:
      return "IN_P";
  }
  return "?";
}

namespace detail {

inline std::vector<std::size_t> satisfying_rows(const truth_table& t) {
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < t.num_bits(); ++r) {
    if (t.get(r)) rows.push_back(r);
  }
  return rows;
}

template <typename Op>
bool closed_binary(const truth_table& t, const std::vector<std::size_t>& sat, Op op) {
  for (std::size_t i = 0; i < sat.size(); ++i) {
    for (std::size_t j = i + 1; j < sat.size(); ++j) {
      if (!t.get(op(sat[i], sat[j]))) return false;
    }
  }
  return true;
}

// O(|sat|^3); rows are bit vectors so the coordinatewise operation is one word op.
template <typename Op>
bool closed_ternary(const truth_table& t, const std::vector<std::size_t>& sat, Op op) {
  for (std::size_t i = 0; i < sat.size(); ++i) {
    for (std::size_t j = i + 1; j < sat.size(); ++j) {
      for (std::size_t k = j + 1; k < sat.size(); ++k) {
        if (!t.get(op(sat[i], sat[j], sat[k]))) return false;
      }
    }
  }
  return true;
}

inline std::size_t majority3(std::size_t a, std::size_t b, std::size_t c) { return (a & b) | (a & c) | (b & c); }

}  // namespace detail

/// Closure-based detectors: Horn = AND-closed, anti-Horn = OR-closed,
/// bijunctive = majority-closed, affine = closed under s^t^u.
/// Cost is cubic in the number of satisfying rows.
inline property_set detect_properties(const truth_table& t) {
  property_set p;
  const std::size_t all = t.num_bits() - 1;
  p.zero_valid = t.get(0);
  p.one_valid = t.get(all);
  const auto sat = detail::satisfying_rows(t);
  p.horn = detail::closed_binary(t, sat, [](std::size_t a, std::size_t b) { return a & b; });
  p.anti_horn = detail::closed_binary(t, sat, [](std::size_t a, std::size_t b) { return a | b; });
  p.bijunctive = detail::closed_ternary(t, sat, detail::majority3);
  p.affine = detail::closed_ternary(t, sat, [](std::size_t a, std::size_t b, std::size_t c) { return a ^ b ^ c; });
  p.two_affine = p.affine && p.bijunctive;
  p.complementative = true;
  for (std::size_t r = 0; r <= all && p.complementative; ++r) {
    if (t.get(r) != t.get(all ^ r)) p.complementative = false;
  }
  return p;
}

inline property_set detect_properties(const constraint& c) { return detect_properties(c.table()); }

/// True iff every member shares one of Horn, anti-Horn, affine, bijunctive.
inline bool is_schaefer_set(const constraint_set& cs) {
  if (cs.empty()) throw invalid_input("constraint set is empty");
  bool horn = true, anti_horn = true, affine = true, bijunctive = true;
  for (const auto& c : cs) {
    const auto p = detect_properties(*c);
    horn = horn && p.horn;
    anti_horn = anti_horn && p.anti_horn;
    affine = affine && p.affine;
    bijunctive = bijunctive && p.bijunctive;
  }
  return horn || anti_horn || affine || bijunctive;
}

inline bool is_two_affine_set(const constraint_set& cs) {
  if (cs.empty()) throw invalid_input("constraint set is empty");
  return std::all_of(cs.begin(), cs.end(), [](const auto& c) { return detect_properties(*c).two_affine; });
}

inline bool is_affine_set(const constraint_set& cs) {
  if (cs.empty()) throw invalid_input("constraint set is empty");
  return std::all_of(cs.begin(), cs.end(), [](const auto& c) { return detect_properties(*c).affine; });
}

inline trichotomy_class classify_trichotomy(const constraint_set& cs) {
  if (!is_schaefer_set(cs)) return trichotomy_class::conp_and_gi_hard;
  if (!is_two_affine_set(cs)) return trichotomy_class::gi_equivalent;
  return trichotomy_class::in_p;
}

/// The built-in constraint library.
namespace builtin {

inline constraint make(std::string_view name, std::string_view bits) {
  return constraint(std::string(name), truth_table::from_string(bits));
}

inline constraint or0() { return make("or0", "0111"); }
inline constraint or1() { return make("or1", "1101"); }
inline constraint or2() { return make("or2", "1110"); }
inline constraint xor2() { return make("xor2", "0110"); }
inline constraint xor3() { return make("xor3", "01101001"); }
inline constraint one_in_three() { return make("one-in-three", "01101000"); }
inline constraint identity() { return make("id", "01"); }
inline constraint negation() { return make("not", "10"); }
inline constraint iff() { return make("iff", "1001"); }

/// h(x,y,x',y') = (x | y) & (x ^ x') & (y ^ y')
inline constraint h4() {
  return constraint::from_function("h4", 4, [](std::span<const bool> a) {
    return (a[0] || a[1]) && (a[0] != a[2]) && (a[1] != a[3]);
  });
}

/// h(x,y,z,x',y',z') = OneInThree(x,y,z) & (x ^ x') & (y ^ y') & (z ^ z')
inline constraint h_one_in_three() {
  return constraint::from_function("h-one-in-three", 6, [](std::span<const bool> a) {
    const int ones = int(a[0]) + int(a[1]) + int(a[2]);
    return ones == 1 && a[0] != a[3] && a[1] != a[4] && a[2] != a[5];
  });
}

/// h(x,y,z,x',y',z') = (x ^ y ^ z) & (x ^ x') & (y ^ y') & (z ^ z')
inline constraint h_xor3() {
  return constraint::from_function("h-xor3", 6, [](std::span<const bool> a) {
    return (a[0] != a[1]) != a[2] && a[0] != a[3] && a[1] != a[4] && a[2] != a[5];
  });
}

inline const std::vector<std::string>& names() {
  static const std::vector<std::string> n = {"or0", "or1", "or2", "xor2", "xor3", "one-in-three",
                                             "id", "not", "iff", "h4", "h-one-in-three", "h-xor3"};
  return n;
}

inline std::optional<constraint> by_name(std::string_view name) {
  if (name == "or0") return or0();
  if (name == "or1") return or1();
  if (name == "or2") return or2();
  if (name == "xor2") return xor2();
  if (name == "xor3") return xor3();
  if (name == "one-in-three") return one_in_three();
  if (name == "id") return identity();
  if (name == "not") return negation();
  if (name == "iff") return iff();
  if (name == "h4") return h4();
  if (name == "h-one-in-three") return h_one_in_three();
  if (name == "h-xor3") return h_xor3();
  return std::nullopt;
}

/// Shared instance of a built-in constraint.
inline constraint_ptr ptr(std::string_view name) {
  static const std::map<std::string, constraint_ptr, std::less<>> table = [] {
    std::map<std::string, constraint_ptr, std::less<>> m;
    for (const auto& n : names()) m.emplace(n, std::make_shared<const constraint>(*by_name(n)));
    return m;
  }();
  auto it = table.find(name);
  if (it == table.end()) throw invalid_input("unknown built-in constraint '" + std::string(name) + "'");
  return it->second;
}

}  // namespace builtin

}  // namespace cspiso
