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
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cspiso/boolfun.hpp"
#include "cspiso/error.hpp"
#include "cspiso/natural_order.hpp"
#include "cspiso/truth_table.hpp"

namespace cspiso {

/// A constraint argument: a named variable or one of the constants 0/1.
class argument {
 public:
  enum class kind { variable, zero, one };

  static argument var(std::string name) {
    if (name.empty()) throw invalid_input("variable name must not be empty");
    return argument(kind::variable, std::move(name));
  }
  static argument constant(bool value) { return argument(value ? kind::one : kind::zero, {}); }
  static argument zero() { return constant(false); }
  static argument one() { return constant(true); }

  kind type() const { return kind_; }
  bool is_variable() const { return kind_ == kind::variable; }
  bool is_constant() const { return kind_ != kind::variable; }
  bool constant_value() const { return kind_ == kind::one; }
  const std::string& name() const { return name_; }

  std::string to_string() const {
    switch (kind_) {
      case kind::zero:
        return "0";
      case kind::one:
        return "1";
      default:
        return name_;
    }
  }

  friend bool operator==(const argument&, const argument&) = default;

 private:
  argument(kind k, std::string n) : kind_(k), name_(std::move(n)) {}
  kind kind_;
  std::string name_;
};

inline argument var(std::string name) { return argument::var(std::move(name)); }

using variable_list = std::vector<std::string>;

inline void sort_variables(variable_list& vs) {
  std::sort(vs.begin(), vs.end(), natural_order{});
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
}

/// A constraint applied to a tuple of arguments. Identity is the Boolean
/// function denoted over the set of occurring variables, so or0(x,y) equals
/// or0(y,x). The local table is over `vars()` in natural order, first
/// variable most significant.
class application {
 public:
  application(constraint_ptr c, std::vector<argument> args) : c_(std::move(c)), args_(std::move(args)) {
    if (!c_) throw invalid_input("application without constraint");
    if (args_.size() != c_->arity()) {
      throw invalid_input("constraint '" + c_->name() + "' expects " + std::to_string(c_->arity()) +
                          " arguments, got " + std::to_string(args_.size()));
    }
    for (const auto& a : args_) {
      if (a.is_variable()) vars_.push_back(a.name());
    }
    sort_variables(vars_);
    build_local();
  }

  const constraint_ptr& constraint_ref() const { return c_; }
  const constraint& fn() const { return *c_; }
  const std::vector<argument>& args() const { return args_; }
  const variable_list& vars() const { return vars_; }
  const truth_table& local() const { return local_; }

  bool has_constants() const {
    return std::any_of(args_.begin(), args_.end(), [](const argument& a) { return a.is_constant(); });
  }
  bool has_duplicates() const {
    std::size_t nvars = 0;
    for (const auto& a : args_) nvars += a.is_variable() ? 1 : 0;
    return nvars != vars_.size();
  }
  bool is_tautology() const { return local_.is_const_true(); }
  bool is_falsum() const { return local_.is_const_false(); }

  /// Evaluates under `value(name)` for every occurring variable.
  template <typename Lookup>
  bool eval(Lookup&& value) const {
    std::size_t row = 0;
    for (const auto& a : args_) {
      const bool b = a.is_variable() ? static_cast<bool>(value(a.name())) : a.constant_value();
      row = (row << 1) | static_cast<std::size_t>(b);
    }
    return (*c_)(row);
  }

  /// Simultaneously replaces every argument by `f(argument)`.
  application map_args(const std::function<argument(const argument&)>& f) const {
    std::vector<argument> out;
    out.reserve(args_.size());
    for (const auto& a : args_) out.push_back(f(a));
    return application(c_, std::move(out));
  }

  /// Simultaneous variable renaming; unmapped variables are kept.
  application rename(const std::map<std::string, argument, std::less<>>& m) const {
    return map_args([&](const argument& a) {
      if (!a.is_variable()) return a;
      auto it = m.find(a.name());
      return it == m.end() ? a : it->second;
    });
  }

  std::string to_string() const {
    std::string s = c_->name() + "(";
    for (std::size_t i = 0; i < args_.size(); ++i) {
      if (i) s += ",";
      s += args_[i].to_string();
    }
    return s + ")";
  }

  friend bool operator==(const application& a, const application& b) {
    return a.vars_ == b.vars_ && a.local_ == b.local_;
  }

  /// Canonical order: by variable list (natural order), then by table.
  friend bool operator<(const application& a, const application& b) {
    const natural_order less;
    if (std::lexicographical_compare(a.vars_.begin(), a.vars_.end(), b.vars_.begin(), b.vars_.end(), less)) {
      return true;
    }
    if (std::lexicographical_compare(b.vars_.begin(), b.vars_.end(), a.vars_.begin(), a.vars_.end(), less)) {
      return false;
    }
    return a.local_ < b.local_;
  }

 private:
  void build_local() {
    const auto d = static_cast<unsigned>(vars_.size());
    local_ = truth_table(d);
    std::vector<int> pos(args_.size(), -1);
    for (std::size_t i = 0; i < args_.size(); ++i) {
      if (args_[i].is_variable()) {
        pos[i] = static_cast<int>(std::lower_bound(vars_.begin(), vars_.end(), args_[i].name(), natural_order{}) -
                                  vars_.begin());
      }
    }
    const unsigned k = c_->arity();
    for (std::size_t r = 0; r < local_.num_bits(); ++r) {
      std::size_t row = 0;
      for (unsigned i = 0; i < k; ++i) {
        const bool b = pos[i] < 0 ? args_[i].constant_value() : row_bit(r, d, static_cast<unsigned>(pos[i]));
        row = (row << 1) | static_cast<std::size_t>(b);
      }
      local_.set(r, (*c_)(row));
    }
  }

  constraint_ptr c_;
  std::vector<argument> args_;
  variable_list vars_;
  truth_table local_;
};

/// A finite set of applications over an ordered variable universe. The
/// universe may contain variables that occur in no application.
class instance_set {
 public:
  instance_set() = default;

  instance_set(variable_list universe, std::vector<application> apps) : universe_(std::move(universe)) {
    sort_variables(universe_);
    for (auto& a : apps) insert_unchecked(std::move(a));
    for (const auto& a : apps_) {
      for (const auto& v : a.vars()) {
        if (!has_variable(v)) {
          throw invalid_input("variable '" + v + "' of " + a.to_string() + " is not in the universe");
        }
      }
    }
  }

  /// Universe = occurring variables plus `extra`.
  static instance_set over_occurring(std::vector<application> apps, variable_list extra = {}) {
    for (const auto& a : apps) extra.insert(extra.end(), a.vars().begin(), a.vars().end());
    return instance_set(std::move(extra), std::move(apps));
  }

  const variable_list& universe() const { return universe_; }
  const std::vector<application>& apps() const { return apps_; }
  std::size_t size() const { return apps_.size(); }
  bool empty() const { return apps_.empty(); }

  bool has_variable(std::string_view v) const {
    return std::binary_search(universe_.begin(), universe_.end(), v, natural_order{});
  }

  std::size_t index_of(std::string_view v) const {
    auto it = std::lower_bound(universe_.begin(), universe_.end(), v, natural_order{});
    if (it == universe_.end() || *it != v) throw invalid_input("variable '" + std::string(v) + "' not in universe");
    return static_cast<std::size_t>(it - universe_.begin());
  }

  bool contains(const application& a) const { return std::binary_search(apps_.begin(), apps_.end(), a); }

  bool has_constants() const {
    return std::any_of(apps_.begin(), apps_.end(), [](const application& a) { return a.has_constants(); });
  }

  bool has_falsum() const {
    return std::any_of(apps_.begin(), apps_.end(), [](const application& a) { return a.is_falsum(); });
  }

  /// Adds an application (set semantics); its variables join the universe.
  void insert(application a) {
    for (const auto& v : a.vars()) {
      if (!has_variable(v)) {
        universe_.push_back(v);
        sort_variables(universe_);
      }
    }
    insert_unchecked(std::move(a));
  }

  void add_variables(const variable_list& vs) {
    universe_.insert(universe_.end(), vs.begin(), vs.end());
    sort_variables(universe_);
  }

  /// The constraints used, in order of first appearance.
  constraint_set constraints() const {
    constraint_set cs;
    for (const auto& a : apps_) {
      if (!cs.find(a.fn().name())) cs.add(a.fn());
    }
    return cs;
  }

  /// Syntactic set equality under function identity, same universe.
  friend bool operator==(const instance_set& a, const instance_set& b) {
    return a.universe_ == b.universe_ && a.apps_ == b.apps_;
  }

 private:
  void insert_unchecked(application a) {
    auto it = std::lower_bound(apps_.begin(), apps_.end(), a);
    if (it != apps_.end() && *it == a) return;
    apps_.insert(it, std::move(a));
  }

  variable_list universe_;
  std::vector<application> apps_;
};

/// Both sets re-expressed over the union of their universes.
inline std::pair<instance_set, instance_set> align(const instance_set& s, const instance_set& u) {
  variable_list x = s.universe();
  x.insert(x.end(), u.universe().begin(), u.universe().end());
  sort_variables(x);
  return {instance_set(x, s.apps()), instance_set(x, u.apps())};
}

/// A bijection on a variable universe.
class permutation {
 public:
  permutation() = default;

  permutation(const variable_list& universe, std::map<std::string, std::string, natural_order> image)
      : image_(std::move(image)) {
    std::set<std::string, natural_order> seen;
    for (const auto& v : universe) {
      auto it = image_.find(v);
      if (it == image_.end()) throw invalid_input("permutation is not defined on '" + v + "'");
      if (!std::binary_search(universe.begin(), universe.end(), it->second, natural_order{})) {
        throw invalid_input("permutation maps '" + v + "' outside the universe");
      }
      if (!seen.insert(it->second).second) throw invalid_input("permutation is not injective");
    }
    if (image_.size() != universe.size()) throw invalid_input("permutation has entries outside the universe");
  }

  static permutation identity(const variable_list& universe) {
    std::map<std::string, std::string, natural_order> m;
    for (const auto& v : universe) m.emplace(v, v);
    return permutation(universe, std::move(m));
  }

  /// From the image sequence: universe[i] -> universe[images[i]].
  static permutation from_indices(const variable_list& universe, const std::vector<std::size_t>& images) {
    std::map<std::string, std::string, natural_order> m;
    for (std::size_t i = 0; i < universe.size(); ++i) m.emplace(universe[i], universe.at(images.at(i)));
    return permutation(universe, std::move(m));
  }

  const std::string& operator()(const std::string& v) const {
    auto it = image_.find(v);
    if (it == image_.end()) throw invalid_input("permutation is not defined on '" + v + "'");
    return it->second;
  }

  const std::map<std::string, std::string, natural_order>& map() const { return image_; }

  permutation inverse() const {
    std::map<std::string, std::string, natural_order> m;
    variable_list u;
    for (const auto& [a, b] : image_) {
      m.emplace(b, a);
      u.push_back(a);
    }
    sort_variables(u);
    return permutation(u, std::move(m));
  }

  std::string to_string() const {
    std::string s;
    for (const auto& [a, b] : image_) {
      if (!s.empty()) s += ' ';
      s += a + "->" + b;
    }
    return s;
  }

  friend bool operator==(const permutation&, const permutation&) = default;

 private:
  std::map<std::string, std::string, natural_order> image_;
};

/// pi(S): every variable x replaced simultaneously by pi(x).
inline instance_set apply_permutation(const permutation& p, const instance_set& s) {
  std::map<std::string, argument, std::less<>> m;
  for (const auto& v : s.universe()) m.emplace(v, argument::var(p(v)));
  std::vector<application> out;
  out.reserve(s.size());
  for (const auto& a : s.apps()) out.push_back(a.rename(m));
  return instance_set(s.universe(), std::move(out));
}

/// S[binding]: bound variables become constants and leave the universe.
/// Applications that become tautologies are dropped; falsified ones stay
/// as all-constant falsum markers.
inline instance_set substitute(const instance_set& s, const std::map<std::string, bool, std::less<>>& binding) {
  for (const auto& [v, b] : binding) {
    if (!s.has_variable(v)) throw invalid_input("substituted variable '" + v + "' is not in the universe");
  }
  std::map<std::string, argument, std::less<>> m;
  for (const auto& [v, b] : binding) m.emplace(v, argument::constant(b));
  std::vector<application> out;
  for (const auto& a : s.apps()) {
    auto r = a.rename(m);
    if (!r.is_tautology()) out.push_back(std::move(r));
  }
  variable_list x;
  for (const auto& v : s.universe()) {
    if (!binding.contains(v)) x.push_back(v);
  }
  return instance_set(std::move(x), std::move(out));
}

}  // namespace cspiso
