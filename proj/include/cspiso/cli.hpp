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

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cspiso/affine_nf.hpp"
#include "cspiso/boolfun.hpp"
#include "cspiso/error.hpp"
#include "cspiso/graph.hpp"
#include "cspiso/instances.hpp"
#include "cspiso/io.hpp"
#include "cspiso/iso.hpp"
#include "cspiso/reduce.hpp"
#include "json.hpp"

namespace cspiso::cli {

enum exit_code : int { ok = 0, negative = 1, usage = 2, guard = 3 };

struct run_config {
  std::string subcommand;
  std::string constraints;  // file path or builtin:a,b
  std::vector<std::string> inputs;
  std::size_t max_vars = default_max_vars;
  std::size_t max_perm_vars = default_max_perm_vars;
  std::string out_dir = ".";
  bool json = false;
  bool force_brute = false;
  std::uint64_t seed = 1;
  bool with_constants = false;
  bool materialize = false;
  std::string target;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_input("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw invalid_input("cannot write '" + p.string() + "'");
  out << text;
}

inline constraint_set load_constraints(const std::string& spec) {
  if (spec.empty()) throw invalid_input("missing -c <constraints-file|builtin:names>");
  if (spec.rfind("builtin:", 0) == 0) return io::builtin_constraints(spec.substr(8));
  return io::parse_constraints(read_file(spec));
}

inline void need_inputs(const run_config& cfg, std::size_t n) {
  if (cfg.inputs.size() != n) {
    throw invalid_input(cfg.subcommand + " expects " + std::to_string(n) + " input file(s), got " +
                        std::to_string(cfg.inputs.size()));
  }
}

inline nlohmann::json properties_json(const property_set& p) {
  return {{"zero_valid", p.zero_valid}, {"one_valid", p.one_valid},   {"horn", p.horn},
          {"anti_horn", p.anti_horn},   {"bijunctive", p.bijunctive}, {"affine", p.affine},
          {"two_affine", p.two_affine}, {"complementative", p.complementative}};
}

inline int classify(const run_config& cfg, std::ostream& out) {
  const auto cs = load_constraints(cfg.constraints);
  const auto verdict = classify_trichotomy(cs);
  if (cfg.json) {
    nlohmann::json j{{"class", to_string(verdict)}, {"constraints", nlohmann::json::array()}};
    for (const auto& c : cs) {
      j["constraints"].push_back({{"name", c->name()}, {"arity", c->arity()}, {"properties", properties_json(detect_properties(*c))}});
    }
    out << j.dump(2) << "\n";
  } else {
    out << to_string(verdict) << "\n";
  }
  return ok;
}

inline int iso(const run_config& cfg, std::ostream& out) {
  need_inputs(cfg, 2);
  const auto cs = load_constraints(cfg.constraints);
  const auto s = io::parse_instance(read_file(cfg.inputs[0]), cs);
  const auto u = io::parse_instance(read_file(cfg.inputs[1]), cs);
  const bool fast = !cfg.force_brute && is_two_affine_set(cs);
  std::optional<permutation> w;
  if (fast) {
    w = iso_2affine_witness(s, u);
  } else {
    iso_options opt;
    opt.max_perm_vars = cfg.max_perm_vars;
    opt.seed = cfg.seed;
    w = brute_force_iso(s, u, opt);
  }
  if (cfg.json) {
    nlohmann::json j{{"iso", w.has_value()}, {"method", fast ? "normal-form" : "brute-force"}};
    if (w) j["witness"] = w->map();
    out << j.dump(2) << "\n";
  } else if (w) {
    out << "ISO\nwitness: " << w->to_string() << "\n";
  } else {
    out << "NON-ISO\n";
  }
  return w ? ok : negative;
}

inline int nf(const run_config& cfg, std::ostream& out) {
  need_inputs(cfg, 1);
  const auto cs = load_constraints(cfg.constraints);
  const auto s = io::parse_instance(read_file(cfg.inputs[0]), cs);
  const auto form = normal_form(s);
  if (cfg.json) {
    nlohmann::json j{{"unsat", form.is_unsat}};
    if (!form.is_unsat) {
      j["z"] = form.z;
      j["o"] = form.o;
      j["classes"] = nlohmann::json::array();
      for (const auto& c : form.classes) j["classes"].push_back({c.x, c.y});
    }
    out << j.dump(2) << "\n";
  } else {
    out << to_string(form);
  }
  return ok;
}

inline int reduce(const run_config& cfg, std::ostream& out) {
  need_inputs(cfg, 2);
  const auto cs = load_constraints(cfg.constraints);
  const auto g = io::parse_graph(read_file(cfg.inputs[0]));
  const auto h = io::parse_graph(read_file(cfg.inputs[1]));
  reduce_options opt;
  opt.materialize_not_isomorphic = cfg.materialize;
  const auto r = reduce_gi_to_iso(cs, g, h, opt);
  nlohmann::json j{{"not_isomorphic", r.not_isomorphic}};
  if (r.not_isomorphic) j["reason"] = r.reason;
  if (r.output) {
    const std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "left.inst", io::print_instance(r.output->left));
    write_file(dir / "right.inst", io::print_instance(r.output->right));
    write_file(dir / "transcript.json", io::to_json(r.output->transcript).dump(2) + "\n");
    j["transcript"] = io::to_json(r.output->transcript);
    j["variables"] = r.output->left.universe().size();
  }
  if (cfg.json) {
    out << j.dump(2) << "\n";
  } else {
    if (r.not_isomorphic) out << "NotIsomorphic: " << r.reason << "\n";
    if (r.output) {
      const auto& t = r.output->transcript;
      out << "form: " << t.form << "\n"
          << "gadget: " << t.gadget_name << " (" << t.gadget_mode << ")\n"
          << "variables: " << r.output->left.universe().size() << "\n"
          << "wrote: left.inst right.inst transcript.json\n";
    }
  }
  return r.not_isomorphic ? negative : ok;
}

inline bool_function realize_target(const std::string& name, const constraint_set& cs) {
  auto numbered = [&](std::string_view prefix) -> int {
    if (name.rfind(prefix, 0) != 0) return 0;
    try {
      return std::stoi(name.substr(prefix.size()));
    } catch (const std::exception&) {
      return 0;
    }
  };
  if (int i = numbered("form"); i >= 1 && i <= 6) return canonical_form(i);
  if (int i = numbered("gadget"); i >= 1 && i <= 10) return gadget_targets()[static_cast<std::size_t>(i - 1)].fn;
  constraint_ptr c = cs.find(name);
  if (!c) {
    if (auto b = builtin::by_name(name)) c = std::make_shared<const constraint>(*b);
  }
  if (!c) throw invalid_input("unknown realize target '" + name + "'");
  variable_list vars;
  for (unsigned i = 1; i <= c->arity(); ++i) vars.push_back("x" + std::to_string(i));
  return {vars, c->table()};
}

inline int realize_cmd(const run_config& cfg, std::ostream& out) {
  const auto cs = load_constraints(cfg.constraints);
  if (cfg.target.empty()) throw invalid_input("realize needs --target");
  const auto target = realize_target(cfg.target, cs);
  closure_options opt;
  opt.enum_guard = cfg.max_vars;
  const auto m = realize(cs, target, cfg.with_constants, 8, opt);
  if (cfg.json) {
    nlohmann::json j{{"target", cfg.target}, {"realizable", m.has_value()}};
    if (m) j["realization"] = io::to_json(*m);
    out << j.dump(2) << "\n";
  } else if (m) {
    out << io::print_instance(*m);
  } else {
    out << "NONE\n";
  }
  return m ? ok : negative;
}

inline int preprocess(const run_config& cfg, std::ostream& out) {
  need_inputs(cfg, 2);
  const auto g = io::parse_graph(read_file(cfg.inputs[0]));
  const auto h = io::parse_graph(read_file(cfg.inputs[1]));
  const auto r = preprocess_pair(g, h);
  if (cfg.json) {
    nlohmann::json j{{"not_isomorphic", r.not_isomorphic}};
    if (r.not_isomorphic) {
      j["reason"] = r.reason;
    } else {
      j["left"] = io::print_graph(r.g);
      j["right"] = io::print_graph(r.h);
    }
    out << j.dump(2) << "\n";
  } else if (r.not_isomorphic) {
    out << "NotIsomorphic: " << r.reason << "\n";
  } else {
    out << "c left\n" << io::print_graph(r.g) << "c right\n" << io::print_graph(r.h);
  }
  return r.not_isomorphic ? negative : ok;
}

}  // namespace detail

/// Dispatches one subcommand; never throws.
inline int run(const run_config& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.max_vars == 0 || cfg.max_perm_vars == 0) throw invalid_input("guards must be positive");
    if (cfg.subcommand == "classify") return detail::classify(cfg, out);
    if (cfg.subcommand == "iso") return detail::iso(cfg, out);
    if (cfg.subcommand == "nf") return detail::nf(cfg, out);
    if (cfg.subcommand == "reduce") return detail::reduce(cfg, out);
    if (cfg.subcommand == "realize") return detail::realize_cmd(cfg, out);
    if (cfg.subcommand == "preprocess") return detail::preprocess(cfg, out);
    throw invalid_input("unknown subcommand '" + cfg.subcommand + "'");
  } catch (const guard_exceeded& e) {
    err << "guard exceeded: " << e.what() << "\n";
    return guard;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  }
}

}  // namespace cspiso::cli
