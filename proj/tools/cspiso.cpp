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


#include <iostream>

#include "CLI11.hpp"
#include "cspiso/cli.hpp"

int main(int argc, char** argv) {
  cspiso::cli::run_config cfg;
  CLI::App app{"Boolean constraint isomorphism: classification, normal forms, GI reductions"};
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("-c,--constraints", cfg.constraints, "constraint file or builtin:name[,name...]");
    sub->add_option("--max-vars", cfg.max_vars, "variable guard for exhaustive evaluation")->capture_default_str();
    sub->add_option("--max-perm-vars", cfg.max_perm_vars, "variable guard for permutation search")->capture_default_str();
    sub->add_flag("--json", cfg.json, "JSON output");
    sub->add_option("--seed", cfg.seed, "seed for randomized search")->capture_default_str();
    sub->add_option("-o,--out", cfg.out_dir, "output directory");
  };

  auto* classify = app.add_subcommand("classify", "trichotomy class of a constraint set");
  common(classify);

  auto* iso = app.add_subcommand("iso", "decide isomorphism of two instance files");
  common(iso);
  iso->add_flag("--force-brute", cfg.force_brute, "skip the 2-affine normal-form path");
  iso->add_option("inputs", cfg.inputs, "two instance files")->expected(2);

  auto* nf = app.add_subcommand("nf", "2-affine normal form of an instance file");
  common(nf);
  nf->add_option("input", cfg.inputs, "instance file")->expected(1);

  auto* reduce = app.add_subcommand("reduce", "GI -> ISO reduction of two graph files");
  common(reduce);
  reduce->add_flag("--materialize", cfg.materialize, "emit a fixed non-isomorphic pair when preprocessing decides");
  reduce->add_option("inputs", cfg.inputs, "two graph files")->expected(2);

  auto* realize = app.add_subcommand("realize", "realize a target function without auxiliary variables");
  common(realize);
  realize->add_option("--target", cfg.target, "form1..form6, gadget1..gadget10, or a constraint name")->required();
  realize->add_flag("--with-constants", cfg.with_constants, "allow the constants 0 and 1");

  auto* preprocess = app.add_subcommand("preprocess", "restricted-graph preprocessing of two graph files");
  common(preprocess);
  preprocess->add_option("inputs", cfg.inputs, "two graph files")->expected(2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cspiso::cli::usage;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  return cspiso::cli::run(cfg, std::cout, std::cerr);
}
