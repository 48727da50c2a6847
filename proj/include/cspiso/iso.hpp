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
#include <map>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <vector>

#include "cspiso/application.hpp"
#include "cspiso/error.hpp"
#include "cspiso/instances.hpp"

namespace cspiso {

struct iso_options {
  std::size_t max_perm_vars = default_max_perm_vars;
  // universes up to this size use the truth-table engine (lexicographically first witness)
  std::size_t table_engine_limit = 12;
  std::uint64_t seed = 0x1505eed;
  std::uint64_t max_nodes = 50'000'000;
};

namespace detail {

inline std::vector<std::uint32_t> model_list(const instance_set& s) {
  std::vector<std::uint32_t> out;
  for (auto m : enumerate_models(compiled_instance(s))) out.push_back(static_cast<std::uint32_t>(m));
  return out;
}

// Exhaustive search on full truth tables. Variables are mapped in universe
// order with ascending candidates, so the first success is the
// lexicographically least witness.
class table_iso_search {
 public:
  table_iso_search(const instance_set& s, const instance_set& u, std::uint64_t max_nodes)
      : n_(s.universe().size()), ms_(model_list(s)), mu_(model_list(u)), max_nodes_(max_nodes) {
    std::vector<bool> tu(std::size_t{1} << n_, false);
    for (auto a : mu_) tu[a] = true;
    tu_ = std::move(tu);
    c1s_ = marginals(ms_);
    c1u_ = marginals(mu_);
    c2s_ = pair_counts(ms_);
    c2u_ = pair_counts(mu_);
  }

  std::optional<std::vector<std::size_t>> run() {
    if (ms_.size() != mu_.size()) return std::nullopt;
    img_.assign(n_, 0);
    used_.assign(n_, false);
    if (dfs(0)) return img_;
    return std::nullopt;
  }

 private:
  std::vector<std::uint64_t> marginals(const std::vector<std::uint32_t>& ms) const {
    std::vector<std::uint64_t> c(n_, 0);
    for (auto a : ms) {
      for (std::size_t v = 0; v < n_; ++v) c[v] += (a >> v) & 1u;
    }
    return c;
  }

  std::vector<std::uint64_t> pair_counts(const std::vector<std::uint32_t>& ms) const {
    std::vector<std::uint64_t> c(n_ * n_, 0);
    for (auto a : ms) {
      for (std::size_t v = 0; v < n_; ++v) {
        if (!((a >> v) & 1u)) continue;
        for (std::size_t w = 0; w < n_; ++w) c[v * n_ + w] += (a >> w) & 1u;
      }
    }
    return c;
  }

  // The projections of S onto the mapped prefix and of U onto its image must
  // agree pattern by pattern.
  bool projections_agree(std::size_t k) const {
    std::vector<std::uint32_t> hs(std::size_t{1} << k, 0), hu(std::size_t{1} << k, 0);
    for (auto a : ms_) {
      std::size_t p = 0;
      for (std::size_t j = 0; j < k; ++j) p |= static_cast<std::size_t>((a >> j) & 1u) << j;
      ++hs[p];
    }
    for (auto a : mu_) {
      std::size_t p = 0;
      for (std::size_t j = 0; j < k; ++j) p |= static_cast<std::size_t>((a >> img_[j]) & 1u) << j;
      ++hu[p];
    }
    return hs == hu;
  }

  bool full_check() const {
    // U(a) = S(a o pi) on every row; model counts already match, so it
    // suffices that each model of S maps onto a model of U.
    for (auto b : ms_) {
      std::uint64_t a = 0;
      for (std::size_t v = 0; v < n_; ++v) a |= static_cast<std::uint64_t>((b >> v) & 1u) << img_[v];
      if (!tu_[a]) return false;
    }
    return true;
  }

  bool dfs(std::size_t v) {
    if (++nodes_ > max_nodes_) throw guard_exceeded("brute_force_iso: search exceeded the node budget");
    if (v == n_) return full_check();
    for (std::size_t w = 0; w < n_; ++w) {
      if (used_[w] || c1s_[v] != c1u_[w]) continue;
      bool ok = true;
      for (std::size_t p = 0; p < v && ok; ++p) ok = c2s_[v * n_ + p] == c2u_[w * n_ + img_[p]];
      if (!ok) continue;
      img_[v] = w;
      used_[w] = true;
      if ((v < 2 || projections_agree(v + 1)) && dfs(v + 1)) return true;
      used_[w] = false;
    }
    return false;
  }

  std::size_t n_;
  std::vector<std::uint32_t> ms_, mu_;
  std::vector<bool> tu_;
  std::vector<std::uint64_t> c1s_, c1u_, c2s_, c2u_;
  std::vector<std::size_t> img_;
  std::vector<bool> used_;
  std::uint64_t nodes_ = 0;
  std::uint64_t max_nodes_;
};

// Semantic projections of one instance: which values each variable, pair
// and triple can take jointly in some model.
struct projections {
  std::size_t n = 0;
  std::vector<std::uint8_t> unary;  // bit b: value b possible
  std::vector<std::uint8_t> pair;   // [v*n+w], bit 2a+b: (v,w)=(a,b) possible
  // triples (i<j<k) whose projection is not implied by the pairs
  std::unordered_map<std::uint64_t, std::uint8_t> triple;
  std::vector<std::vector<std::pair<int, int>>> triples_of;  // v -> other two members

  static std::uint64_t key(std::size_t i, std::size_t j, std::size_t k, std::size_t n) {
    return (static_cast<std::uint64_t>(i) * n + j) * n + k;
  }

  std::uint8_t pair_mask(std::size_t v, std::size_t w) const { return pair[v * n + w]; }

  // pattern bit 4a+2b+c for values (a,b,c) at (i,j,k)
  std::uint8_t implied_triple(std::size_t i, std::size_t j, std::size_t k) const {
    std::uint8_t m = 0;
    for (unsigned p = 0; p < 8; ++p) {
      const unsigned a = p >> 2, b = (p >> 1) & 1, c = p & 1;
      if (((pair_mask(i, j) >> (2 * a + b)) & 1) && ((pair_mask(i, k) >> (2 * a + c)) & 1) &&
          ((pair_mask(j, k) >> (2 * b + c)) & 1)) {
        m |= static_cast<std::uint8_t>(1u << p);
      }
    }
    return m;
  }

  // Mask of the ordered triple (a,b,c) of distinct indices.
  std::uint8_t triple_mask(std::size_t a, std::size_t b, std::size_t c) const {
    std::size_t v[3] = {a, b, c};
    int order[3] = {0, 1, 2};
    std::sort(order, order + 3, [&](int x, int y) { return v[x] < v[y]; });
    const auto it = triple.find(key(v[order[0]], v[order[1]], v[order[2]], n));
    const std::uint8_t sorted = it == triple.end() ? implied_triple(v[order[0]], v[order[1]], v[order[2]]) : it->second;
    // pos[q] = where original position q sits in sorted order
    int pos[3];
    for (int s = 0; s < 3; ++s) pos[order[s]] = s;
    std::uint8_t out = 0;
    for (unsigned p = 0; p < 8; ++p) {
      unsigned sp = 0;
      for (int q = 0; q < 3; ++q) sp |= ((p >> (2 - q)) & 1u) << (2 - pos[q]);
      if ((sorted >> sp) & 1) out |= static_cast<std::uint8_t>(1u << p);
    }
    return out;
  }

  bool is_special(std::size_t a, std::size_t b, std::size_t c) const {
    std::size_t v[3] = {a, b, c};
    std::sort(v, v + 3);
    return triple.contains(key(v[0], v[1], v[2], n));
  }
};

inline projections compute_projections(implication_oracle& o) {
  projections pr;
  const std::size_t n = o.universe().size();
  pr.n = n;
  pr.unary.assign(n, 0);
  pr.pair.assign(n * n, 0);
  pr.triples_of.assign(n, {});
  o.sample(192);
  for (std::size_t v = 0; v < n; ++v) {
    for (int b = 0; b < 2; ++b) {
      if (o.feasible({{static_cast<int>(v), b == 1}})) pr.unary[v] |= static_cast<std::uint8_t>(1u << b);
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t w = v + 1; w < n; ++w) {
      std::uint8_t m = 0;
      for (int p = 0; p < 4; ++p) {
        const bool a = (p >> 1) & 1, b = p & 1;
        if (!((pr.unary[v] >> a) & 1) || !((pr.unary[w] >> b) & 1)) continue;
        if (o.feasible({{static_cast<int>(v), a}, {static_cast<int>(w), b}})) m |= static_cast<std::uint8_t>(1u << p);
      }
      pr.pair[v * n + w] = m;
      // transpose for (w,v)
      std::uint8_t t = 0;
      for (int p = 0; p < 4; ++p) {
        if ((m >> p) & 1) t |= static_cast<std::uint8_t>(1u << (((p & 1) << 1) | (p >> 1)));
      }
      pr.pair[w * n + v] = t;
    }
    pr.pair[v * n + v] = static_cast<std::uint8_t>(((pr.unary[v] & 1) ? 1 : 0) | ((pr.unary[v] & 2) ? 8 : 0));
  }

  // Triples: check the pool in bulk, then confirm missing patterns by search.
  const auto& bits = o.pool_bits();
  for (std::size_t i = 0; i < n; ++i) {
    if (pr.unary[i] != 3) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (pr.unary[j] != 3) continue;
      for (std::size_t k = j + 1; k < n; ++k) {
        if (pr.unary[k] != 3) continue;
        const std::uint8_t implied = pr.implied_triple(i, j, k);
        std::uint8_t seen = 0;
        for (std::size_t w = 0; w < o.word_count() && seen != implied; ++w) {
          const std::uint64_t valid = o.valid_mask(w);
          const std::uint64_t x = bits[i][w], y = bits[j][w], z = bits[k][w];
          for (unsigned p = 0; p < 8; ++p) {
            const std::uint64_t acc = valid & ((p & 4) ? x : ~x) & ((p & 2) ? y : ~y) & ((p & 1) ? z : ~z);
            if (acc) seen |= static_cast<std::uint8_t>(1u << p);
          }
        }
        if (seen == implied) continue;
        std::uint8_t mask = seen;
        for (unsigned p = 0; p < 8; ++p) {
          if (((implied & ~seen) >> p) & 1u) {
            if (o.feasible({{static_cast<int>(i), (p & 4) != 0}, {static_cast<int>(j), (p & 2) != 0},
                            {static_cast<int>(k), (p & 1) != 0}})) {
              mask |= static_cast<std::uint8_t>(1u << p);
            }
          }
        }
        if (mask == implied) continue;
        pr.triple.emplace(projections::key(i, j, k, n), mask);
        pr.triples_of[i].emplace_back(static_cast<int>(j), static_cast<int>(k));
        pr.triples_of[j].emplace_back(static_cast<int>(i), static_cast<int>(k));
        pr.triples_of[k].emplace_back(static_cast<int>(i), static_cast<int>(j));
      }
    }
  }
  return pr;
}

// Colour refinement over both instances jointly, seeded by the projections.
inline std::pair<std::vector<int>, std::vector<int>> refine_colours(const projections& ps, const projections& pu) {
  const std::size_t n = ps.n;
  std::vector<int> cs(n), cu(n);
  for (std::size_t v = 0; v < n; ++v) {
    cs[v] = ps.unary[v];
    cu[v] = pu.unary[v];
  }
  std::size_t classes = 0;
  for (int round = 0; round < static_cast<int>(n) + 1; ++round) {
    std::map<std::vector<int>, int> ids;
    auto signature = [&](const projections& pr, const std::vector<int>& col, std::size_t v) {
      std::vector<int> sig{col[v]};
      std::vector<int> rel;
      for (std::size_t w = 0; w < n; ++w) {
        if (w != v) rel.push_back(pr.pair_mask(v, w) * 1'000'000 + col[w]);
      }
      std::sort(rel.begin(), rel.end());
      sig.insert(sig.end(), rel.begin(), rel.end());
      sig.push_back(-1);
      std::vector<std::int64_t> tri;
      for (const auto& [a, b] : pr.triples_of[v]) {
        auto x = static_cast<std::size_t>(a), y = static_cast<std::size_t>(b);
        std::int64_t m1 = pr.triple_mask(v, x, y), m2 = pr.triple_mask(v, y, x);
        std::int64_t k1 = (m1 * 1'000'000 + col[x]) * 1'000'000 + col[y];
        std::int64_t k2 = (m2 * 1'000'000 + col[y]) * 1'000'000 + col[x];
        tri.push_back(std::min(k1, k2));
      }
      std::sort(tri.begin(), tri.end());
      for (auto t : tri) {
        sig.push_back(static_cast<int>(t >> 31));
        sig.push_back(static_cast<int>(t & 0x7fffffff));
      }
      return sig;
    };
    std::vector<std::vector<int>> ss(n), su(n);
    for (std::size_t v = 0; v < n; ++v) {
      ss[v] = signature(ps, cs, v);
      su[v] = signature(pu, cu, v);
      ids.emplace(ss[v], 0);
      ids.emplace(su[v], 0);
    }
    int next = 0;
    for (auto& [k, id] : ids) id = next++;
    for (std::size_t v = 0; v < n; ++v) {
      cs[v] = ids[ss[v]];
      cu[v] = ids[su[v]];
    }
    if (ids.size() == classes) break;
    classes = ids.size();
  }
  return {cs, cu};
}

// Backtracking over colour-compatible candidates with projection and
// implication checks; success at a leaf means mutual implication.
class projection_iso_search {
 public:
  projection_iso_search(const instance_set& s, const instance_set& u, const iso_options& opt)
      : s_(s), u_(u), n_(s.universe().size()), os_(s, 0, opt.seed), ou_(u, 0, opt.seed + 1), max_nodes_(opt.max_nodes) {}

  std::optional<std::vector<std::size_t>> run() {
    if (os_.satisfiable() != ou_.satisfiable()) return std::nullopt;
    if (!os_.satisfiable()) {
      std::vector<std::size_t> id(n_);
      std::iota(id.begin(), id.end(), 0);
      return id;
    }
    ps_ = compute_projections(os_);
    pu_ = compute_projections(ou_);
    if (ps_.triple.size() != pu_.triple.size()) return std::nullopt;
    std::tie(cs_, cu_) = refine_colours(ps_, pu_);
    {
      auto a = cs_, b = cu_;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (a != b) return std::nullopt;
    }
    index_apps(s_, apps_s_, apps_of_s_);
    index_apps(u_, apps_u_, apps_of_u_);
    choose_order();
    img_.assign(n_, npos);
    pre_.assign(n_, npos);
    if (dfs(0)) return img_;
    return std::nullopt;
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  struct app_ref {
    std::vector<int> vars;
    const truth_table* local;
  };

  static void index_apps(const instance_set& s, std::vector<app_ref>& out, std::vector<std::vector<int>>& of) {
    of.assign(s.universe().size(), {});
    for (const auto& a : s.apps()) {
      if (a.is_tautology()) continue;
      app_ref r{{}, &a.local()};
      for (const auto& v : a.vars()) r.vars.push_back(static_cast<int>(s.index_of(v)));
      for (int v : r.vars) of[static_cast<std::size_t>(v)].push_back(static_cast<int>(out.size()));
      out.push_back(std::move(r));
    }
  }

  // Smallest colour classes first, then variables tied to ones already placed.
  void choose_order() {
    std::map<int, std::size_t> size;
    for (int c : cs_) ++size[c];
    std::vector<bool> placed(n_, false);
    std::vector<int> link(n_, 0);
    for (std::size_t step = 0; step < n_; ++step) {
      std::size_t best = npos;
      for (std::size_t v = 0; v < n_; ++v) {
        if (placed[v]) continue;
        if (best == npos) {
          best = v;
          continue;
        }
        const auto sv = size[cs_[v]], sb = size[cs_[best]];
        if (link[v] > link[best] || (link[v] == link[best] && sv < sb)) best = v;
      }
      placed[best] = true;
      order_.push_back(best);
      for (int a : apps_of_s_[best]) {
        for (int w : apps_s_[static_cast<std::size_t>(a)].vars) ++link[static_cast<std::size_t>(w)];
      }
      for (const auto& [a, b] : ps_.triples_of[best]) {
        ++link[static_cast<std::size_t>(a)];
        ++link[static_cast<std::size_t>(b)];
      }
    }
  }

  bool consistent(std::size_t v, std::size_t w) {
    for (std::size_t p : order_) {
      if (img_[p] == npos) break;
      if (ps_.pair_mask(v, p) != pu_.pair_mask(w, img_[p])) return false;
    }
    for (const auto& [a, b] : ps_.triples_of[v]) {
      const auto x = static_cast<std::size_t>(a), y = static_cast<std::size_t>(b);
      if (img_[x] == npos || img_[y] == npos) continue;
      if (ps_.triple_mask(v, x, y) != pu_.triple_mask(w, img_[x], img_[y])) return false;
    }
    for (const auto& [a, b] : pu_.triples_of[w]) {
      const auto x = static_cast<std::size_t>(a), y = static_cast<std::size_t>(b);
      if (pre_[x] == npos || pre_[y] == npos) continue;
      if (!ps_.is_special(v, pre_[x], pre_[y])) return false;
    }
    return true;
  }

  bool apps_hold(std::size_t v, std::size_t w) {
    for (int ai : apps_of_s_[v]) {
      const auto& a = apps_s_[static_cast<std::size_t>(ai)];
      std::vector<int> idx;
      for (int x : a.vars) {
        const auto m = img_[static_cast<std::size_t>(x)];
        if (m == npos) break;
        idx.push_back(static_cast<int>(m));
      }
      if (idx.size() == a.vars.size() && !ou_.implies_indexed(idx, *a.local)) return false;
    }
    for (int ai : apps_of_u_[w]) {
      const auto& a = apps_u_[static_cast<std::size_t>(ai)];
      std::vector<int> idx;
      for (int x : a.vars) {
        const auto m = pre_[static_cast<std::size_t>(x)];
        if (m == npos) break;
        idx.push_back(static_cast<int>(m));
      }
      if (idx.size() == a.vars.size() && !os_.implies_indexed(idx, *a.local)) return false;
    }
    return true;
  }

  bool dfs(std::size_t depth) {
    if (++nodes_ > max_nodes_) throw guard_exceeded("brute_force_iso: search exceeded the node budget");
    if (depth == n_) return true;
    const std::size_t v = order_[depth];
    for (std::size_t w = 0; w < n_; ++w) {
      if (pre_[w] != npos || cu_[w] != cs_[v]) continue;
      if (!consistent(v, w)) continue;
      img_[v] = w;
      pre_[w] = v;
      if (apps_hold(v, w) && dfs(depth + 1)) return true;
      img_[v] = npos;
      pre_[w] = npos;
    }
    return false;
  }

  const instance_set& s_;
  const instance_set& u_;
  std::size_t n_;
  implication_oracle os_, ou_;
  projections ps_, pu_;
  std::vector<int> cs_, cu_;
  std::vector<app_ref> apps_s_, apps_u_;
  std::vector<std::vector<int>> apps_of_s_, apps_of_u_;
  std::vector<std::size_t> order_, img_, pre_;
  std::uint64_t nodes_ = 0;
  std::uint64_t max_nodes_;
};

}  // namespace detail

/// Some pi with pi(S) equivalent to U, over the union of both universes.
/// Small universes are searched on truth tables and yield the
/// lexicographically least witness; larger ones use semantic projections
/// and a SAT-backed implication oracle, still exact.
inline std::optional<permutation> brute_force_iso(const instance_set& s, const instance_set& u,
                                                  const iso_options& opt = {}) {
  auto [a, b] = align(s, u);
  const auto n = a.universe().size();
  if (n > opt.max_perm_vars) {
    throw guard_exceeded("brute_force_iso: universe of " + std::to_string(n) + " variables exceeds the guard of " +
                         std::to_string(opt.max_perm_vars));
  }
  std::optional<std::vector<std::size_t>> img;
  if (n <= opt.table_engine_limit && n <= 24) {
    img = detail::table_iso_search(a, b, opt.max_nodes).run();
  } else {
    img = detail::projection_iso_search(a, b, opt).run();
  }
  if (!img) return std::nullopt;
  return permutation::from_indices(a.universe(), *img);
}

/// Some pi with pi(S) = U as sets of applications (no semantics involved).
inline std::optional<permutation> syntactic_iso(const instance_set& s, const instance_set& u,
                                                std::size_t max_vars = default_max_perm_vars) {
  auto [a, b] = align(s, u);
  const auto& x = a.universe();
  if (x.size() > max_vars) throw guard_exceeded("syntactic_iso: universe exceeds the guard");
  if (a.size() != b.size()) return std::nullopt;
  std::vector<std::size_t> img(x.size());
  std::iota(img.begin(), img.end(), 0);
  do {
    auto p = permutation::from_indices(x, img);
    if (apply_permutation(p, a) == b) return p;
  } while (std::next_permutation(img.begin(), img.end()));
  return std::nullopt;
}

}  // namespace cspiso
