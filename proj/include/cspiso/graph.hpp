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
#include <vector>

#include "cspiso/error.hpp"

namespace cspiso {

/// Simple undirected graph on vertices 1..n. Edges are stored as (i,j) with
/// i < j in lexicographic order, which is the standard edge enumeration.
class graph {
 public:
  using edge = std::pair<int, int>;

  graph() = default;

  graph(int n, std::vector<edge> edges) : n_(n) {
    if (n < 0) throw invalid_input("graph: negative vertex count");
    for (auto& [a, b] : edges) {
      if (a < 1 || b < 1 || a > n || b > n) {
        throw invalid_input("graph: edge {" + std::to_string(a) + "," + std::to_string(b) + "} out of range");
      }
      if (a == b) throw invalid_input("graph: self-loop at " + std::to_string(a));
      if (a > b) std::swap(a, b);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) throw invalid_input("graph: duplicate edge");
    edges_ = std::move(edges);
    adj_.assign(static_cast<std::size_t>(n) + 1, std::vector<bool>(static_cast<std::size_t>(n) + 1, false));
    for (auto [a, b] : edges_) {
      adj_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
      adj_[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = true;
    }
  }

  int n() const { return n_; }
  std::size_t m() const { return edges_.size(); }
  const std::vector<edge>& edges() const { return edges_; }
  bool adjacent(int a, int b) const { return adj_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }

  int degree(int v) const {
    int d = 0;
    for (int w = 1; w <= n_; ++w) d += adjacent(v, w) ? 1 : 0;
    return d;
  }

  int isolated_count() const {
    int c = 0;
    for (int v = 1; v <= n_; ++v) c += degree(v) == 0 ? 1 : 0;
    return c;
  }

  int min_degree() const {
    int d = n_ == 0 ? 0 : n_;
    for (int v = 1; v <= n_; ++v) d = std::min(d, degree(v));
    return d;
  }

  bool triangle_free() const {
    for (auto [a, b] : edges_) {
      for (int c = 1; c <= n_; ++c) {
        if (adjacent(a, c) && adjacent(b, c)) return false;
      }
    }
    return true;
  }

  friend bool operator==(const graph& a, const graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

 private:
  int n_ = 0;
  std::vector<edge> edges_;
  std::vector<std::vector<bool>> adj_;
};

/// The image of g under the vertex map v -> p[v-1].
inline graph relabel(const graph& g, const std::vector<int>& p) {
  std::vector<graph::edge> es;
  for (auto [a, b] : g.edges()) es.emplace_back(p.at(static_cast<std::size_t>(a - 1)), p.at(static_cast<std::size_t>(b - 1)));
  return graph(g.n(), std::move(es));
}

namespace detail {

// Joint colour refinement starting from degrees.
inline std::pair<std::vector<int>, std::vector<int>> graph_colours(const graph& g, const graph& h) {
  const int n = g.n();
  std::vector<int> cg(static_cast<std::size_t>(n) + 1, 0), ch(static_cast<std::size_t>(n) + 1, 0);
  for (int v = 1; v <= n; ++v) {
    cg[static_cast<std::size_t>(v)] = g.degree(v);
    ch[static_cast<std::size_t>(v)] = h.degree(v);
  }
  std::size_t classes = 0;
  while (true) {
    std::map<std::vector<int>, int> ids;
    auto sig = [&](const graph& x, const std::vector<int>& c, int v) {
      std::vector<int> s;
      for (int w = 1; w <= n; ++w) {
        if (x.adjacent(v, w)) s.push_back(c[static_cast<std::size_t>(w)]);
      }
      std::sort(s.begin(), s.end());
      s.insert(s.begin(), c[static_cast<std::size_t>(v)]);
      return s;
    };
    std::vector<std::vector<int>> sg(static_cast<std::size_t>(n) + 1), sh(static_cast<std::size_t>(n) + 1);
    for (int v = 1; v <= n; ++v) {
      sg[static_cast<std::size_t>(v)] = sig(g, cg, v);
      sh[static_cast<std::size_t>(v)] = sig(h, ch, v);
      ids.emplace(sg[static_cast<std::size_t>(v)], 0);
      ids.emplace(sh[static_cast<std::size_t>(v)], 0);
    }
    int next = 0;
    for (auto& [k, id] : ids) id = next++;
    for (int v = 1; v <= n; ++v) {
      cg[static_cast<std::size_t>(v)] = ids[sg[static_cast<std::size_t>(v)]];
      ch[static_cast<std::size_t>(v)] = ids[sh[static_cast<std::size_t>(v)]];
    }
    if (ids.size() == classes) break;
    classes = ids.size();
  }
  return {cg, ch};
}

}  // namespace detail

/// A vertex bijection p (p[v-1] is the image of v) with g mapped onto h, or
/// nothing. The first witness in lexicographic order is returned.
inline std::optional<std::vector<int>> brute_force_graph_iso(const graph& g, const graph& h, int max_vertices = 10) {
  if (g.n() > max_vertices || h.n() > max_vertices) {
    throw guard_exceeded("brute_force_graph_iso: more than " + std::to_string(max_vertices) + " vertices");
  }
  if (g.n() != h.n() || g.m() != h.m()) return std::nullopt;
  const int n = g.n();
  auto [cg, ch] = detail::graph_colours(g, h);
  {
    auto a = cg, b = ch;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return std::nullopt;
  }
  std::vector<int> img(static_cast<std::size_t>(n) + 1, 0);
  std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
  auto dfs = [&](auto&& self, int v) -> bool {
    if (v > n) return true;
    for (int w = 1; w <= n; ++w) {
      if (used[static_cast<std::size_t>(w)] || cg[static_cast<std::size_t>(v)] != ch[static_cast<std::size_t>(w)]) continue;
      bool ok = true;
      for (int u = 1; u < v && ok; ++u) ok = g.adjacent(u, v) == h.adjacent(img[static_cast<std::size_t>(u)], w);
      if (!ok) continue;
      img[static_cast<std::size_t>(v)] = w;
      used[static_cast<std::size_t>(w)] = true;
      if (self(self, v + 1)) return true;
      used[static_cast<std::size_t>(w)] = false;
    }
    return false;
  };
  if (!dfs(dfs, 1)) return std::nullopt;
  return std::vector<int>(img.begin() + 1, img.end());
}

struct preprocess_stats {
  int isolated_removed = 0;
  int n1 = 0, n2 = 0, m2 = 0, n3 = 0, m3 = 0;
};

struct preprocess_result {
  bool not_isomorphic = false;
  std::string reason;
  graph g, h;
  preprocess_stats stats;
};

namespace detail {

inline graph drop_isolated(const graph& g) {
  std::vector<int> id(static_cast<std::size_t>(g.n()) + 1, 0);
  int next = 0;
  for (int v = 1; v <= g.n(); ++v) {
    if (g.degree(v) > 0) id[static_cast<std::size_t>(v)] = ++next;
  }
  std::vector<graph::edge> es;
  for (auto [a, b] : g.edges()) es.emplace_back(id[static_cast<std::size_t>(a)], id[static_cast<std::size_t>(b)]);
  return graph(next, std::move(es));
}

inline graph add_apex(const graph& g) {
  auto es = g.edges();
  for (int v = 1; v <= g.n(); ++v) es.emplace_back(v, g.n() + 1);
  return graph(g.n() + 1, std::move(es));
}

// Vertex k of the result stands for edge k for n < k; edges are incidences.
inline graph subdivide(const graph& g) {
  std::vector<graph::edge> es;
  int k = g.n();
  for (auto [a, b] : g.edges()) {
    ++k;
    es.emplace_back(a, k);
    es.emplace_back(b, k);
  }
  return graph(k, std::move(es));
}

}  // namespace detail

/// Turns (g, h) into a pair with minimum degree 2 and no triangles that is
/// isomorphic iff the input pair is, or reports an early negative answer.
inline preprocess_result preprocess_pair(const graph& g, const graph& h) {
  preprocess_result r;
  if (g.n() != h.n()) {
    r.not_isomorphic = true;
    r.reason = "vertex counts differ";
    return r;
  }
  if (g.m() != h.m()) {
    r.not_isomorphic = true;
    r.reason = "edge counts differ";
    return r;
  }
  if (g.isolated_count() != h.isolated_count()) {
    r.not_isomorphic = true;
    r.reason = "isolated vertex counts differ";
    return r;
  }
  const graph g1 = detail::drop_isolated(g), h1 = detail::drop_isolated(h);
  if (g1.n() < 3) throw invalid_input("preprocess_pair: fewer than 3 non-isolated vertices");
  const graph g2 = detail::add_apex(g1), h2 = detail::add_apex(h1);
  r.g = detail::subdivide(g2);
  r.h = detail::subdivide(h2);
  r.stats = {g.isolated_count(), g1.n(), g2.n(), static_cast<int>(g2.m()), r.g.n(), static_cast<int>(r.g.m())};
  return r;
}

/// Every graph on n labelled vertices.
inline std::vector<graph> all_graphs(int n) {
  std::vector<graph::edge> slots;
  for (int a = 1; a <= n; ++a) {
    for (int b = a + 1; b <= n; ++b) slots.emplace_back(a, b);
  }
  std::vector<graph> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << slots.size()); ++mask) {
    std::vector<graph::edge> es;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if ((mask >> i) & 1u) es.push_back(slots[i]);
    }
    out.emplace_back(n, std::move(es));
  }
  return out;
}

/// One representative per isomorphism class of graphs on n vertices.
inline std::vector<graph> nonisomorphic_graphs(int n) {
  std::vector<graph> reps;
  for (const auto& g : all_graphs(n)) {
    bool fresh = true;
    for (const auto& r : reps) {
      if (brute_force_graph_iso(g, r, n)) {
        fresh = false;
        break;
      }
    }
    if (fresh) reps.push_back(g);
  }
  return reps;
}

}  // namespace cspiso
