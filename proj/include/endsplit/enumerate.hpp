#pragma once

// Enumeration of k-tight separations containing a vertex and k-tight cuts
// containing an edge. Candidates are found by path branching inside a band
// around the anchor; every candidate is then verified exactly on a fresh
// analysis window. The band is doubled until two consecutive runs agree
// (identical lists), and the enumeration refuses rather than return a
// possibly-truncated list when the radius cap is hit.
//
// A separator is tight iff it is a minimal big-left/big-right separator of
// exactly the requested order: condition 4 (every separator vertex adjacent
// to both big components) is precisely separator minimality. Minimality also
// prunes the search: once a partial set already separates, no strict
// superset can be tight.

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "endsplit/ends.hpp"
#include "endsplit/graph.hpp"
#include "endsplit/separation.hpp"

namespace endsplit {

struct Cut {
  std::vector<EdgeKey> edges;  // sorted canonical
  int order() const { return static_cast<int>(edges.size()); }
  bool finite_side = false;  // one side of the partition is finite
};

// Explicit neighborhood of a vertex in the infinite graph. Returns false
// (and an empty list) for apexes of infinite degree.
inline bool finite_neighbors(const PeriodicGraph& g, const Vertex& v,
                             std::vector<Vertex>& out) {
  out.clear();
  if (v.apex) {
    const Apex* a = g.find_apex(v.id);
    if (!a) throw Error(ErrorCode::InvalidInput, "unknown apex");
    if (a->infinite_degree()) return false;
    for (const auto& [col, p] : a->patterns)
      for (int i : p.indices) out.push_back(Vertex::cell(col, i));
    for (const auto& [x, y] : g.apex_edges) {
      if (x == v.id) out.push_back(Vertex::make_apex(y));
      if (y == v.id) out.push_back(Vertex::make_apex(x));
    }
  } else {
    for (const auto& [x, y] : g.intra) {
      if (x == v.id) out.push_back(Vertex::cell(y, v.index));
      if (y == v.id) out.push_back(Vertex::cell(x, v.index));
    }
    for (const auto& s : g.skew) {
      if (s.from == v.id) out.push_back(Vertex::cell(s.to, v.index + s.d));
      if (s.to == v.id) out.push_back(Vertex::cell(s.from, v.index - s.d));
    }
    for (const auto& a : g.apexes)
      if (a.adjacent(v.id, v.index)) out.push_back(Vertex::make_apex(a.id));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return true;
}

namespace detail {

struct EnumContext {
  const PeriodicGraph* g;
  int center;  // anchor layer
  int band;    // candidate vertices within |index - center| <= band
  int radius;  // window radius
  Window window;

  EnumContext(const PeriodicGraph& graph, int center_layer, int band_hw)
      : g(&graph),
        center(center_layer),
        band(band_hw),
        radius(std::abs(center_layer) + band_hw + 2 * graph.stabilization_radius()),
        window(graph, radius) {}

  bool in_band(const Vertex& v) const {
    return v.apex || std::abs(v.index - center) <= band;
  }
  bool is_terminal_left(const Vertex& v) const {
    return !v.apex && v.index < center - band;
  }
  bool is_terminal_right(const Vertex& v) const {
    return !v.apex && v.index > center + band;
  }

  // Shortest left-terminal to right-terminal path avoiding blocked vertices
  // and blocked edges; empty when separated.
  std::vector<int> terminal_path(const std::vector<char>& blocked_v,
                                 const std::set<std::pair<int, int>>* blocked_e = nullptr) const {
    std::vector<int> parent(window.size(), -2);
    std::queue<int> q;
    for (int i = 0; i < window.size(); ++i)
      if (is_terminal_left(window.vertex(i)) && !blocked_v[i]) {
        parent[i] = -1;
        q.push(i);
      }
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      if (is_terminal_right(window.vertex(u))) {
        std::vector<int> path;
        for (int x = u; x >= 0; x = parent[x]) path.push_back(x);
        std::reverse(path.begin(), path.end());
        return path;
      }
      for (int t : window.neighbors(u)) {
        if (blocked_v[t] || parent[t] != -2) continue;
        if (blocked_e && blocked_e->count({std::min(u, t), std::max(u, t)})) continue;
        parent[t] = u;
        q.push(t);
      }
    }
    return {};
  }
};

inline std::set<std::vector<Vertex>> tight_separator_candidates(const PeriodicGraph& g,
                                                                const Vertex& v, int k,
                                                                int band) {
  EnumContext ctx(g, v.index, band);
  std::set<std::vector<Vertex>> found, visited;

  std::function<void(std::set<Vertex>&)> branch = [&](std::set<Vertex>& s) {
    std::vector<Vertex> key(s.begin(), s.end());
    if (!visited.insert(key).second) return;

    std::vector<char> blocked(ctx.window.size(), 0);
    for (const auto& x : s) {
      int i = ctx.window.id_of(x);
      if (i >= 0) blocked[i] = 1;
    }
    auto path = ctx.terminal_path(blocked);
    if (path.empty()) {
      if (static_cast<int>(s.size()) == k) found.insert(key);
      return;  // supersets of a separating set are never minimal
    }
    if (static_cast<int>(s.size()) >= k) return;
    for (int u : path) {
      const Vertex& cand = ctx.window.vertex(u);
      if (!ctx.in_band(cand) || s.count(cand)) continue;
      s.insert(cand);
      branch(s);
      s.erase(cand);
    }
  };

  std::set<Vertex> start{v};
  branch(start);
  return found;
}

// Exact tightness of a candidate separator: separates the ends and every
// separator vertex is adjacent to both big components.
inline bool verify_tight_separator(const PeriodicGraph& g, const std::vector<Vertex>& s) {
  std::set<Vertex> sv(s.begin(), s.end());
  SeparatorAnalysis an(g, sv);
  if (!an.separates()) return false;
  for (const auto& x : s)
    if (!an.sep_vertex_adjacent_to(x, true) || !an.sep_vertex_adjacent_to(x, false))
      return false;
  return true;
}

}  // namespace detail

// All k-tight separations whose separator contains v, in canonical
// orientation (A holds the right end, small components go to A*).
inline std::vector<TightSeparation> enumerate_k_tight_separations(
    const PeriodicGraph& g, const Vertex& v, int k, const Stabilization& stab = {}) {
  require_no_dominated_ends(g);
  if (v.apex || !g.has_cell(v.id))
    throw Error(ErrorCode::InvalidInput, "tight enumeration anchors at a cell vertex");
  if (k < 1) throw Error(ErrorCode::InvalidInput, "k must be >= 1");

  const int nstar = g.stabilization_radius();
  const int cap = stab.radius_cap_mult * nstar;
  int band = std::max(4, 3 * (g.pattern_reach() + 1));
  std::set<std::vector<Vertex>> accepted;
  bool stable = false;
  for (; band <= cap; band *= 2) {
    auto r1 = detail::tight_separator_candidates(g, v, k, band);
    auto r2 = detail::tight_separator_candidates(g, v, k, 2 * band);
    std::set<std::vector<Vertex>> v1, v2;
    for (const auto& s : r1)
      if (detail::verify_tight_separator(g, s)) v1.insert(s);
    for (const auto& s : r2)
      if (detail::verify_tight_separator(g, s)) v2.insert(s);
    if (v1 == v2) {
      accepted = v1;
      stable = true;
      break;
    }
    log_line(1, "tight separation enumeration unstable at band " + std::to_string(band));
  }
  if (!stable) throw Error(ErrorCode::Unstable, "unstable enumeration at radius cap");

  std::vector<TightSeparation> out;
  for (const auto& s : accepted) {
    std::set<Vertex> sv(s.begin(), s.end());
    SeparatorAnalysis an(g, sv);
    out.push_back(TightSeparation{an.to_separation(), k});
  }
  return out;
}

namespace detail {

// Logical component structure of Gamma minus an edge set: window components
// with everything reaching deep-left merged, everything reaching deep-right
// merged (single tail component per side for two-ended graphs). A tight cut
// leaves exactly two logical components with every cut edge crossing them.
inline bool verify_tight_cut(const PeriodicGraph& g, const std::vector<EdgeKey>& cut,
                             bool* finite_side_out = nullptr) {
  int band = 1;
  for (const auto& [a, b] : cut) {
    if (!a.apex) band = std::max(band, std::abs(a.index));
    if (!b.apex) band = std::max(band, std::abs(b.index));
  }
  const int nstar = g.stabilization_radius();
  const int deep = band + nstar;
  Window w(g, deep + nstar);
  std::set<std::pair<int, int>> blocked_e;
  for (const auto& [a, b] : cut) {
    int i = w.id_of(a), j = w.id_of(b);
    if (i < 0 || j < 0) return false;
    blocked_e.insert({std::min(i, j), std::max(i, j)});
  }
  // components with edges removed
  std::vector<int> comp(w.size(), -1);
  int next = 0;
  for (int s = 0; s < w.size(); ++s) {
    if (comp[s] != -1) continue;
    comp[s] = next;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int t : w.neighbors(u)) {
        if (blocked_e.count({std::min(u, t), std::max(u, t)})) continue;
        if (comp[t] == -1) {
          comp[t] = next;
          q.push(t);
        }
      }
    }
    ++next;
  }
  // Merge by deep reach: the deep tail on each side is a single component of
  // the infinite graph, so every window component touching it belongs to one
  // logical side component; a component touching both deep regions merges
  // the two groups.
  std::vector<char> deep_l(next, 0), deep_r(next, 0);
  bool any_l = false, any_r = false, both_merged = false;
  for (int i = 0; i < w.size(); ++i) {
    const Vertex& x = w.vertex(i);
    if (x.apex) continue;
    if (x.index >= deep) deep_r[comp[i]] = 1;
    if (x.index <= -deep) deep_l[comp[i]] = 1;
  }
  for (int c = 0; c < next; ++c) {
    any_r = any_r || deep_r[c];
    any_l = any_l || deep_l[c];
    both_merged = both_merged || (deep_r[c] && deep_l[c]);
  }
  int nlog = 0;
  int rlab = any_r ? nlog++ : -1;
  int llab = both_merged ? rlab : (any_l ? nlog++ : -1);
  std::vector<int> logical(next);
  for (int c = 0; c < next; ++c) {
    if (deep_r[c]) logical[c] = rlab;
    else if (deep_l[c]) logical[c] = llab;
    else logical[c] = nlog++;
  }
  if (nlog != 2) return false;
  for (const auto& [a, b] : cut) {
    int i = w.id_of(a), j = w.id_of(b);
    if (logical[comp[i]] == logical[comp[j]]) return false;
  }
  if (finite_side_out) *finite_side_out = both_merged;
  return true;
}

inline std::set<std::vector<EdgeKey>> end_separating_cut_candidates(const PeriodicGraph& g,
                                                                    const EdgeKey& e, int k,
                                                                    int band) {
  int center = e.first.apex ? (e.second.apex ? 0 : e.second.index) : e.first.index;
  EnumContext ctx(g, center, band);
  std::set<std::vector<EdgeKey>> found, visited;

  auto to_ids = [&](const std::set<EdgeKey>& cut) {
    std::set<std::pair<int, int>> ids;
    for (const auto& [a, b] : cut) {
      int i = ctx.window.id_of(a), j = ctx.window.id_of(b);
      if (i >= 0 && j >= 0) ids.insert({std::min(i, j), std::max(i, j)});
    }
    return ids;
  };

  std::function<void(std::set<EdgeKey>&)> branch = [&](std::set<EdgeKey>& cut) {
    std::vector<EdgeKey> key(cut.begin(), cut.end());
    if (!visited.insert(key).second) return;
    std::vector<char> blocked_v(ctx.window.size(), 0);
    auto ids = to_ids(cut);
    auto path = ctx.terminal_path(blocked_v, &ids);
    if (path.empty()) {
      if (static_cast<int>(cut.size()) == k) found.insert(key);
      return;
    }
    if (static_cast<int>(cut.size()) >= k) return;
    for (size_t t = 0; t + 1 < path.size(); ++t) {
      const Vertex& a = ctx.window.vertex(path[t]);
      const Vertex& b = ctx.window.vertex(path[t + 1]);
      if (!ctx.in_band(a) && !ctx.in_band(b)) continue;
      EdgeKey cand = edge_key(a, b);
      if (cut.count(cand)) continue;
      cut.insert(cand);
      branch(cut);
      cut.erase(cand);
    }
  };

  std::set<EdgeKey> start{e};
  branch(start);
  return found;
}

inline std::set<std::vector<EdgeKey>> finite_side_cut_candidates(const PeriodicGraph& g,
                                                                 const EdgeKey& e, int k,
                                                                 int band) {
  int center = e.first.apex ? (e.second.apex ? 0 : e.second.index) : e.first.index;
  EnumContext ctx(g, center, band);
  std::set<std::vector<EdgeKey>> found;
  const size_t size_cap =
      static_cast<size_t>((k + 2) * (g.pattern_reach() + 1) *
                          (static_cast<int>(g.cell.size() + g.apexes.size()) + 2));

  // classic connected-subgraph enumeration: each connected set visited once
  std::function<void(std::set<Vertex>&, std::set<Vertex>&)> grow =
      [&](std::set<Vertex>& a, std::set<Vertex>& forbidden) {
        // boundary edges of a
        std::vector<EdgeKey> boundary;
        int unabsorbable = 0;
        std::vector<Vertex> nbrs;
        std::set<Vertex> frontier;
        for (const auto& x : a) {
          if (!finite_neighbors(g, x, nbrs)) return;  // infinite degree inside a
          for (const auto& y : nbrs) {
            if (a.count(y)) continue;
            boundary.push_back(edge_key(x, y));
            if (forbidden.count(y) || !ctx.in_band(y)) ++unabsorbable;
            else frontier.insert(y);
          }
        }
        if (unabsorbable > k || a.size() > size_cap) return;
        if (static_cast<int>(boundary.size()) == k) {
          std::sort(boundary.begin(), boundary.end());
          if (std::binary_search(boundary.begin(), boundary.end(), e))
            found.insert(boundary);
        }
        std::vector<Vertex> ext(frontier.begin(), frontier.end());
        std::set<Vertex> forb = forbidden;
        for (const auto& u : ext) {
          a.insert(u);
          grow(a, forb);
          a.erase(u);
          forb.insert(u);
        }
      };

  const std::pair<Vertex, Vertex> legs[2] = {{e.first, e.second}, {e.second, e.first}};
  for (const auto& [anchor, excluded] : legs) {
    std::set<Vertex> a{anchor}, forbidden{excluded};
    grow(a, forbidden);
  }
  return found;
}

}  // namespace detail

// All k-tight cuts containing the edge e: both end-separating cuts and cuts
// with one finite connected side (both sides must induce connected
// subgraphs).
inline std::vector<Cut> enumerate_k_tight_cuts(const PeriodicGraph& g, const Vertex& ea,
                                               const Vertex& eb, int k,
                                               const Stabilization& stab = {}) {
  require_no_dominated_ends(g);
  if (!g.adjacent(ea, eb)) throw Error(ErrorCode::InvalidInput, "anchor edge not in graph");
  if (k < 1) throw Error(ErrorCode::InvalidInput, "k must be >= 1");
  EdgeKey e = edge_key(ea, eb);

  const int nstar = g.stabilization_radius();
  const int cap = stab.radius_cap_mult * nstar;
  int band = std::max(4, 3 * (g.pattern_reach() + 1));
  std::set<std::vector<EdgeKey>> accepted;
  bool stable = false;
  for (; band <= cap; band *= 2) {
    std::set<std::vector<EdgeKey>> v1, v2;
    for (int pass = 0; pass < 2; ++pass) {
      int b = pass == 0 ? band : 2 * band;
      auto cand = detail::end_separating_cut_candidates(g, e, k, b);
      auto fin = detail::finite_side_cut_candidates(g, e, k, b);
      cand.insert(fin.begin(), fin.end());
      for (const auto& c : cand)
        if (detail::verify_tight_cut(g, c)) (pass == 0 ? v1 : v2).insert(c);
    }
    if (v1 == v2) {
      accepted = v1;
      stable = true;
      break;
    }
    log_line(1, "tight cut enumeration unstable at band " + std::to_string(band));
  }
  if (!stable) throw Error(ErrorCode::Unstable, "unstable enumeration at radius cap");

  std::vector<Cut> out;
  for (const auto& c : accepted) {
    Cut cut;
    cut.edges = c;
    detail::verify_tight_cut(g, c, &cut.finite_side);
    out.push_back(std::move(cut));
  }
  return out;
}

}  // namespace endsplit
