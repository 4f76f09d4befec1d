#pragma once

// Ends of the periodic graph: counting, domination, the rho measure, small
// component diameters, far vertices, and construction of type 1 / type 2
// separations.
//
// End counting works on the cell-only graph: deleting the finitely many
// apexes never changes the end space, and per side the number of ends equals
// the number of infinite components of a half-space, which is invariant
// under the shift. A component of the half-space strip is infinite exactly
// when it spans the strip; dangling finite pieces have bounded span by the
// pumping argument (a component of a shift-invariant subgraph whose span
// exceeds (|cells|+1) * reach maps into itself under a shift and is
// therefore infinite).

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "endsplit/automorphism.hpp"
#include "endsplit/graph.hpp"
#include "endsplit/periodic_set.hpp"
#include "endsplit/separation.hpp"

namespace endsplit {

// ---------------------------------------------------------------------------
// end counting

namespace detail {

// Number of infinite components of the half-space toward `dir`, computed on
// the strip of layers between nstar and 3*nstar inside a 4*nstar window.
inline int side_end_count(const PeriodicGraph& g, EndDir dir) {
  const int nstar = g.stabilization_radius();
  const int reach = g.pattern_reach();
  const int sgn = dir == EndDir::Right ? 1 : -1;
  Window w(g, 4 * nstar);
  // block apexes and everything outside the half-space region
  std::vector<char> blocked(w.size(), 0);
  for (int i = 0; i < w.size(); ++i) {
    const Vertex& v = w.vertex(i);
    if (v.apex || sgn * v.index < nstar) blocked[i] = 1;
  }
  auto comp = w.components(&blocked);
  std::map<int, std::pair<int, int>> extent;  // label -> (min |layer|, max |layer|)
  for (int i = 0; i < w.size(); ++i) {
    if (comp[i] < 0) continue;
    int layer = sgn * w.vertex(i).index;
    auto it = extent.find(comp[i]);
    if (it == extent.end()) extent[comp[i]] = {layer, layer};
    else {
      it->second.first = std::min(it->second.first, layer);
      it->second.second = std::max(it->second.second, layer);
    }
  }
  int count = 0;
  for (const auto& [label, ex] : extent)
    if (ex.first <= nstar + reach && ex.second >= 3 * nstar - reach) ++count;
  return count;
}

}  // namespace detail

// Number of ends of the infinite graph. Valid model instances have two; the
// count is reported honestly (a value above 2 arises from presentations with
// several parallel strands that are only finitely linked).
inline int count_ends(const PeriodicGraph& g) {
  if (!is_connected(g)) throw Error(ErrorCode::Disconnected, "disconnected");
  return detail::side_end_count(g, EndDir::Left) +
         detail::side_end_count(g, EndDir::Right);
}

inline void require_two_ended(const PeriodicGraph& g) {
  if (count_ends(g) != 2) throw Error(ErrorCode::NotTwoEnded, "not two-ended");
}

// ---------------------------------------------------------------------------
// dominated ends

// Only apexes can dominate: cell vertices have finite degree, and a finite
// degree vertex is cut off from an end by the layer separator just past its
// neighborhood. An apex dominates the end on each side toward which one of
// its patterns is infinite.
inline std::vector<std::pair<EndDir, std::string>> dominated_ends(const PeriodicGraph& g) {
  require_two_ended(g);
  std::vector<std::pair<EndDir, std::string>> out;
  for (const auto& a : g.apexes) {
    if (a.infinite_toward(EndDir::Left)) out.emplace_back(EndDir::Left, a.id);
    if (a.infinite_toward(EndDir::Right)) out.emplace_back(EndDir::Right, a.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline void require_no_dominated_ends(const PeriodicGraph& g) {
  auto dom = dominated_ends(g);
  if (!dom.empty()) {
    std::string msg = "dominated end:";
    for (const auto& [d, a] : dom) msg += std::string(" (") + end_dir_name(d) + "," + a + ")";
    throw RefusalError(ErrorCode::DominatedEnd, msg, dom);
  }
}

// ---------------------------------------------------------------------------
// rho

struct RhoValue {
  bool finite = true;
  int value = 0;  // meaningful when finite

  friend bool operator==(const RhoValue& x, const RhoValue& y) {
    return x.finite == y.finite && (!x.finite || x.value == y.value);
  }
  std::string str() const { return finite ? std::to_string(value) : "infinite"; }
};

// rho(X) = sup of component diameters of Gamma[X]; 0 for the empty set.
// Components dipping at least N* past the explicit band are infinite by the
// pumping argument; everything else is materialized exactly.
inline RhoValue rho(const PeriodicGraph& g, const PeriodicSet& x) {
  if (x.empty()) return RhoValue{true, 0};
  const int nstar = g.stabilization_radius();
  const int band = std::max({std::abs(x.lo()), std::abs(x.hi()), 1});
  Window w(g, band + 2 * nstar);

  std::vector<char> blocked(w.size(), 0);
  for (int i = 0; i < w.size(); ++i)
    if (!x.contains(w.vertex(i))) blocked[i] = 1;
  auto comp = w.components(&blocked);

  std::map<int, std::vector<int>> members;
  for (int i = 0; i < w.size(); ++i)
    if (comp[i] >= 0) members[comp[i]].push_back(i);

  int best = 0;
  for (const auto& [label, vs] : members) {
    int min_idx = 0, max_idx = 0;
    bool has_cell = false;
    for (int i : vs) {
      const Vertex& v = w.vertex(i);
      if (v.apex) continue;
      if (!has_cell) {
        min_idx = max_idx = v.index;
        has_cell = true;
      } else {
        min_idx = std::min(min_idx, v.index);
        max_idx = std::max(max_idx, v.index);
      }
    }
    if (has_cell && (max_idx >= band + nstar || min_idx <= -band - nstar))
      return RhoValue{false, 0};  // past the pumping threshold: infinite
    // exact interior component: all-pairs BFS for the diameter
    std::vector<char> blocked2(w.size(), 1);
    for (int i : vs) blocked2[i] = 0;
    for (int s : vs) {
      auto dist = w.bfs({s}, &blocked2);
      for (int t : vs) best = std::max(best, dist[t]);
    }
  }
  return RhoValue{true, best};
}

// ---------------------------------------------------------------------------
// small components

// Validates the two-part separator shape: S1, S2 disjoint, each inducing a
// connected subgraph, each meeting every orbit class.
inline void validate_two_part_separator(const PeriodicGraph& g,
                                        const std::vector<std::vector<std::string>>& orbit_classes,
                                        const std::set<Vertex>& s1, const std::set<Vertex>& s2) {
  for (const auto& v : s1)
    if (s2.count(v)) throw Error(ErrorCode::InvalidInput, "S1 and S2 intersect");
  auto connected = [&](const std::set<Vertex>& s) {
    if (s.empty()) return false;
    std::vector<Vertex> vs(s.begin(), s.end());
    std::vector<char> seen(vs.size(), 0);
    std::vector<size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      size_t u = stack.back();
      stack.pop_back();
      for (size_t t = 0; t < vs.size(); ++t)
        if (!seen[t] && g.adjacent(vs[u], vs[t])) {
          seen[t] = 1;
          stack.push_back(t);
        }
    }
    for (char c : seen)
      if (!c) return false;
    return true;
  };
  if (!connected(s1) || !connected(s2))
    throw Error(ErrorCode::InvalidInput, "S1/S2 must induce connected subgraphs");
  for (const auto& cls : orbit_classes)
    for (const std::set<Vertex>* s : {&s1, &s2}) {
      bool hit = false;
      for (const auto& v : *s)
        if (orbit_class_contains(cls, v)) {
          hit = true;
          break;
        }
      if (!hit) throw Error(ErrorCode::InvalidInput, "separator part misses an orbit class");
    }
}

struct SmallComponent {
  std::vector<Vertex> vertices;
  int diameter = 0;
};

// Exact diameters of the rayless components of Gamma - (S1 u S2). Small
// components are fully interior to the analysis window, so BFS distances
// are exact.
inline std::vector<SmallComponent> small_component_diameters(
    const PeriodicGraph& g, const std::vector<std::vector<std::string>>& orbit_classes,
    const std::set<Vertex>& s1, const std::set<Vertex>& s2) {
  validate_two_part_separator(g, orbit_classes, s1, s2);
  std::set<Vertex> s(s1);
  s.insert(s2.begin(), s2.end());
  SeparatorAnalysis an(g, s);
  std::vector<SmallComponent> out;
  for (const auto& comp : an.small_components()) {
    SmallComponent sc;
    sc.vertices = comp;
    const Window& w = an.window();
    std::vector<char> blocked(w.size(), 1);
    for (const auto& v : comp) blocked[w.id_of(v)] = 0;
    for (const auto& v : comp) {
      auto dist = w.bfs({w.id_of(v)}, &blocked);
      for (const auto& t : comp) sc.diameter = std::max(sc.diameter, dist[w.id_of(t)]);
    }
    out.push_back(std::move(sc));
  }
  return out;
}

// Diameter of the component of Gamma - S containing `witness`; errors on a
// big component.
inline int component_diameter(const PeriodicGraph& g, const std::set<Vertex>& s,
                              const Vertex& witness) {
  SeparatorAnalysis an(g, s);
  int wid = an.window().id_of(witness);
  if (wid < 0 || an.in_separator(wid))
    throw Error(ErrorCode::InvalidInput, "witness not in any component");
  if (!an.in_small(wid)) throw Error(ErrorCode::InvalidInput, "big component passed");
  for (const auto& comp : an.small_components())
    if (std::find(comp.begin(), comp.end(), witness) != comp.end()) {
      const Window& w = an.window();
      std::vector<char> blocked(w.size(), 1);
      for (const auto& v : comp) blocked[w.id_of(v)] = 0;
      int diam = 0;
      for (const auto& v : comp) {
        auto dist = w.bfs({w.id_of(v)}, &blocked);
        for (const auto& t : comp) diam = std::max(diam, dist[w.id_of(t)]);
      }
      return diam;
    }
  throw Error(ErrorCode::Internal, "component not found");
}

// ---------------------------------------------------------------------------
// far vertices

// A vertex of the big component toward `end` at distance >= k from the
// separator. Requires no dominated ends (the distance could otherwise be
// capped by a dominating vertex).
inline Vertex far_vertex(const PeriodicGraph& g, const Separation& sep, int k, EndDir end) {
  require_no_dominated_ends(g);
  auto sv = sep.separator_vertices();
  if (sv.empty()) throw Error(ErrorCode::InvalidInput, "empty separator");
  const int reach = g.pattern_reach();
  int band = 0;
  for (const auto& v : sv)
    if (!v.apex) band = std::max(band, std::abs(v.index));

  int layer = band + reach * (k + 2) + 1;
  const int sgn = end == EndDir::Right ? 1 : -1;
  for (int attempt = 0; attempt < 64; ++attempt, layer += reach) {
    Window w(g, layer + k * reach + g.stabilization_radius());
    std::vector<int> sources;
    for (const auto& v : sv) sources.push_back(w.id_of(v));
    auto dist = w.bfs(sources);
    for (const auto& col : g.cell) {
      Vertex cand = Vertex::cell(col, sgn * layer);
      int cid = w.id_of(cand);
      if (cid < 0 || dist[cid] < k) continue;  // dist -1 means not reachable at all
      return cand;
    }
  }
  throw Error(ErrorCode::Internal, "far_vertex: no vertex found");
}

// ---------------------------------------------------------------------------
// type 1 / type 2 separations

namespace detail {

// Shared construction: start from a separating set, connect its induced
// subgraph with shortest paths, then attach a shortest path to one
// representative of every orbit class not yet met. BFS tie-breaking is by
// window vertex order, so the result is deterministic.
inline std::set<Vertex> grow_type1_separator(const PeriodicGraph& g,
                                             const std::vector<std::vector<std::string>>& classes,
                                             std::set<Vertex> z) {
  int band = 0;
  for (const auto& v : z)
    if (!v.apex) band = std::max(band, std::abs(v.index));
  Window w(g, band + 2 * g.stabilization_radius() + g.pattern_reach() + 2);

  auto bfs_path_from_set = [&](const std::set<Vertex>& from,
                               const std::function<bool(const Vertex&)>& is_target) {
    std::vector<int> parent(w.size(), -2);
    std::vector<int> frontier;
    for (const auto& v : from) {
      int i = w.id_of(v);
      if (i >= 0) {
        parent[i] = -1;
        frontier.push_back(i);
      }
    }
    std::sort(frontier.begin(), frontier.end());
    while (!frontier.empty()) {
      std::vector<int> next;
      for (int u : frontier) {
        if (is_target(w.vertex(u)) && !from.count(w.vertex(u))) {
          std::vector<Vertex> path;
          for (int x = u; x >= 0 && parent[x] != -1; x = parent[x]) path.push_back(w.vertex(x));
          return path;  // target plus interior vertices, excluding the set
        }
        for (int t : w.neighbors(u))
          if (parent[t] == -2) {
            parent[t] = u;
            next.push_back(t);
          }
      }
      std::sort(next.begin(), next.end());
      frontier = std::move(next);
    }
    return std::vector<Vertex>{};
  };

  // connect the induced subgraph on z
  for (int guard = 0; guard < 256; ++guard) {
    std::vector<Vertex> zs(z.begin(), z.end());
    std::vector<int> label(zs.size(), -1);
    std::vector<size_t> stack{0};
    label[0] = 0;
    while (!stack.empty()) {
      size_t u = stack.back();
      stack.pop_back();
      for (size_t t = 0; t < zs.size(); ++t)
        if (label[t] == -1 && g.adjacent(zs[u], zs[t])) {
          label[t] = 0;
          stack.push_back(t);
        }
    }
    std::set<Vertex> first_comp;
    bool connected = true;
    for (size_t t = 0; t < zs.size(); ++t) {
      if (label[t] == 0) first_comp.insert(zs[t]);
      else connected = false;
    }
    if (connected) break;
    auto path = bfs_path_from_set(first_comp, [&](const Vertex& v) {
      return z.count(v) > 0 && !first_comp.count(v);
    });
    if (path.empty()) throw Error(ErrorCode::Internal, "separator cannot be connected");
    for (const auto& v : path) z.insert(v);
  }

  // reach every orbit class
  for (const auto& cls : classes) {
    bool hit = false;
    for (const auto& v : z)
      if (orbit_class_contains(cls, v)) {
        hit = true;
        break;
      }
    if (hit) continue;
    auto path = bfs_path_from_set(z, [&](const Vertex& v) { return orbit_class_contains(cls, v); });
    if (path.empty()) throw Error(ErrorCode::Internal, "orbit class unreachable");
    for (const auto& v : path) z.insert(v);
  }
  return z;
}

// A finite set separating the two ends: the slab of layers [0, reach-1]
// plus every apex a left-right path could route through.
inline std::set<Vertex> separating_slab(const PeriodicGraph& g) {
  const int reach = g.pattern_reach();
  std::set<Vertex> s;
  for (const auto& v : g.cell)
    for (int i = 0; i < reach; ++i) s.insert(Vertex::cell(v, i));
  for (int guard = 0; guard <= static_cast<int>(g.apexes.size()); ++guard) {
    SeparatorAnalysis an(g, s);
    if (an.separates()) return s;
    // the slab blocks all cell routes, so a both-ends component must route
    // through an apex: add the first such apex and re-analyze
    bool added = false;
    for (const auto& a : g.apexes) {
      Vertex av = Vertex::make_apex(a.id);
      if (s.count(av)) continue;
      int aid = an.window().id_of(av);
      if (aid < 0 || an.in_separator(aid)) continue;
      if (an.in_right(aid) && an.in_left(aid)) {
        s.insert(av);
        added = true;
        break;
      }
    }
    if (!added) break;
  }
  SeparatorAnalysis an(g, s);
  if (!an.separates()) throw Error(ErrorCode::Internal, "slab fails to separate");
  return s;
}

}  // namespace detail

// Lemma-style construction of a type 1 separation: layer-slab separator,
// connected, extended to meet every orbit class; A holds the right end and
// the small components go to A*.
inline Separation find_type1_separation(const PeriodicGraph& g,
                                        const std::vector<Automorphism>& gens) {
  require_two_ended(g);
  auto orb = orbits(g, gens);
  auto z = detail::grow_type1_separator(g, orb.classes, detail::separating_slab(g));
  SeparatorAnalysis an(g, z);
  if (!an.separates()) throw Error(ErrorCode::Internal, "type 1 separator fails to separate");
  Separation s = an.to_separation();
  if (!is_type1(g, orb.classes, s))
    throw Error(ErrorCode::Internal, "type 1 conditions failed");
  return s;
}

struct Type2Separation {
  Separation separation;
  TightSeparation induced_from;
};

// Corollary-style extension: the same process started from a tight
// separation; the resulting separator contains the tight one.
inline Type2Separation extend_to_type2(const PeriodicGraph& g,
                                       const std::vector<Automorphism>& gens,
                                       const TightSeparation& t) {
  require_two_ended(g);
  auto orb = orbits(g, gens);
  auto base = t.sep.separator_vertices();
  auto z = detail::grow_type1_separator(g, orb.classes, base);
  SeparatorAnalysis an(g, z);
  if (!an.separates()) throw Error(ErrorCode::Internal, "type 2 separator fails to separate");
  Separation s = an.to_separation();
  if (!is_type1(g, orb.classes, s))
    throw Error(ErrorCode::Internal, "type 2 conditions failed");
  for (const auto& v : base)
    if (!s.separator().contains(v))
      throw Error(ErrorCode::Internal, "type 2 separator lost the tight separator");
  return Type2Separation{s, t};
}

}  // namespace endsplit
