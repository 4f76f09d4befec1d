#pragma once

// Splitting a two-ended graph without dominated ends as a strongly thin
// tree-amalgamation over the double ray, and the quasi-isometry certificate
// to the double ray. The part graph is Gamma[A cap gA*] for a type 1
// separation (A, A*) and a translation g mapping the big right component
// strictly into itself; reassembly inverts the construction.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "endsplit/automorphism.hpp"
#include "endsplit/ends.hpp"
#include "endsplit/graph.hpp"
#include "endsplit/periodic_set.hpp"
#include "endsplit/separation.hpp"

namespace endsplit {

// Smallest t >= 1 with sigma^t a valid automorphism (0 when none exists, e.g.
// one-sided apex patterns shift with every translation).
inline int minimal_valid_sigma_shift(const PeriodicGraph& g) {
  int cap = 1;
  for (const auto& a : g.apexes)
    for (const auto& [v, p] : a.patterns) {
      if (p.kind == Pattern::Kind::Congruence) cap = std::lcm(cap, p.m);
      else if (p.kind != Pattern::Kind::All) return 0;  // half-lines and finite never shift-invariant
    }
  for (int t = 1; t <= cap; ++t)
    if (validate_automorphism(g, Automorphism::sigma(g, t))) return t;
  return 0;
}

namespace detail {

inline bool periodic_subset(const PeriodicGraph& g, const PeriodicSet& x, const PeriodicSet& y) {
  return x.intersect(y.complement(g)).empty();
}

inline int finite_set_diameter(const PeriodicGraph& g, const std::set<Vertex>& s) {
  std::vector<Vertex> vs(s.begin(), s.end());
  int n = static_cast<int>(vs.size());
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (g.adjacent(vs[i], vs[j])) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
  int diam = 0;
  for (int s0 = 0; s0 < n; ++s0) {
    std::vector<int> dist(n, -1);
    std::vector<int> q{s0};
    dist[s0] = 0;
    for (size_t h = 0; h < q.size(); ++h) {
      int u = q[h];
      for (int t : adj[u])
        if (dist[t] == -1) {
          dist[t] = dist[u] + 1;
          q.push_back(t);
        }
    }
    for (int d : dist) {
      if (d == -1) return -1;  // disconnected
      diam = std::max(diam, d);
    }
  }
  return diam;
}

}  // namespace detail

// A translation g with positive shift mapping the big right component C1 of
// the type 1 separation strictly into itself, with g(A cap A*) disjoint from
// A cap A* and inside C1. Candidates are sigma powers and translations
// derived from the declared generators, tried in increasing shift order.
inline Automorphism find_translation(const PeriodicGraph& g, const Separation& sep,
                                     const std::vector<Automorphism>& declared = {}) {
  require_no_dominated_ends(g);
  PeriodicSet sep_set = sep.separator();
  auto z = sep_set.explicit_vertices();
  int dz = detail::finite_set_diameter(g, z);
  if (dz < 0) throw Error(ErrorCode::InvalidInput, "separator not connected");
  int span = 0;
  for (const auto& v : z)
    if (!v.apex) span = std::max(span, std::abs(v.index));

  const int t_max = 2 * span + 4 * (dz + 2) + 4 * g.pattern_reach() +
                    std::max(1, minimal_valid_sigma_shift(g)) + 2;

  std::vector<Automorphism> candidates;
  for (int t = 1; t <= t_max; ++t) {
    Automorphism s = Automorphism::sigma(g, t);
    if (validate_automorphism(g, s)) candidates.push_back(s);
  }
  // translations generated by declared automorphisms (products of length 2)
  for (const auto& f : declared) {
    if (!validate_automorphism(g, f)) continue;
    if (f.is_translation() && f.shift > 0) candidates.push_back(f);
    Automorphism finv = inverse(f);
    if (finv.is_translation() && finv.shift > 0) candidates.push_back(finv);
    for (const auto& h : declared) {
      Automorphism p = compose(f, h);
      if (p.is_translation() && p.shift > 0 && validate_automorphism(g, p))
        candidates.push_back(p);
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Automorphism& x, const Automorphism& y) { return x.shift < y.shift; });

  PeriodicSet c1 = sep.a.intersect(sep_set.complement(g));  // A minus separator
  for (const auto& cand : candidates) {
    PeriodicSet gz = sep_set.image(cand);
    if (!gz.intersect(sep_set).empty()) continue;     // separator images must be disjoint
    if (!detail::periodic_subset(g, gz, c1)) continue;  // g(Z) inside C1
    PeriodicSet gc1 = c1.image(cand);
    if (!detail::periodic_subset(g, gc1, c1)) continue;  // g(C1) inside C1
    if (detail::periodic_subset(g, c1, gc1)) continue;   // strictness
    return cand;
  }
  throw Error(ErrorCode::NoTranslation, "no translation found");
}

struct TreeAmalgamation {
  std::vector<Vertex> part_vertices;   // sorted
  std::vector<EdgeKey> part_edges;     // sorted canonical
  std::set<Vertex> s1, s2;             // adhesion sets, subsets of the part
  std::map<Vertex, Vertex> glue;       // S2 vertex -> the S1 vertex it becomes in the next copy
  int part_diameter = 0;
  // connecting tree: the double ray; identification maps: the identity

  bool has_edge(const Vertex& a, const Vertex& b) const {
    return std::binary_search(part_edges.begin(), part_edges.end(), edge_key(a, b));
  }
  bool has_vertex(const Vertex& v) const {
    return std::binary_search(part_vertices.begin(), part_vertices.end(), v);
  }
};

// Strongly thin tree-amalgamation invariants: part finite connected of
// finite diameter, adhesions finite connected and disjoint inside the part,
// glue a bijection S2 -> S1 with consistent edge patterns.
inline void verify_tree_amalgamation(const TreeAmalgamation& t) {
  if (t.part_vertices.empty()) throw Error(ErrorCode::InvalidInput, "empty part");
  if (t.s1.empty() || t.s2.empty()) throw Error(ErrorCode::InvalidInput, "empty adhesion");
  for (const auto& v : t.s1) {
    if (!t.has_vertex(v)) throw Error(ErrorCode::InvalidInput, "S1 not inside part");
    if (t.s2.count(v)) throw Error(ErrorCode::InvalidInput, "adhesions not disjoint");
  }
  for (const auto& v : t.s2)
    if (!t.has_vertex(v)) throw Error(ErrorCode::InvalidInput, "S2 not inside part");
  if (t.glue.size() != t.s2.size() || t.s1.size() != t.s2.size())
    throw Error(ErrorCode::InvalidInput, "glue is not a bijection S2 -> S1");
  std::set<Vertex> image;
  for (const auto& [from, to] : t.glue) {
    if (!t.s2.count(from) || !t.s1.count(to))
      throw Error(ErrorCode::InvalidInput, "glue endpoints outside adhesions");
    if (!image.insert(to).second) throw Error(ErrorCode::InvalidInput, "glue not injective");
  }
  // edge pattern consistency across the identification
  for (const auto& [x, gx] : t.glue)
    for (const auto& [y, gy] : t.glue)
      if (t.has_edge(x, y) != t.has_edge(gx, gy))
        throw Error(ErrorCode::InvalidInput, "adhesion edge patterns inconsistent");

  // connectivity and diameters via BFS over the explicit part
  std::map<Vertex, int> id;
  for (size_t i = 0; i < t.part_vertices.size(); ++i)
    id[t.part_vertices[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> adj(t.part_vertices.size());
  for (const auto& [a, b] : t.part_edges) {
    adj[id.at(a)].push_back(id.at(b));
    adj[id.at(b)].push_back(id.at(a));
  }
  auto bfs_all = [&](int s) {
    std::vector<int> dist(adj.size(), -1);
    std::vector<int> q{s};
    dist[s] = 0;
    for (size_t h = 0; h < q.size(); ++h)
      for (int w : adj[q[h]])
        if (dist[w] == -1) {
          dist[w] = dist[q[h]] + 1;
          q.push_back(w);
        }
    return dist;
  };
  auto d0 = bfs_all(0);
  for (int d : d0)
    if (d == -1) throw Error(ErrorCode::InvalidInput, "part not connected");
  // adhesion connectivity inside the part
  for (const std::set<Vertex>* s : {&t.s1, &t.s2}) {
    std::set<Vertex> seen;
    std::vector<Vertex> stack{*s->begin()};
    seen.insert(*s->begin());
    while (!stack.empty()) {
      Vertex u = stack.back();
      stack.pop_back();
      for (const auto& w : *s)
        if (!seen.count(w) && t.has_edge(u, w)) {
          seen.insert(w);
          stack.push_back(w);
        }
    }
    if (seen.size() != s->size())
      throw Error(ErrorCode::InvalidInput, "adhesion not connected");
  }
}

struct SplitResult {
  TreeAmalgamation amalgamation;
  Separation separation;
  Automorphism translation;
};

// Theorem-style splitting. Refuses with the dominating witnesses when a
// dominated end is present.
inline SplitResult split(const PeriodicGraph& g, const std::vector<Automorphism>& gens) {
  require_two_ended(g);
  require_no_dominated_ends(g);

  std::vector<Automorphism> use = gens;
  if (use.empty()) {
    int t = minimal_valid_sigma_shift(g);
    if (t == 0) throw Error(ErrorCode::NoTranslation, "no translation in group");
    use.push_back(Automorphism::sigma(g, t));
  }
  Separation sep = find_type1_separation(g, use);
  Automorphism tr = find_translation(g, sep, use);

  PeriodicSet sep_set = sep.separator();
  PeriodicSet part_set = sep.a.intersect(sep.a_star.image(tr));
  if (!part_set.is_finite()) throw Error(ErrorCode::Internal, "part is not finite");

  TreeAmalgamation ta;
  auto pv = part_set.explicit_vertices();
  ta.part_vertices.assign(pv.begin(), pv.end());
  std::sort(ta.part_vertices.begin(), ta.part_vertices.end());
  for (size_t i = 0; i < ta.part_vertices.size(); ++i)
    for (size_t j = i + 1; j < ta.part_vertices.size(); ++j)
      if (g.adjacent(ta.part_vertices[i], ta.part_vertices[j]))
        ta.part_edges.push_back(edge_key(ta.part_vertices[i], ta.part_vertices[j]));
  std::sort(ta.part_edges.begin(), ta.part_edges.end());

  for (const auto& v : sep_set.explicit_vertices()) {
    ta.s1.insert(v);
    ta.s2.insert(tr.apply(v));
    ta.glue[tr.apply(v)] = v;
  }
  int diam = detail::finite_set_diameter(g, pv);
  if (diam < 0) throw Error(ErrorCode::Internal, "part not connected");
  ta.part_diameter = diam;

  verify_tree_amalgamation(ta);

  // small-diameter cross-check: the part sits inside a rayless component of
  // Gamma minus (g^-1(Z) u g^2(Z))
  {
    Automorphism tr_inv = inverse(tr);
    Automorphism tr2 = compose(tr, tr);
    std::set<Vertex> shell;
    for (const auto& v : sep_set.explicit_vertices()) {
      shell.insert(tr_inv.apply(v));
      shell.insert(tr2.apply(v));
    }
    SeparatorAnalysis an(g, shell);
    for (const auto& v : ta.part_vertices) {
      int i = an.window().id_of(v);
      if (i < 0 || an.in_separator(i) || !an.in_small(i))
        throw Error(ErrorCode::Internal, "part escapes the small component shell");
    }
  }
  return SplitResult{ta, sep, tr};
}

// The periodic graph whose cell is part minus S2, with skew edges realizing
// the identity gluing of consecutive copies.
inline PeriodicGraph reassemble(const TreeAmalgamation& t) {
  verify_tree_amalgamation(t);
  PeriodicGraph g;
  std::set<std::string> cell_names;
  for (const auto& v : t.part_vertices)
    if (!t.s2.count(v)) cell_names.insert(v.str());
  g.cell.assign(cell_names.begin(), cell_names.end());
  for (const auto& [a, b] : t.part_edges) {
    bool a2 = t.s2.count(a) > 0, b2 = t.s2.count(b) > 0;
    if (!a2 && !b2) {
      auto p = std::minmax(a.str(), b.str());
      g.intra.insert({p.first, p.second});
    } else if (a2 != b2) {
      const Vertex& inside = a2 ? b : a;
      const Vertex& border = a2 ? a : b;
      g.skew.insert(normalize_skew(inside.str(), t.glue.at(border).str(), 1));
    }
    // S2-S2 edges are the next copy's S1-S1 edges, already present as intra
  }
  if (g.skew.empty()) throw Error(ErrorCode::InvalidInput, "degenerate amalgamation: no gluing edges");
  g.validate();
  return g;
}

// Explicit isomorphism check between reassemble(split(G)) and G on a window:
// copy i of the reassembled cell corresponds to tr^i of the original
// vertices. Verified edge-by-edge in both directions.
inline bool round_trip_isomorphic(const PeriodicGraph& g, const SplitResult& sr, int radius) {
  PeriodicGraph h = reassemble(sr.amalgamation);
  Window wh(h, radius);

  // name -> original vertex of g
  std::map<std::string, Vertex> base;
  for (const auto& v : sr.amalgamation.part_vertices)
    if (!sr.amalgamation.s2.count(v)) base[v.str()] = v;

  const int shift = sr.translation.shift;
  std::map<Vertex, Vertex> phi;  // reassembled window vertex -> g vertex
  std::set<Vertex> image;
  for (int i = 0; i < wh.size(); ++i) {
    const Vertex& x = wh.vertex(i);
    Vertex orig = power(g, sr.translation, x.index).apply(base.at(x.id));
    phi[x] = orig;
    if (!image.insert(orig).second) return false;  // not injective
  }
  // both windows are induced subgraphs, so pairwise adjacency comparison on
  // the window is exact
  (void)shift;
  std::set<std::pair<int, int>> eh;
  for (int i = 0; i < wh.size(); ++i)
    for (int t : wh.neighbors(i))
      if (i < t) eh.insert({i, t});
  for (int i = 0; i < wh.size(); ++i)
    for (int j = i + 1; j < wh.size(); ++j) {
      bool in_h = eh.count({i, j}) > 0;
      bool in_g = g.adjacent(phi.at(wh.vertex(i)), phi.at(wh.vertex(j)));
      if (in_h != in_g) return false;
    }
  return true;
}

struct QICertificate {
  int lambda = 1;
  int window = 0;
  int pairs_checked = 0;
  bool verified = false;
};

// Exhaustive verification of the quasi-isometry inequalities for phi mapping
// every vertex of copy i to the integer i, with lambda = diam(part):
//   d - lambda^2 <= lambda*|phi(v)-phi(v')|  and  |phi(v)-phi(v')| <= lambda*d + lambda.
// Exact integer arithmetic throughout; any violating pair is an error.
inline QICertificate certify_qi(const PeriodicGraph& g, const SplitResult& sr,
                                std::optional<int> window_override = std::nullopt) {
  const TreeAmalgamation& ta = sr.amalgamation;
  const int lambda = std::max(1, ta.part_diameter);
  const int w = window_override.value_or(4 * lambda + 8);
  const int reach = g.pattern_reach();
  const int nstar = g.stabilization_radius();

  // copy index of a window vertex: the unique i with tr^-i(v) in part - S2
  std::set<Vertex> cell0;
  for (const auto& v : ta.part_vertices)
    if (!ta.s2.count(v)) cell0.insert(v);
  int span = 0;
  for (const auto& v : ta.part_vertices)
    if (!v.apex) span = std::max(span, std::abs(v.index));
  const int t = std::abs(sr.translation.shift);

  Window win(g, w);
  Automorphism tr_inv = inverse(sr.translation);
  auto copy_index = [&](const Vertex& v) {
    int lo = (-w - span) / std::max(1, t) - 2, hi = (w + span) / std::max(1, t) + 2;
    int found = 1 << 30;
    for (int i = lo; i <= hi; ++i) {
      if (cell0.count(power(g, tr_inv, i).apply(v))) {
        if (found != (1 << 30)) throw Error(ErrorCode::Internal, "copies overlap");
        found = i;
      }
    }
    if (found == (1 << 30)) throw Error(ErrorCode::Internal, "vertex not covered by copies");
    return found;
  };

  std::vector<int> phi(win.size());
  for (int i = 0; i < win.size(); ++i) phi[i] = copy_index(win.vertex(i));

  // exact pairwise distances: compute on a padded window, enlarging once if
  // the escape bound does not yet certify exactness
  int pad = nstar;
  Window big(g, w + pad);
  std::vector<std::vector<int>> dist(win.size());
  int dmax = 0;
  for (int i = 0; i < win.size(); ++i) {
    auto d = big.bfs({big.id_of(win.vertex(i))});
    dist[i].resize(win.size());
    for (int j = 0; j < win.size(); ++j) {
      dist[i][j] = d[big.id_of(win.vertex(j))];
      dmax = std::max(dmax, dist[i][j]);
    }
  }
  if (dmax > 2 * pad / reach) {
    pad = (dmax * reach) / 2 + reach + 1;
    Window big2(g, w + pad);
    for (int i = 0; i < win.size(); ++i) {
      auto d = big2.bfs({big2.id_of(win.vertex(i))});
      for (int j = 0; j < win.size(); ++j) dist[i][j] = d[big2.id_of(win.vertex(j))];
    }
  }

  QICertificate cert;
  cert.lambda = lambda;
  cert.window = w;
  for (int i = 0; i < win.size(); ++i)
    for (int j = i + 1; j < win.size(); ++j) {
      int d = dist[i][j];
      if (d < 0) throw Error(ErrorCode::Internal, "disconnected pair in QI window");
      int dphi = std::abs(phi[i] - phi[j]);
      if (d - lambda * lambda > lambda * dphi || dphi > lambda * d + lambda)
        throw Error(ErrorCode::Internal,
                    "certificate check failed at pair " + win.vertex(i).str() + "," +
                        win.vertex(j).str());
      ++cert.pairs_checked;
    }
  cert.verified = true;
  return cert;
}

// Re-derives the end count and cross-checks it against the certificate.
inline bool verify_two_ended_from_qi(const PeriodicGraph& g, const QICertificate& cert) {
  return cert.verified && count_ends(g) == 2;
}

}  // namespace endsplit
