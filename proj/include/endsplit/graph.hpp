#pragma once

// Finite presentations of Z-periodic infinite graphs: a repeating cell,
// fixed-offset skew edges between copies, and finitely many apex vertices
// attached through semilinear index patterns. Every analysis in this
// library works on finite windows of the infinite graph; the bounds that
// make window answers exact live here too.

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "endsplit/base.hpp"

namespace endsplit {

// Index set of an apex attachment along one cell column.
struct Pattern {
  enum class Kind { All, NonNegative, NonPositive, Finite, Congruence };
  Kind kind = Kind::All;
  int a = 0;                 // i0 for the half-line kinds, r for Congruence
  int m = 0;                 // modulus for Congruence
  std::vector<int> indices;  // Finite

  bool contains(int i) const {
    switch (kind) {
      case Kind::All: return true;
      case Kind::NonNegative: return i >= a;
      case Kind::NonPositive: return i <= a;
      case Kind::Finite:
        return std::find(indices.begin(), indices.end(), i) != indices.end();
      case Kind::Congruence: {
        int r = (i - a) % m;
        return r == 0;
      }
    }
    return false;
  }

  bool infinite_toward(EndDir d) const {
    switch (kind) {
      case Kind::All: return true;
      case Kind::NonNegative: return d == EndDir::Right;
      case Kind::NonPositive: return d == EndDir::Left;
      case Kind::Finite: return false;
      case Kind::Congruence: return true;
    }
    return false;
  }

  // Largest constant mentioned; windows must reach past it.
  int magnitude() const {
    int b = std::abs(a);
    b = std::max(b, m);
    for (int i : indices) b = std::max(b, std::abs(i));
    return b;
  }

  friend bool operator<(const Pattern& x, const Pattern& y) {
    return std::tie(x.kind, x.a, x.m, x.indices) <
           std::tie(y.kind, y.a, y.m, y.indices);
  }
  friend bool operator==(const Pattern& x, const Pattern& y) {
    return std::tie(x.kind, x.a, x.m, x.indices) ==
           std::tie(y.kind, y.a, y.m, y.indices);
  }
};

struct SkewEdge {
  std::string from, to;  // edge between copy i of `from` and copy i+d of `to`
  int d = 1;             // always positive after normalization

  friend bool operator<(const SkewEdge& x, const SkewEdge& y) {
    return std::tie(x.from, x.to, x.d) < std::tie(y.from, y.to, y.d);
  }
  friend bool operator==(const SkewEdge& x, const SkewEdge& y) {
    return std::tie(x.from, x.to, x.d) == std::tie(y.from, y.to, y.d);
  }
};

struct Apex {
  std::string id;
  // attachment patterns per cell column; several entries per column allowed
  std::vector<std::pair<std::string, Pattern>> patterns;

  bool adjacent(const std::string& cell_vertex, int index) const {
    for (const auto& [v, p] : patterns)
      if (v == cell_vertex && p.contains(index)) return true;
    return false;
  }
  bool infinite_toward(EndDir d) const {
    for (const auto& [v, p] : patterns)
      if (p.infinite_toward(d)) return true;
    return false;
  }
  bool infinite_degree() const {
    return infinite_toward(EndDir::Left) || infinite_toward(EndDir::Right);
  }
};

class PeriodicGraph {
 public:
  std::vector<std::string> cell;               // sorted, unique
  std::set<std::pair<std::string, std::string>> intra;  // u < v
  std::set<SkewEdge> skew;
  std::vector<Apex> apexes;                    // sorted by id
  std::set<std::pair<std::string, std::string>> apex_edges;  // a < b

  bool has_cell(const std::string& v) const {
    return std::binary_search(cell.begin(), cell.end(), v);
  }
  const Apex* find_apex(const std::string& a) const {
    for (const auto& ap : apexes)
      if (ap.id == a) return &ap;
    return nullptr;
  }

  int max_skew() const {
    int d = 1;
    for (const auto& s : skew) d = std::max(d, s.d);
    return d;
  }

  // Bound on every offset the edge patterns mention: skew reach plus apex
  // pattern constants. All window radii derive from this.
  int pattern_reach() const {
    int d = max_skew();
    for (const auto& a : apexes)
      for (const auto& [v, p] : a.patterns) d = std::max(d, p.magnitude());
    return d;
  }

  // Stabilization radius N*: window answers about connectivity, components
  // and geodesics between nearby vertices are exact at this radius.
  int stabilization_radius() const {
    return (pattern_reach() + 1) *
           (static_cast<int>(cell.size()) + static_cast<int>(apexes.size()) + 1);
  }

  bool is_apex_dominating(const Apex& a, EndDir d) const {
    return a.infinite_toward(d);
  }

  // Structural validation of the presentation itself (id uniqueness,
  // endpoint existence, at least one skew edge). Connectivity is a separate
  // query because callers sometimes want to inspect disconnected inputs.
  void validate() const {
    if (cell.empty()) throw Error(ErrorCode::InvalidInput, "cell is empty");
    for (size_t i = 0; i + 1 < cell.size(); ++i)
      if (cell[i] == cell[i + 1])
        throw Error(ErrorCode::InvalidInput, "duplicate cell vertex '" + cell[i] + "'");
    std::set<std::string> ids(cell.begin(), cell.end());
    for (const auto& a : apexes) {
      if (!ids.insert(a.id).second)
        throw Error(ErrorCode::InvalidInput, "duplicate identifier '" + a.id + "'");
    }
    for (const auto& [u, v] : intra) {
      if (u == v) throw Error(ErrorCode::InvalidInput, "intra self-loop at '" + u + "'");
      if (!has_cell(u) || !has_cell(v))
        throw Error(ErrorCode::InvalidInput, "intra edge uses unknown vertex");
    }
    if (skew.empty())
      throw Error(ErrorCode::InvalidInput, "no skew edge: graph is not two-way infinite");
    for (const auto& s : skew) {
      if (s.d < 1) throw Error(ErrorCode::InvalidInput, "skew offset must be positive");
      if (!has_cell(s.from) || !has_cell(s.to))
        throw Error(ErrorCode::InvalidInput, "skew edge uses unknown vertex");
    }
    for (const auto& a : apexes)
      for (const auto& [v, p] : a.patterns) {
        if (!has_cell(v))
          throw Error(ErrorCode::InvalidInput,
                      "apex '" + a.id + "' pattern on unknown vertex '" + v + "'");
        if (p.kind == Pattern::Kind::Congruence && p.m < 1)
          throw Error(ErrorCode::InvalidInput, "congruence modulus must be >= 1");
      }
    for (const auto& [a, b] : apex_edges) {
      if (a == b) throw Error(ErrorCode::InvalidInput, "apex self-loop at '" + a + "'");
      if (!find_apex(a) || !find_apex(b))
        throw Error(ErrorCode::InvalidInput, "apex edge uses unknown apex");
    }
  }

  bool adjacent(const Vertex& x, const Vertex& y) const {
    if (x.apex && y.apex) {
      auto p = std::minmax(x.id, y.id);
      return apex_edges.count({p.first, p.second}) > 0;
    }
    if (x.apex || y.apex) {
      const Vertex& a = x.apex ? x : y;
      const Vertex& c = x.apex ? y : x;
      const Apex* ap = find_apex(a.id);
      return ap && ap->adjacent(c.id, c.index);
    }
    if (x.index == y.index) {
      auto p = std::minmax(x.id, y.id);
      return intra.count({p.first, p.second}) > 0;
    }
    const Vertex& lo = x.index < y.index ? x : y;
    const Vertex& hi = x.index < y.index ? y : x;
    return skew.count({lo.id, hi.id, hi.index - lo.index}) > 0;
  }
};

inline SkewEdge normalize_skew(const std::string& u, const std::string& v, int d) {
  if (d == 0) throw Error(ErrorCode::InvalidInput, "skew offset must be nonzero");
  if (d < 0) return SkewEdge{v, u, -d};
  return SkewEdge{u, v, d};
}

// Finite truncation of the infinite graph: all cell copies with |index| <= N
// plus every apex, with pattern edges restricted to the same range. The edge
// set is exactly the restriction of the infinite one, so windows are induced
// subgraphs of the infinite graph and of each other.
class Window {
 public:
  Window(const PeriodicGraph& g, int radius) : graph_(&g), radius_(radius) {
    if (radius < 1) throw Error(ErrorCode::InvalidInput, "window radius must be >= 1");
    for (int i = -radius; i <= radius; ++i)
      for (const auto& v : g.cell) push_vertex(Vertex::cell(v, i));
    for (const auto& a : g.apexes) push_vertex(Vertex::make_apex(a.id));
    adj_.resize(vertices_.size());

    for (int i = -radius; i <= radius; ++i)
      for (const auto& [u, v] : g.intra)
        add_edge(Vertex::cell(u, i), Vertex::cell(v, i));
    for (const auto& s : g.skew)
      for (int i = -radius; i + s.d <= radius; ++i)
        add_edge(Vertex::cell(s.from, i), Vertex::cell(s.to, i + s.d));
    for (const auto& a : g.apexes)
      for (const auto& [v, p] : a.patterns)
        for (int i = -radius; i <= radius; ++i)
          if (p.contains(i)) add_edge(Vertex::make_apex(a.id), Vertex::cell(v, i));
    for (const auto& [a, b] : g.apex_edges)
      add_edge(Vertex::make_apex(a), Vertex::make_apex(b));

    for (auto& nbrs : adj_) {
      std::sort(nbrs.begin(), nbrs.end());
      nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    }
  }

  const PeriodicGraph& graph() const { return *graph_; }
  int radius() const { return radius_; }
  int size() const { return static_cast<int>(vertices_.size()); }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const Vertex& vertex(int i) const { return vertices_[i]; }
  const std::vector<int>& neighbors(int i) const { return adj_[i]; }

  int id_of(const Vertex& v) const {
    auto it = index_.find(v);
    return it == index_.end() ? -1 : it->second;
  }
  bool contains(const Vertex& v) const { return index_.count(v) > 0; }

  int edge_count() const {
    size_t twice = 0;
    for (const auto& a : adj_) twice += a.size();
    return static_cast<int>(twice / 2);
  }

  std::vector<std::pair<Vertex, Vertex>> edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    for (int u = 0; u < size(); ++u)
      for (int v : adj_[u])
        if (u < v) out.emplace_back(vertices_[u], vertices_[v]);
    return out;
  }

  // BFS distances from `sources`; -1 where unreachable. `blocked` vertices
  // (by id) are treated as deleted.
  std::vector<int> bfs(const std::vector<int>& sources,
                       const std::vector<char>* blocked = nullptr) const {
    std::vector<int> dist(size(), -1);
    std::queue<int> q;
    for (int s : sources) {
      if (s < 0 || (blocked && (*blocked)[s]) || dist[s] == 0) continue;
      dist[s] = 0;
      q.push(s);
    }
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int w : adj_[u]) {
        if (blocked && (*blocked)[w]) continue;
        if (dist[w] == -1) {
          dist[w] = dist[u] + 1;
          q.push(w);
        }
      }
    }
    return dist;
  }

  // Component labels of the graph minus `blocked`; -1 on blocked vertices.
  // Labels are assigned in vertex order, so they are deterministic.
  std::vector<int> components(const std::vector<char>* blocked = nullptr) const {
    std::vector<int> comp(size(), -1);
    int next = 0;
    for (int s = 0; s < size(); ++s) {
      if (comp[s] != -1 || (blocked && (*blocked)[s])) continue;
      comp[s] = next;
      std::queue<int> q;
      q.push(s);
      while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int w : adj_[u]) {
          if (blocked && (*blocked)[w]) continue;
          if (comp[w] == -1) {
            comp[w] = next;
            q.push(w);
          }
        }
      }
      ++next;
    }
    return comp;
  }

  std::vector<char> block_set(const std::set<Vertex>& vs) const {
    std::vector<char> blocked(size(), 0);
    for (const auto& v : vs) {
      int i = id_of(v);
      if (i >= 0) blocked[i] = 1;
    }
    return blocked;
  }

 private:
  void push_vertex(Vertex v) {
    index_[v] = static_cast<int>(vertices_.size());
    vertices_.push_back(std::move(v));
  }
  void add_edge(const Vertex& a, const Vertex& b) {
    int i = id_of(a), j = id_of(b);
    if (i < 0 || j < 0 || i == j) return;
    adj_[i].push_back(j);
    adj_[j].push_back(i);
  }

  const PeriodicGraph* graph_;
  int radius_;
  std::vector<Vertex> vertices_;
  std::map<Vertex, int> index_;
  std::vector<std::vector<int>> adj_;
};

inline Window materialize(const PeriodicGraph& g, int radius) {
  return Window(g, radius);
}

// Connectivity of the infinite graph, decided on Window(N*). The window is
// an induced subgraph, so paths found here exist in the infinite graph; the
// core (everything at least pattern_reach() layers away from the window
// boundary) has its full infinite-graph neighborhood materialized, and by
// periodicity layers beyond the core repeat structure already visible
// inside it.
inline bool is_connected(const PeriodicGraph& g) {
  g.validate();
  const int reach = g.pattern_reach();
  const int n = std::max(g.stabilization_radius(), reach + 2);
  Window w(g, n);
  auto comp = w.components();
  int core_comp = -2;
  for (int i = 0; i < w.size(); ++i) {
    const Vertex& v = w.vertex(i);
    if (!v.apex && std::abs(v.index) > n - reach) continue;  // boundary band
    if (core_comp == -2) core_comp = comp[i];
    else if (comp[i] != core_comp) return false;
  }
  return true;
}

namespace detail {

// Exact infinite-graph distance with a window-escape bound: any path leaving
// Window(N) must spend at least 2*(N - span)/reach edges on the detour, so a
// found distance within that budget cannot be beaten outside the window.
inline std::optional<int> distance_impl(const PeriodicGraph& g, const Vertex& a,
                                        const Vertex& b) {
  const int reach = g.pattern_reach();
  const int nstar = g.stabilization_radius();
  const int span = std::abs(a.apex ? 0 : a.index) + std::abs(b.apex ? 0 : b.index);

  int n = span + nstar;
  for (int attempt = 0; attempt < 4; ++attempt) {
    Window w(g, n);
    int ia = w.id_of(a), ib = w.id_of(b);
    if (ia < 0 || ib < 0) throw Error(ErrorCode::InvalidInput, "vertex outside any window");
    auto dist = w.bfs({ia});
    int d = dist[ib];
    if (d >= 0) {
      if (d <= 2 * (n - span) / reach) return d;
      // Not yet provably exact: enlarge so the escape budget dominates d.
      n = span + (d * reach) / 2 + reach + 1;
      Window w2(g, n);
      auto dist2 = w2.bfs({w2.id_of(a)});
      return dist2[w2.id_of(b)];
    }
    n = 2 * n + reach;
  }
  return std::nullopt;  // separated at every examined radius: distinct components
}

}  // namespace detail

// Graph distance in the infinite graph; nullopt means the two vertices lie
// in different components.
inline std::optional<int> distance(const PeriodicGraph& g, const Vertex& a,
                                   const Vertex& b) {
  if (a == b) return 0;
  return detail::distance_impl(g, a, b);
}

}  // namespace endsplit
