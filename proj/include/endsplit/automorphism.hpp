#pragma once

// Affine automorphisms of a periodic graph: (eps, shift, cell permutation,
// apex permutation) acting by (v, i) -> (perm(v), eps*i + shift). This is
// the only automorphism shape the data model admits; validation is a finite
// comparison of edge patterns.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "endsplit/graph.hpp"

namespace endsplit {

struct Automorphism {
  int eps = 1;  // +1 or -1
  int shift = 0;
  std::map<std::string, std::string> perm;       // total on cell vertices
  std::map<std::string, std::string> apex_perm;  // total on apexes

  int apply_index(int i) const { return eps * i + shift; }

  Vertex apply(const Vertex& v) const {
    if (v.apex) {
      auto it = apex_perm.find(v.id);
      return Vertex::make_apex(it == apex_perm.end() ? v.id : it->second);
    }
    auto it = perm.find(v.id);
    return Vertex::cell(it == perm.end() ? v.id : it->second, apply_index(v.index));
  }

  bool is_translation() const { return eps == 1 && shift != 0; }
  bool is_identity() const {
    if (eps != 1 || shift != 0) return false;
    for (const auto& [a, b] : perm)
      if (a != b) return false;
    for (const auto& [a, b] : apex_perm)
      if (a != b) return false;
    return true;
  }

  static Automorphism identity(const PeriodicGraph& g) {
    Automorphism f;
    for (const auto& v : g.cell) f.perm[v] = v;
    for (const auto& a : g.apexes) f.apex_perm[a.id] = a.id;
    return f;
  }

  // The canonical translation sigma = (+1, 1, id, id).
  static Automorphism sigma(const PeriodicGraph& g, int shift = 1) {
    Automorphism f = identity(g);
    f.shift = shift;
    return f;
  }

  friend bool operator<(const Automorphism& x, const Automorphism& y) {
    return std::tie(x.eps, x.shift, x.perm, x.apex_perm) <
           std::tie(y.eps, y.shift, y.perm, y.apex_perm);
  }
  friend bool operator==(const Automorphism& x, const Automorphism& y) {
    return std::tie(x.eps, x.shift, x.perm, x.apex_perm) ==
           std::tie(y.eps, y.shift, y.perm, y.apex_perm);
  }

  std::string str() const {
    std::string s = "(";
    s += (eps == 1 ? "+1," : "-1,");
    s += std::to_string(shift);
    s += ",{";
    bool first = true;
    for (const auto& [a, b] : perm) {
      if (a == b) continue;
      if (!first) s += ' ';
      first = false;
      s += a + ">" + b;
    }
    for (const auto& [a, b] : apex_perm) {
      if (a == b) continue;
      if (!first) s += ' ';
      first = false;
      s += a + ">" + b;
    }
    s += "})";
    return s;
  }
};

// g2 after g1.
inline Automorphism compose(const Automorphism& g2, const Automorphism& g1) {
  Automorphism r;
  r.eps = g2.eps * g1.eps;
  r.shift = g2.eps * g1.shift + g2.shift;
  for (const auto& [a, b] : g1.perm) r.perm[a] = g2.perm.at(b);
  for (const auto& [a, b] : g1.apex_perm) r.apex_perm[a] = g2.apex_perm.at(b);
  return r;
}

inline Automorphism inverse(const Automorphism& g) {
  Automorphism r;
  r.eps = g.eps;
  r.shift = -g.eps * g.shift;
  for (const auto& [a, b] : g.perm) r.perm[b] = a;
  for (const auto& [a, b] : g.apex_perm) r.apex_perm[b] = a;
  return r;
}

inline Automorphism power(const PeriodicGraph& g, const Automorphism& f, int n) {
  Automorphism r = Automorphism::identity(g);
  Automorphism base = n >= 0 ? f : inverse(f);
  for (int i = 0; i < std::abs(n); ++i) r = compose(base, r);
  return r;
}

namespace detail {

inline bool is_permutation_of(const std::map<std::string, std::string>& perm,
                              const std::vector<std::string>& domain) {
  if (perm.size() != domain.size()) return false;
  std::set<std::string> image;
  for (const auto& v : domain) {
    auto it = perm.find(v);
    if (it == perm.end()) return false;
    if (!image.insert(it->second).second) return false;
    if (std::find(domain.begin(), domain.end(), it->second) == domain.end())
      return false;
  }
  return true;
}

// Union of patterns along one column, evaluated pointwise. Each pattern kind
// is eventually constant on residue classes, so two unions are equal iff
// they agree on a band around zero and on one representative per residue
// class past the band.
struct ColumnSet {
  std::vector<const Pattern*> parts;
  bool contains(int i) const {
    for (const Pattern* p : parts)
      if (p->contains(i)) return true;
    return false;
  }
  int magnitude() const {
    int b = 0;
    for (const Pattern* p : parts) b = std::max(b, p->magnitude());
    return b;
  }
  int modulus_lcm() const {
    long long l = 1;
    for (const Pattern* p : parts)
      if (p->kind == Pattern::Kind::Congruence && p->m > 1)
        l = std::lcm(l, static_cast<long long>(p->m));
    return static_cast<int>(std::min<long long>(l, 1 << 20));
  }
};

// target(j) == source(eps*(j - shift)) for all j?
inline bool column_sets_match(const ColumnSet& source, const ColumnSet& target,
                              int eps, int shift) {
  int m = std::lcm(std::max(source.modulus_lcm(), 1), std::max(target.modulus_lcm(), 1));
  int bound = source.magnitude() + target.magnitude() + std::abs(shift) + m + 2;
  for (int j = -bound; j <= bound; ++j)
    if (target.contains(j) != source.contains(eps * (j - shift))) return false;
  // one representative per residue class on each side of the band
  for (int r = 0; r < m; ++r) {
    int jr = bound + 1 + ((r - (bound + 1)) % m + m) % m;
    if (target.contains(jr) != source.contains(eps * (jr - shift))) return false;
    int jl = -(bound + 1) - (((-(bound + 1) - r) % m + m) % m);
    if (target.contains(jl) != source.contains(eps * (jl - shift))) return false;
  }
  return true;
}

inline ColumnSet column_set(const Apex& a, const std::string& v) {
  ColumnSet c;
  for (const auto& [w, p] : a.patterns)
    if (w == v) c.parts.push_back(&p);
  return c;
}

}  // namespace detail

// True iff f is an automorphism of the infinite graph: intra and skew edge
// patterns are preserved, and every apex attachment pattern maps onto the
// image apex's pattern under i -> eps*i + shift.
inline bool validate_automorphism(const PeriodicGraph& g, const Automorphism& f) {
  if (f.eps != 1 && f.eps != -1) return false;
  std::vector<std::string> apex_ids;
  for (const auto& a : g.apexes) apex_ids.push_back(a.id);
  if (!detail::is_permutation_of(f.perm, g.cell)) return false;
  if (!detail::is_permutation_of(f.apex_perm, apex_ids)) return false;

  for (const auto& [u, v] : g.intra) {
    auto p = std::minmax(f.perm.at(u), f.perm.at(v));
    if (!g.intra.count({p.first, p.second})) return false;
  }
  for (const auto& s : g.skew) {
    SkewEdge img = f.eps == 1 ? SkewEdge{f.perm.at(s.from), f.perm.at(s.to), s.d}
                              : SkewEdge{f.perm.at(s.to), f.perm.at(s.from), s.d};
    if (!g.skew.count(img)) return false;
  }
  // permutations are bijections, so preservation forward implies both ways
  for (const auto& a : g.apexes) {
    const Apex* ia = g.find_apex(f.apex_perm.at(a.id));
    if (!ia) return false;
    for (const auto& v : g.cell) {
      auto src = detail::column_set(a, v);
      auto dst = detail::column_set(*ia, f.perm.at(v));
      if (!detail::column_sets_match(src, dst, f.eps, f.shift)) return false;
    }
  }
  for (const auto& [a, b] : g.apex_edges) {
    auto p = std::minmax(f.apex_perm.at(a), f.apex_perm.at(b));
    if (!g.apex_edges.count({p.first, p.second})) return false;
  }
  return true;
}

// Minimal positive shift of a translation in the generated group, or 0 when
// the translation subgroup is trivial. In Aff(Z) the translation subgroup is
// generated by the shifts of the eps=+1 generators together with pairwise
// differences of reflection shifts.
inline int minimal_translation_shift(const std::vector<Automorphism>& gens) {
  long long m = 0;
  std::vector<int> refl;
  for (const auto& f : gens) {
    if (f.eps == 1) m = std::gcd(m, static_cast<long long>(f.shift));
    else refl.push_back(f.shift);
  }
  for (size_t i = 0; i < refl.size(); ++i)
    for (size_t j = i + 1; j < refl.size(); ++j)
      m = std::gcd(m, static_cast<long long>(refl[i] - refl[j]));
  return static_cast<int>(m);
}

struct OrbitResult {
  std::vector<std::vector<std::string>> classes;  // sorted classes of sorted ids
  int min_shift = 0;                              // minimal positive translation shift
};

// Orbit classes of cell columns and apexes under the generated group,
// computed on indices quotiented by the minimal derived translation shift.
// Requires some translation in the group, otherwise the action has
// infinitely many orbits on the vertex set.
inline OrbitResult orbits(const PeriodicGraph& g, const std::vector<Automorphism>& gens) {
  for (const auto& f : gens)
    if (!validate_automorphism(g, f))
      throw Error(ErrorCode::InvalidInput, "orbits: generator is not an automorphism");
  int m = minimal_translation_shift(gens);
  if (m == 0) throw Error(ErrorCode::NoTranslation, "no translation in group");

  // union-find over (column, residue) plus apexes
  std::vector<std::string> nodes;  // columns replicated per residue, then apexes
  std::map<std::pair<std::string, int>, int> cid;
  for (const auto& v : g.cell)
    for (int r = 0; r < m; ++r) {
      cid[{v, r}] = static_cast<int>(nodes.size());
      nodes.push_back(v);
    }
  std::map<std::string, int> aid;
  for (const auto& a : g.apexes) {
    aid[a.id] = static_cast<int>(nodes.size());
    nodes.push_back(a.id);
  }
  std::vector<int> parent(nodes.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };

  for (const auto& f : gens) {
    for (const auto& v : g.cell)
      for (int r = 0; r < m; ++r) {
        int r2 = ((f.eps * r + f.shift) % m + m) % m;
        unite(cid.at({v, r}), cid.at({f.perm.at(v), r2}));
      }
    for (const auto& a : g.apexes) unite(aid.at(a.id), aid.at(f.apex_perm.at(a.id)));
  }
  // project to columns: a column belongs to the class of any of its residues
  for (const auto& v : g.cell)
    for (int r = 1; r < m; ++r) unite(cid.at({v, 0}), cid.at({v, r}));

  std::map<int, std::set<std::string>> groups;
  for (const auto& v : g.cell) groups[find(cid.at({v, 0}))].insert(v);
  for (const auto& a : g.apexes) groups[find(aid.at(a.id))].insert(a.id);

  OrbitResult res;
  res.min_shift = m;
  for (auto& [root, members] : groups)
    res.classes.emplace_back(members.begin(), members.end());
  std::sort(res.classes.begin(), res.classes.end());
  return res;
}

// Column of a vertex for orbit-class membership tests.
inline bool orbit_class_contains(const std::vector<std::string>& cls, const Vertex& v) {
  return std::find(cls.begin(), cls.end(), v.id) != cls.end();
}

}  // namespace endsplit
