#pragma once

// Separations (A, A*) of the infinite graph with finite separators, their
// tight / type 1 refinements, and the windowed component analysis that
// decides which components of Gamma - S are big. Window radii are chosen so
// that finite components are fully materialized and anything touching the
// deep window region provably belongs to an infinite component.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "endsplit/automorphism.hpp"
#include "endsplit/graph.hpp"
#include "endsplit/periodic_set.hpp"

namespace endsplit {

struct Separation {
  PeriodicSet a;       // canonical orientation: contains the right end
  PeriodicSet a_star;  // contains the left end (and small components)

  PeriodicSet separator() const { return a.intersect(a_star); }
  std::set<Vertex> separator_vertices() const { return separator().explicit_vertices(); }
  int order() const { return static_cast<int>(separator().finite_size()); }

  Separation image(const Automorphism& f) const {
    // an automorphism maps separations to separations; re-orient so that
    // `a` keeps holding the right end
    Separation s{a.image(f), a_star.image(f)};
    if (f.eps == -1) std::swap(s.a, s.a_star);
    return s;
  }
};

struct TightSeparation {
  Separation sep;
  int k = 0;  // |A cap A*|
};

// Components of Gamma - S for a finite vertex set S, materialized on a
// window wide enough that the classification is exact (see header note).
class SeparatorAnalysis {
 public:
  SeparatorAnalysis(const PeriodicGraph& g, const std::set<Vertex>& s, int extra_radius = 0)
      : graph_(&g), sep_(s) {
    int bandhw = 0;
    for (const auto& v : s)
      if (!v.apex) bandhw = std::max(bandhw, std::abs(v.index));
    const int nstar = g.stabilization_radius();
    deep_ = bandhw + nstar + extra_radius;
    radius_ = deep_ + nstar;
    window_.emplace(g, radius_);
    blocked_ = window_->block_set(s);
    comp_ = window_->components(&blocked_);

    int n = window_->size();
    int ncomp = 0;
    for (int i = 0; i < n; ++i) ncomp = std::max(ncomp, comp_[i] + 1);
    std::vector<char> right(ncomp, 0), left(ncomp, 0);
    for (int i = 0; i < n; ++i) {
      const Vertex& v = window_->vertex(i);
      if (v.apex || comp_[i] < 0) continue;
      if (v.index >= deep_) right[comp_[i]] = 1;
      if (v.index <= -deep_) left[comp_[i]] = 1;
    }
    for (int c = 0; c < ncomp; ++c) {
      if (right[c]) right_comps_.insert(c);
      if (left[c]) left_comps_.insert(c);
      if (!right[c] && !left[c]) small_comps_.insert(c);
    }
  }

  const Window& window() const { return *window_; }
  int deep_threshold() const { return deep_; }
  const std::vector<int>& comp_labels() const { return comp_; }

  // True iff no component holds both infinite directions.
  bool separates() const {
    for (int c : right_comps_)
      if (left_comps_.count(c)) return false;
    return true;
  }

  bool in_right(int vid) const { return comp_[vid] >= 0 && right_comps_.count(comp_[vid]) > 0; }
  bool in_left(int vid) const { return comp_[vid] >= 0 && left_comps_.count(comp_[vid]) > 0; }
  bool in_small(int vid) const { return comp_[vid] >= 0 && small_comps_.count(comp_[vid]) > 0; }
  bool in_separator(int vid) const { return blocked_[vid]; }

  bool vertex_in_right(const Vertex& v) const {
    int i = window_->id_of(v);
    return i >= 0 && in_right(i);
  }

  // Small components are fully interior to the window, hence exact.
  std::vector<std::vector<Vertex>> small_components() const {
    std::map<int, std::vector<Vertex>> by_label;
    for (int i = 0; i < window_->size(); ++i)
      if (in_small(i)) by_label[comp_[i]].push_back(window_->vertex(i));
    std::vector<std::vector<Vertex>> out;
    for (auto& [c, vs] : by_label) {
      std::sort(vs.begin(), vs.end());
      out.push_back(std::move(vs));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  bool sep_vertex_adjacent_to(const Vertex& v, bool right_side) const {
    int i = window_->id_of(v);
    if (i < 0) return false;
    for (int w : window_->neighbors(i))
      if (right_side ? in_right(w) : in_left(w)) return true;
    return false;
  }

  // The side sets as exact periodic sets. A = S + right components (all
  // columns beyond the deep threshold belong to the right tail); A* gets the
  // left components and every small component.
  Separation to_separation() const {
    PeriodicSet a = PeriodicSet::right_half(*graph_, deep_ + 1);
    PeriodicSet a_star = PeriodicSet::left_half(*graph_, -deep_ - 1);
    for (int i = 0; i < window_->size(); ++i) {
      const Vertex& v = window_->vertex(i);
      if (!v.apex && std::abs(v.index) > deep_) continue;
      if (in_separator(i)) {
        a.insert(v);
        a_star.insert(v);
      } else if (in_right(i)) {
        a.insert(v);
      } else {
        a_star.insert(v);
      }
    }
    return Separation{a, a_star};
  }

 private:
  const PeriodicGraph* graph_;
  std::set<Vertex> sep_;
  int deep_ = 0, radius_ = 0;
  std::optional<Window> window_;
  std::vector<char> blocked_;
  std::vector<int> comp_;
  std::set<int> right_comps_, left_comps_, small_comps_;
};

// Every edge of the infinite graph lies inside A or inside A*, the two sides
// cover everything, and the separator is finite. Checked on a window past
// which memberships are column-constant and edge patterns repeat.
inline bool is_separation(const PeriodicGraph& g, const Separation& s) {
  PeriodicSet sep = s.a.intersect(s.a_star);
  if (!sep.is_finite()) return false;
  PeriodicSet missing = s.a.unite(s.a_star).complement(g);
  if (!missing.empty()) return false;
  int band = std::max({std::abs(s.a.lo()), std::abs(s.a.hi()), std::abs(s.a_star.lo()),
                       std::abs(s.a_star.hi()), 1});
  Window w(g, band + g.stabilization_radius() + g.pattern_reach() + 1);
  for (const auto& [u, v] : w.edges()) {
    bool ua = s.a.contains(u), va = s.a.contains(v);
    bool ub = s.a_star.contains(u), vb = s.a_star.contains(v);
    if (!((ua && va) || (ub && vb))) return false;
  }
  return true;
}

// The four conditions of a k-tight separation: order k, an end living in a
// component on each side, every separator vertex adjacent to both big
// components.
inline bool is_tight(const PeriodicGraph& g, const Separation& s) {
  if (!is_separation(g, s)) return false;
  auto sep = s.separator_vertices();
  if (sep.empty()) return false;
  SeparatorAnalysis an(g, sep);
  if (!an.separates()) return false;
  // the big components must sit on the declared sides
  for (int i = 0; i < an.window().size(); ++i) {
    const Vertex& v = an.window().vertex(i);
    if (an.in_right(i) && !s.a.contains(v)) return false;
    if (an.in_left(i) && !s.a_star.contains(v)) return false;
  }
  for (const auto& v : sep)
    if (!an.sep_vertex_adjacent_to(v, true) || !an.sep_vertex_adjacent_to(v, false))
      return false;
  return true;
}

// Type 1: separator meets every orbit class, induces a finite connected
// subgraph, and exactly one component of A - A* is big.
inline bool is_type1(const PeriodicGraph& g, const std::vector<std::vector<std::string>>& orbit_classes,
                     const Separation& s) {
  if (!is_separation(g, s)) return false;
  auto sep = s.separator_vertices();
  if (sep.empty()) return false;

  for (const auto& cls : orbit_classes) {
    bool hit = false;
    for (const auto& v : sep)
      if (orbit_class_contains(cls, v)) {
        hit = true;
        break;
      }
    if (!hit) return false;
  }

  // induced subgraph on the separator is connected
  std::vector<Vertex> sv(sep.begin(), sep.end());
  std::vector<int> label(sv.size(), -1);
  std::vector<size_t> stack{0};
  label[0] = 0;
  while (!stack.empty()) {
    size_t u = stack.back();
    stack.pop_back();
    for (size_t w = 0; w < sv.size(); ++w)
      if (label[w] == -1 && g.adjacent(sv[u], sv[w])) {
        label[w] = 0;
        stack.push_back(w);
      }
  }
  for (int l : label)
    if (l == -1) return false;

  // exactly one big component of A - A*
  SeparatorAnalysis an(g, sep);
  if (!an.separates()) return false;
  int big_in_a = 0;
  bool right_in_a = true, left_in_a = true;
  for (int i = 0; i < an.window().size(); ++i) {
    const Vertex& v = an.window().vertex(i);
    if (an.in_right(i) && !s.a.contains(v)) right_in_a = false;
    if (an.in_left(i) && !s.a.contains(v)) left_in_a = false;
  }
  if (right_in_a) ++big_in_a;
  if (left_in_a) ++big_in_a;
  return big_in_a == 1;
}

}  // namespace endsplit
