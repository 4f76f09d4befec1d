#pragma once

// Vertex sets of the infinite graph with eventually-periodic structure: an
// explicit band [lo, hi] of cell copies, full-column membership flags on each
// side of the band, and apex flags. Closed under complement, intersection,
// union, symmetric difference and automorphism images, all computed exactly.
// This is the representation behind separation sides and rho.

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "endsplit/automorphism.hpp"
#include "endsplit/graph.hpp"

namespace endsplit {

class PeriodicSet {
 public:
  PeriodicSet() = default;

  static PeriodicSet empty_set() { return PeriodicSet(); }

  static PeriodicSet finite(const std::set<Vertex>& vs) {
    PeriodicSet s;
    for (const auto& v : vs) s.insert(v);
    s.normalize();
    return s;
  }

  // All cell copies with index <= hi (every column), no apexes.
  static PeriodicSet left_half(const PeriodicGraph& g, int hi) {
    PeriodicSet s;
    s.lo_ = s.hi_ = hi;
    for (const auto& v : g.cell) {
      s.left_cols_.insert(v);
      s.band_.insert({v, hi});
    }
    s.normalize();
    return s;
  }

  static PeriodicSet right_half(const PeriodicGraph& g, int lo) {
    PeriodicSet s;
    s.lo_ = s.hi_ = lo;
    for (const auto& v : g.cell) {
      s.right_cols_.insert(v);
      s.band_.insert({v, lo});
    }
    s.normalize();
    return s;
  }

  bool contains(const Vertex& v) const {
    if (v.apex) return apexes_.count(v.id) > 0;
    if (band_empty()) return (v.index < 0 ? left_cols_ : right_cols_).count(v.id) > 0;
    if (v.index < lo_) return left_cols_.count(v.id) > 0;
    if (v.index > hi_) return right_cols_.count(v.id) > 0;
    return band_.count({v.id, v.index}) > 0;
  }

  bool is_finite() const { return left_cols_.empty() && right_cols_.empty(); }
  bool empty() const { return is_finite() && band_.empty() && apexes_.empty(); }

  int lo() const { return lo_; }
  int hi() const { return hi_; }
  const std::set<std::string>& left_cols() const { return left_cols_; }
  const std::set<std::string>& right_cols() const { return right_cols_; }
  const std::set<std::string>& apex_ids() const { return apexes_; }

  bool infinite_toward(EndDir d) const {
    return !(d == EndDir::Left ? left_cols_ : right_cols_).empty();
  }

  void insert(const Vertex& v) {
    if (v.apex) {
      apexes_.insert(v.id);
      return;
    }
    widen(v.index, v.index);
    band_.insert({v.id, v.index});
  }

  // Explicit members; only valid for finite sets.
  std::set<Vertex> explicit_vertices() const {
    if (!is_finite())
      throw Error(ErrorCode::Internal, "explicit_vertices on infinite set");
    std::set<Vertex> out;
    for (const auto& [v, i] : band_) out.insert(Vertex::cell(v, i));
    for (const auto& a : apexes_) out.insert(Vertex::make_apex(a));
    return out;
  }

  size_t finite_size() const {
    if (!is_finite()) throw Error(ErrorCode::Internal, "finite_size on infinite set");
    return band_.size() + apexes_.size();
  }

  PeriodicSet complement(const PeriodicGraph& g) const {
    PeriodicSet r;
    r.lo_ = lo_;
    r.hi_ = hi_;
    for (const auto& v : g.cell) {
      if (!left_cols_.count(v)) r.left_cols_.insert(v);
      if (!right_cols_.count(v)) r.right_cols_.insert(v);
      for (int i = lo_; i <= hi_; ++i)
        if (!band_.count({v, i})) r.band_.insert({v, i});
    }
    for (const auto& a : g.apexes)
      if (!apexes_.count(a.id)) r.apexes_.insert(a.id);
    r.normalize();
    return r;
  }

  PeriodicSet symmetric_difference(const PeriodicSet& o) const {
    PeriodicSet a = *this, b = o;
    align(a, b);
    PeriodicSet r;
    r.lo_ = a.lo_;
    r.hi_ = a.hi_;
    set_xor(a.left_cols_, b.left_cols_, r.left_cols_);
    set_xor(a.right_cols_, b.right_cols_, r.right_cols_);
    set_xor(a.band_, b.band_, r.band_);
    set_xor(a.apexes_, b.apexes_, r.apexes_);
    r.normalize();
    return r;
  }

  PeriodicSet intersect(const PeriodicSet& o) const {
    PeriodicSet a = *this, b = o;
    align(a, b);
    PeriodicSet r;
    r.lo_ = a.lo_;
    r.hi_ = a.hi_;
    set_and(a.left_cols_, b.left_cols_, r.left_cols_);
    set_and(a.right_cols_, b.right_cols_, r.right_cols_);
    set_and(a.band_, b.band_, r.band_);
    set_and(a.apexes_, b.apexes_, r.apexes_);
    r.normalize();
    return r;
  }

  PeriodicSet unite(const PeriodicSet& o) const {
    PeriodicSet a = *this, b = o;
    align(a, b);
    PeriodicSet r;
    r.lo_ = a.lo_;
    r.hi_ = a.hi_;
    set_or(a.left_cols_, b.left_cols_, r.left_cols_);
    set_or(a.right_cols_, b.right_cols_, r.right_cols_);
    set_or(a.band_, b.band_, r.band_);
    set_or(a.apexes_, b.apexes_, r.apexes_);
    r.normalize();
    return r;
  }

  PeriodicSet image(const Automorphism& f) const {
    PeriodicSet r;
    const auto& to_left = f.eps == 1 ? left_cols_ : right_cols_;
    const auto& to_right = f.eps == 1 ? right_cols_ : left_cols_;
    for (const auto& v : to_left) r.left_cols_.insert(f.perm.at(v));
    for (const auto& v : to_right) r.right_cols_.insert(f.perm.at(v));
    for (const auto& x : apexes_) r.apexes_.insert(f.apex_perm.at(x));
    if (!band_empty()) {
      int a = f.apply_index(lo_), b = f.apply_index(hi_);
      r.lo_ = std::min(a, b);
      r.hi_ = std::max(a, b);
      for (const auto& [v, i] : band_) r.band_.insert({f.perm.at(v), f.apply_index(i)});
    }
    r.normalize();
    return r;
  }

  // Membership is position-free outside the band, so equality of canonical
  // forms is exact set equality.
  friend bool operator==(const PeriodicSet& x, const PeriodicSet& y) {
    PeriodicSet a = x, b = y;
    a.normalize();
    b.normalize();
    return a.lo_ == b.lo_ && a.hi_ == b.hi_ && a.left_cols_ == b.left_cols_ &&
           a.right_cols_ == b.right_cols_ && a.band_ == b.band_ &&
           a.apexes_ == b.apexes_;
  }
  friend bool operator!=(const PeriodicSet& x, const PeriodicSet& y) { return !(x == y); }

 private:
  bool band_empty() const { return lo_ > hi_; }

  // Grow the explicit band to cover [a, b]; membership of new rows comes
  // from the column flags (left == right whenever the band is empty).
  void widen(int a, int b) {
    if (band_empty()) {
      if (band_.empty() && left_cols_.empty() && right_cols_.empty()) {
        lo_ = a;
        hi_ = b;
        return;
      }
      // periodic set with empty band: left_cols_ == right_cols_ invariant
      lo_ = a;
      hi_ = a - 1;
    }
    while (lo_ > a) {
      --lo_;
      for (const auto& v : left_cols_) band_.insert({v, lo_});
    }
    while (hi_ < b) {
      ++hi_;
      for (const auto& v : right_cols_) band_.insert({v, hi_});
    }
  }

  bool row_matches(int i, const std::set<std::string>& cols) const {
    size_t count = 0;
    for (const auto& [v, j] : band_)
      if (j == i) {
        if (!cols.count(v)) return false;
        ++count;
      }
    return count == cols.size();
  }

  void erase_row(int i) {
    for (auto it = band_.begin(); it != band_.end();) {
      if (it->second == i) it = band_.erase(it);
      else ++it;
    }
  }

  // Canonical form: drop rows equal to the adjacent column flags, shrinking
  // from the right first; a lone remaining row that equals the right flags
  // is slid left once (re-encoded as a left-flag row) so every set has one
  // distinguished representation.
  void normalize() {
    while (lo_ < hi_ && row_matches(hi_, right_cols_)) {
      erase_row(hi_);
      --hi_;
    }
    while (lo_ < hi_ && row_matches(lo_, left_cols_)) {
      erase_row(lo_);
      ++lo_;
    }
    if (lo_ == hi_) {
      if (left_cols_ == right_cols_) {
        if (row_matches(lo_, left_cols_)) {
          erase_row(lo_);
          lo_ = 0;
          hi_ = -1;
        }
      } else if (row_matches(hi_, right_cols_)) {
        erase_row(hi_);
        --lo_;
        --hi_;
        for (const auto& v : left_cols_) band_.insert({v, lo_});
      }
    }
    if (band_empty()) {
      lo_ = 0;
      hi_ = -1;
    }
  }

  static void align(PeriodicSet& a, PeriodicSet& b) {
    a.normalize();
    b.normalize();
    if (a.band_empty()) a.widen(b.band_empty() ? 0 : b.lo_, b.band_empty() ? 0 : b.lo_);
    if (b.band_empty()) b.widen(a.lo_, a.lo_);
    int lo = std::min(a.lo_, b.lo_), hi = std::max(a.hi_, b.hi_);
    a.widen(lo, hi);
    b.widen(lo, hi);
  }

  template <typename S>
  static void set_xor(const S& a, const S& b, S& out) {
    for (const auto& x : a)
      if (!b.count(x)) out.insert(x);
    for (const auto& x : b)
      if (!a.count(x)) out.insert(x);
  }
  template <typename S>
  static void set_and(const S& a, const S& b, S& out) {
    for (const auto& x : a)
      if (b.count(x)) out.insert(x);
  }
  template <typename S>
  static void set_or(const S& a, const S& b, S& out) {
    for (const auto& x : a) out.insert(x);
    for (const auto& x : b) out.insert(x);
  }

  int lo_ = 0, hi_ = -1;  // empty band when lo_ > hi_
  std::set<std::pair<std::string, int>> band_;
  std::set<std::string> left_cols_, right_cols_;
  std::set<std::string> apexes_;
};

}  // namespace endsplit
