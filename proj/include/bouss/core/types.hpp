#pragma once

#include <algorithm>
#include <cstdint>

namespace bouss {

/// Per-cell solution vector. psi1/psi2 are the dispersive corrections to the
/// momentum rates; they are zero wherever the cell is dry or switched to SWE.
struct CellState {
  double h = 0.0;
  double hu = 0.0;
  double hv = 0.0;
  double psi1 = 0.0;
  double psi2 = 0.0;
};

enum class Axis { x, y };

enum class Edge { left = 0, right = 1, bottom = 2, top = 3 };

enum class BoundaryKind { wall, extrapolation };

enum class Mode { swe, sgn_subcycled, sgn_composite };

/// Inclusive cell-index window in a level's global index space.
struct Box {
  int i_lo = 0;
  int i_hi = -1;
  int j_lo = 0;
  int j_hi = -1;

  int nx() const { return i_hi - i_lo + 1; }
  int ny() const { return j_hi - j_lo + 1; }
  bool empty() const { return i_hi < i_lo || j_hi < j_lo; }
  std::int64_t cells() const { return empty() ? 0 : std::int64_t(nx()) * ny(); }
  bool contains(int i, int j) const { return i >= i_lo && i <= i_hi && j >= j_lo && j <= j_hi; }

  Box grow(int n) const { return {i_lo - n, i_hi + n, j_lo - n, j_hi + n}; }
  Box refine(int r) const { return {i_lo * r, (i_hi + 1) * r - 1, j_lo * r, (j_hi + 1) * r - 1}; }

  friend bool operator==(const Box&, const Box&) = default;
};

inline Box intersect(const Box& a, const Box& b) {
  return {std::max(a.i_lo, b.i_lo), std::min(a.i_hi, b.i_hi), std::max(a.j_lo, b.j_lo),
          std::min(a.j_hi, b.j_hi)};
}

/// Floor division for possibly negative ghost indices.
inline int floor_div(int a, int r) { return (a >= 0) ? a / r : -((-a + r - 1) / r); }

/// The one definition of a cell-center coordinate, shared by every module.
inline double cell_center(double origin, int index, double d) { return origin + (index + 0.5) * d; }

struct Eta {
  double value;
  bool dry;
};

/// Surface elevation. Dry cells report the ground elevation with a dry marker.
inline Eta eta_of(const CellState& q, double B, double dry_tolerance = 1e-3) {
  if (q.h >= dry_tolerance) return {q.h + B, false};
  return {B, true};
}

}  // namespace bouss
