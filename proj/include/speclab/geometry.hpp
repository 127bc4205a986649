#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace speclab {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Uniform periodic grid on the flat 2-torus [0, L)^2. Cells are centered on
// the lattice nodes (ix*h, iy*h) and indexed row-major, idx = iy*n_side + ix.
struct TorusGrid {
  int n_side = 0;
  double side_length = kTwoPi;
  double spacing = 0.0;
  static constexpr int dimension = 2;

  int cell_count() const { return n_side * n_side; }
  int wrap(int i) const {
    i %= n_side;
    return i < 0 ? i + n_side : i;
  }
  int index(int ix, int iy) const { return wrap(iy) * n_side + wrap(ix); }
  Point2 node(int idx) const {
    return {spacing * (idx % n_side), spacing * (idx / n_side)};
  }
  // Cell containing a point, nearest-node convention.
  int cell_of(double x, double y) const;
};

TorusGrid build_grid(int n_side, double side_length = kTwoPi);

double geodesic_distance(const Point2& p, const Point2& q, const TorusGrid& grid);

// Open observation region O, modeled as a set of grid cells.
struct ObservationSet {
  TorusGrid grid;
  std::vector<std::uint8_t> mask;  // 1 = cell belongs to O
  double measure = 0.0;            // spacing^2 * popcount
  bool connected_flag = false;     // 4-neighbor connectivity

  bool contains_cell(int idx) const { return mask[static_cast<std::size_t>(idx)] != 0; }
  bool contains_point(double x, double y) const { return mask[static_cast<std::size_t>(grid.cell_of(x, y))] != 0; }
  int cell_count_true() const;
  // Row-major list of the cells in O; fixes the cell order used by
  // restrictions and recordings.
  std::vector<int> cells() const;
};

ObservationSet make_observation(const TorusGrid& grid, std::vector<std::uint8_t> mask);
ObservationSet whole_torus(const TorusGrid& grid);
// |y - center| < half_width (axis = 0) or |x - center| < half_width (axis = 1),
// distances taken mod L.
ObservationSet strip(const TorusGrid& grid, int axis, double center, double half_width);
ObservationSet disc(const TorusGrid& grid, const Point2& center, double radius);
// Union of a horizontal strip through y = y0 and a vertical strip through
// x = x0, both of the given half-width.
ObservationSet cross(const TorusGrid& grid, double x0, double y0, double half_width);
ObservationSet complement(const ObservationSet& o);
ObservationSet set_union(const ObservationSet& a, const ObservationSet& b);

struct GeodesicRay {
  Point2 start;
  Point2 direction;  // unit vector
  double horizon = 0.0;
};

// All grid nodes at (numerically) maximal distance from p.
std::vector<Point2> antipodal_set(const Point2& p, const TorusGrid& grid, double tol);

enum class GccVerdict { satisfied, violated, undecided };

struct GccReport {
  GccVerdict verdict = GccVerdict::undecided;
  std::optional<GeodesicRay> witness;  // avoiding ray when violated
  double min_entry_margin = 0.0;       // min over rays of (T - first entry time)
  long rays_traced = 0;
};

GccReport check_gcc(const ObservationSet& obs, double T, int n_directions = 64,
                    int n_offsets = 25);

struct HypothesisHReport {
  bool holds = false;
  std::optional<Point2> witness_p;
  GccReport gcc;
};

HypothesisHReport check_hypothesis_H(const ObservationSet& obs, const TorusGrid& grid,
                                     double T);

}  // namespace speclab
