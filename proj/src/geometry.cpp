#include "speclab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace speclab {

int TorusGrid::cell_of(double x, double y) const {
  const long ix = std::lround(x / spacing);
  const long iy = std::lround(y / spacing);
  const int wx = wrap(static_cast<int>(ix % n_side));
  const int wy = wrap(static_cast<int>(iy % n_side));
  return wy * n_side + wx;
}

TorusGrid build_grid(int n_side, double side_length) {
  if (n_side < 8 || n_side % 2 != 0)
    throw std::invalid_argument("build_grid: n_side must be even >= 8");
  if (!(side_length > 0.0))
    throw std::invalid_argument("build_grid: side_length must be positive");
  TorusGrid g;
  g.n_side = n_side;
  g.side_length = side_length;
  g.spacing = side_length / n_side;
  return g;
}

namespace {

inline double axis_delta(double a, double b, double L) {
  double d = std::fabs(a - b);
  d = std::fmod(d, L);
  return std::min(d, L - d);
}

}  // namespace

double geodesic_distance(const Point2& p, const Point2& q, const TorusGrid& grid) {
  const double dx = axis_delta(p.x, q.x, grid.side_length);
  const double dy = axis_delta(p.y, q.y, grid.side_length);
  return std::hypot(dx, dy);
}

int ObservationSet::cell_count_true() const {
  return static_cast<int>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

std::vector<int> ObservationSet::cells() const {
  std::vector<int> out;
  out.reserve(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) out.push_back(static_cast<int>(i));
  return out;
}

namespace {

bool mask_connected(const TorusGrid& grid, const std::vector<std::uint8_t>& mask) {
  const int n = grid.n_side;
  int first = -1;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) {
      first = static_cast<int>(i);
      break;
    }
  if (first < 0) return false;
  std::vector<std::uint8_t> seen(mask.size(), 0);
  std::queue<int> q;
  q.push(first);
  seen[first] = 1;
  int reached = 0;
  while (!q.empty()) {
    const int c = q.front();
    q.pop();
    ++reached;
    const int ix = c % n, iy = c / n;
    const int nb[4] = {grid.index(ix + 1, iy), grid.index(ix - 1, iy),
                       grid.index(ix, iy + 1), grid.index(ix, iy - 1)};
    for (int m : nb)
      if (mask[m] && !seen[m]) {
        seen[m] = 1;
        q.push(m);
      }
  }
  int total = 0;
  for (auto v : mask) total += v;
  return reached == total;
}

}  // namespace

ObservationSet make_observation(const TorusGrid& grid, std::vector<std::uint8_t> mask) {
  if (static_cast<int>(mask.size()) != grid.cell_count())
    throw std::invalid_argument("make_observation: mask size mismatch");
  ObservationSet o;
  o.grid = grid;
  o.mask = std::move(mask);
  const int cnt = o.cell_count_true();
  if (cnt == 0) throw std::invalid_argument("make_observation: empty mask");
  o.measure = grid.spacing * grid.spacing * cnt;
  o.connected_flag = mask_connected(grid, o.mask);
  return o;
}

ObservationSet whole_torus(const TorusGrid& grid) {
  return make_observation(grid, std::vector<std::uint8_t>(grid.cell_count(), 1));
}

ObservationSet strip(const TorusGrid& grid, int axis, double center, double half_width) {
  std::vector<std::uint8_t> mask(grid.cell_count(), 0);
  for (int i = 0; i < grid.cell_count(); ++i) {
    const Point2 p = grid.node(i);
    const double coord = (axis == 0) ? p.y : p.x;
    mask[i] = axis_delta(coord, center, grid.side_length) < half_width ? 1 : 0;
  }
  return make_observation(grid, std::move(mask));
}

ObservationSet disc(const TorusGrid& grid, const Point2& center, double radius) {
  std::vector<std::uint8_t> mask(grid.cell_count(), 0);
  for (int i = 0; i < grid.cell_count(); ++i)
    mask[i] = geodesic_distance(grid.node(i), center, grid) < radius ? 1 : 0;
  return make_observation(grid, std::move(mask));
}

ObservationSet cross(const TorusGrid& grid, double x0, double y0, double half_width) {
  return set_union(strip(grid, 0, y0, half_width), strip(grid, 1, x0, half_width));
}

ObservationSet complement(const ObservationSet& o) {
  std::vector<std::uint8_t> mask(o.mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = o.mask[i] ? 0 : 1;
  return make_observation(o.grid, std::move(mask));
}

ObservationSet set_union(const ObservationSet& a, const ObservationSet& b) {
  if (a.grid.n_side != b.grid.n_side)
    throw std::invalid_argument("set_union: grid mismatch");
  std::vector<std::uint8_t> mask(a.mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = (a.mask[i] | b.mask[i]);
  return make_observation(a.grid, std::move(mask));
}

std::vector<Point2> antipodal_set(const Point2& p, const TorusGrid& grid, double tol) {
  if (tol < grid.spacing)
    throw std::invalid_argument("antipodal_set: tol must be >= spacing");
  double dmax = 0.0;
  std::vector<double> dist(grid.cell_count());
  for (int i = 0; i < grid.cell_count(); ++i) {
    dist[i] = geodesic_distance(p, grid.node(i), grid);
    dmax = std::max(dmax, dist[i]);
  }
  std::vector<Point2> out;
  for (int i = 0; i < grid.cell_count(); ++i)
    if (dist[i] >= dmax - tol) out.push_back(grid.node(i));
  return out;
}

namespace {

// Coprime direction list covering all rational slopes p/q with |p|, |q| <= 8
// (axis directions included); closed geodesics on the flat torus have exactly
// these slopes and are the typical GCC violators.
std::vector<Point2> rational_directions(int max_pq) {
  std::vector<Point2> dirs;
  for (int p = -max_pq; p <= max_pq; ++p)
    for (int q = -max_pq; q <= max_pq; ++q) {
      if (p == 0 && q == 0) continue;
      if (std::gcd(std::abs(p), std::abs(q)) != 1) continue;
      const double norm = std::hypot(double(q), double(p));
      dirs.push_back({q / norm, p / norm});
    }
  return dirs;
}

// First time in (0, T) at which the ray enters O, sampled with a marching
// step of spacing/4; negative if the ray never enters.
double first_entry_time(const ObservationSet& obs, const Point2& start,
                        const Point2& dir, double T) {
  const double step = obs.grid.spacing / 4.0;
  const double L = obs.grid.side_length;
  const long nsteps = static_cast<long>(std::ceil(T / step));
  for (long j = 1; j <= nsteps; ++j) {
    const double t = std::min(j * step, T);
    double x = std::fmod(start.x + t * dir.x, L);
    double y = std::fmod(start.y + t * dir.y, L);
    if (x < 0) x += L;
    if (y < 0) y += L;
    if (obs.contains_point(x, y)) return t;
  }
  return -1.0;
}

}  // namespace

GccReport check_gcc(const ObservationSet& obs, double T, int n_directions, int n_offsets) {
  if (!(T > 0.0)) throw std::invalid_argument("check_gcc: T must be positive");
  if (n_directions < 16 || n_offsets < 16)
    throw std::invalid_argument("check_gcc: sample counts must be >= 16");

  const TorusGrid& grid = obs.grid;
  std::vector<Point2> dirs;
  for (int i = 0; i < n_directions; ++i) {
    const double th = kTwoPi * i / n_directions;
    dirs.push_back({std::cos(th), std::sin(th)});
  }
  for (const Point2& d : rational_directions(8)) dirs.push_back(d);

  const int k = static_cast<int>(std::ceil(std::sqrt(double(n_offsets))));
  std::vector<Point2> offsets;
  for (int j = 0; j < k && static_cast<int>(offsets.size()) < n_offsets; ++j)
    for (int i = 0; i < k && static_cast<int>(offsets.size()) < n_offsets; ++i)
      offsets.push_back({(i + 0.5) * grid.side_length / k, (j + 0.5) * grid.side_length / k});

  GccReport rep;
  rep.min_entry_margin = T;
  bool all_with_margin = true;
  for (const Point2& d : dirs) {
    for (const Point2& o : offsets) {
      ++rep.rays_traced;
      const double t_entry = first_entry_time(obs, o, d, T);
      if (t_entry < 0.0) {
        rep.verdict = GccVerdict::violated;
        rep.witness = GeodesicRay{o, d, T};
        rep.min_entry_margin = 0.0;
        return rep;
      }
      const double margin = T - t_entry;
      rep.min_entry_margin = std::min(rep.min_entry_margin, margin);
      if (margin <= 2.0 * grid.spacing) all_with_margin = false;
    }
  }
  rep.verdict = all_with_margin ? GccVerdict::satisfied : GccVerdict::undecided;
  return rep;
}

HypothesisHReport check_hypothesis_H(const ObservationSet& obs, const TorusGrid& grid,
                                     double T) {
  HypothesisHReport rep;
  rep.gcc = check_gcc(obs, T);
  if (rep.gcc.verdict != GccVerdict::satisfied) {
    rep.holds = false;
    return rep;
  }
  for (int i = 0; i < grid.cell_count(); ++i) {
    if (!obs.contains_cell(i)) continue;
    const Point2 p = grid.node(i);
    bool covered = true;
    for (const Point2& q : antipodal_set(p, grid, grid.spacing)) {
      if (!obs.contains_point(q.x, q.y)) {
        covered = false;
        break;
      }
    }
    if (covered) {
      rep.holds = true;
      rep.witness_p = p;
      return rep;
    }
  }
  rep.holds = false;
  return rep;
}

}  // namespace speclab
