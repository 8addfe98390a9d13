#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <vector>

#include "seba/error.hpp"

namespace seba {

// Scalar field on a regular grid of nodes over [x0,x1] x [y0,y1], optionally
// x-periodic (node column 0 then also represents x = x1).  Node (ix, iy) is
// stored at index iy*nx + ix.  image_points, when present, holds the mapped
// position T(node) for each node in the same order.
struct GridField {
  int nx = 0, ny = 0;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool x_periodic = false;
  std::vector<double> values;
  std::vector<std::array<double, 2>> image_points;

  GridField() = default;
  GridField(int nx_, int ny_, double x0_, double x1_, double y0_, double y1_,
            bool periodic, std::vector<double> vals,
            std::vector<std::array<double, 2>> image = {})
      : nx(nx_), ny(ny_), x0(x0_), x1(x1_), y0(y0_), y1(y1_), x_periodic(periodic),
        values(std::move(vals)), image_points(std::move(image)) {
    validate();
  }

  void validate() const {
    if (nx < 2 || ny < 2) throw InvalidArgument("GridField: nx, ny must be >= 2");
    if (!(x1 > x0) || !(y1 > y0)) throw InvalidArgument("GridField: empty domain");
    if (values.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny))
      throw InvalidArgument("GridField: value count != nx*ny");
    for (double v : values)
      if (!std::isfinite(v)) throw InvalidArgument("GridField: non-finite value");
    if (!image_points.empty()) {
      if (image_points.size() != values.size())
        throw InvalidArgument("GridField: image point count != node count");
      for (const auto& p : image_points)
        if (!std::isfinite(p[0]) || !std::isfinite(p[1]))
          throw InvalidArgument("GridField: non-finite image point");
    }
  }

  double dx() const { return (x1 - x0) / (x_periodic ? nx : nx - 1); }
  double dy() const { return (y1 - y0) / (ny - 1); }
  int cells_x() const { return x_periodic ? nx : nx - 1; }
  int cells_y() const { return ny - 1; }
  std::size_t node(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * nx + ix;
  }
  double value(int ix, int iy) const { return values[node(ix, iy)]; }
  double node_x(int ix) const { return x0 + ix * dx(); }
  double node_y(int iy) const { return y0 + iy * dy(); }

  // Upsample by an integer factor with bilinear interpolation of values and
  // image points; geometry and periodicity are preserved.
  GridField refined(int factor) const {
    if (factor < 1) throw InvalidArgument("GridField: refine factor must be >= 1");
    if (factor == 1) return *this;
    const int fnx = x_periodic ? nx * factor : (nx - 1) * factor + 1;
    const int fny = (ny - 1) * factor + 1;
    GridField f;
    f.nx = fnx;
    f.ny = fny;
    f.x0 = x0;
    f.x1 = x1;
    f.y0 = y0;
    f.y1 = y1;
    f.x_periodic = x_periodic;
    f.values.resize(static_cast<std::size_t>(fnx) * fny);
    if (!image_points.empty()) f.image_points.resize(f.values.size());
    for (int iy = 0; iy < fny; ++iy) {
      const int cy = iy / factor == ny - 1 ? ny - 2 : iy / factor;
      const double ty = static_cast<double>(iy - cy * factor) / factor;
      for (int ix = 0; ix < fnx; ++ix) {
        int cx = ix / factor;
        double tx = static_cast<double>(ix - cx * factor) / factor;
        if (!x_periodic && cx == nx - 1) {
          cx = nx - 2;
          tx = 1.0;
        }
        const int cxn = x_periodic ? (cx + 1) % nx : cx + 1;
        const double w00 = (1 - tx) * (1 - ty), w10 = tx * (1 - ty);
        const double w01 = (1 - tx) * ty, w11 = tx * ty;
        const std::size_t n00 = node(cx, cy), n10 = node(cxn, cy);
        const std::size_t n01 = node(cx, cy + 1), n11 = node(cxn, cy + 1);
        const std::size_t out = static_cast<std::size_t>(iy) * fnx + ix;
        f.values[out] =
            w00 * values[n00] + w10 * values[n10] + w01 * values[n01] + w11 * values[n11];
        if (!image_points.empty()) {
          for (int c = 0; c < 2; ++c)
            f.image_points[out][c] = w00 * image_points[n00][c] + w10 * image_points[n10][c] +
                                     w01 * image_points[n01][c] + w11 * image_points[n11][c];
        }
      }
    }
    return f;
  }
};

namespace detail {

// A level-set vertex: a point on a cell edge between two nodes, kept with its
// interpolation data so image positions can be reconstructed exactly.
struct MsVertex {
  double x = 0, y = 0;
  std::size_t na = 0, nb = 0;  // grid nodes of the edge (na == nb for corners)
  double t = 0;                // position between the nodes
  bool crossing = false;
};

// Canonical edge interpolation: endpoints ordered by node index so both cells
// sharing an edge compute bitwise-identical crossing points.
inline MsVertex edge_crossing(std::size_t na, double ax, double ay, double va,
                              std::size_t nb, double bx, double by, double vb, double tau) {
  if (na > nb) {
    std::swap(na, nb);
    std::swap(ax, bx);
    std::swap(ay, by);
    std::swap(va, vb);
  }
  MsVertex v;
  v.na = na;
  v.nb = nb;
  v.t = (tau - va) / (vb - va);
  v.crossing = true;
  // Snap degenerate crossings onto the node so a level set passing exactly
  // through a grid point stays connected across the four incident cells.
  if (v.t <= 0.0) {
    v.t = 0.0;
    v.x = ax;
    v.y = ay;
  } else if (v.t >= 1.0) {
    v.t = 1.0;
    v.x = bx;
    v.y = by;
  } else {
    v.x = ax + v.t * (bx - ax);
    v.y = ay + v.t * (by - ay);
  }
  return v;
}

inline double polygon_area(const std::vector<MsVertex>& poly) {
  double s = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    s += a.x * b.y - b.x * a.y;
  }
  return 0.5 * std::abs(s);
}

}  // namespace detail

// One straight contour piece inside a cell, endpoints on cell edges.
struct ContourSegment {
  detail::MsVertex a, b;
};

struct LevelSet {
  double tau = 0.0;
  std::vector<ContourSegment> segments;
  double length = 0.0;        // total polyline length of the level set
  double image_length = 0.0;  // length after mapping vertices through T
  double area_super = 0.0;    // area of {u > tau}
  double area_sub = 0.0;
};

// Marching squares with linear edge interpolation; saddle cells resolved by
// the cell-average rule; super-level areas from the per-cell polygons of the
// same topology, so lengths and areas are mutually consistent.
inline LevelSet extract_level_set(const GridField& f, double tau) {
  LevelSet out;
  out.tau = tau;
  const double period = f.x1 - f.x0;
  const bool has_image = !f.image_points.empty();

  auto image_of = [&](const detail::MsVertex& v) -> std::array<double, 2> {
    const auto& pa = f.image_points[v.na];
    const auto& pb = f.image_points[v.nb];
    return {pa[0] + v.t * (pb[0] - pa[0]), pa[1] + v.t * (pb[1] - pa[1])};
  };
  auto image_dist = [&](const detail::MsVertex& a, const detail::MsVertex& b) {
    const auto ia = image_of(a), ib = image_of(b);
    double dx = std::abs(ia[0] - ib[0]);
    if (f.x_periodic) dx = std::min(dx, period - dx);
    const double dy = ia[1] - ib[1];
    return std::sqrt(dx * dx + dy * dy);
  };

  std::vector<detail::MsVertex> poly;
  std::vector<detail::MsVertex> tri1, tri2;
  for (int cy = 0; cy < f.cells_y(); ++cy) {
    for (int cx = 0; cx < f.cells_x(); ++cx) {
      const int ixr = f.x_periodic ? (cx + 1) % f.nx : cx + 1;
      const std::size_t n00 = f.node(cx, cy), n10 = f.node(ixr, cy);
      const std::size_t n11 = f.node(ixr, cy + 1), n01 = f.node(cx, cy + 1);
      const double v00 = f.values[n00], v10 = f.values[n10];
      const double v11 = f.values[n11], v01 = f.values[n01];
      const bool b00 = v00 > tau, b10 = v10 > tau, b11 = v11 > tau, b01 = v01 > tau;
      const int inside = (b00 ? 1 : 0) + (b10 ? 1 : 0) + (b11 ? 1 : 0) + (b01 ? 1 : 0);
      // Corner coordinates from the node index in one canonical expression,
      // so shared edges of adjacent cells carry bitwise-equal endpoints.
      const double xl = f.x0 + cx * f.dx(), xr = f.x0 + (cx + 1) * f.dx();
      const double yb = f.node_y(cy), yt = f.node_y(cy + 1);
      if (inside == 0) continue;
      if (inside == 4) {
        out.area_super += (xr - xl) * (yt - yb);
        continue;
      }

      // Walk corners BL -> BR -> TR -> TL with their joining edges.
      const std::array<std::size_t, 4> nodes{n00, n10, n11, n01};
      const std::array<double, 4> vals{v00, v10, v11, v01};
      const std::array<bool, 4> in{b00, b10, b11, b01};
      const std::array<double, 4> px{xl, xr, xr, xl};
      const std::array<double, 4> py{yb, yb, yt, yt};

      const bool saddle = (b00 && b11 && !b10 && !b01) || (b10 && b01 && !b00 && !b11);
      const bool disconnected = saddle && (v00 + v10 + v11 + v01) / 4.0 <= tau;

      auto corner = [&](int i) {
        detail::MsVertex v;
        v.x = px[i];
        v.y = py[i];
        v.na = v.nb = nodes[i];
        v.t = 0.0;
        return v;
      };
      auto crossing = [&](int i, int j) {
        return detail::edge_crossing(nodes[i], px[i], py[i], vals[i], nodes[j], px[j],
                                     py[j], vals[j], tau);
      };

      std::vector<detail::MsVertex>* polys[2] = {nullptr, nullptr};
      int npoly = 0;
      if (disconnected) {
        tri1.clear();
        tri2.clear();
        for (int i = 0; i < 4; ++i) {
          if (!in[i]) continue;
          const int prev = (i + 3) % 4, next = (i + 1) % 4;
          auto& tri = (npoly == 0 ? tri1 : tri2);
          tri.push_back(corner(i));
          tri.push_back(crossing(i, next));
          tri.push_back(crossing(prev, i));
          polys[npoly++] = &tri;
        }
      } else {
        poly.clear();
        for (int i = 0; i < 4; ++i) {
          const int next = (i + 1) % 4;
          if (in[i]) poly.push_back(corner(i));
          if (in[i] != in[next]) poly.push_back(crossing(i, next));
        }
        polys[npoly++] = &poly;
      }

      for (int q = 0; q < npoly; ++q) {
        const auto& pg = *polys[q];
        out.area_super += detail::polygon_area(pg);
        for (std::size_t i = 0; i < pg.size(); ++i) {
          const auto& a = pg[i];
          const auto& b = pg[(i + 1) % pg.size()];
          if (!a.crossing || !b.crossing) continue;
          if (a.x == b.x && a.y == b.y) continue;  // corner touch, no content
          out.segments.push_back({a, b});
          out.length += std::hypot(a.x - b.x, a.y - b.y);
          if (has_image) out.image_length += image_dist(a, b);
        }
      }
    }
  }
  const double total = (f.x1 - f.x0) * (f.y1 - f.y0);
  out.area_sub = total - out.area_super;
  return out;
}

// Chain level-set segments into polylines.  Crossing points on shared cell
// edges are computed canonically, so endpoint matching is exact; chains stop
// at the periodic seam, where the wrapped copy carries a different x.
inline std::vector<std::vector<std::array<double, 2>>> chain_polylines(
    const std::vector<ContourSegment>& segments) {
  struct Key {
    std::uint64_t x, y;
    bool operator<(const Key& o) const { return x != o.x ? x < o.x : y < o.y; }
  };
  auto key_of = [](const detail::MsVertex& v) {
    Key k;
    std::memcpy(&k.x, &v.x, 8);
    std::memcpy(&k.y, &v.y, 8);
    return k;
  };
  std::multimap<Key, std::size_t> ends;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    ends.emplace(key_of(segments[i].a), 2 * i);
    ends.emplace(key_of(segments[i].b), 2 * i + 1);
  }
  std::vector<bool> used(segments.size(), false);
  std::vector<std::vector<std::array<double, 2>>> chains;
  auto take_next = [&](const Key& k, std::size_t& seg, bool& from_a) {
    auto range = ends.equal_range(k);
    for (auto it = range.first; it != range.second; ++it) {
      const std::size_t s = it->second / 2;
      if (used[s]) continue;
      seg = s;
      from_a = (it->second % 2) == 0;
      return true;
    }
    return false;
  };
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    std::vector<std::array<double, 2>> chain{{segments[i].a.x, segments[i].a.y},
                                             {segments[i].b.x, segments[i].b.y}};
    // Extend forward from b, then backward from a.
    for (int dir = 0; dir < 2; ++dir) {
      while (true) {
        const auto& tip = dir == 0 ? chain.back() : chain.front();
        detail::MsVertex tv;
        tv.x = tip[0];
        tv.y = tip[1];
        std::size_t seg = 0;
        bool from_a = false;
        if (!take_next(key_of(tv), seg, from_a)) break;
        used[seg] = true;
        const auto& nxt = from_a ? segments[seg].b : segments[seg].a;
        if (dir == 0)
          chain.push_back({nxt.x, nxt.y});
        else
          chain.insert(chain.begin(), {nxt.x, nxt.y});
      }
    }
    chains.push_back(std::move(chain));
  }
  return chains;
}

}  // namespace seba
