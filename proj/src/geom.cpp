#include "chipvec/geom.hpp"

#include <algorithm>
#include <string>

namespace chipvec {

GcellGrid GcellGrid::over(Rect region, dbu_t cell_w, dbu_t cell_h) {
  if (cell_w <= 0 || cell_h <= 0) throw GeometryError("cell size must be positive");
  if (!region.valid() || region.width() <= 0 || region.height() <= 0)
    throw GeometryError("grid region must have positive extent");
  GcellGrid g;
  g.origin = region.lo;
  g.cell_w = cell_w;
  g.cell_h = cell_h;
  g.nx = static_cast<int>((region.width() + cell_w - 1) / cell_w);
  g.ny = static_cast<int>((region.height() + cell_h - 1) / cell_h);
  g.covered = region;
  return g;
}

int GcellGrid::cell_of(Point p) const {
  if (p.x < covered.lo.x || p.x > covered.hi.x || p.y < covered.lo.y || p.y > covered.hi.y)
    throw OutOfGrid("point (" + std::to_string(p.x) + "," + std::to_string(p.y) + ")");
  int ix = static_cast<int>((p.x - origin.x) / cell_w);
  int iy = static_cast<int>((p.y - origin.y) / cell_h);
  if (ix >= nx) ix = nx - 1;
  if (iy >= ny) iy = ny - 1;
  return cell_index(ix, iy);
}

dbu_t hpwl(const std::vector<Point>& points) {
  if (points.empty()) throw EmptyPinSet();
  const Rect b = bounding_box(points);
  return b.width() + b.height();
}

Rect bounding_box(const std::vector<Point>& points) {
  if (points.empty()) throw EmptyPinSet();
  Rect b{points[0], points[0]};
  for (const Point& p : points) b.expand_to(p);
  return b;
}

std::vector<std::pair<int, dbu_t>> rasterize_segment(const WireSegment& seg,
                                                     const GcellGrid& grid) {
  if (!seg.rectilinear()) throw GeometryError("cannot rasterize a diagonal segment");
  const Rect ext = grid.covered;
  const dbu_t lx = std::min(seg.xs, seg.xe), hx = std::max(seg.xs, seg.xe);
  const dbu_t ly = std::min(seg.ys, seg.ye), hy = std::max(seg.ys, seg.ye);
  if (lx < ext.lo.x || hx > ext.hi.x || ly < ext.lo.y || hy > ext.hi.y)
    throw OutOfGrid("segment (" + std::to_string(seg.xs) + "," + std::to_string(seg.ys) + ")-(" +
                    std::to_string(seg.xe) + "," + std::to_string(seg.ye) + ")");

  std::vector<std::pair<int, dbu_t>> out;
  if (seg.length() == 0) {
    out.emplace_back(grid.cell_of(Point{seg.xs, seg.ys}), 0);
    return out;
  }
  if (hy == ly) {  // horizontal run across one row
    int iy = static_cast<int>((ly - grid.origin.y) / grid.cell_h);
    if (iy >= grid.ny) iy = grid.ny - 1;
    int ix0 = static_cast<int>((lx - grid.origin.x) / grid.cell_w);
    if (ix0 >= grid.nx) ix0 = grid.nx - 1;
    for (int ix = ix0; ix < grid.nx; ++ix) {
      const dbu_t clo = grid.origin.x + static_cast<dbu_t>(ix) * grid.cell_w;
      const dbu_t chi = clo + grid.cell_w;
      const dbu_t ov = std::min(hx, chi) - std::max(lx, clo);
      if (ov > 0) out.emplace_back(grid.cell_index(ix, iy), ov);
      if (chi >= hx) break;
    }
  } else {  // vertical run down one column
    int ix = static_cast<int>((lx - grid.origin.x) / grid.cell_w);
    if (ix >= grid.nx) ix = grid.nx - 1;
    int iy0 = static_cast<int>((ly - grid.origin.y) / grid.cell_h);
    if (iy0 >= grid.ny) iy0 = grid.ny - 1;
    for (int iy = iy0; iy < grid.ny; ++iy) {
      const dbu_t clo = grid.origin.y + static_cast<dbu_t>(iy) * grid.cell_h;
      const dbu_t chi = clo + grid.cell_h;
      const dbu_t ov = std::min(hy, chi) - std::max(ly, clo);
      if (ov > 0) out.emplace_back(grid.cell_index(ix, iy), ov);
      if (chi >= hy) break;
    }
  }
  return out;
}

dbu_t overlap_area(const Rect& a, const Rect& b) {
  const dbu_t w = std::min(a.hi.x, b.hi.x) - std::max(a.lo.x, b.lo.x);
  const dbu_t h = std::min(a.hi.y, b.hi.y) - std::max(a.lo.y, b.lo.y);
  if (w <= 0 || h <= 0) return 0;
  return w * h;
}

}  // namespace chipvec
