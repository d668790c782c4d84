#pragma once

#include <compare>
#include <cstdint>
#include <utility>
#include <vector>

#include "chipvec/errors.hpp"

namespace chipvec {

using dbu_t = std::int64_t;

struct Point {
  dbu_t x = 0;
  dbu_t y = 0;
  auto operator<=>(const Point&) const = default;
};

struct Rect {
  Point lo;
  Point hi;

  bool operator==(const Rect&) const = default;

  dbu_t width() const { return hi.x - lo.x; }
  dbu_t height() const { return hi.y - lo.y; }
  dbu_t area() const { return width() * height(); }
  bool valid() const { return lo.x <= hi.x && lo.y <= hi.y; }
  bool contains(Point p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }
  void expand_to(Point p) {
    if (p.x < lo.x) lo.x = p.x;
    if (p.y < lo.y) lo.y = p.y;
    if (p.x > hi.x) hi.x = p.x;
    if (p.y > hi.y) hi.y = p.y;
  }
};

// Axis-aligned routed wire piece; layer indexing follows the convention
// that even indices are metal layers and odd indices are cut (via) layers,
// with layer 0 reserved for placement.
struct WireSegment {
  dbu_t xs = 0, ys = 0, xe = 0, ye = 0;
  int layer = 2;

  bool operator==(const WireSegment&) const = default;

  bool rectilinear() const { return xs == xe || ys == ye; }
  bool horizontal() const { return ys == ye && xs != xe; }
  bool vertical() const { return xs == xe && ys != ye; }
  dbu_t length() const {
    const dbu_t dx = xe >= xs ? xe - xs : xs - xe;
    const dbu_t dy = ye >= ys ? ye - ys : ys - ye;
    return dx + dy;
  }
};

// Via between two metal layers (layer_bot < layer_top, both metal indices).
struct ViaInstance {
  dbu_t xc = 0, yc = 0;
  int layer_bot = 2;
  int layer_top = 4;

  bool operator==(const ViaInstance&) const = default;
};

// Uniform grid over a region; cell intervals are half-open [lo, hi) on both
// axes so every in-grid point maps to exactly one cell. The last row/column
// may extend past the covered region (partial cells, see covers_exactly()).
struct GcellGrid {
  Point origin;
  dbu_t cell_w = 1;
  dbu_t cell_h = 1;
  int nx = 1;
  int ny = 1;
  Rect covered;  // region the grid was built over (clip extent)

  bool operator==(const GcellGrid&) const = default;

  static GcellGrid over(Rect region, dbu_t cell_w, dbu_t cell_h);

  int cells() const { return nx * ny; }
  bool covers_exactly() const {
    return covered.width() == static_cast<dbu_t>(nx) * cell_w &&
           covered.height() == static_cast<dbu_t>(ny) * cell_h;
  }
  int cell_index(int ix, int iy) const { return iy * nx + ix; }
  // Full (unclipped) rect of a cell.
  Rect cell_rect(int ix, int iy) const {
    Point lo{origin.x + ix * cell_w, origin.y + iy * cell_h};
    return Rect{lo, Point{lo.x + cell_w, lo.y + cell_h}};
  }
  // Cell rect clipped to the covered region (partial cells at the far edge).
  Rect cell_clip_rect(int ix, int iy) const {
    Rect r = cell_rect(ix, iy);
    if (r.hi.x > covered.hi.x) r.hi.x = covered.hi.x;
    if (r.hi.y > covered.hi.y) r.hi.y = covered.hi.y;
    return r;
  }
  // Half-open cell lookup; points exactly on the far covered edge clamp into
  // the last cell so the covered region maps total.
  int cell_of(Point p) const;
};

// Half-perimeter wirelength of a point set.
dbu_t hpwl(const std::vector<Point>& points);

Rect bounding_box(const std::vector<Point>& points);

// Overlapped cells of a rectilinear segment, ascending cell index, with the
// in-cell overlap length. Lengths sum to the segment length. Zero-length
// segments report the single containing cell with length 0.
std::vector<std::pair<int, dbu_t>> rasterize_segment(const WireSegment& seg,
                                                     const GcellGrid& grid);

dbu_t overlap_area(const Rect& a, const Rect& b);

}  // namespace chipvec
