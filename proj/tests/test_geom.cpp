#include "chipvec/geom.hpp"

#include "chipvec/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace chipvec;

TEST_CASE("hpwl basics") {
  CHECK(hpwl({{2, 3}, {7, 9}, {4, 1}}) == 13);
  CHECK(hpwl({{5, 5}}) == 0);
  CHECK(hpwl({{0, 0}, {10, 20}, {5, 5}}) == 30);
  CHECK_THROWS_AS(hpwl({}), EmptyPinSet);
}

TEST_CASE("hpwl permutation and translation invariance") {
  Rng rng(11);
  for (int it = 0; it < 200; ++it) {
    std::vector<Point> pts;
    const int n = static_cast<int>(rng.uniform_int(1, 12));
    for (int i = 0; i < n; ++i)
      pts.push_back({rng.uniform_int(-5000, 5000), rng.uniform_int(-5000, 5000)});
    const dbu_t base = hpwl(pts);
    std::vector<Point> shuffled = pts;
    rng.shuffle(shuffled);
    CHECK(hpwl(shuffled) == base);
    const dbu_t tx = rng.uniform_int(-1000, 1000), ty = rng.uniform_int(-1000, 1000);
    std::vector<Point> moved;
    for (const Point& p : pts) moved.push_back({p.x + tx, p.y + ty});
    CHECK(hpwl(moved) == base);
  }
}

TEST_CASE("rasterize_segment examples") {
  GcellGrid grid = GcellGrid::over(Rect{{0, 0}, {100, 100}}, 10, 10);

  SUBCASE("three-cell horizontal split") {
    const auto cells = rasterize_segment(WireSegment{0, 0, 25, 0, 2}, grid);
    REQUIRE(cells.size() == 3);
    CHECK(cells[0] == std::pair<int, dbu_t>{0, 10});
    CHECK(cells[1] == std::pair<int, dbu_t>{1, 10});
    CHECK(cells[2] == std::pair<int, dbu_t>{2, 5});
  }
  SUBCASE("degenerate segment reports its containing cell") {
    const auto cells = rasterize_segment(WireSegment{3, 3, 3, 3, 2}, grid);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0] == std::pair<int, dbu_t>{0, 0});
  }
  SUBCASE("half-open boundaries") {
    const auto cells = rasterize_segment(WireSegment{10, 0, 20, 0, 2}, grid);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0] == std::pair<int, dbu_t>{1, 10});
  }
  SUBCASE("out of grid") {
    CHECK_THROWS_AS(rasterize_segment(WireSegment{-5, 0, 5, 0, 2}, grid), OutOfGrid);
    CHECK_THROWS_AS(rasterize_segment(WireSegment{0, 90, 0, 120, 2}, grid), OutOfGrid);
  }
}

TEST_CASE("rasterize_segment conserves length against the per-unit oracle") {
  Rng rng(17);
  for (int it = 0; it < 300; ++it) {
    const dbu_t cw = rng.uniform_int(3, 40);
    const dbu_t ch = rng.uniform_int(3, 40);
    const dbu_t w = rng.uniform_int(cw, 400);
    const dbu_t h = rng.uniform_int(ch, 400);
    const Point lo{rng.uniform_int(-50, 50), rng.uniform_int(-50, 50)};
    const GcellGrid grid = GcellGrid::over(Rect{lo, {lo.x + w, lo.y + h}}, cw, ch);
    WireSegment seg;
    seg.layer = 2;
    const bool horizontal = rng.next_u64() & 1;
    if (horizontal) {
      seg.ys = seg.ye = rng.uniform_int(grid.covered.lo.y, grid.covered.hi.y);
      seg.xs = rng.uniform_int(grid.covered.lo.x, grid.covered.hi.x);
      seg.xe = rng.uniform_int(grid.covered.lo.x, grid.covered.hi.x);
    } else {
      seg.xs = seg.xe = rng.uniform_int(grid.covered.lo.x, grid.covered.hi.x);
      seg.ys = rng.uniform_int(grid.covered.lo.y, grid.covered.hi.y);
      seg.ye = rng.uniform_int(grid.covered.lo.y, grid.covered.hi.y);
    }
    const auto cells = rasterize_segment(seg, grid);
    dbu_t total = 0;
    for (const auto& [cell, len] : cells) total += len;
    CHECK(total == seg.length());
    // ascending cell order
    for (std::size_t i = 1; i < cells.size(); ++i) CHECK(cells[i - 1].first < cells[i].first);
    CHECK(cells == oracles::rasterize_per_unit(seg, grid));
  }
}

TEST_CASE("overlap_area") {
  CHECK(overlap_area(Rect{{0, 0}, {4, 4}}, Rect{{2, 2}, {6, 6}}) == 4);
  CHECK(overlap_area(Rect{{0, 0}, {4, 4}}, Rect{{10, 10}, {16, 16}}) == 0);
  CHECK(overlap_area(Rect{{0, 0}, {3, 5}}, Rect{{0, 0}, {3, 5}}) == 15);

  Rng rng(23);
  for (int it = 0; it < 200; ++it) {
    auto rect = [&] {
      const dbu_t x1 = rng.uniform_int(-100, 100), x2 = rng.uniform_int(-100, 100);
      const dbu_t y1 = rng.uniform_int(-100, 100), y2 = rng.uniform_int(-100, 100);
      return Rect{{std::min(x1, x2), std::min(y1, y2)}, {std::max(x1, x2), std::max(y1, y2)}};
    };
    const Rect a = rect(), b = rect();
    CHECK(overlap_area(a, b) == overlap_area(b, a));
    CHECK(overlap_area(a, b) <= std::min(a.area(), b.area()));
    CHECK(overlap_area(a, b) >= 0);
  }
}

TEST_CASE("grid cell lookup is total over the covered region") {
  GcellGrid grid = GcellGrid::over(Rect{{0, 0}, {95, 73}}, 10, 10);
  CHECK(grid.nx == 10);
  CHECK(grid.ny == 8);
  CHECK_FALSE(grid.covers_exactly());
  CHECK(grid.cell_of({0, 0}) == 0);
  CHECK(grid.cell_of({95, 73}) == grid.cells() - 1);  // far corner clamps into the last cell
  CHECK(grid.cell_of({10, 0}) == 1);                  // half-open boundary
  CHECK_THROWS_AS(grid.cell_of({96, 0}), OutOfGrid);
}
