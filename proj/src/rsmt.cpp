#include "chipvec/rsmt.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>

namespace chipvec {

namespace {

dbu_t manhattan(Point a, Point b) {
  return std::llabs(a.x - b.x) + std::llabs(a.y - b.y);
}

dbu_t prim_mst(const std::vector<Point>& pts) {
  const std::size_t n = pts.size();
  if (n < 2) return 0;
  std::vector<dbu_t> best(n, std::numeric_limits<dbu_t>::max());
  std::vector<bool> in_tree(n, false);
  best[0] = 0;
  dbu_t total = 0;
  for (std::size_t iter = 0; iter < n; ++iter) {
    std::size_t u = n;
    dbu_t u_cost = std::numeric_limits<dbu_t>::max();
    for (std::size_t i = 0; i < n; ++i)
      if (!in_tree[i] && best[i] < u_cost) {
        u_cost = best[i];
        u = i;
      }
    in_tree[u] = true;
    total += u_cost;
    for (std::size_t i = 0; i < n; ++i)
      if (!in_tree[i]) best[i] = std::min(best[i], manhattan(pts[u], pts[i]));
  }
  return total;
}

std::vector<Point> dedupe(const std::vector<Point>& points) {
  std::vector<Point> pts = points;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

constexpr std::size_t kRefineLimit = 10;  // 1-Steiner only for small nets

}  // namespace

dbu_t rmst_length(const std::vector<Point>& points) {
  if (points.empty()) throw EmptyPinSet();
  return prim_mst(dedupe(points));
}

dbu_t estimate_rsmt(const std::vector<Point>& points) {
  if (points.empty()) throw EmptyPinSet();
  std::vector<Point> pts = dedupe(points);
  const std::size_t n = pts.size();
  if (n == 1) return 0;
  if (n == 2) return manhattan(pts[0], pts[1]);
  if (n == 3) return hpwl(pts);  // 3-pin RSMT equals the bounding-box semiperimeter
  dbu_t current = prim_mst(pts);
  if (n > kRefineLimit) return current;

  std::vector<dbu_t> xs, ys;
  for (const Point& p : pts) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

  std::vector<Point> tree = pts;  // pins + inserted Steiner points
  const std::size_t max_insertions = 2 * n;
  for (std::size_t iter = 0; iter < max_insertions; ++iter) {
    dbu_t best_len = current;
    Point best_candidate{};
    bool improved = false;
    for (dbu_t cx : xs) {
      for (dbu_t cy : ys) {
        const Point c{cx, cy};
        if (std::find(tree.begin(), tree.end(), c) != tree.end()) continue;
        tree.push_back(c);
        const dbu_t len = prim_mst(tree);
        tree.pop_back();
        if (len < best_len) {
          best_len = len;
          best_candidate = c;
          improved = true;
        }
      }
    }
    if (!improved) break;
    tree.push_back(best_candidate);
    current = best_len;
  }
  return current;
}

}  // namespace chipvec
