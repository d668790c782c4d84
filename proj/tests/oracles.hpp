#pragma once

// Independent test oracles. Everything here recomputes expected values by a
// different route than the library (per-unit stepping, exhaustive
// enumeration, brute-force pairwise sums) and must stay free of the
// implementation paths it checks.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "chipvec/design.hpp"
#include "chipvec/geom.hpp"

namespace oracles {

using chipvec::dbu_t;
using chipvec::GcellGrid;
using chipvec::Net;
using chipvec::Point;
using chipvec::WireSegment;

// Rasterization by stepping unit intervals along the segment.
inline std::vector<std::pair<int, dbu_t>> rasterize_per_unit(const WireSegment& seg,
                                                             const GcellGrid& grid) {
  std::map<int, dbu_t> acc;
  auto cell_for = [&](dbu_t x, dbu_t y) {
    int ix = static_cast<int>((x - grid.origin.x) / grid.cell_w);
    int iy = static_cast<int>((y - grid.origin.y) / grid.cell_h);
    if (ix >= grid.nx) ix = grid.nx - 1;
    if (iy >= grid.ny) iy = grid.ny - 1;
    return iy * grid.nx + ix;
  };
  if (seg.length() == 0) {
    acc[cell_for(seg.xs, seg.ys)] = 0;
  } else if (seg.ys == seg.ye) {
    const dbu_t lo = std::min(seg.xs, seg.xe), hi = std::max(seg.xs, seg.xe);
    for (dbu_t x = lo; x < hi; ++x) acc[cell_for(x, seg.ys)] += 1;  // unit [x, x+1)
  } else {
    const dbu_t lo = std::min(seg.ys, seg.ye), hi = std::max(seg.ys, seg.ye);
    for (dbu_t y = lo; y < hi; ++y) acc[cell_for(seg.xs, y)] += 1;
  }
  return {acc.begin(), acc.end()};
}

// Prim MST length used only inside the oracles below.
inline dbu_t oracle_mst(const std::vector<Point>& pts) {
  const std::size_t n = pts.size();
  if (n < 2) return 0;
  std::vector<dbu_t> best(n, std::numeric_limits<dbu_t>::max());
  std::vector<bool> used(n, false);
  best[0] = 0;
  dbu_t total = 0;
  for (std::size_t it = 0; it < n; ++it) {
    std::size_t u = 0;
    dbu_t bu = std::numeric_limits<dbu_t>::max();
    for (std::size_t i = 0; i < n; ++i)
      if (!used[i] && best[i] < bu) {
        bu = best[i];
        u = i;
      }
    used[u] = true;
    total += bu;
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      const dbu_t d = std::abs(pts[u].x - pts[i].x) + std::abs(pts[u].y - pts[i].y);
      best[i] = std::min(best[i], d);
    }
  }
  return total;
}

// Exhaustive Hanan-grid optimum: min over all <= (n-2)-subsets of Hanan
// candidates of MST(pins + subset). Exact for small pin sets.
inline dbu_t hanan_optimal_rsmt(const std::vector<Point>& pins) {
  std::vector<Point> pts = pins;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 1) return 0;
  std::vector<dbu_t> xs, ys;
  for (const Point& p : pts) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  std::vector<Point> hanan;
  for (dbu_t x : xs)
    for (dbu_t y : ys)
      if (std::find(pts.begin(), pts.end(), Point{x, y}) == pts.end()) hanan.push_back({x, y});

  const std::size_t max_extra = pts.size() > 2 ? pts.size() - 2 : 0;
  dbu_t best = oracle_mst(pts);
  std::vector<std::size_t> pick;
  // enumerate subsets of sizes 1..max_extra
  std::vector<Point> work = pts;
  std::function<void(std::size_t, std::size_t)> recurse = [&](std::size_t start,
                                                              std::size_t remaining) {
    if (remaining == 0) {
      best = std::min(best, oracle_mst(work));
      return;
    }
    for (std::size_t i = start; i < hanan.size(); ++i) {
      work.push_back(hanan[i]);
      best = std::min(best, oracle_mst(work));
      recurse(i + 1, remaining - 1);
      work.pop_back();
    }
  };
  if (max_extra > 0) recurse(0, max_extra);
  return best;
}

// Elmore by brute force: delay(v) = sum over nodes u of
// R(shared root->u, root->v path) * C(u).
struct BruteRcTree {
  std::vector<int> parent{-1};
  std::vector<double> edge_r{0.0};
  std::vector<double> cap{0.0};

  std::size_t add(std::size_t p, double r, double c) {
    parent.push_back(static_cast<int>(p));
    edge_r.push_back(r);
    cap.push_back(c);
    return parent.size() - 1;
  }

  std::vector<std::size_t> path_to_root(std::size_t v) const {
    std::vector<std::size_t> out;
    for (int u = static_cast<int>(v); u != -1; u = parent[static_cast<std::size_t>(u)])
      out.push_back(static_cast<std::size_t>(u));
    return out;
  }

  double shared_resistance(std::size_t a, std::size_t b) const {
    const auto pa = path_to_root(a);
    const auto pb = path_to_root(b);
    const std::set<std::size_t> sa(pa.begin(), pa.end());
    double r = 0.0;
    for (std::size_t u : pb)
      if (u != 0 && sa.count(u)) r += edge_r[u];
    return r;
  }

  double elmore(std::size_t v) const {
    double d = 0.0;
    for (std::size_t u = 0; u < parent.size(); ++u) d += shared_resistance(u, v) * cap[u];
    return d;
  }
};

// Union-find connectivity over a net's routing: pins, segment endpoints and
// via landings unify through shared coordinates; segments on the same layer
// unify through interval overlap.
inline bool routing_connects_all_pins(const Net& net, int pin_layer) {
  struct Item {
    dbu_t x1, y1, x2, y2;
    int layer;
  };
  std::vector<Item> items;
  for (const auto& s : net.routing)
    items.push_back({std::min(s.xs, s.xe), std::min(s.ys, s.ye), std::max(s.xs, s.xe),
                     std::max(s.ys, s.ye), s.layer});
  for (const auto& v : net.vias) {
    // a via is a point item on both layers plus a bridging pair
    items.push_back({v.xc, v.yc, v.xc, v.yc, v.layer_bot});
    items.push_back({v.xc, v.yc, v.xc, v.yc, v.layer_top});
  }
  std::vector<std::size_t> pin_item;
  for (const auto& p : net.pins) {
    items.push_back({p.position.x, p.position.y, p.position.x, p.position.y, pin_layer});
    pin_item.push_back(items.size() - 1);
  }
  std::vector<std::size_t> uf(items.size());
  std::iota(uf.begin(), uf.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t a) {
    while (uf[a] != a) a = uf[a] = uf[uf[a]];
    return a;
  };
  auto unite = [&](std::size_t a, std::size_t b) { uf[find(a)] = find(b); };
  auto touches = [](const Item& a, const Item& b) {
    if (a.layer != b.layer) return false;
    return a.x1 <= b.x2 && b.x1 <= a.x2 && a.y1 <= b.y2 && b.y1 <= a.y2;
  };
  for (std::size_t i = 0; i < items.size(); ++i)
    for (std::size_t j = i + 1; j < items.size(); ++j)
      if (touches(items[i], items[j])) unite(i, j);
  // vias bridge their two point items
  std::size_t via_base = net.routing.size();
  for (std::size_t v = 0; v < net.vias.size(); ++v)
    unite(via_base + 2 * v, via_base + 2 * v + 1);
  if (pin_item.empty()) return true;
  const std::size_t root = find(pin_item[0]);
  for (std::size_t p : pin_item)
    if (find(p) != root) return false;
  return true;
}

// O(n^2) dominance oracle: repeatedly peel the mutually non-dominated set.
inline std::vector<int> peel_ranks(std::vector<std::vector<double>> objs) {
  const std::size_t n = objs.size();
  std::vector<int> rank(n, -1);
  auto dom = [](const std::vector<double>& a, const std::vector<double>& b) {
    bool strict = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (a[k] > b[k]) return false;
      if (a[k] < b[k]) strict = true;
    }
    return strict;
  };
  int level = 0;
  std::size_t remaining = n;
  while (remaining > 0) {
    std::vector<std::size_t> layer;
    for (std::size_t i = 0; i < n; ++i) {
      if (rank[i] != -1) continue;
      bool dominated = false;
      for (std::size_t j = 0; j < n && !dominated; ++j)
        if (j != i && rank[j] == -1 && dom(objs[j], objs[i])) dominated = true;
      if (!dominated) layer.push_back(i);
    }
    for (std::size_t i : layer) rank[i] = level;
    remaining -= layer.size();
    ++level;
  }
  return rank;
}

// Hypervolume by grid integration (minimization, 2-D).
inline double hypervolume_grid(const std::vector<std::array<double, 2>>& front,
                               std::array<double, 2> ref, int resolution = 2000) {
  if (front.empty()) return 0.0;
  double x_min = ref[0], y_min = ref[1];
  for (const auto& p : front) {
    x_min = std::min(x_min, p[0]);
    y_min = std::min(y_min, p[1]);
  }
  const double dx = (ref[0] - x_min) / resolution;
  const double dy = (ref[1] - y_min) / resolution;
  if (dx <= 0 || dy <= 0) return 0.0;
  double area = 0.0;
  for (int i = 0; i < resolution; ++i) {
    const double cx = x_min + (i + 0.5) * dx;
    for (int j = 0; j < resolution; ++j) {
      const double cy = y_min + (j + 0.5) * dy;
      for (const auto& p : front) {
        if (p[0] <= cx && p[1] <= cy) {
          area += dx * dy;
          break;
        }
      }
    }
  }
  return area;
}

// Minimal NPY v1.0 reader, independent of the writer: parses the magic,
// header dict and raw little-endian payload by hand.
struct NpyContents {
  std::string descr;
  bool fortran_order = false;
  std::vector<std::size_t> shape;
  std::vector<double> values;
};

inline NpyContents read_npy(const std::string& bytes) {
  NpyContents out;
  if (bytes.size() < 10 || bytes.substr(0, 6) != "\x93NUMPY") throw std::runtime_error("bad magic");
  if (bytes[6] != 1 || bytes[7] != 0) throw std::runtime_error("bad version");
  const std::size_t header_len = static_cast<unsigned char>(bytes[8]) |
                                 (static_cast<unsigned char>(bytes[9]) << 8);
  if (bytes.size() < 10 + header_len) throw std::runtime_error("truncated header");
  const std::string header = bytes.substr(10, header_len);
  if ((10 + header_len) % 64 != 0) throw std::runtime_error("header not 64-aligned");
  if (header.back() != '\n') throw std::runtime_error("header missing newline");

  auto find_value = [&](const std::string& key) {
    const std::size_t at = header.find("'" + key + "':");
    if (at == std::string::npos) throw std::runtime_error("missing key " + key);
    return header.find_first_not_of(" ", at + key.size() + 3);
  };
  std::size_t p = find_value("descr");
  if (header[p] != '\'') throw std::runtime_error("descr not quoted");
  const std::size_t q = header.find('\'', p + 1);
  out.descr = header.substr(p + 1, q - p - 1);
  p = find_value("fortran_order");
  out.fortran_order = header.compare(p, 4, "True") == 0;
  p = find_value("shape");
  if (header[p] != '(') throw std::runtime_error("shape not a tuple");
  std::size_t e = header.find(')', p);
  std::string tuple = header.substr(p + 1, e - p - 1);
  std::size_t pos = 0;
  while (pos < tuple.size()) {
    while (pos < tuple.size() && (tuple[pos] == ' ' || tuple[pos] == ',')) ++pos;
    if (pos >= tuple.size()) break;
    std::size_t end = pos;
    while (end < tuple.size() && isdigit(tuple[end])) ++end;
    if (end == pos) throw std::runtime_error("bad shape tuple");
    out.shape.push_back(static_cast<std::size_t>(std::stoull(tuple.substr(pos, end - pos))));
    pos = end;
  }

  std::size_t count = 1;
  for (std::size_t d : out.shape) count *= d;
  const char* data = bytes.data() + 10 + header_len;
  const std::size_t avail = bytes.size() - 10 - header_len;
  if (out.descr == "<f4") {
    if (avail != count * 4) throw std::runtime_error("payload size mismatch");
    for (std::size_t i = 0; i < count; ++i) {
      std::uint32_t bits = 0;
      for (int b = 3; b >= 0; --b)
        bits = (bits << 8) | static_cast<unsigned char>(data[i * 4 + b]);
      float f;
      std::memcpy(&f, &bits, 4);
      out.values.push_back(f);
    }
  } else if (out.descr == "<f8") {
    if (avail != count * 8) throw std::runtime_error("payload size mismatch");
    for (std::size_t i = 0; i < count; ++i) {
      std::uint64_t bits = 0;
      for (int b = 7; b >= 0; --b)
        bits = (bits << 8) | static_cast<unsigned char>(data[i * 8 + b]);
      double f;
      std::memcpy(&f, &bits, 8);
      out.values.push_back(f);
    }
  } else {
    throw std::runtime_error("unsupported descr " + out.descr);
  }
  return out;
}

}  // namespace oracles
