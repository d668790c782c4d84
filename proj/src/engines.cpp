#include "chipvec/engines.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "chipvec/rng.hpp"

namespace chipvec {

namespace {

void assert_finite(const std::vector<double>& v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw Error(std::string("non-finite value in ") + what);
}

// Area-weighted average pooling from sw x sh to dw x dh (row-major).
std::vector<double> resize_area(const std::vector<double>& src, int sw, int sh, int dw, int dh) {
  std::vector<double> dst(static_cast<std::size_t>(dw) * dh, 0.0);
  const double fx = static_cast<double>(sw) / dw;
  const double fy = static_cast<double>(sh) / dh;
  for (int dy = 0; dy < dh; ++dy) {
    const double y0 = dy * fy, y1 = (dy + 1) * fy;
    for (int dx = 0; dx < dw; ++dx) {
      const double x0 = dx * fx, x1 = (dx + 1) * fx;
      double acc = 0.0;
      for (int sy = static_cast<int>(y0); sy < sh && sy < y1; ++sy) {
        const double oy = std::min<double>(sy + 1, y1) - std::max<double>(sy, y0);
        if (oy <= 0) continue;
        for (int sx = static_cast<int>(x0); sx < sw && sx < x1; ++sx) {
          const double ox = std::min<double>(sx + 1, x1) - std::max<double>(sx, x0);
          if (ox <= 0) continue;
          acc += src[static_cast<std::size_t>(sy) * sw + sx] * ox * oy;
        }
      }
      dst[static_cast<std::size_t>(dy) * dw + dx] = acc / (fx * fy);
    }
  }
  return dst;
}

}  // namespace

TabularSet tabular_wirelength(const std::vector<FoundationData>& bundles) {
  TabularSet t;
  t.columns = {"aspect_ratio", "fanout", "hpwl", "rsmt", "l_ness"};
  t.label_columns = {"via_count", "rwl_over_rsmt"};
  for (const auto& fd : bundles) {
    for (const auto& nv : fd.nets) {
      if (nv.rwl <= 0 || nv.rsmt <= 0) {
        ++t.excluded;
        continue;
      }
      t.rows.push_back({nv.aspect_ratio, static_cast<double>(nv.fanout),
                        static_cast<double>(nv.hpwl), static_cast<double>(nv.rsmt), nv.l_ness});
      t.labels.push_back({static_cast<double>(nv.via_count),
                          static_cast<double>(nv.rwl) / static_cast<double>(nv.rsmt)});
    }
  }
  if (t.rows.empty()) throw EmptyDataset("no eligible nets for the wirelength table");
  for (const auto& r : t.rows) assert_finite(r, "tabular rows");
  for (const auto& r : t.labels) assert_finite(r, "tabular labels");
  return t;
}

SequenceSet sequence_paths(const std::vector<FoundationData>& bundles, int max_len) {
  if (max_len < 1) throw ConfigError("max_len", "must be >= 1");
  SequenceSet s;
  s.feature_names = {"resistance", "capacitance", "slew", "incr_delay"};
  s.features = 4;
  s.len = static_cast<std::size_t>(max_len);

  std::vector<const PathVec*> paths;
  for (const auto& fd : bundles)
    for (const auto& p : fd.paths) paths.push_back(&p);
  if (paths.empty()) throw EmptyDataset("no paths in the given bundles");
  s.n = paths.size();

  // per-feature stats over real (unpadded) stage entries
  s.feature_mean.assign(s.features, 0.0);
  s.feature_std.assign(s.features, 0.0);
  std::size_t count = 0;
  auto stage_features = [](const PathStage& st) {
    return std::array<double, 4>{st.resistance, st.capacitance, st.slew, st.incr_delay};
  };
  for (const PathVec* p : paths) {
    const std::size_t keep = std::min<std::size_t>(p->stages.size(), s.len);
    for (std::size_t i = 0; i < keep; ++i) {
      const auto f = stage_features(p->stages[i]);
      for (std::size_t k = 0; k < s.features; ++k) s.feature_mean[k] += f[k];
      ++count;
    }
  }
  for (auto& m : s.feature_mean) m /= static_cast<double>(count);
  for (const PathVec* p : paths) {
    const std::size_t keep = std::min<std::size_t>(p->stages.size(), s.len);
    for (std::size_t i = 0; i < keep; ++i) {
      const auto f = stage_features(p->stages[i]);
      for (std::size_t k = 0; k < s.features; ++k) {
        const double d = f[k] - s.feature_mean[k];
        s.feature_std[k] += d * d;
      }
    }
  }
  for (auto& sd : s.feature_std) {
    sd = std::sqrt(sd / static_cast<double>(count));
    if (sd == 0.0) sd = 1.0;  // constant feature stays centered at zero
  }

  s.tensor.assign(s.n * s.len * s.features, 0.0);
  s.mask.assign(s.n * s.len, 0.0);
  s.lengths.reserve(s.n);
  for (std::size_t pi = 0; pi < paths.size(); ++pi) {
    const PathVec* p = paths[pi];
    s.lengths.push_back(static_cast<int>(p->stages.size()));
    const std::size_t keep = std::min<std::size_t>(p->stages.size(), s.len);
    for (std::size_t i = 0; i < keep; ++i) {
      const auto f = stage_features(p->stages[i]);
      s.mask[pi * s.len + i] = 1.0;
      for (std::size_t k = 0; k < s.features; ++k)
        s.tensor[(pi * s.len + i) * s.features + k] = (f[k] - s.feature_mean[k]) / s.feature_std[k];
    }
  }
  assert_finite(s.tensor, "sequence tensor");
  return s;
}

namespace {

// Aggregate routed congestion of a patch: mean utilization over the layers
// seen anywhere in the design.
std::vector<double> congestion_map(const FoundationData& fd) {
  std::set<int> layers;
  for (const auto& p : fd.patches)
    for (const auto& [l, v] : p.layer_congestion) layers.insert(l);
  std::vector<double> map(fd.patches.size(), 0.0);
  if (layers.empty()) return map;
  for (std::size_t i = 0; i < fd.patches.size(); ++i) {
    double acc = 0.0;
    for (int l : layers) {
      const auto it = fd.patches[i].layer_congestion.find(l);
      if (it != fd.patches[i].layer_congestion.end()) acc += it->second;
    }
    map[i] = acc / static_cast<double>(layers.size());
  }
  return map;
}

std::vector<double> patch_channel(const FoundationData& fd, int which) {
  std::vector<double> map(fd.patches.size(), 0.0);
  for (std::size_t i = 0; i < fd.patches.size(); ++i) {
    const PatchVec& p = fd.patches[i];
    map[i] = which == 0 ? p.cell_density : which == 1 ? p.pin_density
                        : which == 2     ? p.net_density
                                         : p.rudy;
  }
  return map;
}

}  // namespace

SpatialSet spatial_congestion(const FoundationData& bundle, int window, int stride) {
  if (window < 1 || stride < 1) throw ConfigError("window", "window and stride must be >= 1");
  const GcellGrid& grid = bundle.grid;
  if (grid.nx < window || grid.ny < window)
    throw GridTooSmall("patch grid " + std::to_string(grid.nx) + "x" + std::to_string(grid.ny) +
                       " smaller than window " + std::to_string(window));
  if (static_cast<std::size_t>(grid.cells()) != bundle.patches.size())
    throw ShapeError("patch list does not match the grid");

  SpatialSet out;
  out.channel_names = {"cell_density", "pin_density", "net_density", "rudy"};
  out.channels = 4;
  out.h = out.w = static_cast<std::size_t>(window);
  const int wx = (grid.nx - window) / stride + 1;
  const int wy = (grid.ny - window) / stride + 1;
  out.n = static_cast<std::size_t>(wx) * wy;

  std::vector<std::vector<double>> channels;
  for (int c = 0; c < 4; ++c) channels.push_back(patch_channel(bundle, c));
  const std::vector<double> label = congestion_map(bundle);

  out.inputs.assign(out.n * out.channels * out.h * out.w, 0.0);
  out.labels.assign(out.n * out.h * out.w, 0.0);
  std::size_t sample = 0;
  for (int gy = 0; gy < wy; ++gy) {
    for (int gx = 0; gx < wx; ++gx, ++sample) {
      const int ix0 = gx * stride, iy0 = gy * stride;
      for (int y = 0; y < window; ++y) {
        for (int x = 0; x < window; ++x) {
          const std::size_t cell =
              static_cast<std::size_t>(grid.cell_index(ix0 + x, iy0 + y));
          for (std::size_t c = 0; c < 4; ++c)
            out.inputs[((sample * out.channels + c) * out.h + y) * out.w + x] =
                channels[c][cell];
          out.labels[(sample * out.h + y) * out.w + x] = label[cell];
        }
      }
    }
  }
  assert_finite(out.inputs, "spatial inputs");
  assert_finite(out.labels, "spatial labels");
  return out;
}

SpatialSet routing_mask(const FoundationData& bundle, int size) {
  if (size < 2) throw ConfigError("size", "must be >= 2");
  const GcellGrid& grid = bundle.grid;
  if (grid.cells() <= 0 || bundle.patches.empty())
    throw GridTooSmall("routing_mask requires patch-level data");

  SpatialSet out;
  out.channels = 10;
  out.h = out.w = static_cast<std::size_t>(size);
  out.channel_names = {"cell_density_norm", "pin_density_norm", "net_density_norm", "rudy_norm",
                       "cell_density_rel",  "pin_density_rel",  "net_density_rel",  "rudy_rel",
                       "source",            "target"};

  // intra-design min-max normalization of the four raw patch channels
  std::vector<std::vector<double>> norm;
  for (int c = 0; c < 4; ++c) {
    std::vector<double> m = patch_channel(bundle, c);
    double lo = m[0], hi = m[0];
    for (double v : m) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double span = hi - lo;
    for (double& v : m) v = span > 0 ? (v - lo) / span : 0.0;
    norm.push_back(std::move(m));
  }

  std::vector<double> inputs;
  std::vector<double> labels;
  std::size_t n = 0;
  for (const auto& nv : bundle.nets) {
    if (nv.fanout != 1 || nv.wires.empty()) continue;
    const NetPin* driver = nullptr;
    const NetPin* load = nullptr;
    for (const auto& p : nv.pins) {
      if (p.direction == NetPinDirection::Driver) driver = &p;
      else if (!load) load = &p;
    }
    if (!driver || !load) continue;

    Rect region = nv.bbox;
    for (const auto& w : nv.wires) {
      region.expand_to(Point{w.xs, w.ys});
      region.expand_to(Point{w.xe, w.ye});
    }
    // snap outward to patch cells
    auto snap = [&](Rect r) {
      const int ix0 = std::clamp(
          static_cast<int>((r.lo.x - grid.origin.x) / grid.cell_w), 0, grid.nx - 1);
      const int iy0 = std::clamp(
          static_cast<int>((r.lo.y - grid.origin.y) / grid.cell_h), 0, grid.ny - 1);
      const int ix1 = std::clamp(
          static_cast<int>((r.hi.x - grid.origin.x) / grid.cell_w), 0, grid.nx - 1);
      const int iy1 = std::clamp(
          static_cast<int>((r.hi.y - grid.origin.y) / grid.cell_h), 0, grid.ny - 1);
      return std::array<int, 4>{ix0, iy0, ix1, iy1};
    };
    const auto [ix0, iy0, ix1, iy1] = snap(region);
    const int rw = ix1 - ix0 + 1, rh = iy1 - iy0 + 1;
    const Rect extent{{grid.origin.x + static_cast<dbu_t>(ix0) * grid.cell_w,
                       grid.origin.y + static_cast<dbu_t>(iy0) * grid.cell_h},
                      {grid.origin.x + static_cast<dbu_t>(ix1 + 1) * grid.cell_w,
                       grid.origin.y + static_cast<dbu_t>(iy1 + 1) * grid.cell_h}};
    if (!extent.contains(driver->position) || !extent.contains(load->position)) {
      ++out.skipped;
      continue;
    }

    // region channel blocks -> size x size
    std::vector<std::vector<double>> pooled;
    for (int c = 0; c < 4; ++c) {
      std::vector<double> block(static_cast<std::size_t>(rw) * rh, 0.0);
      for (int y = 0; y < rh; ++y)
        for (int x = 0; x < rw; ++x)
          block[static_cast<std::size_t>(y) * rw + x] =
              norm[static_cast<std::size_t>(c)]
                  [static_cast<std::size_t>(grid.cell_index(ix0 + x, iy0 + y))];
      pooled.push_back(resize_area(block, rw, rh, size, size));
    }

    const std::size_t plane = static_cast<std::size_t>(size) * size;
    std::vector<double> sample(10 * plane, 0.0);
    for (int c = 0; c < 4; ++c) {
      double mean = 0.0;
      for (double v : pooled[static_cast<std::size_t>(c)]) mean += v;
      mean /= static_cast<double>(plane);
      for (std::size_t i = 0; i < plane; ++i) {
        sample[static_cast<std::size_t>(c) * plane + i] = pooled[static_cast<std::size_t>(c)][i];
        sample[static_cast<std::size_t>(c + 4) * plane + i] =
            pooled[static_cast<std::size_t>(c)][i] - mean;
      }
    }
    auto cell_at = [&](Point p) {
      const double fx = static_cast<double>(p.x - extent.lo.x) /
                        static_cast<double>(extent.width()) * size;
      const double fy = static_cast<double>(p.y - extent.lo.y) /
                        static_cast<double>(extent.height()) * size;
      const int cx = std::clamp(static_cast<int>(fx), 0, size - 1);
      const int cy = std::clamp(static_cast<int>(fy), 0, size - 1);
      return static_cast<std::size_t>(cy) * size + cx;
    };
    sample[8 * plane + cell_at(driver->position)] = 1.0;
    sample[9 * plane + cell_at(load->position)] = 1.0;

    // ground-truth route mask
    std::vector<double> mask(plane, 0.0);
    const double sx = static_cast<double>(size) / static_cast<double>(extent.width());
    const double sy = static_cast<double>(size) / static_cast<double>(extent.height());
    for (const auto& w : nv.wires) {
      const double x0 = static_cast<double>(std::min(w.xs, w.xe) - extent.lo.x) * sx;
      const double x1 = static_cast<double>(std::max(w.xs, w.xe) - extent.lo.x) * sx;
      const double y0 = static_cast<double>(std::min(w.ys, w.ye) - extent.lo.y) * sy;
      const double y1 = static_cast<double>(std::max(w.ys, w.ye) - extent.lo.y) * sy;
      const int cx0 = std::clamp(static_cast<int>(x0), 0, size - 1);
      const int cx1 = std::clamp(x1 > x0 ? static_cast<int>(std::ceil(x1)) - 1
                                         : static_cast<int>(x1), 0, size - 1);
      const int cy0 = std::clamp(static_cast<int>(y0), 0, size - 1);
      const int cy1 = std::clamp(y1 > y0 ? static_cast<int>(std::ceil(y1)) - 1
                                         : static_cast<int>(y1), 0, size - 1);
      for (int cy = cy0; cy <= cy1; ++cy)
        for (int cx = cx0; cx <= cx1; ++cx) mask[static_cast<std::size_t>(cy) * size + cx] = 1.0;
    }

    inputs.insert(inputs.end(), sample.begin(), sample.end());
    labels.insert(labels.end(), mask.begin(), mask.end());
    ++n;
  }
  out.n = n;
  out.inputs = std::move(inputs);
  out.labels = std::move(labels);
  assert_finite(out.inputs, "mask inputs");
  assert_finite(out.labels, "mask labels");
  return out;
}

GraphSet graph_batch(const std::vector<FoundationData>& bundles,
                     std::vector<std::string>* diagnostics) {
  GraphSet g;
  g.feature_names = {"x", "y", "capacitance", "slew", "class_clock", "class_logic",
                     "class_macro", "class_iopad"};
  g.feature_dim = 8;
  g.offsets.push_back(0);

  for (const auto& fd : bundles) {
    std::map<std::string, InstanceClass> class_of;
    for (const auto& inst : fd.instances) class_of[inst.name] = inst.cls;

    struct NodeInfo {
      Point pos;
      double cap = 0.0, slew = 0.0, delay = 0.0;
      InstanceClass cls = InstanceClass::Logic;
    };
    std::map<std::string, NodeInfo> nodes;  // sorted, deterministic ids
    std::set<std::pair<std::string, std::string>> edge_set;
    for (const auto& path : fd.paths) {
      for (std::size_t i = 0; i < path.stages.size(); ++i) {
        const PathStage& st = path.stages[i];
        NodeInfo& info = nodes[st.node];
        if (st.incr_delay >= info.delay) {
          info.delay = st.incr_delay;
          info.pos = st.position;
          info.cap = st.capacitance;
          info.slew = st.slew;
        }
        const std::string owner = st.node.substr(0, st.node.find('/'));
        const auto it = class_of.find(owner);
        info.cls = it != class_of.end() ? it->second : InstanceClass::Iopad;
        if (i + 1 < path.stages.size()) edge_set.emplace(st.node, path.stages[i + 1].node);
      }
    }

    const int base = g.offsets.back();
    std::map<std::string, int> id_of;
    for (const auto& [name, info] : nodes) {
      const int id = base + static_cast<int>(id_of.size());
      id_of[name] = id;
      g.node_features.push_back(static_cast<double>(info.pos.x));
      g.node_features.push_back(static_cast<double>(info.pos.y));
      g.node_features.push_back(info.cap);
      g.node_features.push_back(info.slew);
      for (InstanceClass c : {InstanceClass::Clock, InstanceClass::Logic, InstanceClass::Macro,
                              InstanceClass::Iopad})
        g.node_features.push_back(info.cls == c ? 1.0 : 0.0);
      g.targets.push_back(std::log(info.delay + 1e-15));
    }
    for (const auto& [a, b] : edge_set)
      g.edges.push_back({id_of.at(a), id_of.at(b)});

    // per-design z-score of the log targets
    const std::size_t begin = static_cast<std::size_t>(base);
    const std::size_t end = g.targets.size();
    if (end > begin) {
      double mean = 0.0;
      for (std::size_t i = begin; i < end; ++i) mean += g.targets[i];
      mean /= static_cast<double>(end - begin);
      double var = 0.0;
      for (std::size_t i = begin; i < end; ++i) {
        const double d = g.targets[i] - mean;
        var += d * d;
      }
      const double sd = std::sqrt(var / static_cast<double>(end - begin));
      if (sd == 0.0) {
        for (std::size_t i = begin; i < end; ++i) g.targets[i] = 0.0;
        if (diagnostics)
          diagnostics->push_back("graph_batch: constant delay targets in " +
                                 fd.design.design_name + ", left at zero");
      } else {
        for (std::size_t i = begin; i < end; ++i) g.targets[i] = (g.targets[i] - mean) / sd;
      }
    }
    g.offsets.push_back(base + static_cast<int>(id_of.size()));
  }
  assert_finite(g.node_features, "graph node features");
  assert_finite(g.targets, "graph targets");
  return g;
}

std::array<std::vector<int>, 3> split_stratified(const std::vector<int>& patch_counts, int strata,
                                                 const std::array<double, 3>& fractions,
                                                 std::uint64_t seed) {
  const int n = static_cast<int>(patch_counts.size());
  if (strata < 1) throw ConfigError("strata", "must be >= 1");
  if (n < strata) throw ConfigError("strata", "need at least one design per stratum");
  double fsum = 0.0;
  for (double f : fractions) {
    if (f < 0) throw ConfigError("fractions", "must be non-negative");
    fsum += f;
  }
  if (std::abs(fsum - 1.0) > 1e-9) throw ConfigError("fractions", "must sum to 1");

  // global split targets by largest remainder
  std::array<int, 3> target{};
  std::array<double, 3> remainder{};
  int assigned = 0;
  for (int k = 0; k < 3; ++k) {
    const double ideal = fractions[static_cast<std::size_t>(k)] * n;
    target[static_cast<std::size_t>(k)] = static_cast<int>(ideal);
    remainder[static_cast<std::size_t>(k)] = ideal - target[static_cast<std::size_t>(k)];
    assigned += target[static_cast<std::size_t>(k)];
  }
  while (assigned < n) {
    int best = 0;
    for (int k = 1; k < 3; ++k)
      if (remainder[static_cast<std::size_t>(k)] > remainder[static_cast<std::size_t>(best)])
        best = k;
    ++target[static_cast<std::size_t>(best)];
    remainder[static_cast<std::size_t>(best)] = -1;
    ++assigned;
  }

  // designs sorted by patch count, cut into equal-count strata
  std::vector<int> order(patch_counts.size());
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (patch_counts[static_cast<std::size_t>(a)] != patch_counts[static_cast<std::size_t>(b)])
      return patch_counts[static_cast<std::size_t>(a)] < patch_counts[static_cast<std::size_t>(b)];
    return a < b;
  });
  std::vector<std::vector<int>> groups;
  const int base_size = n / strata;
  const int extra = n % strata;
  std::size_t cursor = 0;
  for (int s = 0; s < strata; ++s) {
    const int size = base_size + (s < extra ? 1 : 0);
    groups.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(cursor),
                        order.begin() + static_cast<std::ptrdiff_t>(cursor) + size);
    cursor += static_cast<std::size_t>(size);
  }

  // per-stratum allocation by largest remainder, then settle against the
  // global targets by moving single seats
  std::vector<std::array<int, 3>> alloc(groups.size());
  for (std::size_t s = 0; s < groups.size(); ++s) {
    const int gs = static_cast<int>(groups[s].size());
    std::array<double, 3> rem{};
    int got = 0;
    for (int k = 0; k < 3; ++k) {
      const double ideal = fractions[static_cast<std::size_t>(k)] * gs;
      alloc[s][static_cast<std::size_t>(k)] = static_cast<int>(ideal);
      rem[static_cast<std::size_t>(k)] = ideal - alloc[s][static_cast<std::size_t>(k)];
      got += alloc[s][static_cast<std::size_t>(k)];
    }
    while (got < gs) {
      int best = 0;
      for (int k = 1; k < 3; ++k)
        if (rem[static_cast<std::size_t>(k)] > rem[static_cast<std::size_t>(best)]) best = k;
      ++alloc[s][static_cast<std::size_t>(best)];
      rem[static_cast<std::size_t>(best)] = -1;
      ++got;
    }
  }
  for (;;) {
    std::array<int, 3> col{};
    for (const auto& a : alloc)
      for (int k = 0; k < 3; ++k) col[static_cast<std::size_t>(k)] += a[static_cast<std::size_t>(k)];
    int over = -1, under = -1;
    for (int k = 0; k < 3; ++k) {
      if (col[static_cast<std::size_t>(k)] > target[static_cast<std::size_t>(k)]) over = k;
      if (col[static_cast<std::size_t>(k)] < target[static_cast<std::size_t>(k)]) under = k;
    }
    if (over < 0 && under < 0) break;
    bool moved = false;
    for (std::size_t s = 0; s < alloc.size() && !moved; ++s) {
      if (alloc[s][static_cast<std::size_t>(over)] > 0) {
        --alloc[s][static_cast<std::size_t>(over)];
        ++alloc[s][static_cast<std::size_t>(under)];
        moved = true;
      }
    }
    if (!moved) throw Error("split allocation failed to settle");
  }

  Rng rng(seed);
  std::array<std::vector<int>, 3> out;
  for (std::size_t s = 0; s < groups.size(); ++s) {
    std::vector<int> g = groups[s];
    rng.shuffle(g);
    std::size_t at = 0;
    for (int k = 0; k < 3; ++k) {
      for (int i = 0; i < alloc[s][static_cast<std::size_t>(k)]; ++i)
        out[static_cast<std::size_t>(k)].push_back(g[at++]);
    }
  }
  for (auto& v : out) std::sort(v.begin(), v.end());
  return out;
}

}  // namespace chipvec
