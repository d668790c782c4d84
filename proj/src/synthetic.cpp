#include "chipvec/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

#include "chipvec/rng.hpp"
#include "json.hpp"

namespace chipvec {

using nlohmann::json;

SynthParams synth_params_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError("generator", std::string("not valid JSON: ") + e.what());
  }
  SynthParams p;
  p.name = j.value("name", p.name);
  p.core_width = j.value("core_width_dbu", p.core_width);
  p.core_height = j.value("core_height_dbu", p.core_height);
  p.die_margin = j.value("die_margin_dbu", p.die_margin);
  p.num_instances = j.value("num_instances", p.num_instances);
  p.num_nets = j.value("num_nets", p.num_nets);
  if (j.contains("pin_count_weights")) {
    p.pin_count_weights.clear();
    for (const auto& jw : j["pin_count_weights"])
      p.pin_count_weights.emplace_back(jw.at("pins").get<int>(), jw.at("weight").get<double>());
  }
  p.routing_layers = j.value("routing_layers", p.routing_layers);
  p.sequential_fraction = j.value("sequential_fraction", p.sequential_fraction);
  p.macro_fraction = j.value("macro_fraction", p.macro_fraction);
  p.pad_fraction = j.value("pad_fraction", p.pad_fraction);
  p.input_ports = j.value("input_ports", p.input_ports);
  p.output_ports = j.value("output_ports", p.output_ports);
  p.clock_tree = j.value("clock_tree", p.clock_tree);
  p.clock_leaf_fanout = j.value("clock_leaf_fanout", p.clock_leaf_fanout);
  p.z_route_fraction = j.value("z_route_fraction", p.z_route_fraction);
  p.seed = j.value("seed", p.seed);
  return p;
}

std::string synth_params_to_json_text(const SynthParams& p) {
  json j;
  j["name"] = p.name;
  j["core_width_dbu"] = p.core_width;
  j["core_height_dbu"] = p.core_height;
  j["die_margin_dbu"] = p.die_margin;
  j["num_instances"] = p.num_instances;
  j["num_nets"] = p.num_nets;
  j["pin_count_weights"] = json::array();
  for (const auto& [pins, weight] : p.pin_count_weights)
    j["pin_count_weights"].push_back({{"pins", pins}, {"weight", weight}});
  j["routing_layers"] = p.routing_layers;
  j["sequential_fraction"] = p.sequential_fraction;
  j["macro_fraction"] = p.macro_fraction;
  j["pad_fraction"] = p.pad_fraction;
  j["input_ports"] = p.input_ports;
  j["output_ports"] = p.output_ports;
  j["clock_tree"] = p.clock_tree;
  j["clock_leaf_fanout"] = p.clock_leaf_fanout;
  j["z_route_fraction"] = p.z_route_fraction;
  j["seed"] = p.seed;
  return j.dump(2);
}

namespace {

struct FreePin {
  int instance = -1;  // index into design.instances; -1 = port
  int port = -1;      // index into design.ports when instance < 0
  std::string pin;
  Point position;
  bool used = false;
};

// Spatial buckets over free load pins for locality-aware net building.
// Consumed pins are compacted out of the buckets during scans, and an alive
// counter short-circuits searches once the pool drains.
class PinIndex {
public:
  PinIndex(Rect core, int buckets_per_axis)
      : core_(core),
        nb_(std::max(1, buckets_per_axis)),
        bw_(std::max<dbu_t>(1, core.width() / nb_)),
        bh_(std::max<dbu_t>(1, core.height() / nb_)),
        buckets_(static_cast<std::size_t>(nb_) * nb_) {}

  void add(std::size_t pin_id, Point p) {
    buckets_[bucket_of(p)].push_back(pin_id);
    ++alive_count_;
  }

  void note_consumed(std::size_t n) { alive_count_ -= std::min(alive_count_, n); }

  // Collect candidate pin ids from rings of buckets around p until at least
  // `want` live candidates are found (or the pool is exhausted).
  template <typename Alive>
  std::vector<std::size_t> nearby(Point p, std::size_t want, Alive&& alive) {
    std::vector<std::size_t> found;
    if (alive_count_ == 0) return found;
    const int bx = static_cast<int>(std::clamp<dbu_t>((p.x - core_.lo.x) / bw_, 0, nb_ - 1));
    const int by = static_cast<int>(std::clamp<dbu_t>((p.y - core_.lo.y) / bh_, 0, nb_ - 1));
    for (int r = 0; r < 2 * nb_; ++r) {
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          if (std::max(std::abs(dx), std::abs(dy)) != r) continue;  // ring only
          const int x = bx + dx, y = by + dy;
          if (x < 0 || x >= nb_ || y < 0 || y >= nb_) continue;
          auto& bucket = buckets_[static_cast<std::size_t>(y) * nb_ + x];
          std::size_t keep = 0;
          for (std::size_t i = 0; i < bucket.size(); ++i) {
            if (alive(bucket[i])) {
              bucket[keep++] = bucket[i];
              found.push_back(bucket[i]);
            }
          }
          bucket.resize(keep);
        }
      }
      if (found.size() >= want && r >= 1) break;
    }
    return found;
  }

private:
  std::size_t bucket_of(Point p) const {
    const int bx = static_cast<int>(std::clamp<dbu_t>((p.x - core_.lo.x) / bw_, 0, nb_ - 1));
    const int by = static_cast<int>(std::clamp<dbu_t>((p.y - core_.lo.y) / bh_, 0, nb_ - 1));
    return static_cast<std::size_t>(by) * nb_ + bx;
  }

  Rect core_;
  int nb_;
  dbu_t bw_, bh_;
  std::vector<std::vector<std::size_t>> buckets_;
  std::size_t alive_count_ = 0;
};

dbu_t manhattan(Point a, Point b) {
  return std::llabs(a.x - b.x) + std::llabs(a.y - b.y);
}

std::string zero_pad(const char* prefix, int value, int width = 7) {
  std::string digits = std::to_string(value);
  std::string out(prefix);
  out.append(static_cast<std::size_t>(std::max(0, width - static_cast<int>(digits.size()))), '0');
  out += digits;
  return out;
}

// Builds a connected rectilinear tree over the net's pins, assigning layers
// (H on M1/M3, V on M2) and inserting vias at layer transitions.
class NetRouter {
public:
  NetRouter(const TechLib& tech, Rng& rng, double z_fraction)
      : rng_(rng), z_fraction_(z_fraction) {
    const auto metals = tech.routing_layer_indices();
    h_layer_ = metals.empty() ? 2 : metals[0];
    v_layer_ = metals.size() > 1 ? metals[1] : h_layer_;
    h_long_layer_ = metals.size() > 2 ? metals[2] : h_layer_;
    long_threshold_ = 50 * tech.reference_pitch();
  }

  void route(Net& net) {
    const NetPin* drv = net.driver();
    if (!drv || net.pins.size() < 2) return;
    layers_at_.clear();
    std::vector<Point> tree_nodes{drv->position};
    std::vector<const NetPin*> loads;
    for (const auto& p : net.pins)
      if (p.direction == NetPinDirection::Load) loads.push_back(&p);
    std::sort(loads.begin(), loads.end(), [&](const NetPin* a, const NetPin* b) {
      const dbu_t da = manhattan(a->position, drv->position);
      const dbu_t db = manhattan(b->position, drv->position);
      if (da != db) return da < db;
      return a->position < b->position;
    });
    for (const NetPin* load : loads) {
      Point tap = tree_nodes[0];
      dbu_t best = manhattan(tap, load->position);
      for (const Point& cand : tree_nodes) {
        const dbu_t d = manhattan(cand, load->position);
        if (d < best) {
          best = d;
          tap = cand;
        }
      }
      connect(net, tap, load->position, tree_nodes);
    }
    dedupe_vias(net);
  }

private:
  void connect(Net& net, Point from, Point to, std::vector<Point>& tree_nodes) {
    if (from == to) return;
    std::vector<Point> waypoints;
    if (from.x == to.x || from.y == to.y) {
      waypoints = {from, to};
    } else if (rng_.uniform() < z_fraction_ && std::llabs(to.x - from.x) > 2) {
      const dbu_t mx = from.x + (to.x - from.x) / 2;
      waypoints = {from, Point{mx, from.y}, Point{mx, to.y}, to};
    } else if (rng_.next_u64() & 1) {
      waypoints = {from, Point{to.x, from.y}, to};
    } else {
      waypoints = {from, Point{from.x, to.y}, to};
    }
    for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
      const Point a = waypoints[i], b = waypoints[i + 1];
      if (a == b) continue;
      int layer;
      if (a.y == b.y)
        layer = std::llabs(b.x - a.x) > long_threshold_ ? h_long_layer_ : h_layer_;
      else
        layer = v_layer_;
      net.routing.push_back(WireSegment{a.x, a.y, b.x, b.y, layer});
      join_layers(net, a, layer);
      note_layer(a, layer);
      note_layer(b, layer);
      tree_nodes.push_back(b);
    }
    // make sure the arrival point bridges down to the pin layer
    join_layers(net, to, h_layer_);
    note_layer(to, h_layer_);
  }

  // Bridge `layer` to any layer already present at point p with stacked
  // adjacent vias; pins and taps implicitly live on the first metal.
  void join_layers(Net& net, Point p, int layer) {
    auto& present = layers_at_[{p.x, p.y}];
    if (present.empty()) {
      present.push_back(h_layer_);  // pin/tap plane
    }
    if (std::find(present.begin(), present.end(), layer) != present.end()) return;
    int nearest = present[0];
    dbu_t best = std::llabs(layer - nearest);
    for (int l : present)
      if (std::llabs(l - layer) < best) {
        best = std::llabs(l - layer);
        nearest = l;
      }
    const int lo = std::min(nearest, layer), hi = std::max(nearest, layer);
    for (int b = lo; b < hi; b += 2)
      net.vias.push_back(ViaInstance{p.x, p.y, b, b + 2});
  }

  void note_layer(Point p, int layer) {
    auto& present = layers_at_[{p.x, p.y}];
    if (std::find(present.begin(), present.end(), layer) == present.end())
      present.push_back(layer);
  }

  void dedupe_vias(Net& net) {
    std::sort(net.vias.begin(), net.vias.end(), [](const ViaInstance& a, const ViaInstance& b) {
      return std::tie(a.xc, a.yc, a.layer_bot, a.layer_top) <
             std::tie(b.xc, b.yc, b.layer_bot, b.layer_top);
    });
    net.vias.erase(std::unique(net.vias.begin(), net.vias.end()), net.vias.end());
  }

  Rng& rng_;
  double z_fraction_;
  int h_layer_, v_layer_, h_long_layer_;
  dbu_t long_threshold_;
  std::map<std::pair<dbu_t, dbu_t>, std::vector<int>> layers_at_;
};

}  // namespace

Design generate_synthetic(const SynthParams& params) {
  if (params.num_instances < 1) throw ConfigError("num_instances", "must be >= 1");
  if (params.num_nets < 0) throw ConfigError("num_nets", "must be >= 0");
  if (params.routing_layers < 1) throw ConfigError("routing_layers", "must be >= 1");
  if (params.clock_leaf_fanout < 2) throw ConfigError("clock_leaf_fanout", "must be >= 2");
  if (params.pin_count_weights.empty()) throw ConfigError("pin_count_weights", "must be non-empty");
  for (const auto& [pins, weight] : params.pin_count_weights) {
    if (pins < 2) throw ConfigError("pin_count_weights", "pin counts must be >= 2");
    if (weight < 0) throw ConfigError("pin_count_weights", "weights must be >= 0");
  }

  Rng rng(params.seed);
  Design d;
  d.name = params.name;
  d.tech = default_tech(params.routing_layers);
  d.core = Rect{{params.die_margin, params.die_margin},
                {params.die_margin + params.core_width, params.die_margin + params.core_height}};
  d.die = Rect{{0, 0},
               {params.core_width + 2 * params.die_margin,
                params.core_height + 2 * params.die_margin}};

  const dbu_t row_h = d.tech.site.height;
  const dbu_t site_w = d.tech.site.width;
  const int rows = static_cast<int>(params.core_height / row_h);
  if (rows < 1) throw CapacityError("core shorter than one placement row");

  // instance mix
  const int n_total = params.num_instances;
  int n_seq = static_cast<int>(std::lround(params.sequential_fraction * n_total));
  int n_macro = static_cast<int>(std::lround(params.macro_fraction * n_total));
  int n_pad = static_cast<int>(std::lround(params.pad_fraction * n_total));
  int n_clkbuf = 0;
  if (params.clock_tree && n_seq > 0) {
    int leaves = (n_seq + params.clock_leaf_fanout - 1) / params.clock_leaf_fanout;
    n_clkbuf = leaves;
    int level = leaves;
    while (level > 1) {
      level = (level + params.clock_leaf_fanout - 1) / params.clock_leaf_fanout;
      n_clkbuf += level;
    }
  }
  int n_comb = n_total - n_seq - n_macro - n_pad - n_clkbuf;
  if (n_comb < 0) throw CapacityError("instance mix exceeds num_instances");

  // master assignment in a deterministic shuffled order
  std::vector<std::string> masters;
  masters.reserve(static_cast<std::size_t>(n_total));
  const std::vector<std::string> comb_masters = {"INV_X1", "BUF_X2", "NAND2_X1", "NOR2_X1"};
  for (int i = 0; i < n_comb; ++i)
    masters.push_back(comb_masters[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(comb_masters.size()) - 1))]);
  for (int i = 0; i < n_seq; ++i) masters.push_back("DFF_X1");
  for (int i = 0; i < n_clkbuf; ++i) masters.push_back("CLKBUF_X2");
  for (int i = 0; i < n_pad; ++i) masters.push_back("PAD_IO");
  rng.shuffle(masters);
  for (int i = 0; i < n_macro; ++i) masters.push_back("RAM_MACRO");  // macros placed first

  // feasibility
  dbu_t total_width_rows = 0;
  dbu_t macro_area = 0;
  for (const auto& mn : masters) {
    const CellMaster* m = d.tech.find_master(mn);
    if (m->class_tag == "BLOCK")
      macro_area += m->width * m->height;
    else
      total_width_rows += m->width;
  }
  const dbu_t row_capacity = (params.core_width / site_w) * site_w;
  const dbu_t avail = static_cast<dbu_t>(rows) * row_capacity - macro_area;
  if (total_width_rows > static_cast<dbu_t>(0.92 * static_cast<double>(avail)))
    throw CapacityError("requested instances exceed placeable core capacity");

  // placement: macros first into the lower-left corner, then row fill with
  // density modulated by two seeded hot spots
  struct RowState {
    dbu_t x;       // next free x
    dbu_t limit;   // row end
  };
  std::vector<RowState> row_state(static_cast<std::size_t>(rows));
  for (int r = 0; r < rows; ++r)
    row_state[static_cast<std::size_t>(r)] = {d.core.lo.x, d.core.lo.x + row_capacity};

  std::vector<Instance> placed;
  placed.reserve(masters.size());
  int macro_cursor_x = 0;
  for (auto it = masters.begin(); it != masters.end();) {
    if (d.tech.find_master(*it)->class_tag != "BLOCK") {
      ++it;
      continue;
    }
    const CellMaster* m = d.tech.find_master(*it);
    const int rows_needed = static_cast<int>((m->height + row_h - 1) / row_h);
    if (rows_needed > rows) throw CapacityError("macro taller than core");
    const dbu_t x = d.core.lo.x + macro_cursor_x;
    if (x + m->width > d.core.lo.x + row_capacity) throw CapacityError("macro row overflow");
    Instance inst;
    inst.master = *it;
    inst.origin = Point{x, d.core.lo.y};
    placed.push_back(inst);
    for (int r = 0; r < rows_needed; ++r)
      row_state[static_cast<std::size_t>(r)].x =
          std::max(row_state[static_cast<std::size_t>(r)].x, x + m->width + site_w);
    macro_cursor_x += static_cast<int>(m->width + 2 * site_w);
    it = masters.erase(it);
  }

  const double base_util =
      static_cast<double>(total_width_rows) / std::max<dbu_t>(1, avail);
  const double cx1 = rng.uniform(0.2, 0.8), cy1 = rng.uniform(0.2, 0.8);
  const double cx2 = rng.uniform(0.2, 0.8), cy2 = rng.uniform(0.2, 0.8);
  auto local_util = [&](double fx, double fy) {
    const double b1 = std::exp(-8.0 * ((fx - cx1) * (fx - cx1) + (fy - cy1) * (fy - cy1)));
    const double b2 = std::exp(-8.0 * ((fx - cx2) * (fx - cx2) + (fy - cy2) * (fy - cy2)));
    return std::clamp(base_util * (0.55 + 0.9 * b1 + 0.7 * b2), 0.05, 0.97);
  };

  int row = 0;
  for (const auto& mn : masters) {
    const CellMaster* m = d.tech.find_master(mn);
    for (int tries = 0; tries <= rows; ++tries) {
      auto& rs = row_state[static_cast<std::size_t>(row)];
      const double fx =
          static_cast<double>(rs.x - d.core.lo.x) / std::max<dbu_t>(1, row_capacity);
      const double fy = static_cast<double>(row) / std::max(1, rows - 1);
      const double u = local_util(fx, fy);
      dbu_t gap = static_cast<dbu_t>(static_cast<double>(m->width) * (1.0 - u) / u *
                                     rng.uniform(0.0, 2.0));
      gap = (gap / site_w) * site_w;
      if (rs.x + gap + m->width <= rs.limit) {
        Instance inst;
        inst.master = mn;
        inst.origin = Point{rs.x + gap, d.core.lo.y + static_cast<dbu_t>(row) * row_h};
        placed.push_back(inst);
        rs.x += gap + m->width;
        row = (row + 1) % rows;
        break;
      }
      if (rs.x + m->width <= rs.limit) {  // drop the gap when tight
        Instance inst;
        inst.master = mn;
        inst.origin = Point{rs.x, d.core.lo.y + static_cast<dbu_t>(row) * row_h};
        placed.push_back(inst);
        rs.x += m->width;
        row = (row + 1) % rows;
        break;
      }
      row = (row + 1) % rows;
      if (tries == rows) throw CapacityError("no row can host instance of " + mn);
    }
  }

  // deterministic names in placement order; vector ends up name-sorted
  for (std::size_t i = 0; i < placed.size(); ++i) {
    placed[i].name = zero_pad("u", static_cast<int>(i));
    placed[i].cls = classify_instance(placed[i].master, d.tech);
  }
  d.instances = std::move(placed);

  // ports on the core boundary
  auto add_port = [&](const std::string& name, PinDirection dir, int k, int total) {
    Port p;
    p.name = name;
    p.direction = dir;
    const dbu_t span = d.core.width();
    const dbu_t step = span / (total + 1);
    if (dir == PinDirection::Input) {
      p.position = Point{d.core.lo.x + step * (k + 1), d.core.lo.y};
    } else {
      p.position = Point{d.core.lo.x + step * (k + 1), d.core.hi.y};
    }
    d.ports.push_back(p);
  };
  const bool want_clock_port = params.clock_tree && n_seq > 0;
  if (want_clock_port) {
    Port clk;
    clk.name = "clk";
    clk.direction = PinDirection::Input;
    clk.position = Point{d.core.lo.x, d.core.lo.y + d.core.height() / 2};
    d.ports.push_back(clk);
  }
  for (int i = 0; i < params.input_ports; ++i)
    add_port(zero_pad("in", i, 2), PinDirection::Input, i, params.input_ports);
  for (int i = 0; i < params.output_ports; ++i)
    add_port(zero_pad("out", i, 2), PinDirection::Output, i, params.output_ports);
  std::sort(d.ports.begin(), d.ports.end(),
            [](const Port& a, const Port& b) { return a.name < b.name; });

  // free load pins (instance inputs, excluding clock pins) + output ports
  std::vector<FreePin> load_pins;
  for (std::size_t i = 0; i < d.instances.size(); ++i) {
    const CellMaster* m = d.tech.find_master(d.instances[i].master);
    if (m->name == "CLKBUF_X2") continue;  // reserved for the clock tree
    for (const auto& mp : m->pins) {
      if (mp.direction != PinDirection::Input || mp.is_clock) continue;
      FreePin fp;
      fp.instance = static_cast<int>(i);
      fp.pin = mp.name;
      fp.position = Point{d.instances[i].origin.x + mp.offset.x,
                          d.instances[i].origin.y + mp.offset.y};
      load_pins.push_back(fp);
    }
  }
  std::vector<std::size_t> port_load_ids;
  for (std::size_t i = 0; i < d.ports.size(); ++i) {
    if (d.ports[i].direction != PinDirection::Output) continue;
    FreePin fp;
    fp.port = static_cast<int>(i);
    fp.pin = d.ports[i].name;
    fp.position = d.ports[i].position;
    port_load_ids.push_back(load_pins.size());
    load_pins.push_back(fp);
  }

  PinIndex pin_index(d.core, std::max(2, static_cast<int>(std::sqrt(
                                             static_cast<double>(load_pins.size()) / 8.0 + 1))));
  for (std::size_t i = 0; i < load_pins.size(); ++i) pin_index.add(i, load_pins[i].position);

  // drivers: every instance output pin except clock buffers; plus input ports
  struct DriverRef {
    int instance = -1;
    int port = -1;
    std::string pin;
    Point position;
  };
  std::vector<DriverRef> drivers;
  for (std::size_t i = 0; i < d.instances.size(); ++i) {
    const CellMaster* m = d.tech.find_master(d.instances[i].master);
    if (m->name == "CLKBUF_X2") continue;
    const MasterPin* outp = m->first_output();
    if (!outp) continue;
    DriverRef dr;
    dr.instance = static_cast<int>(i);
    dr.pin = outp->name;
    dr.position = Point{d.instances[i].origin.x + outp->offset.x,
                        d.instances[i].origin.y + outp->offset.y};
    drivers.push_back(dr);
  }
  for (std::size_t i = 0; i < d.ports.size(); ++i) {
    if (d.ports[i].direction != PinDirection::Input || d.ports[i].name == "clk") continue;
    DriverRef dr;
    dr.port = static_cast<int>(i);
    dr.pin = d.ports[i].name;
    dr.position = d.ports[i].position;
    drivers.push_back(dr);
  }
  rng.shuffle(drivers);
  if (params.num_nets > static_cast<int>(drivers.size()))
    throw CapacityError("num_nets exceeds available driver pins (" +
                        std::to_string(drivers.size()) + ")");

  std::vector<double> weights;
  std::vector<int> pin_counts;
  for (const auto& [pins, weight] : params.pin_count_weights) {
    pin_counts.push_back(pins);
    weights.push_back(weight);
  }

  NetRouter router(d.tech, rng, params.z_route_fraction);
  int net_counter = 0;
  auto next_net_name = [&] { return zero_pad("n", net_counter++); };

  auto owner_pin = [&](const FreePin& fp) {
    NetPin np;
    if (fp.instance >= 0) {
      np.owner = d.instances[static_cast<std::size_t>(fp.instance)].name;
      np.pin = fp.pin;
    } else {
      np.owner.clear();
      np.pin = fp.pin;
    }
    np.position = fp.position;
    np.direction = NetPinDirection::Load;
    return np;
  };

  // data nets
  std::size_t unused_port_loads = port_load_ids.size();
  for (int net_i = 0; net_i < params.num_nets; ++net_i) {
    const DriverRef& dr = drivers[static_cast<std::size_t>(net_i)];
    Net net;
    net.name = next_net_name();
    NetPin driver_pin;
    if (dr.instance >= 0) {
      driver_pin.owner = d.instances[static_cast<std::size_t>(dr.instance)].name;
      driver_pin.pin = dr.pin;
    } else {
      driver_pin.owner.clear();
      driver_pin.pin = dr.pin;
    }
    driver_pin.position = dr.position;
    driver_pin.direction = NetPinDirection::Driver;
    net.pins.push_back(driver_pin);

    int want_loads = pin_counts[rng.weighted_pick(weights)] - 1;
    // sprinkle output ports onto nets until each is used once
    if (unused_port_loads > 0 && rng.uniform() < 0.02) {
      const std::size_t id = port_load_ids[port_load_ids.size() - unused_port_loads];
      if (!load_pins[id].used) {
        load_pins[id].used = true;
        net.pins.push_back(owner_pin(load_pins[id]));
        --unused_port_loads;
        --want_loads;
      }
    }
    if (want_loads > 0) {
      auto alive = [&](std::size_t id) {
        if (load_pins[id].used) return false;
        // keep self-loops out so star expansion is loop-free
        return !(dr.instance >= 0 && load_pins[id].instance == dr.instance);
      };
      std::vector<std::size_t> cands =
          pin_index.nearby(dr.position, static_cast<std::size_t>(want_loads) * 4, alive);
      // order by distance, then sample among the closest half
      std::sort(cands.begin(), cands.end(), [&](std::size_t a, std::size_t b) {
        const dbu_t da = manhattan(load_pins[a].position, dr.position);
        const dbu_t db = manhattan(load_pins[b].position, dr.position);
        if (da != db) return da < db;
        return a < b;
      });
      for (int k = 0; k < want_loads && !cands.empty(); ++k) {
        const std::size_t pool =
            std::min(cands.size(), std::max<std::size_t>(4, cands.size() / 2));
        std::size_t pick = static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(pool) - 1));
        const std::size_t id = cands[pick];
        load_pins[id].used = true;
        net.pins.push_back(owner_pin(load_pins[id]));
        cands.erase(cands.begin() + static_cast<std::ptrdiff_t>(pick));
        cands.erase(std::remove_if(cands.begin(), cands.end(),
                                   [&](std::size_t c) { return !alive(c); }),
                    cands.end());
      }
    }
    if (net.pins.size() < 2) {
      // no reachable free load: make it a 2-pin stub to the nearest port load
      bool attached = false;
      for (std::size_t id : port_load_ids) {
        if (!load_pins[id].used) {
          load_pins[id].used = true;
          net.pins.push_back(owner_pin(load_pins[id]));
          attached = true;
          break;
        }
      }
      if (!attached) {
        --net_counter;
        continue;  // drop the net, no sinks available anywhere
      }
    }
    router.route(net);
    d.nets.push_back(std::move(net));
  }

  // clock tree: clk port -> buffer levels -> DFF CK pins, grouped spatially
  if (want_clock_port) {
    std::vector<std::size_t> clkbufs;
    for (std::size_t i = 0; i < d.instances.size(); ++i)
      if (d.instances[i].master == "CLKBUF_X2") clkbufs.push_back(i);
    std::vector<std::size_t> sinks;  // instance indices of DFFs
    for (std::size_t i = 0; i < d.instances.size(); ++i)
      if (d.instances[i].master == "DFF_X1") sinks.push_back(i);
    std::sort(sinks.begin(), sinks.end(), [&](std::size_t a, std::size_t b) {
      const Point pa = d.instances[a].origin, pb = d.instances[b].origin;
      if (pa.y != pb.y) return pa.y < pb.y;
      if (pa.x != pb.x) return pa.x < pb.x;
      return a < b;
    });

    std::size_t buf_cursor = 0;
    auto take_buffer = [&]() -> std::size_t {
      if (buf_cursor >= clkbufs.size()) throw CapacityError("clock buffer pool exhausted");
      return clkbufs[buf_cursor++];
    };

    struct ClockSink {
      std::size_t instance;
      const char* pin;
    };
    std::vector<ClockSink> level;
    for (std::size_t s : sinks) level.push_back({s, "CK"});
    std::vector<Net> clock_nets;
    while (!level.empty()) {
      std::vector<ClockSink> next_level;
      for (std::size_t g = 0; g < level.size();
           g += static_cast<std::size_t>(params.clock_leaf_fanout)) {
        const std::size_t end =
            std::min(level.size(), g + static_cast<std::size_t>(params.clock_leaf_fanout));
        const std::size_t buf = take_buffer();
        Net net;
        net.name = next_net_name();
        NetPin drv;
        drv.owner = d.instances[buf].name;
        drv.pin = "Y";
        drv.position = d.pin_position(d.instances[buf], "Y");
        drv.direction = NetPinDirection::Driver;
        net.pins.push_back(drv);
        for (std::size_t k = g; k < end; ++k) {
          NetPin lp;
          lp.owner = d.instances[level[k].instance].name;
          lp.pin = level[k].pin;
          lp.position = d.pin_position(d.instances[level[k].instance], level[k].pin);
          lp.direction = NetPinDirection::Load;
          net.pins.push_back(lp);
        }
        router.route(net);
        clock_nets.push_back(std::move(net));
        next_level.push_back({buf, "A"});
      }
      if (next_level.size() == 1) {
        // root net from the clk port
        Net net;
        net.name = next_net_name();
        const Port* clk = d.find_port("clk");
        NetPin drv;
        drv.pin = clk->name;
        drv.position = clk->position;
        drv.direction = NetPinDirection::Driver;
        net.pins.push_back(drv);
        NetPin lp;
        lp.owner = d.instances[next_level[0].instance].name;
        lp.pin = next_level[0].pin;
        lp.position = d.pin_position(d.instances[next_level[0].instance], next_level[0].pin);
        lp.direction = NetPinDirection::Load;
        net.pins.push_back(lp);
        router.route(net);
        clock_nets.push_back(std::move(net));
        break;
      }
      level = std::move(next_level);
    }
    for (auto& n : clock_nets) d.nets.push_back(std::move(n));
  }

  std::sort(d.nets.begin(), d.nets.end(),
            [](const Net& a, const Net& b) { return a.name < b.name; });
  d.validate();
  return d;
}

}  // namespace chipvec
