#include "chipvec/extract.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <map>
#include <tuple>
#include <unordered_map>

#include "chipvec/elmore.hpp"
#include "chipvec/parallel.hpp"
#include "chipvec/rsmt.hpp"

namespace chipvec {

namespace {

constexpr double kLn9 = 2.1972245773362196;  // slew = ln(9) * Elmore

struct NodeKey {
  dbu_t x, y;
  int layer;
  bool operator==(const NodeKey&) const = default;
};

struct NodeKeyHash {
  std::size_t operator()(const NodeKey& k) const {
    std::size_t h = std::hash<dbu_t>()(k.x) * 0x9e3779b97f4a7c15ull;
    h ^= std::hash<dbu_t>()(k.y) + 0x9e3779b9 + (h << 6) + (h >> 2);
    h ^= static_cast<std::size_t>(k.layer) * 0x85ebca6b;
    return h;
  }
};

// Node-and-piece graph of one net's routing, split at Steiner/critical
// points (segment endpoints, via landings, pins).
struct RouteGraph {
  struct Piece {
    int a, b;
    dbu_t len;
    int layer;
    bool is_via;
  };

  std::vector<NodeKey> nodes;
  std::vector<std::vector<std::pair<int, int>>> adj;  // node -> (peer, piece)
  std::vector<Piece> pieces;
  std::unordered_map<NodeKey, int, NodeKeyHash> index;

  int intern(NodeKey k) {
    auto [it, inserted] = index.try_emplace(k, static_cast<int>(nodes.size()));
    if (inserted) {
      nodes.push_back(k);
      adj.emplace_back();
    }
    return it->second;
  }

  int find(NodeKey k) const {
    auto it = index.find(k);
    return it == index.end() ? -1 : it->second;
  }

  void add_piece(int a, int b, dbu_t len, int layer, bool is_via) {
    const int id = static_cast<int>(pieces.size());
    pieces.push_back(Piece{a, b, len, layer, is_via});
    adj[static_cast<std::size_t>(a)].emplace_back(b, id);
    adj[static_cast<std::size_t>(b)].emplace_back(a, id);
  }
};

int pin_layer_of(const TechLib& tech) {
  const auto metals = tech.routing_layer_indices();
  return metals.empty() ? 2 : metals.front();
}

RouteGraph build_route_graph(const Net& net, const TechLib& tech) {
  RouteGraph g;
  const int pin_layer = pin_layer_of(tech);
  // anchors
  for (const auto& p : net.pins) g.intern(NodeKey{p.position.x, p.position.y, pin_layer});
  for (const auto& v : net.vias) {
    g.intern(NodeKey{v.xc, v.yc, v.layer_bot});
    g.intern(NodeKey{v.xc, v.yc, v.layer_top});
  }
  for (const auto& s : net.routing) {
    g.intern(NodeKey{s.xs, s.ys, s.layer});
    g.intern(NodeKey{s.xe, s.ye, s.layer});
  }
  // per-layer row/column anchor indexes for mid-segment splits
  std::map<std::pair<int, dbu_t>, std::vector<std::pair<dbu_t, int>>> rows, cols;
  for (int i = 0; i < static_cast<int>(g.nodes.size()); ++i) {
    const NodeKey& k = g.nodes[static_cast<std::size_t>(i)];
    rows[{k.layer, k.y}].emplace_back(k.x, i);
    cols[{k.layer, k.x}].emplace_back(k.y, i);
  }
  for (auto& [key, v] : rows) std::sort(v.begin(), v.end());
  for (auto& [key, v] : cols) std::sort(v.begin(), v.end());

  for (const auto& s : net.routing) {
    if (s.length() == 0) continue;
    if (s.horizontal()) {
      const auto it = rows.find({s.layer, s.ys});
      const auto& anchors = it->second;
      const dbu_t lo = std::min(s.xs, s.xe), hi = std::max(s.xs, s.xe);
      auto first = std::lower_bound(anchors.begin(), anchors.end(), std::pair<dbu_t, int>{lo, -1});
      int prev = -1;
      dbu_t prev_x = 0;
      for (auto a = first; a != anchors.end() && a->first <= hi; ++a) {
        if (prev >= 0 && a->first > prev_x)
          g.add_piece(prev, a->second, a->first - prev_x, s.layer, false);
        prev = a->second;
        prev_x = a->first;
      }
    } else {
      const auto it = cols.find({s.layer, s.xs});
      const auto& anchors = it->second;
      const dbu_t lo = std::min(s.ys, s.ye), hi = std::max(s.ys, s.ye);
      auto first = std::lower_bound(anchors.begin(), anchors.end(), std::pair<dbu_t, int>{lo, -1});
      int prev = -1;
      dbu_t prev_y = 0;
      for (auto a = first; a != anchors.end() && a->first <= hi; ++a) {
        if (prev >= 0 && a->first > prev_y)
          g.add_piece(prev, a->second, a->first - prev_y, s.layer, false);
        prev = a->second;
        prev_y = a->first;
      }
    }
  }
  for (const auto& v : net.vias) {
    const int a = g.find(NodeKey{v.xc, v.yc, v.layer_bot});
    const int b = g.find(NodeKey{v.xc, v.yc, v.layer_top});
    g.add_piece(a, b, 0, v.layer_bot + 1, true);
  }
  return g;
}

int count_bends(const std::vector<SubnetNode>& nodes) {
  int bends = 0;
  int last_dir = 0;  // 1 horizontal, 2 vertical
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const dbu_t dx = nodes[i + 1].x - nodes[i].x;
    const dbu_t dy = nodes[i + 1].y - nodes[i].y;
    if (dx == 0 && dy == 0) continue;  // via step
    const int dir = dy == 0 ? 1 : 2;
    if (last_dir != 0 && dir != last_dir) ++bends;
    last_dir = dir;
  }
  return bends;
}

}  // namespace

NetVec decompose_net(const Net& net, const TechLib& tech) {
  NetVec nv;
  nv.name = net.name;
  nv.pins = net.pins;
  nv.wires = net.routing;
  nv.vias = net.vias;
  nv.fanout = net.fanout();
  nv.via_count = static_cast<int>(net.vias.size());
  nv.rwl = net.routed_wirelength();

  std::vector<Point> pin_points;
  pin_points.reserve(net.pins.size());
  for (const auto& p : net.pins) pin_points.push_back(p.position);
  if (pin_points.empty()) throw EmptyPinSet();
  nv.bbox = bounding_box(pin_points);
  nv.hpwl = hpwl(pin_points);
  nv.rsmt = estimate_rsmt(pin_points);
  const dbu_t w = nv.bbox.width(), h = nv.bbox.height();
  nv.aspect_ratio =
      std::max(w, h) > 0 ? static_cast<double>(std::min(w, h)) / static_cast<double>(std::max(w, h))
                         : 0.0;
  for (const auto& s : net.routing) nv.layer_wirelength[s.layer] += s.length();

  // driver-to-load walks
  const NetPin* driver = net.driver();
  if (driver && (net.fanout() > 0)) {
    RouteGraph g = build_route_graph(net, tech);
    const int pin_layer = pin_layer_of(tech);
    const int root = g.find(NodeKey{driver->position.x, driver->position.y, pin_layer});
    std::vector<int> parent(g.nodes.size(), -2);
    if (root >= 0) {
      parent[static_cast<std::size_t>(root)] = -1;
      std::deque<int> queue{root};
      while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (const auto& [v, piece] : g.adj[static_cast<std::size_t>(u)]) {
          if (parent[static_cast<std::size_t>(v)] != -2) continue;
          parent[static_cast<std::size_t>(v)] = u;
          queue.push_back(v);
        }
      }
    }
    std::string unreached;
    for (const auto& p : net.pins) {
      if (p.direction != NetPinDirection::Load) continue;
      const int node = g.find(NodeKey{p.position.x, p.position.y, pin_layer});
      if (node < 0 || parent[static_cast<std::size_t>(node)] == -2) {
        if (!unreached.empty()) unreached += ", ";
        unreached += p.is_port() ? p.pin : p.owner + "/" + p.pin;
        continue;
      }
      Subnet sn;
      sn.load_owner = p.owner;
      sn.load_pin = p.pin;
      std::vector<int> chain;
      for (int v = node; v != -1; v = parent[static_cast<std::size_t>(v)]) chain.push_back(v);
      std::reverse(chain.begin(), chain.end());
      sn.nodes.reserve(chain.size());
      for (int v : chain) {
        const NodeKey& k = g.nodes[static_cast<std::size_t>(v)];
        SubnetNode node_out{k.x, k.y, k.layer, false};
        sn.nodes.push_back(node_out);
      }
      if (!sn.nodes.empty()) {
        sn.nodes.front().is_pin = true;
        sn.nodes.back().is_pin = true;
      }
      sn.bends = count_bends(sn.nodes);
      nv.subnets.push_back(std::move(sn));
    }
    if (!unreached.empty()) throw ConnectivityError(net.name, unreached);
    int l_like = 0;
    for (const auto& sn : nv.subnets)
      if (sn.bends <= 1) ++l_like;
    nv.l_ness = nv.subnets.empty()
                    ? 0.0
                    : static_cast<double>(l_like) / static_cast<double>(nv.subnets.size());
  }
  return nv;
}

void net_electricals(NetVec& nv, const TechLib& tech, const PowerParams& power,
                     const std::vector<double>& load_caps);

void net_electricals(NetVec& nv, const TechLib& tech, const PowerParams& power) {
  net_electricals(nv, tech, power, {});
}

void net_electricals(NetVec& nv, const TechLib& tech, const PowerParams& power,
                     const std::vector<double>& load_caps) {
  double r_total = 0.0, c_wire = 0.0;
  for (const auto& s : nv.wires) {
    const Layer* l = tech.find_layer(s.layer);
    if (!l || l->kind != LayerKind::Routing)
      throw TechError("net " + nv.name + " uses layer index " + std::to_string(s.layer) +
                      " without unit R/C");
    r_total += l->unit_r * static_cast<double>(s.length());
    c_wire += l->unit_c * static_cast<double>(s.length());
  }
  nv.r_total = r_total;

  std::vector<const NetPin*> loads;
  for (const auto& p : nv.pins)
    if (p.direction == NetPinDirection::Load) loads.push_back(&p);
  double c_loads = 0.0;
  for (std::size_t i = 0; i < loads.size(); ++i)
    c_loads += i < load_caps.size() ? load_caps[i] : 0.0;
  nv.c_total = c_wire + c_loads;
  nv.switching_power = power.activity * power.frequency * power.voltage * power.voltage *
                       nv.c_total;

  nv.elmore_per_load.assign(loads.size(), 0.0);
  nv.slew_per_load.assign(loads.size(), 0.0);
  if (nv.wires.empty() || loads.empty()) return;

  // RC tree over the routing, rooted at the driver
  Net shadow;
  shadow.name = nv.name;
  shadow.pins = nv.pins;
  shadow.routing = nv.wires;
  shadow.vias = nv.vias;
  RouteGraph g = build_route_graph(shadow, tech);
  const int pin_layer = pin_layer_of(tech);
  const NetPin* driver = nullptr;
  for (const auto& p : nv.pins)
    if (p.direction == NetPinDirection::Driver) driver = &p;
  if (!driver) return;
  const int root = g.find(NodeKey{driver->position.x, driver->position.y, pin_layer});
  if (root < 0) return;

  RcTree tree;
  std::vector<std::size_t> tree_id(g.nodes.size(), static_cast<std::size_t>(-1));
  tree_id[static_cast<std::size_t>(root)] = 0;
  std::deque<int> queue{root};
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (const auto& [v, piece_id] : g.adj[static_cast<std::size_t>(u)]) {
      if (tree_id[static_cast<std::size_t>(v)] != static_cast<std::size_t>(-1)) continue;
      const auto& piece = g.pieces[static_cast<std::size_t>(piece_id)];
      double r = 0.0, c = 0.0;
      if (!piece.is_via) {
        const Layer* l = tech.find_layer(piece.layer);
        r = l->unit_r * static_cast<double>(piece.len);
        c = l->unit_c * static_cast<double>(piece.len);
      }
      // half of the piece capacitance lumps at each endpoint
      const std::size_t id = tree.add_node(tree_id[static_cast<std::size_t>(u)], r, c / 2.0);
      tree.add_cap(tree_id[static_cast<std::size_t>(u)], c / 2.0);
      tree_id[static_cast<std::size_t>(v)] = id;
      queue.push_back(v);
    }
  }
  for (std::size_t i = 0; i < loads.size(); ++i) {
    const int node = g.find(NodeKey{loads[i]->position.x, loads[i]->position.y, pin_layer});
    if (node >= 0 && tree_id[static_cast<std::size_t>(node)] != static_cast<std::size_t>(-1) &&
        i < load_caps.size())
      tree.add_cap(tree_id[static_cast<std::size_t>(node)], load_caps[i]);
  }
  const std::vector<double> delays = tree.elmore_delays();
  for (std::size_t i = 0; i < loads.size(); ++i) {
    const int node = g.find(NodeKey{loads[i]->position.x, loads[i]->position.y, pin_layer});
    if (node < 0) continue;
    const std::size_t id = tree_id[static_cast<std::size_t>(node)];
    if (id == static_cast<std::size_t>(-1)) continue;
    nv.elmore_per_load[i] = delays[id];
    nv.slew_per_load[i] = kLn9 * delays[id];
  }
}

GraphVec build_graph(const Design& design, std::vector<std::string>* diagnostics) {
  GraphVec g;
  std::vector<const Instance*> insts;
  insts.reserve(design.instances.size());
  for (const auto& i : design.instances) insts.push_back(&i);
  std::sort(insts.begin(), insts.end(),
            [](const Instance* a, const Instance* b) { return a->name < b->name; });
  std::vector<const Port*> ports;
  ports.reserve(design.ports.size());
  for (const auto& p : design.ports) ports.push_back(&p);
  std::sort(ports.begin(), ports.end(),
            [](const Port* a, const Port* b) { return a->name < b->name; });

  std::unordered_map<std::string, int> id_of;
  for (const Instance* i : insts) {
    const int id = static_cast<int>(g.nodes.size());
    g.nodes.push_back(GraphNode{id, i->name, i->cls});
    id_of["i:" + i->name] = id;
  }
  for (const Port* p : ports) {
    const int id = static_cast<int>(g.nodes.size());
    g.nodes.push_back(GraphNode{id, p->name, InstanceClass::Iopad});
    id_of["p:" + p->name] = id;
  }

  auto node_id = [&](const NetPin& pin) {
    const auto it = id_of.find(pin.is_port() ? "p:" + pin.pin : "i:" + pin.owner);
    return it == id_of.end() ? -1 : it->second;
  };

  for (const auto& net : design.nets) {
    const NetPin* driver = net.driver();
    if (!driver) continue;
    const int src = node_id(*driver);
    for (const auto& pin : net.pins) {
      if (pin.direction != NetPinDirection::Load) continue;
      const int dst = node_id(pin);
      if (src < 0 || dst < 0) continue;
      if (src == dst) {
        if (diagnostics)
          diagnostics->push_back("graph: dropped self-loop on " + net.name);
        continue;
      }
      g.edges.push_back(GraphEdge{src, dst, net.name});
    }
  }
  return g;
}

namespace {

struct PathContext {
  const Design& design;
  const std::vector<NetVec>& nets;
  const PathLimits& limits;
  std::vector<std::string>* diagnostics;

  std::unordered_map<std::string, const Instance*> inst_of;
  std::unordered_map<std::string, int> net_driven_by;  // "i:name"/"p:name" -> net idx
  std::vector<PathVec> out;
  std::vector<PathStage> stages;
  std::unordered_map<std::string, bool> on_stack;
  std::size_t hard_cap = 0;
  int truncated = 0;
  int cycles_cut = 0;
  bool capped = false;

  const CellMaster* master_of(const Instance* inst) const {
    return design.tech.find_master(inst->master);
  }
};

// Walk forward from `driver_key` ("i:inst" or "p:port") through its driven
// net; record a finished path at sequential inputs and output ports.
void dfs_paths(PathContext& ctx, const std::string& driver_key, const std::string& driver_label,
               Point driver_pos, double cell_delay) {
  if (ctx.capped) return;
  const auto net_it = ctx.net_driven_by.find(driver_key);
  if (net_it == ctx.net_driven_by.end()) return;
  const NetVec& nv = ctx.nets[static_cast<std::size_t>(net_it->second)];

  if (static_cast<int>(ctx.stages.size()) >= ctx.limits.max_stages) {
    ++ctx.truncated;
    return;
  }

  PathStage stage;
  stage.node = driver_label;
  stage.is_pin = true;
  stage.position = driver_pos;
  stage.resistance = nv.r_total;
  stage.capacitance = nv.c_total;
  stage.cell_delay = cell_delay;

  std::size_t load_idx = 0;
  for (const auto& pin : nv.pins) {
    if (pin.direction != NetPinDirection::Load) continue;
    const std::size_t li = load_idx++;
    if (ctx.capped) return;
    stage.wire_delay = li < nv.elmore_per_load.size() ? nv.elmore_per_load[li] : 0.0;
    stage.slew = li < nv.slew_per_load.size() ? nv.slew_per_load[li] : 0.0;
    stage.incr_delay = stage.cell_delay + stage.wire_delay;

    if (pin.is_port()) {
      const Port* port = ctx.design.find_port(pin.pin);
      if (port && port->direction == PinDirection::Output) {
        ctx.stages.push_back(stage);
        PathVec path;
        path.start = ctx.stages.front().node;
        path.end = pin.pin;
        path.stages = ctx.stages;
        path.stage_count = static_cast<int>(path.stages.size());
        for (const auto& s : path.stages) path.total_delay += s.incr_delay;
        ctx.out.push_back(std::move(path));
        ctx.stages.pop_back();
        if (ctx.out.size() >= ctx.hard_cap) ctx.capped = true;
      }
      continue;
    }

    const auto inst_it = ctx.inst_of.find(pin.owner);
    if (inst_it == ctx.inst_of.end()) continue;
    const Instance* inst = inst_it->second;
    const CellMaster* master = ctx.master_of(inst);
    const MasterPin* mpin = master->find_pin(pin.pin);
    if (master->is_sequential) {
      if (mpin && mpin->is_clock) continue;  // clock-tree branch, not a data path
      ctx.stages.push_back(stage);
      PathVec path;
      path.start = ctx.stages.front().node;
      path.end = pin.owner + "/" + pin.pin;
      path.stages = ctx.stages;
      path.stage_count = static_cast<int>(path.stages.size());
      for (const auto& s : path.stages) path.total_delay += s.incr_delay;
      ctx.out.push_back(std::move(path));
      ctx.stages.pop_back();
      if (ctx.out.size() >= ctx.hard_cap) ctx.capped = true;
      continue;
    }

    // combinational hop
    const std::string key = "i:" + pin.owner;
    auto& visiting = ctx.on_stack[key];
    if (visiting) {
      ++ctx.cycles_cut;
      continue;
    }
    const MasterPin* outp = master->first_output();
    if (!outp) continue;
    visiting = true;
    ctx.stages.push_back(stage);
    const auto driven = ctx.net_driven_by.find(key);
    if (driven != ctx.net_driven_by.end()) {
      const NetVec& next_net = ctx.nets[static_cast<std::size_t>(driven->second)];
      const double next_cell_delay =
          master->intrinsic_delay + master->drive_resistance * next_net.c_total;
      dfs_paths(ctx, key, pin.owner + "/" + outp->name,
                ctx.design.pin_position(*inst, outp->name), next_cell_delay);
    }
    ctx.stages.pop_back();
    visiting = false;
  }
}

}  // namespace

std::vector<PathVec> extract_paths(const Design& design, const std::vector<NetVec>& nets,
                                   const PathLimits& limits,
                                   std::vector<std::string>* diagnostics) {
  std::vector<PathVec> empty;
  if (limits.max_paths <= 0) return empty;
  bool any_sequential = false;
  for (const auto& inst : design.instances) {
    const CellMaster* m = design.tech.find_master(inst.master);
    if (m && m->is_sequential) {
      any_sequential = true;
      break;
    }
  }
  if (!any_sequential) {
    if (diagnostics) diagnostics->push_back("paths: no sequential elements in design");
    return empty;
  }

  PathContext ctx{design, nets, limits, diagnostics};
  ctx.hard_cap = std::max<std::size_t>(static_cast<std::size_t>(limits.max_paths) * 4, 20000);
  for (const auto& inst : design.instances) ctx.inst_of[inst.name] = &inst;
  for (std::size_t i = 0; i < nets.size(); ++i) {
    const NetVec& nv = nets[i];
    for (const auto& pin : nv.pins) {
      if (pin.direction != NetPinDirection::Driver) continue;
      ctx.net_driven_by[pin.is_port() ? "p:" + pin.pin : "i:" + pin.owner] =
          static_cast<int>(i);
    }
  }

  // launch points: sequential outputs, then input ports, in name order
  std::vector<const Instance*> seq;
  for (const auto& inst : design.instances) {
    const CellMaster* m = design.tech.find_master(inst.master);
    if (m && m->is_sequential && m->first_output()) seq.push_back(&inst);
  }
  std::sort(seq.begin(), seq.end(),
            [](const Instance* a, const Instance* b) { return a->name < b->name; });
  for (const Instance* inst : seq) {
    const CellMaster* m = design.tech.find_master(inst->master);
    const MasterPin* outp = m->first_output();
    const auto driven = ctx.net_driven_by.find("i:" + inst->name);
    if (driven == ctx.net_driven_by.end()) continue;
    const NetVec& nv = ctx.nets[static_cast<std::size_t>(driven->second)];
    const double cell_delay = m->intrinsic_delay + m->drive_resistance * nv.c_total;
    ctx.on_stack["i:" + inst->name] = true;
    dfs_paths(ctx, "i:" + inst->name, inst->name + "/" + outp->name,
              design.pin_position(*inst, outp->name), cell_delay);
    ctx.on_stack["i:" + inst->name] = false;
  }
  std::vector<const Port*> in_ports;
  for (const auto& p : design.ports)
    if (p.direction == PinDirection::Input) in_ports.push_back(&p);
  std::sort(in_ports.begin(), in_ports.end(),
            [](const Port* a, const Port* b) { return a->name < b->name; });
  for (const Port* p : in_ports)
    dfs_paths(ctx, "p:" + p->name, p->name, p->position, 0.0);

  if (diagnostics) {
    if (ctx.cycles_cut > 0)
      diagnostics->push_back("paths: cut " + std::to_string(ctx.cycles_cut) +
                             " combinational cycles");
    if (ctx.truncated > 0)
      diagnostics->push_back("paths: " + std::to_string(ctx.truncated) +
                             " traversals truncated at max_stages");
    if (ctx.capped)
      diagnostics->push_back("paths: enumeration capped at " + std::to_string(ctx.hard_cap));
  }

  std::sort(ctx.out.begin(), ctx.out.end(), [](const PathVec& a, const PathVec& b) {
    if (a.total_delay != b.total_delay) return a.total_delay > b.total_delay;
    if (a.start != b.start) return a.start < b.start;
    return a.end < b.end;
  });
  if (static_cast<int>(ctx.out.size()) > limits.max_paths)
    ctx.out.resize(static_cast<std::size_t>(limits.max_paths));
  return ctx.out;
}

namespace {

// Per-net additive contributions to the patch grid, merged in net order so
// parallel extraction is deterministic.
struct NetPatchContribution {
  std::vector<std::pair<int, double>> rudy;              // patch -> mass
  std::vector<int> net_touch;                            // patches the bbox intersects
  std::vector<std::tuple<int, int, dbu_t>> layer_len;    // patch, layer, length
  std::vector<std::pair<int, PatchFragment>> fragments;  // patch -> clipped piece
  std::vector<int> via_patch;
  std::vector<int> pin_patch;
  dbu_t clipped_out = 0;
};

}  // namespace

std::pair<GcellGrid, std::vector<PatchVec>> patch_features(
    const Design& design, int patch_multiple, const std::vector<NetVec>& nets, int threads,
    std::vector<std::string>* diagnostics) {
  if (patch_multiple < 1) throw ConfigError("patch_multiple", "must be >= 1");
  const dbu_t pitch = design.tech.reference_pitch();
  const dbu_t cell = patch_multiple * pitch;
  const GcellGrid grid = GcellGrid::over(design.core, cell, cell);

  std::vector<PatchVec> patches(static_cast<std::size_t>(grid.cells()));
  for (int iy = 0; iy < grid.ny; ++iy) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      PatchVec& p = patches[static_cast<std::size_t>(grid.cell_index(ix, iy))];
      p.id = grid.cell_index(ix, iy);
      p.ix = ix;
      p.iy = iy;
      p.boundary = grid.cell_clip_rect(ix, iy);
    }
  }

  // closed-interval cell range of a rect, clamped to the grid
  auto cell_span = [&](const Rect& r, int& ix0, int& ix1, int& iy0, int& iy1) {
    ix0 = std::clamp(static_cast<int>((r.lo.x - grid.origin.x) / grid.cell_w), 0, grid.nx - 1);
    iy0 = std::clamp(static_cast<int>((r.lo.y - grid.origin.y) / grid.cell_h), 0, grid.ny - 1);
    ix1 = std::clamp(static_cast<int>((r.hi.x - grid.origin.x) / grid.cell_w), 0, grid.nx - 1);
    iy1 = std::clamp(static_cast<int>((r.hi.y - grid.origin.y) / grid.cell_h), 0, grid.ny - 1);
  };
  auto rects_touch = [](const Rect& a, const Rect& b) {
    return a.lo.x <= b.hi.x && b.lo.x <= a.hi.x && a.lo.y <= b.hi.y && b.lo.y <= a.hi.y;
  };

  // instance footprints -> cell density
  for (const auto& inst : design.instances) {
    const Rect r = design.instance_rect(inst);
    const Rect clipped{{std::max(r.lo.x, grid.covered.lo.x), std::max(r.lo.y, grid.covered.lo.y)},
                       {std::min(r.hi.x, grid.covered.hi.x), std::min(r.hi.y, grid.covered.hi.y)}};
    if (clipped.lo.x >= clipped.hi.x || clipped.lo.y >= clipped.hi.y) continue;
    int ix0, ix1, iy0, iy1;
    cell_span(clipped, ix0, ix1, iy0, iy1);
    for (int iy = iy0; iy <= iy1; ++iy) {
      for (int ix = ix0; ix <= ix1; ++ix) {
        PatchVec& p = patches[static_cast<std::size_t>(grid.cell_index(ix, iy))];
        p.cell_density += static_cast<double>(overlap_area(p.boundary, clipped));
      }
    }
  }

  // per-net contributions in parallel, folded in net order
  std::vector<NetPatchContribution> contribs(nets.size());
  parallel_for(nets.size(), threads, [&](std::size_t i) {
    const NetVec& nv = nets[i];
    NetPatchContribution& c = contribs[i];
    // pins
    for (const auto& pin : nv.pins) {
      if (pin.position.x < grid.covered.lo.x || pin.position.x > grid.covered.hi.x ||
          pin.position.y < grid.covered.lo.y || pin.position.y > grid.covered.hi.y)
        continue;
      c.pin_patch.push_back(grid.cell_of(pin.position));
    }
    // bbox intersection + RUDY
    const Rect bb = nv.bbox;
    const dbu_t bw = bb.width(), bh = bb.height();
    if (bw == 0 && bh == 0) {
      // point bbox: RUDY mass clamps to zero, still counts for net density
      if (bb.lo.x >= grid.covered.lo.x && bb.lo.x <= grid.covered.hi.x &&
          bb.lo.y >= grid.covered.lo.y && bb.lo.y <= grid.covered.hi.y)
        c.net_touch.push_back(grid.cell_of(bb.lo));
    } else {
      Rect eff = bb;  // degenerate dimension inflated to one pitch
      double wd = static_cast<double>(bw), hd = static_cast<double>(bh);
      if (bw == 0) {
        eff.lo.x -= pitch / 2;
        eff.hi.x += pitch / 2;
        wd = static_cast<double>(pitch);
      }
      if (bh == 0) {
        eff.lo.y -= pitch / 2;
        eff.hi.y += pitch / 2;
        hd = static_cast<double>(pitch);
      }
      const double mass = (static_cast<double>(bw) + static_cast<double>(bh)) / (wd * hd);
      int ix0, ix1, iy0, iy1;
      cell_span(eff, ix0, ix1, iy0, iy1);
      for (int iy = iy0; iy <= iy1; ++iy) {
        for (int ix = ix0; ix <= ix1; ++ix) {
          const int id = grid.cell_index(ix, iy);
          const PatchVec& p = patches[static_cast<std::size_t>(id)];
          const dbu_t ov_eff = overlap_area(p.boundary, eff);
          if (ov_eff > 0) {
            const double area =
                static_cast<double>(p.boundary.width()) * static_cast<double>(p.boundary.height());
            c.rudy.emplace_back(id, mass * static_cast<double>(ov_eff) / area);
          }
          if (rects_touch(p.boundary, bb)) c.net_touch.push_back(id);
        }
      }
    }
    // routed demand + fragments
    for (const auto& s : nv.wires) {
      WireSegment seg = s;
      if (seg.length() == 0) continue;
      // clip to the grid extent
      dbu_t lx = std::min(seg.xs, seg.xe), hx = std::max(seg.xs, seg.xe);
      dbu_t ly = std::min(seg.ys, seg.ye), hy = std::max(seg.ys, seg.ye);
      const dbu_t pre_len = (hx - lx) + (hy - ly);
      lx = std::max(lx, grid.covered.lo.x);
      ly = std::max(ly, grid.covered.lo.y);
      hx = std::min(hx, grid.covered.hi.x);
      hy = std::min(hy, grid.covered.hi.y);
      if (lx > hx || ly > hy) {
        c.clipped_out += pre_len;
        continue;
      }
      const dbu_t post_len = (hx - lx) + (hy - ly);
      c.clipped_out += pre_len - post_len;
      seg = WireSegment{lx, ly, hx, hy, s.layer};
      if (seg.length() == 0) continue;
      for (const auto& [cell_id, ov] : rasterize_segment(seg, grid)) {
        if (ov == 0) continue;
        c.layer_len.emplace_back(cell_id, s.layer, ov);
        const PatchVec& p = patches[static_cast<std::size_t>(cell_id)];
        WireSegment frag;
        if (seg.horizontal()) {
          frag = WireSegment{std::max(seg.xs < seg.xe ? seg.xs : seg.xe, p.boundary.lo.x), seg.ys,
                             0, seg.ys, s.layer};
          frag.xe = frag.xs + ov;
          frag.ye = seg.ys;
        } else {
          frag = WireSegment{seg.xs, std::max(seg.ys < seg.ye ? seg.ys : seg.ye, p.boundary.lo.y),
                             seg.xs, 0, s.layer};
          frag.ye = frag.ys + ov;
          frag.xe = seg.xs;
        }
        c.fragments.emplace_back(cell_id, PatchFragment{nv.name, frag});
      }
    }
    for (const auto& v : nv.vias) {
      if (v.xc < grid.covered.lo.x || v.xc > grid.covered.hi.x || v.yc < grid.covered.lo.y ||
          v.yc > grid.covered.hi.y)
        continue;
      c.via_patch.push_back(grid.cell_of(Point{v.xc, v.yc}));
    }
  });

  // fold
  std::vector<int> pin_counts(patches.size(), 0);
  std::vector<int> net_counts(patches.size(), 0);
  dbu_t clipped_total = 0;
  for (const auto& c : contribs) {
    for (const auto& [id, mass] : c.rudy) patches[static_cast<std::size_t>(id)].rudy += mass;
    for (int id : c.net_touch) ++net_counts[static_cast<std::size_t>(id)];
    for (const auto& [id, layer, len] : c.layer_len)
      patches[static_cast<std::size_t>(id)].layer_wirelength[layer] += len;
    for (const auto& [id, frag] : c.fragments)
      patches[static_cast<std::size_t>(id)].fragments.push_back(frag);
    for (int id : c.via_patch) ++patches[static_cast<std::size_t>(id)].via_count;
    for (int id : c.pin_patch) ++pin_counts[static_cast<std::size_t>(id)];
    clipped_total += c.clipped_out;
  }
  if (clipped_total > 0 && diagnostics)
    diagnostics->push_back("patches: " + std::to_string(clipped_total) +
                           " DBU of wire outside the core grid was clipped");

  // normalize densities
  double max_pin = 0.0, max_net = 0.0;
  std::vector<double> pin_raw(patches.size(), 0.0), net_raw(patches.size(), 0.0);
  for (std::size_t i = 0; i < patches.size(); ++i) {
    PatchVec& p = patches[i];
    const double area =
        static_cast<double>(p.boundary.width()) * static_cast<double>(p.boundary.height());
    p.cell_density = area > 0 ? p.cell_density / area : 0.0;
    pin_raw[i] = area > 0 ? static_cast<double>(pin_counts[i]) / area : 0.0;
    net_raw[i] = static_cast<double>(net_counts[i]);
    max_pin = std::max(max_pin, pin_raw[i]);
    max_net = std::max(max_net, net_raw[i]);
    for (const auto& [layer, len] : p.layer_wirelength) {
      const Layer* l = design.tech.find_layer(layer);
      const double layer_pitch = l && l->pitch > 0 ? static_cast<double>(l->pitch)
                                                   : static_cast<double>(pitch);
      if (area > 0) {
        p.layer_wire_density[layer] = static_cast<double>(len) / area;
        p.layer_congestion[layer] = static_cast<double>(len) * layer_pitch / area;
      }
    }
  }
  for (std::size_t i = 0; i < patches.size(); ++i) {
    patches[i].pin_density = max_pin > 0 ? pin_raw[i] / max_pin : 0.0;
    patches[i].net_density = max_net > 0 ? net_raw[i] / max_net : 0.0;
  }
  return {grid, std::move(patches)};
}

void annotate_patch_timing(std::vector<PatchVec>& patches, const GcellGrid& grid,
                           const std::vector<PathVec>& paths, double clock_period) {
  for (const auto& path : paths) {
    const double slack = clock_period - path.total_delay;
    for (const auto& stage : path.stages) {
      const Point pos = stage.position;
      if (pos.x < grid.covered.lo.x || pos.x > grid.covered.hi.x || pos.y < grid.covered.lo.y ||
          pos.y > grid.covered.hi.y)
        continue;
      PatchVec& p = patches[static_cast<std::size_t>(grid.cell_of(pos))];
      if (!p.has_timing || slack < p.worst_slack) {
        p.has_timing = true;
        p.worst_slack = slack;
      }
    }
  }
}

DesignVec extract_design_stats(const Design& design, const std::vector<NetVec>& nets,
                               const std::vector<PathVec>& paths, const ExtractConfig& config) {
  DesignVec dv;
  dv.design_name = design.name;
  dv.die = design.die;
  dv.core = design.core;
  dv.dbu_per_micron = design.tech.dbu_per_micron;
  dv.num_cells = static_cast<int>(design.instances.size());
  dv.num_nets = static_cast<int>(design.nets.size());

  double inst_area = 0.0;
  std::map<std::string, int> class_counts{{"clock", 0}, {"logic", 0}, {"macro", 0}, {"iopad", 0}};
  for (const auto& inst : design.instances) {
    const Rect r = design.instance_rect(inst);
    inst_area += static_cast<double>(r.area());
    ++class_counts[to_string(inst.cls)];
  }
  const double core_area = static_cast<double>(design.core.area());
  dv.core_usage = core_area > 0 ? inst_area / core_area : 0.0;
  for (const auto& [cls, count] : class_counts)
    dv.class_shares[cls] = design.instances.empty()
                               ? 0.0
                               : static_cast<double>(count) /
                                     static_cast<double>(design.instances.size());

  for (const auto& nv : nets) {
    dv.num_wires += static_cast<long long>(nv.wires.size());
    dv.num_pins += static_cast<long long>(nv.pins.size());
    dv.total_rwl += nv.rwl;
    dv.total_hpwl += nv.hpwl;
    dv.total_power += nv.switching_power;
    ++dv.pin_histogram[static_cast<int>(nv.pins.size())];
    for (const auto& [layer, len] : nv.layer_wirelength) dv.layer_wirelength[layer] += len;
  }

  dv.wns = 0.0;
  dv.tns = 0.0;
  dv.violating_paths = 0;
  bool first = true;
  for (const auto& path : paths) {
    const double slack = config.clock_period - path.total_delay;
    if (first || slack < dv.wns) dv.wns = slack;
    first = false;
    if (slack < 0) {
      dv.tns += slack;
      ++dv.violating_paths;
    }
  }
  return dv;
}

FoundationData extract_foundation(const Design& design, const ExtractConfig& config,
                                  unsigned levels) {
  FoundationData fd;
  fd.instances = design.instances;
  fd.ports = design.ports;
  std::sort(fd.instances.begin(), fd.instances.end(),
            [](const Instance& a, const Instance& b) { return a.name < b.name; });
  std::sort(fd.ports.begin(), fd.ports.end(),
            [](const Port& a, const Port& b) { return a.name < b.name; });

  const bool need_nets = has_level(levels, VecLevel::Net) || has_level(levels, VecLevel::Path) ||
                         has_level(levels, VecLevel::Patch);
  std::vector<const Net*> net_order;
  net_order.reserve(design.nets.size());
  for (const auto& n : design.nets) net_order.push_back(&n);
  std::sort(net_order.begin(), net_order.end(),
            [](const Net* a, const Net* b) { return a->name < b->name; });

  if (need_nets) {
    std::unordered_map<std::string, const Instance*> inst_of;
    inst_of.reserve(design.instances.size() * 2);
    for (const auto& inst : design.instances) inst_of[inst.name] = &inst;
    std::unordered_map<std::string, const CellMaster*> master_of;
    for (const auto& m : design.tech.masters) master_of[m.name] = &m;

    fd.nets.resize(net_order.size());
    parallel_for(net_order.size(), config.threads, [&](std::size_t i) {
      const Net& net = *net_order[i];
      NetVec nv = decompose_net(net, design.tech);
      std::vector<double> load_caps;
      for (const auto& pin : net.pins) {
        if (pin.direction != NetPinDirection::Load) continue;
        double cap = 0.0;
        if (!pin.is_port()) {
          const auto it = inst_of.find(pin.owner);
          if (it != inst_of.end()) {
            const auto mit = master_of.find(it->second->master);
            if (mit != master_of.end())
              if (const MasterPin* mp = mit->second->find_pin(pin.pin)) cap = mp->capacitance;
          }
        }
        load_caps.push_back(cap);
      }
      net_electricals(nv, design.tech, config.power, load_caps);
      fd.nets[i] = std::move(nv);
    });
  }

  if (has_level(levels, VecLevel::Graph)) fd.graph = build_graph(design, &fd.diagnostics);

  if (has_level(levels, VecLevel::Path)) {
    PathLimits limits{config.max_paths, config.max_stages};
    fd.paths = extract_paths(design, fd.nets, limits, &fd.diagnostics);
  }

  if (has_level(levels, VecLevel::Patch)) {
    auto [grid, patches] =
        patch_features(design, config.patch_multiple, fd.nets, config.threads, &fd.diagnostics);
    fd.grid = grid;
    fd.patches = std::move(patches);
    if (has_level(levels, VecLevel::Path))
      annotate_patch_timing(fd.patches, fd.grid, fd.paths, config.clock_period);
  }

  fd.design = extract_design_stats(design, fd.nets, fd.paths, config);
  return fd;
}

}  // namespace chipvec
