#include "chipvec/bundle.hpp"

#include <algorithm>
#include <filesystem>

#include "chipvec/json_text.hpp"
#include "json.hpp"

namespace chipvec {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json rect_to_json(const Rect& r) { return json::array({r.lo.x, r.lo.y, r.hi.x, r.hi.y}); }

Rect rect_from_json(const json& j) {
  return Rect{{j.at(0).get<dbu_t>(), j.at(1).get<dbu_t>()},
              {j.at(2).get<dbu_t>(), j.at(3).get<dbu_t>()}};
}

template <typename K, typename V>
json int_key_map_to_json(const std::map<K, V>& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[std::to_string(k)] = v;
  return j;
}

template <typename V>
std::map<int, V> int_key_map_from_json(const json& j) {
  std::map<int, V> m;
  for (auto it = j.begin(); it != j.end(); ++it) m[std::stoi(it.key())] = it.value().get<V>();
  return m;
}

const char* dir_to_string(NetPinDirection d) {
  return d == NetPinDirection::Driver ? "driver" : "load";
}

json pin_to_json(const NetPin& p) {
  return json{{"owner", p.owner},
              {"pin", p.pin},
              {"x", p.position.x},
              {"y", p.position.y},
              {"direction", dir_to_string(p.direction)}};
}

NetPin pin_from_json(const json& j) {
  NetPin p;
  p.owner = j.at("owner").get<std::string>();
  p.pin = j.at("pin").get<std::string>();
  p.position = Point{j.at("x").get<dbu_t>(), j.at("y").get<dbu_t>()};
  p.direction = j.at("direction").get<std::string>() == "driver" ? NetPinDirection::Driver
                                                                 : NetPinDirection::Load;
  return p;
}

json netvec_to_json(const NetVec& nv) {
  json j;
  j["name"] = nv.name;
  j["features"] = {{"fanout", nv.fanout},
                   {"aspect_ratio", nv.aspect_ratio},
                   {"hpwl", nv.hpwl},
                   {"rsmt", nv.rsmt},
                   {"l_ness", nv.l_ness},
                   {"rwl", nv.rwl},
                   {"via_count", nv.via_count},
                   {"layer_wirelength", int_key_map_to_json(nv.layer_wirelength)}};
  j["electricals"] = {{"r_total_ohm", nv.r_total},
                      {"c_total_f", nv.c_total},
                      {"elmore_per_load_s", nv.elmore_per_load},
                      {"slew_per_load_s", nv.slew_per_load},
                      {"switching_power_w", nv.switching_power}};
  j["pins"] = json::array();
  for (const auto& p : nv.pins) j["pins"].push_back(pin_to_json(p));
  j["bbox"] = rect_to_json(nv.bbox);
  j["wires"] = json::array();
  for (const auto& w : nv.wires) j["wires"].push_back({w.xs, w.ys, w.xe, w.ye, w.layer});
  j["vias"] = json::array();
  for (const auto& v : nv.vias) j["vias"].push_back({v.xc, v.yc, v.layer_bot, v.layer_top});
  j["subnets"] = json::array();
  for (const auto& sn : nv.subnets) {
    json js = {{"load_owner", sn.load_owner}, {"load_pin", sn.load_pin}, {"bends", sn.bends}};
    js["nodes"] = json::array();
    for (const auto& n : sn.nodes) js["nodes"].push_back({n.x, n.y, n.layer, n.is_pin ? 1 : 0});
    j["subnets"].push_back(js);
  }
  return j;
}

NetVec netvec_from_json(const json& j) {
  NetVec nv;
  nv.name = j.at("name").get<std::string>();
  const json& f = j.at("features");
  nv.fanout = f.at("fanout").get<int>();
  nv.aspect_ratio = f.at("aspect_ratio").get<double>();
  nv.hpwl = f.at("hpwl").get<dbu_t>();
  nv.rsmt = f.at("rsmt").get<dbu_t>();
  nv.l_ness = f.at("l_ness").get<double>();
  nv.rwl = f.at("rwl").get<dbu_t>();
  nv.via_count = f.at("via_count").get<int>();
  nv.layer_wirelength = int_key_map_from_json<dbu_t>(f.at("layer_wirelength"));
  const json& e = j.at("electricals");
  nv.r_total = e.at("r_total_ohm").get<double>();
  nv.c_total = e.at("c_total_f").get<double>();
  nv.elmore_per_load = e.at("elmore_per_load_s").get<std::vector<double>>();
  nv.slew_per_load = e.at("slew_per_load_s").get<std::vector<double>>();
  nv.switching_power = e.at("switching_power_w").get<double>();
  for (const auto& jp : j.at("pins")) nv.pins.push_back(pin_from_json(jp));
  nv.bbox = rect_from_json(j.at("bbox"));
  for (const auto& jw : j.at("wires"))
    nv.wires.push_back(WireSegment{jw.at(0).get<dbu_t>(), jw.at(1).get<dbu_t>(),
                                   jw.at(2).get<dbu_t>(), jw.at(3).get<dbu_t>(),
                                   jw.at(4).get<int>()});
  for (const auto& jv : j.at("vias"))
    nv.vias.push_back(ViaInstance{jv.at(0).get<dbu_t>(), jv.at(1).get<dbu_t>(),
                                  jv.at(2).get<int>(), jv.at(3).get<int>()});
  for (const auto& js : j.at("subnets")) {
    Subnet sn;
    sn.load_owner = js.at("load_owner").get<std::string>();
    sn.load_pin = js.at("load_pin").get<std::string>();
    sn.bends = js.at("bends").get<int>();
    for (const auto& jn : js.at("nodes"))
      sn.nodes.push_back(SubnetNode{jn.at(0).get<dbu_t>(), jn.at(1).get<dbu_t>(),
                                    jn.at(2).get<int>(), jn.at(3).get<int>() != 0});
    nv.subnets.push_back(std::move(sn));
  }
  return nv;
}

json graph_to_json(const GraphVec& g) {
  json j;
  j["nodes"] = json::array();
  for (const auto& n : g.nodes) j["nodes"].push_back({n.id, n.name, to_string(n.cls)});
  j["edges"] = json::array();
  for (const auto& e : g.edges) j["edges"].push_back({e.src, e.dst, e.net});
  return j;
}

GraphVec graph_from_json(const json& j) {
  GraphVec g;
  for (const auto& jn : j.at("nodes"))
    g.nodes.push_back(GraphNode{jn.at(0).get<int>(), jn.at(1).get<std::string>(),
                                instance_class_from_string(jn.at(2).get<std::string>())});
  for (const auto& je : j.at("edges"))
    g.edges.push_back(
        GraphEdge{je.at(0).get<int>(), je.at(1).get<int>(), je.at(2).get<std::string>()});
  return g;
}

json path_to_json(const PathVec& p) {
  json j;
  j["start"] = p.start;
  j["end"] = p.end;
  j["total_delay_s"] = p.total_delay;
  j["stage_count"] = p.stage_count;
  j["stages"] = json::array();
  for (const auto& s : p.stages) {
    j["stages"].push_back({{"node", s.node},
                           {"is_pin", s.is_pin},
                           {"x", s.position.x},
                           {"y", s.position.y},
                           {"resistance_ohm", s.resistance},
                           {"capacitance_f", s.capacitance},
                           {"slew_s", s.slew},
                           {"cell_delay_s", s.cell_delay},
                           {"wire_delay_s", s.wire_delay},
                           {"incr_delay_s", s.incr_delay}});
  }
  return j;
}

PathVec path_from_json(const json& j) {
  PathVec p;
  p.start = j.at("start").get<std::string>();
  p.end = j.at("end").get<std::string>();
  p.total_delay = j.at("total_delay_s").get<double>();
  p.stage_count = j.at("stage_count").get<int>();
  for (const auto& js : j.at("stages")) {
    PathStage s;
    s.node = js.at("node").get<std::string>();
    s.is_pin = js.at("is_pin").get<bool>();
    s.position = Point{js.at("x").get<dbu_t>(), js.at("y").get<dbu_t>()};
    s.resistance = js.at("resistance_ohm").get<double>();
    s.capacitance = js.at("capacitance_f").get<double>();
    s.slew = js.at("slew_s").get<double>();
    s.cell_delay = js.at("cell_delay_s").get<double>();
    s.wire_delay = js.at("wire_delay_s").get<double>();
    s.incr_delay = js.at("incr_delay_s").get<double>();
    p.stages.push_back(std::move(s));
  }
  return p;
}

json patch_to_json(const PatchVec& p) {
  json j;
  j["id"] = p.id;
  j["ix"] = p.ix;
  j["iy"] = p.iy;
  j["boundary"] = rect_to_json(p.boundary);
  j["cell_density"] = p.cell_density;
  j["pin_density"] = p.pin_density;
  j["net_density"] = p.net_density;
  j["rudy"] = p.rudy;
  j["layer_wirelength"] = int_key_map_to_json(p.layer_wirelength);
  j["layer_wire_density"] = int_key_map_to_json(p.layer_wire_density);
  j["layer_congestion"] = int_key_map_to_json(p.layer_congestion);
  j["via_count"] = p.via_count;
  if (p.has_timing) j["worst_slack_s"] = p.worst_slack;
  j["fragments"] = json::array();
  for (const auto& f : p.fragments)
    j["fragments"].push_back(
        {f.net, f.piece.xs, f.piece.ys, f.piece.xe, f.piece.ye, f.piece.layer});
  return j;
}

PatchVec patch_from_json(const json& j) {
  PatchVec p;
  p.id = j.at("id").get<int>();
  p.ix = j.at("ix").get<int>();
  p.iy = j.at("iy").get<int>();
  p.boundary = rect_from_json(j.at("boundary"));
  p.cell_density = j.at("cell_density").get<double>();
  p.pin_density = j.at("pin_density").get<double>();
  p.net_density = j.at("net_density").get<double>();
  p.rudy = j.at("rudy").get<double>();
  p.layer_wirelength = int_key_map_from_json<dbu_t>(j.at("layer_wirelength"));
  p.layer_wire_density = int_key_map_from_json<double>(j.at("layer_wire_density"));
  p.layer_congestion = int_key_map_from_json<double>(j.at("layer_congestion"));
  p.via_count = j.at("via_count").get<int>();
  if (j.contains("worst_slack_s")) {
    p.has_timing = true;
    p.worst_slack = j.at("worst_slack_s").get<double>();
  }
  for (const auto& jf : j.at("fragments")) {
    PatchFragment f;
    f.net = jf.at(0).get<std::string>();
    f.piece = WireSegment{jf.at(1).get<dbu_t>(), jf.at(2).get<dbu_t>(), jf.at(3).get<dbu_t>(),
                          jf.at(4).get<dbu_t>(), jf.at(5).get<int>()};
    p.fragments.push_back(std::move(f));
  }
  return p;
}

json design_file_to_json(const FoundationData& fd, bool with_grid) {
  const DesignVec& d = fd.design;
  json j;
  j["schema_version"] = "1.0";
  json jd;
  jd["name"] = d.design_name;
  jd["num_cells"] = d.num_cells;
  jd["num_nets"] = d.num_nets;
  jd["num_wires"] = d.num_wires;
  jd["num_pins"] = d.num_pins;
  jd["core_usage"] = d.core_usage;
  jd["class_shares"] = d.class_shares;
  jd["layer_wirelength"] = int_key_map_to_json(d.layer_wirelength);
  jd["pin_histogram"] = int_key_map_to_json(d.pin_histogram);
  jd["total_rwl"] = d.total_rwl;
  jd["total_hpwl"] = d.total_hpwl;
  jd["wns_s"] = d.wns;
  jd["tns_s"] = d.tns;
  jd["violating_paths"] = d.violating_paths;
  jd["total_power_w"] = d.total_power;
  jd["die"] = rect_to_json(d.die);
  jd["core"] = rect_to_json(d.core);
  jd["dbu_per_micron"] = d.dbu_per_micron;
  j["design"] = jd;
  j["instances"] = json::array();
  for (const auto& i : fd.instances)
    j["instances"].push_back(
        {{"name", i.name}, {"master", i.master}, {"x", i.origin.x}, {"y", i.origin.y},
         {"class", to_string(i.cls)}});
  j["ports"] = json::array();
  for (const auto& p : fd.ports) {
    const char* dir = p.direction == PinDirection::Input
                          ? "input"
                          : (p.direction == PinDirection::Output ? "output" : "inout");
    j["ports"].push_back(
        {{"name", p.name}, {"x", p.position.x}, {"y", p.position.y}, {"direction", dir}});
  }
  if (with_grid) {
    j["grid"] = {{"origin", json::array({fd.grid.origin.x, fd.grid.origin.y})},
                 {"cell_w", fd.grid.cell_w},
                 {"cell_h", fd.grid.cell_h},
                 {"nx", fd.grid.nx},
                 {"ny", fd.grid.ny},
                 {"covered", rect_to_json(fd.grid.covered)}};
  }
  return j;
}

void design_file_from_json(const json& j, FoundationData& fd) {
  const json& jd = j.at("design");
  DesignVec& d = fd.design;
  d.design_name = jd.at("name").get<std::string>();
  d.num_cells = jd.at("num_cells").get<int>();
  d.num_nets = jd.at("num_nets").get<int>();
  d.num_wires = jd.at("num_wires").get<long long>();
  d.num_pins = jd.at("num_pins").get<long long>();
  d.core_usage = jd.at("core_usage").get<double>();
  d.class_shares = jd.at("class_shares").get<std::map<std::string, double>>();
  d.layer_wirelength = int_key_map_from_json<dbu_t>(jd.at("layer_wirelength"));
  d.pin_histogram = int_key_map_from_json<int>(jd.at("pin_histogram"));
  d.total_rwl = jd.at("total_rwl").get<dbu_t>();
  d.total_hpwl = jd.at("total_hpwl").get<dbu_t>();
  d.wns = jd.at("wns_s").get<double>();
  d.tns = jd.at("tns_s").get<double>();
  d.violating_paths = jd.at("violating_paths").get<int>();
  d.total_power = jd.at("total_power_w").get<double>();
  d.die = rect_from_json(jd.at("die"));
  d.core = rect_from_json(jd.at("core"));
  d.dbu_per_micron = jd.at("dbu_per_micron").get<int>();
  for (const auto& ji : j.at("instances")) {
    Instance inst;
    inst.name = ji.at("name").get<std::string>();
    inst.master = ji.at("master").get<std::string>();
    inst.origin = Point{ji.at("x").get<dbu_t>(), ji.at("y").get<dbu_t>()};
    inst.cls = instance_class_from_string(ji.at("class").get<std::string>());
    fd.instances.push_back(std::move(inst));
  }
  for (const auto& jp : j.at("ports")) {
    Port p;
    p.name = jp.at("name").get<std::string>();
    p.position = Point{jp.at("x").get<dbu_t>(), jp.at("y").get<dbu_t>()};
    const std::string dir = jp.at("direction").get<std::string>();
    p.direction = dir == "input" ? PinDirection::Input
                                 : (dir == "output" ? PinDirection::Output : PinDirection::Inout);
    fd.ports.push_back(std::move(p));
  }
  if (j.contains("grid")) {
    const json& jg = j.at("grid");
    fd.grid.origin = Point{jg.at("origin").at(0).get<dbu_t>(), jg.at("origin").at(1).get<dbu_t>()};
    fd.grid.cell_w = jg.at("cell_w").get<dbu_t>();
    fd.grid.cell_h = jg.at("cell_h").get<dbu_t>();
    fd.grid.nx = jg.at("nx").get<int>();
    fd.grid.ny = jg.at("ny").get<int>();
    fd.grid.covered = rect_from_json(jg.at("covered"));
  }
}

void clear_dir(const fs::path& dir) {
  std::error_code ec;
  fs::remove_all(dir, ec);
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot recreate " + dir.string());
}

}  // namespace

BundleManifest save_bundle(const Workspace& ws, const FoundationData& fd, unsigned levels) {
  const fs::path vec = ws.vectors_dir();
  std::error_code ec;
  fs::create_directories(vec, ec);

  int nets_wireless = 0;
  if (has_level(levels, VecLevel::Net)) {
    clear_dir(vec / "nets");
    int index = 0;
    for (const auto& nv : fd.nets) {
      if (nv.wires.empty()) {
        ++nets_wireless;
        continue;  // no file for a net without wires
      }
      write_text_file((vec / "nets" / ("net_" + std::to_string(index) + ".json")).string(),
                      json_text(netvec_to_json(nv)));
      ++index;
    }
  }
  if (has_level(levels, VecLevel::Graph))
    write_text_file((vec / "graph.json").string(), json_text(graph_to_json(fd.graph)));
  if (has_level(levels, VecLevel::Path)) {
    clear_dir(vec / "paths");
    for (std::size_t i = 0; i < fd.paths.size(); ++i)
      write_text_file((vec / "paths" / ("path_" + std::to_string(i) + ".json")).string(),
                      json_text(path_to_json(fd.paths[i])));
  }
  if (has_level(levels, VecLevel::Patch)) {
    clear_dir(vec / "patches");
    for (std::size_t i = 0; i < fd.patches.size(); ++i)
      write_text_file((vec / "patches" / ("patch_" + std::to_string(i) + ".json")).string(),
                      json_text(patch_to_json(fd.patches[i])));
  }
  write_text_file((vec / "design.json").string(),
                  json_text(design_file_to_json(fd, has_level(levels, VecLevel::Patch))));

  // the manifest inventories everything currently in the bundle
  BundleManifest manifest;
  manifest.design_name = fd.design.design_name;
  std::vector<std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(vec)) {
    if (!entry.is_regular_file()) continue;
    const std::string rel = fs::relative(entry.path(), vec).generic_string();
    if (rel == "manifest.json") continue;
    files.push_back(rel);
  }
  std::sort(files.begin(), files.end());
  for (const auto& rel : files) {
    manifest.hashes[rel] = fnv1a_hex(read_text_file((vec / rel).string()));
    if (rel.rfind("nets/", 0) == 0) ++manifest.net_files;
    else if (rel.rfind("paths/", 0) == 0) ++manifest.path_files;
    else if (rel.rfind("patches/", 0) == 0) ++manifest.patch_files;
    else if (rel == "graph.json") manifest.has_graph = true;
  }
  if (has_level(levels, VecLevel::Net)) {
    manifest.nets_total = static_cast<int>(fd.nets.size());
    manifest.nets_wireless = nets_wireless;
  } else if (fs::exists(vec / "manifest.json")) {
    try {
      const json old = parse_json_file((vec / "manifest.json").string());
      manifest.nets_total = old.value("counts", json::object()).value("nets_total", 0);
      manifest.nets_wireless = old.value("counts", json::object()).value("nets_wireless", 0);
    } catch (const Error&) {
    }
  }

  json jm;
  jm["schema_version"] = manifest.schema_version;
  jm["design_name"] = manifest.design_name;
  jm["counts"] = {{"net_files", manifest.net_files},
                  {"path_files", manifest.path_files},
                  {"patch_files", manifest.patch_files},
                  {"nets_total", manifest.nets_total},
                  {"nets_wireless", manifest.nets_wireless}};
  jm["has_graph"] = manifest.has_graph;
  jm["files"] = manifest.hashes;
  write_text_file((vec / "manifest.json").string(), json_text(jm));
  return manifest;
}

BundleManifest load_manifest(const Workspace& ws) {
  const fs::path mpath = ws.vectors_dir() / "manifest.json";
  if (!fs::exists(mpath)) throw NotABundle("missing " + mpath.string());
  const json j = parse_json_file(mpath.string());
  BundleManifest m;
  m.schema_version = j.value("schema_version", std::string());
  if (m.schema_version.empty() || m.schema_version[0] != '1')
    throw NotABundle("unsupported bundle schema version '" + m.schema_version + "'");
  m.design_name = j.value("design_name", std::string());
  const json counts = j.value("counts", json::object());
  m.net_files = counts.value("net_files", 0);
  m.path_files = counts.value("path_files", 0);
  m.patch_files = counts.value("patch_files", 0);
  m.nets_total = counts.value("nets_total", 0);
  m.nets_wireless = counts.value("nets_wireless", 0);
  m.has_graph = j.value("has_graph", false);
  if (j.contains("files")) m.hashes = j.at("files").get<std::map<std::string, std::string>>();
  return m;
}

FoundationData load_bundle(const Workspace& ws) {
  const BundleManifest manifest = load_manifest(ws);
  const fs::path vec = ws.vectors_dir();
  for (const auto& [rel, hash] : manifest.hashes) {
    const fs::path p = vec / rel;
    if (!fs::exists(p)) throw CorruptBundle(rel + " (missing)");
    if (fnv1a_hex(read_text_file(p.string())) != hash) throw CorruptBundle(rel);
  }

  FoundationData fd;
  if (!fs::exists(vec / "design.json")) throw NotABundle("missing design.json");
  design_file_from_json(parse_json_file((vec / "design.json").string()), fd);
  if (manifest.has_graph) fd.graph = graph_from_json(parse_json_file((vec / "graph.json").string()));
  fd.nets.reserve(static_cast<std::size_t>(manifest.net_files));
  for (int i = 0; i < manifest.net_files; ++i) {
    const fs::path p = vec / "nets" / ("net_" + std::to_string(i) + ".json");
    if (!fs::exists(p)) throw CorruptBundle("nets/net_" + std::to_string(i) + ".json (missing)");
    fd.nets.push_back(netvec_from_json(parse_json_file(p.string())));
  }
  for (int i = 0; i < manifest.path_files; ++i) {
    const fs::path p = vec / "paths" / ("path_" + std::to_string(i) + ".json");
    if (!fs::exists(p)) throw CorruptBundle("paths/path_" + std::to_string(i) + ".json (missing)");
    fd.paths.push_back(path_from_json(parse_json_file(p.string())));
  }
  for (int i = 0; i < manifest.patch_files; ++i) {
    const fs::path p = vec / "patches" / ("patch_" + std::to_string(i) + ".json");
    if (!fs::exists(p))
      throw CorruptBundle("patches/patch_" + std::to_string(i) + ".json (missing)");
    fd.patches.push_back(patch_from_json(parse_json_file(p.string())));
  }
  return fd;
}

std::string bundle_hash(const Workspace& ws) {
  const fs::path mpath = ws.vectors_dir() / "manifest.json";
  if (!fs::exists(mpath)) throw NotABundle("missing " + mpath.string());
  return fnv1a_hex(read_text_file(mpath.string()));
}

}  // namespace chipvec
