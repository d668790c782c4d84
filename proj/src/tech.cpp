#include "chipvec/tech.hpp"

#include <algorithm>

#include "json.hpp"

namespace chipvec {

using nlohmann::json;

std::string to_string(InstanceClass c) {
  switch (c) {
    case InstanceClass::Clock: return "clock";
    case InstanceClass::Logic: return "logic";
    case InstanceClass::Macro: return "macro";
    case InstanceClass::Iopad: return "iopad";
  }
  return "logic";
}

InstanceClass instance_class_from_string(const std::string& s) {
  if (s == "clock") return InstanceClass::Clock;
  if (s == "macro") return InstanceClass::Macro;
  if (s == "iopad") return InstanceClass::Iopad;
  if (s == "logic") return InstanceClass::Logic;
  throw TechError("unknown instance class: " + s);
}

const MasterPin* CellMaster::find_pin(const std::string& pin_name) const {
  for (const auto& p : pins)
    if (p.name == pin_name) return &p;
  return nullptr;
}

const MasterPin* CellMaster::first_output() const {
  for (const auto& p : pins)
    if (p.direction == PinDirection::Output) return &p;
  return nullptr;
}

const Layer* TechLib::find_layer(int index) const {
  for (const auto& l : layers)
    if (l.index == index) return &l;
  return nullptr;
}

const Layer* TechLib::find_layer(const std::string& name) const {
  for (const auto& l : layers)
    if (l.name == name) return &l;
  return nullptr;
}

const Layer& TechLib::routing_layer(int index) const {
  const Layer* l = find_layer(index);
  if (!l || l->kind != LayerKind::Routing)
    throw TechError("no routing layer with index " + std::to_string(index));
  return *l;
}

const CellMaster* TechLib::find_master(const std::string& name) const {
  for (const auto& m : masters)
    if (m.name == name) return &m;
  return nullptr;
}

std::vector<int> TechLib::routing_layer_indices() const {
  std::vector<int> out;
  for (const auto& l : layers)
    if (l.kind == LayerKind::Routing) out.push_back(l.index);
  return out;
}

dbu_t TechLib::reference_pitch() const {
  for (const auto& l : layers)
    if (l.kind == LayerKind::Routing && l.pitch > 0) return l.pitch;
  throw TechError("no routing layer with a pitch");
}

const ViaDef* TechLib::via_between(int layer_bot, int layer_top) const {
  for (const auto& v : vias)
    if (v.layer_bot == layer_bot && v.layer_top == layer_top) return &v;
  return nullptr;
}

InstanceClass classify_instance(const std::string& master_name, const TechLib& tech) {
  const CellMaster* m = tech.find_master(master_name);
  if (!m) throw UnknownMaster(master_name);
  if (m->class_tag == "PAD") return InstanceClass::Iopad;
  if (m->class_tag == "BLOCK") return InstanceClass::Macro;
  for (const auto& [prefix, cls] : tech.class_prefix_rules)
    if (master_name.rfind(prefix, 0) == 0) return cls;
  return InstanceClass::Logic;
}

namespace {

PinDirection pin_direction_from_string(const std::string& s) {
  if (s == "input") return PinDirection::Input;
  if (s == "output") return PinDirection::Output;
  if (s == "inout") return PinDirection::Inout;
  throw TechError("unknown pin direction: " + s);
}

std::string pin_direction_to_string(PinDirection d) {
  switch (d) {
    case PinDirection::Input: return "input";
    case PinDirection::Output: return "output";
    case PinDirection::Inout: return "inout";
  }
  return "inout";
}

}  // namespace

TechLib tech_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw TechError(std::string("tech sidecar is not valid JSON: ") + e.what());
  }
  TechLib tech;
  if (!j.contains("dbu_per_micron")) throw TechError("tech sidecar missing dbu_per_micron");
  tech.dbu_per_micron = j.at("dbu_per_micron").get<int>();
  if (tech.dbu_per_micron <= 0) throw TechError("dbu_per_micron must be positive");
  for (const auto& jl : j.value("layers", json::array())) {
    Layer l;
    l.name = jl.at("name").get<std::string>();
    l.index = jl.at("index").get<int>();
    l.kind = jl.value("kind", std::string("routing")) == "cut" ? LayerKind::Cut
                                                               : LayerKind::Routing;
    l.pitch = jl.value("pitch_dbu", dbu_t{0});
    l.unit_r = jl.value("unit_r_ohm_per_dbu", 0.0);
    l.unit_c = jl.value("unit_c_farad_per_dbu", 0.0);
    if (tech.find_layer(l.name)) throw DuplicateName(l.name);
    tech.layers.push_back(l);
  }
  std::sort(tech.layers.begin(), tech.layers.end(),
            [](const Layer& a, const Layer& b) { return a.index < b.index; });
  for (const auto& jv : j.value("vias", json::array())) {
    ViaDef v;
    v.name = jv.at("name").get<std::string>();
    v.layer_bot = jv.at("layer_bot").get<int>();
    v.layer_top = jv.at("layer_top").get<int>();
    tech.vias.push_back(v);
  }
  for (const auto& jm : j.value("masters", json::array())) {
    CellMaster m;
    m.name = jm.at("name").get<std::string>();
    m.width = jm.value("width_dbu", dbu_t{0});
    m.height = jm.value("height_dbu", dbu_t{0});
    m.class_tag = jm.value("class", std::string("CORE"));
    m.drive_resistance = jm.value("drive_resistance_ohm", 0.0);
    m.intrinsic_delay = jm.value("intrinsic_delay_s", 0.0);
    m.is_sequential = jm.value("is_sequential", false);
    for (const auto& jp : jm.value("pins", json::array())) {
      MasterPin p;
      p.name = jp.at("name").get<std::string>();
      p.direction = pin_direction_from_string(jp.value("direction", std::string("inout")));
      p.offset = Point{jp.value("x_dbu", dbu_t{0}), jp.value("y_dbu", dbu_t{0})};
      p.capacitance = jp.value("capacitance_farad", 0.0);
      p.is_clock = jp.value("is_clock", false);
      m.pins.push_back(p);
    }
    if (tech.find_master(m.name)) throw DuplicateName(m.name);
    tech.masters.push_back(m);
  }
  if (j.contains("site")) {
    tech.site.name = j["site"].value("name", std::string("unit"));
    tech.site.width = j["site"].value("width_dbu", dbu_t{200});
    tech.site.height = j["site"].value("height_dbu", dbu_t{2000});
  }
  for (const auto& jr : j.value("class_prefix_rules", json::array())) {
    tech.class_prefix_rules.emplace_back(
        jr.at("prefix").get<std::string>(),
        instance_class_from_string(jr.at("class").get<std::string>()));
  }
  return tech;
}

std::string tech_to_json_text(const TechLib& tech) {
  json j;
  j["dbu_per_micron"] = tech.dbu_per_micron;
  j["layers"] = json::array();
  for (const auto& l : tech.layers) {
    j["layers"].push_back({{"name", l.name},
                           {"index", l.index},
                           {"kind", l.kind == LayerKind::Cut ? "cut" : "routing"},
                           {"pitch_dbu", l.pitch},
                           {"unit_r_ohm_per_dbu", l.unit_r},
                           {"unit_c_farad_per_dbu", l.unit_c}});
  }
  j["vias"] = json::array();
  for (const auto& v : tech.vias)
    j["vias"].push_back({{"name", v.name}, {"layer_bot", v.layer_bot}, {"layer_top", v.layer_top}});
  j["masters"] = json::array();
  for (const auto& m : tech.masters) {
    json jm = {{"name", m.name},
               {"width_dbu", m.width},
               {"height_dbu", m.height},
               {"class", m.class_tag},
               {"drive_resistance_ohm", m.drive_resistance},
               {"intrinsic_delay_s", m.intrinsic_delay},
               {"is_sequential", m.is_sequential}};
    jm["pins"] = json::array();
    for (const auto& p : m.pins) {
      jm["pins"].push_back({{"name", p.name},
                            {"direction", pin_direction_to_string(p.direction)},
                            {"x_dbu", p.offset.x},
                            {"y_dbu", p.offset.y},
                            {"capacitance_farad", p.capacitance},
                            {"is_clock", p.is_clock}});
    }
    j["masters"].push_back(jm);
  }
  j["site"] = {{"name", tech.site.name},
               {"width_dbu", tech.site.width},
               {"height_dbu", tech.site.height}};
  j["class_prefix_rules"] = json::array();
  for (const auto& [prefix, cls] : tech.class_prefix_rules)
    j["class_prefix_rules"].push_back({{"prefix", prefix}, {"class", to_string(cls)}});
  return j.dump(2);
}

void apply_tech_sidecar(TechLib& tech, const std::string& sidecar_json_text) {
  TechLib side = tech_from_json_text(sidecar_json_text);
  for (auto& l : tech.layers) {
    if (const Layer* s = side.find_layer(l.name)) {
      if (s->unit_r != 0.0) l.unit_r = s->unit_r;
      if (s->unit_c != 0.0) l.unit_c = s->unit_c;
      if (l.pitch == 0 && s->pitch > 0) l.pitch = s->pitch;
    }
  }
  for (auto& m : tech.masters) {
    const CellMaster* s = side.find_master(m.name);
    if (!s) continue;
    m.drive_resistance = s->drive_resistance;
    m.intrinsic_delay = s->intrinsic_delay;
    m.is_sequential = s->is_sequential;
    for (auto& p : m.pins) {
      if (const MasterPin* sp = s->find_pin(p.name)) {
        p.capacitance = sp->capacitance;
        p.is_clock = sp->is_clock;
      }
    }
  }
  if (!side.class_prefix_rules.empty()) tech.class_prefix_rules = side.class_prefix_rules;
}

TechLib default_tech(int routing_layers) {
  if (routing_layers < 1) throw TechError("need at least one routing layer");
  TechLib tech;
  tech.dbu_per_micron = 1000;
  tech.site = SiteDef{"unit", 200, 2000};
  // Metal at even indices 2,4,6,...; cut layers at the odd index below each
  // metal. Index 0 is the placement plane.
  for (int i = 0; i < routing_layers; ++i) {
    const int metal_index = 2 * (i + 1);
    Layer cut;
    cut.name = "V" + std::to_string(metal_index - 1);
    cut.index = metal_index - 1;
    cut.kind = LayerKind::Cut;
    tech.layers.push_back(cut);
    Layer metal;
    metal.name = "M" + std::to_string(i + 1);
    metal.index = metal_index;
    metal.kind = LayerKind::Routing;
    metal.pitch = 380 + 60 * i;          // DBU (nm)
    metal.unit_r = 2.0e-3 / (1 + i);     // ohm/DBU, upper layers wider/lower R
    metal.unit_c = 2.0e-19;              // farad/DBU
    tech.layers.push_back(metal);
  }
  for (int i = 0; i + 1 < routing_layers; ++i) {
    ViaDef v;
    const int bot = 2 * (i + 1);
    v.name = "VIA" + std::to_string(i + 1) + std::to_string(i + 2);
    v.layer_bot = bot;
    v.layer_top = bot + 2;
    tech.vias.push_back(v);
  }

  auto in = [](const std::string& n, Point off, double cap) {
    MasterPin p;
    p.name = n;
    p.direction = PinDirection::Input;
    p.offset = off;
    p.capacitance = cap;
    return p;
  };
  auto out = [](const std::string& n, Point off) {
    MasterPin p;
    p.name = n;
    p.direction = PinDirection::Output;
    p.offset = off;
    return p;
  };

  CellMaster inv{"INV_X1", 400, 2000, "CORE",
                 {in("A", {100, 1000}, 0.8e-15), out("Y", {300, 1000})},
                 3000.0, 15e-12, false};
  CellMaster buf{"BUF_X2", 600, 2000, "CORE",
                 {in("A", {100, 1000}, 1.0e-15), out("Y", {500, 1000})},
                 2000.0, 20e-12, false};
  CellMaster nand2{"NAND2_X1", 600, 2000, "CORE",
                   {in("A", {100, 600}, 0.9e-15), in("B", {100, 1400}, 0.9e-15),
                    out("Y", {500, 1000})},
                   3500.0, 18e-12, false};
  CellMaster nor2{"NOR2_X1", 600, 2000, "CORE",
                  {in("A", {100, 600}, 0.9e-15), in("B", {100, 1400}, 0.9e-15),
                   out("Y", {500, 1000})},
                  3800.0, 19e-12, false};
  CellMaster dff{"DFF_X1", 1200, 2000, "CORE",
                 {in("D", {100, 600}, 1.1e-15), in("CK", {100, 1400}, 1.4e-15),
                  out("Q", {1100, 1000})},
                 2800.0, 45e-12, true};
  dff.pins[1].is_clock = true;
  CellMaster clkbuf{"CLKBUF_X2", 800, 2000, "CORE",
                    {in("A", {100, 1000}, 1.2e-15), out("Y", {700, 1000})},
                    1500.0, 22e-12, false};
  CellMaster macro{"RAM_MACRO", 20000, 20000, "BLOCK",
                   {in("A", {1000, 10000}, 4.0e-15), out("Y", {19000, 10000})},
                   800.0, 120e-12, false};
  CellMaster pad{"PAD_IO", 2000, 2000, "PAD",
                 {in("A", {500, 1000}, 2.5e-15), out("Y", {1500, 1000})},
                 500.0, 30e-12, false};
  tech.masters = {inv, buf, nand2, nor2, dff, clkbuf, macro, pad};
  tech.class_prefix_rules = {{"CLKBUF", InstanceClass::Clock}, {"CLK", InstanceClass::Clock}};
  return tech;
}

}  // namespace chipvec
