#include "chipvec/def_io.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "lexer.hpp"

namespace chipvec {

namespace {

struct DefReader {
  Lexer lex;
  const TechLib& tech;
  Design design;
  bool saw_die = false;
  bool saw_core_region = false;

  DefReader(const std::string& text, const TechLib& t) : lex(text), tech(t) {
    design.tech = t;
  }

  void run() {
    for (;;) {
      Lexer::Token t = lex.next();
      if (t.eof()) break;
      if (t.value == "DESIGN") {
        Lexer::Token n = lex.expect("design name");
        design.name = std::string(n.value);
        lex.expect_token(";");
      } else if (t.value == "UNITS") {
        lex.expect_token("DISTANCE");
        lex.expect_token("MICRONS");
        Lexer::Token n = lex.expect("dbu count");
        const std::int64_t dbu = Lexer::to_int(n);
        if (dbu != tech.dbu_per_micron)
          throw ParseError(n.line, "DEF UNITS " + std::to_string(dbu) +
                                       " does not match tech dbu " +
                                       std::to_string(tech.dbu_per_micron));
        lex.expect_token(";");
      } else if (t.value == "DIEAREA") {
        design.die.lo = read_point_strict();
        design.die.hi = read_point_strict();
        if (!design.die.valid()) throw ParseError(t.line, "DIEAREA corners out of order");
        saw_die = true;
        lex.expect_token(";");
      } else if (t.value == "REGIONS") {
        read_regions();
      } else if (t.value == "COMPONENTS") {
        read_components();
      } else if (t.value == "PINS") {
        read_pins();
      } else if (t.value == "NETS") {
        read_nets();
      } else if (t.value == "END") {
        Lexer::Token w = lex.next();
        if (!w.eof() && w.value == "DESIGN") break;
      } else if (t.value == "VERSION" || t.value == "DIVIDERCHAR" || t.value == "BUSBITCHARS") {
        lex.skip_statement();
      } else if (t.value == "TRACKS" || t.value == "GCELLGRID" || t.value == "ROW") {
        design.diagnostics.push_back("def: skipped statement '" + std::string(t.value) +
                                     "' at line " + std::to_string(t.line));
        lex.skip_statement();
      } else if (t.value == "VIAS" || t.value == "SPECIALNETS" || t.value == "BLOCKAGES" ||
                 t.value == "PROPERTYDEFINITIONS" || t.value == "NONDEFAULTRULES" ||
                 t.value == "GROUPS" || t.value == "FILLS" || t.value == "STYLES" ||
                 t.value == "SLOTS" || t.value == "SCANCHAINS") {
        skip_section(std::string(t.value));
      } else if (t.value == ";") {
        continue;
      } else {
        design.diagnostics.push_back("def: skipped statement '" + std::string(t.value) +
                                     "' at line " + std::to_string(t.line));
        lex.skip_statement();
      }
    }
    if (!saw_die) throw ParseError(lex.line(), "missing DIEAREA");
    if (!saw_core_region) design.core = design.die;
    finalize_drivers();
    design.validate();
  }

  Point read_point_strict() {
    lex.expect_token("(");
    Lexer::Token x = lex.expect("x coordinate");
    Lexer::Token y = lex.expect("y coordinate");
    lex.expect_token(")");
    return Point{Lexer::to_int(x), Lexer::to_int(y)};
  }

  void skip_section(const std::string& keyword) {
    design.diagnostics.push_back("def: skipped section " + keyword);
    for (;;) {
      Lexer::Token t = lex.next();
      if (t.eof()) return;
      if (t.value == "END") {
        Lexer::Token n = lex.next();
        if (n.eof() || n.value == keyword) return;
      }
    }
  }

  void read_regions() {
    Lexer::Token n = lex.expect("region count");
    (void)Lexer::to_int(n);
    lex.expect_token(";");
    for (;;) {
      Lexer::Token t = lex.expect("REGIONS body");
      if (t.value == "END") {
        lex.expect_token("REGIONS");
        return;
      }
      if (t.value != "-") throw ParseError(t.line, "expected '-' in REGIONS");
      Lexer::Token name = lex.expect("region name");
      Rect r;
      r.lo = read_point_strict();
      r.hi = read_point_strict();
      if (!r.valid()) throw ParseError(name.line, "region corners out of order");
      if (name.value == "core") {
        design.core = r;
        saw_core_region = true;
      }
      // optional "+ TYPE ..." etc.
      lex.skip_statement();
    }
  }

  void read_components() {
    Lexer::Token n = lex.expect("component count");
    const std::int64_t declared = Lexer::to_int(n);
    lex.expect_token(";");
    std::int64_t count = 0;
    for (;;) {
      Lexer::Token t = lex.expect("COMPONENTS body");
      if (t.value == "END") {
        lex.expect_token("COMPONENTS");
        break;
      }
      if (t.value != "-") throw ParseError(t.line, "expected '-' in COMPONENTS");
      Lexer::Token name = lex.expect("component name");
      Lexer::Token master = lex.expect("master name");
      Instance inst;
      inst.name = std::string(name.value);
      inst.master = std::string(master.value);
      if (!tech.find_master(inst.master)) throw UnknownMaster(inst.master);
      for (;;) {
        Lexer::Token k = lex.expect("component option");
        if (k.value == ";") break;
        if (k.value == "+") {
          Lexer::Token opt = lex.expect("component keyword");
          if (opt.value == "PLACED" || opt.value == "FIXED") {
            inst.origin = read_point_strict();
            lex.expect("orientation");
          }
          // other options ignored
        }
      }
      inst.cls = classify_instance(inst.master, tech);
      design.instances.push_back(inst);
      ++count;
    }
    if (count != declared)
      throw ParseError(lex.line(), "COMPONENTS declares " + std::to_string(declared) +
                                       " but lists " + std::to_string(count));
  }

  void read_pins() {
    Lexer::Token n = lex.expect("pin count");
    const std::int64_t declared = Lexer::to_int(n);
    lex.expect_token(";");
    std::int64_t count = 0;
    for (;;) {
      Lexer::Token t = lex.expect("PINS body");
      if (t.value == "END") {
        lex.expect_token("PINS");
        break;
      }
      if (t.value != "-") throw ParseError(t.line, "expected '-' in PINS");
      Lexer::Token name = lex.expect("pin name");
      Port port;
      port.name = std::string(name.value);
      for (;;) {
        Lexer::Token k = lex.expect("pin option");
        if (k.value == ";") break;
        if (k.value == "+") {
          Lexer::Token opt = lex.expect("pin keyword");
          if (opt.value == "NET") {
            lex.expect("net name");  // association restated in NETS
          } else if (opt.value == "DIRECTION") {
            Lexer::Token d = lex.expect("pin direction");
            if (d.value == "INPUT") port.direction = PinDirection::Input;
            else if (d.value == "OUTPUT") port.direction = PinDirection::Output;
            else port.direction = PinDirection::Inout;
          } else if (opt.value == "PLACED" || opt.value == "FIXED") {
            port.position = read_point_strict();
            lex.expect("orientation");
          } else if (opt.value == "LAYER") {
            lex.expect("layer name");
            read_point_strict();
            read_point_strict();
          }
        }
      }
      design.ports.push_back(port);
      ++count;
    }
    if (count != declared)
      throw ParseError(lex.line(), "PINS declares " + std::to_string(declared) + " but lists " +
                                       std::to_string(count));
  }

  void read_nets() {
    Lexer::Token n = lex.expect("net count");
    const std::int64_t declared = Lexer::to_int(n);
    lex.expect_token(";");
    std::int64_t count = 0;
    for (;;) {
      Lexer::Token t = lex.expect("NETS body");
      if (t.value == "END") {
        lex.expect_token("NETS");
        break;
      }
      if (t.value != "-") throw ParseError(t.line, "expected '-' in NETS");
      design.nets.push_back(read_net());
      ++count;
    }
    if (count != declared)
      throw ParseError(lex.line(), "NETS declares " + std::to_string(declared) + " but lists " +
                                       std::to_string(count));
  }

  Net read_net() {
    Lexer::Token name = lex.expect("net name");
    Net net;
    net.name = std::string(name.value);
    // pin references
    for (;;) {
      Lexer::Token t = lex.peek();
      if (t.eof()) throw ParseError(lex.line(), "unterminated net " + net.name);
      if (t.value != "(") break;
      lex.next();
      Lexer::Token a = lex.expect("pin owner");
      Lexer::Token b = lex.expect("pin name");
      lex.expect_token(")");
      NetPin pin;
      if (a.value == "PIN") {
        pin.owner.clear();
        pin.pin = std::string(b.value);
        const Port* port = design.find_port(pin.pin);
        if (!port) throw ParseError(a.line, "net " + net.name + " references unknown port " +
                                                pin.pin);
        pin.position = port->position;
        pin.direction = port->direction == PinDirection::Input ? NetPinDirection::Driver
                                                               : NetPinDirection::Load;
      } else {
        pin.owner = std::string(a.value);
        pin.pin = std::string(b.value);
        const Instance* inst = design.find_instance(pin.owner);
        if (!inst) throw UnknownMaster(pin.owner);
        const CellMaster* m = tech.find_master(inst->master);
        const MasterPin* mp = m->find_pin(pin.pin);
        if (!mp) throw UnknownMaster(inst->master + "/" + pin.pin);
        pin.position = Point{inst->origin.x + mp->offset.x, inst->origin.y + mp->offset.y};
        pin.direction = mp->direction == PinDirection::Output ? NetPinDirection::Driver
                                                              : NetPinDirection::Load;
      }
      net.pins.push_back(pin);
    }
    // routing
    for (;;) {
      Lexer::Token t = lex.expect("net body");
      if (t.value == ";") break;
      if (t.value != "+") throw ParseError(t.line, "expected '+' or ';' in net " + net.name);
      Lexer::Token kw = lex.expect("net keyword");
      if (kw.value == "ROUTED") {
        read_routing(net);
        break;  // read_routing consumes the closing ';'
      }
      // skip the option payload up to the next '+' or ';'
      for (;;) {
        Lexer::Token p = lex.peek();
        if (p.eof()) throw ParseError(lex.line(), "unterminated net " + net.name);
        if (p.value == "+" || p.value == ";") break;
        lex.next();
      }
    }
    return net;
  }

  void read_routing(Net& net) {
    // paths separated by NEW; each path: layer, then points and via names
    bool path_done = false;
    while (!path_done) {
      Lexer::Token layer_tok = lex.expect("routing layer");
      const Layer* layer = tech.find_layer(std::string(layer_tok.value));
      if (!layer || layer->kind != LayerKind::Routing)
        throw ParseError(layer_tok.line, "unknown routing layer " + std::string(layer_tok.value));
      bool have_prev = false;
      Point prev;
      for (;;) {
        Lexer::Token t = lex.expect("routing element");
        if (t.value == ";") {
          path_done = true;
          break;
        }
        if (t.value == "NEW") break;
        if (t.value == "(") {
          Lexer::Token xt = lex.expect("x coordinate");
          Lexer::Token yt = lex.expect("y coordinate");
          lex.expect_token(")");
          Point p;
          p.x = xt.value == "*" ? (have_prev ? prev.x : throw ParseError(xt.line, "leading *"))
                                : Lexer::to_int(xt);
          p.y = yt.value == "*" ? (have_prev ? prev.y : throw ParseError(yt.line, "leading *"))
                                : Lexer::to_int(yt);
          if (have_prev && !(prev == p)) {
            if (prev.x != p.x && prev.y != p.y)
              throw GeometryError("net " + net.name + " has non-rectilinear route points at line " +
                                  std::to_string(xt.line));
            WireSegment seg{prev.x, prev.y, p.x, p.y, layer->index};
            net.routing.push_back(seg);
          }
          prev = p;
          have_prev = true;
        } else {
          // via name at the previous point
          if (!have_prev)
            throw ParseError(t.line, "via '" + std::string(t.value) + "' without a point");
          net.vias.push_back(make_via(std::string(t.value), prev, t.line));
        }
      }
    }
  }

  ViaInstance make_via(const std::string& via_name, Point at, int line) {
    ViaInstance v;
    v.xc = at.x;
    v.yc = at.y;
    for (const auto& vd : tech.vias) {
      if (vd.name == via_name) {
        v.layer_bot = vd.layer_bot;
        v.layer_top = vd.layer_top;
        return v;
      }
    }
    // canonical fallback name VIA_<bot>_<top>
    if (via_name.rfind("VIA_", 0) == 0) {
      const std::size_t us = via_name.find('_', 4);
      if (us != std::string::npos) {
        try {
          v.layer_bot = std::stoi(via_name.substr(4, us - 4));
          v.layer_top = std::stoi(via_name.substr(us + 1));
          if (v.layer_bot < v.layer_top) return v;
        } catch (...) {
        }
      }
    }
    throw ParseError(line, "unknown via " + via_name);
  }

  void finalize_drivers() {
    for (auto& net : design.nets) {
      if (net.pins.empty()) continue;
      auto it = std::find_if(net.pins.begin(), net.pins.end(), [](const NetPin& p) {
        return p.direction == NetPinDirection::Driver;
      });
      if (it == net.pins.end()) {
        net.pins.front().direction = NetPinDirection::Driver;
        design.diagnostics.push_back("def: net " + net.name +
                                     " has no output pin, first pin taken as driver");
      } else if (it != net.pins.begin()) {
        std::rotate(net.pins.begin(), it, it + 1);
      }
      // extra drivers beyond the first demote to loads
      bool seen = false;
      for (auto& p : net.pins) {
        if (p.direction == NetPinDirection::Driver) {
          if (seen) {
            p.direction = NetPinDirection::Load;
            design.diagnostics.push_back("def: net " + net.name +
                                         " has multiple output pins, extra treated as loads");
          }
          seen = true;
        }
      }
    }
  }
};

std::string layer_name_or_throw(const TechLib& tech, int index) {
  const Layer* l = tech.find_layer(index);
  if (!l) throw TechError("design references missing layer index " + std::to_string(index));
  return l->name;
}

}  // namespace

Design parse_def(const std::string& text, const TechLib& tech) {
  DefReader reader(text, tech);
  reader.run();
  return reader.design;
}

std::string write_def(const Design& design) {
  std::ostringstream out;
  out << "VERSION 5.8 ;\n";
  out << "DESIGN " << design.name << " ;\n";
  out << "UNITS DISTANCE MICRONS " << design.tech.dbu_per_micron << " ;\n";
  out << "DIEAREA ( " << design.die.lo.x << " " << design.die.lo.y << " ) ( " << design.die.hi.x
      << " " << design.die.hi.y << " ) ;\n";
  out << "REGIONS 1 ;\n";
  out << "- core ( " << design.core.lo.x << " " << design.core.lo.y << " ) ( "
      << design.core.hi.x << " " << design.core.hi.y << " ) ;\n";
  out << "END REGIONS\n";

  std::vector<const Instance*> insts;
  insts.reserve(design.instances.size());
  for (const auto& i : design.instances) insts.push_back(&i);
  std::sort(insts.begin(), insts.end(),
            [](const Instance* a, const Instance* b) { return a->name < b->name; });
  out << "COMPONENTS " << insts.size() << " ;\n";
  for (const Instance* i : insts)
    out << "- " << i->name << " " << i->master << " + PLACED ( " << i->origin.x << " "
        << i->origin.y << " ) N ;\n";
  out << "END COMPONENTS\n";

  std::vector<const Port*> ports;
  ports.reserve(design.ports.size());
  for (const auto& p : design.ports) ports.push_back(&p);
  std::sort(ports.begin(), ports.end(),
            [](const Port* a, const Port* b) { return a->name < b->name; });
  out << "PINS " << ports.size() << " ;\n";
  for (const Port* p : ports) {
    const char* dir = p->direction == PinDirection::Input
                          ? "INPUT"
                          : (p->direction == PinDirection::Output ? "OUTPUT" : "INOUT");
    out << "- " << p->name << " + DIRECTION " << dir << " + PLACED ( " << p->position.x << " "
        << p->position.y << " ) N ;\n";
  }
  out << "END PINS\n";

  std::vector<const Net*> nets;
  nets.reserve(design.nets.size());
  for (const auto& n : design.nets) nets.push_back(&n);
  std::sort(nets.begin(), nets.end(),
            [](const Net* a, const Net* b) { return a->name < b->name; });
  out << "NETS " << nets.size() << " ;\n";
  for (const Net* n : nets) {
    out << "- " << n->name;
    for (const auto& pin : n->pins) {
      if (pin.is_port())
        out << " ( PIN " << pin.pin << " )";
      else
        out << " ( " << pin.owner << " " << pin.pin << " )";
    }
    if (!n->routing.empty() || !n->vias.empty()) {
      out << "\n  + ROUTED";
      bool first = true;
      for (const auto& s : n->routing) {
        out << (first ? " " : "\n    NEW ") << layer_name_or_throw(design.tech, s.layer) << " ( "
            << s.xs << " " << s.ys << " ) ( " << s.xe << " " << s.ye << " )";
        first = false;
      }
      for (const auto& v : n->vias) {
        const ViaDef* vd = design.tech.via_between(v.layer_bot, v.layer_top);
        const std::string vname = vd ? vd->name
                                     : "VIA_" + std::to_string(v.layer_bot) + "_" +
                                           std::to_string(v.layer_top);
        out << (first ? " " : "\n    NEW ") << layer_name_or_throw(design.tech, v.layer_bot)
            << " ( " << v.xc << " " << v.yc << " ) " << vname;
        first = false;
      }
    }
    out << " ;\n";
  }
  out << "END NETS\n";
  out << "END DESIGN\n";
  return out.str();
}

}  // namespace chipvec
