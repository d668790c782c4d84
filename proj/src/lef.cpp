#include "chipvec/lef.hpp"

#include <cmath>

#include "lexer.hpp"

namespace chipvec {

namespace {

// Microns (LEF) to integer DBU, nearest.
dbu_t to_dbu(double microns, int dbu_per_micron) {
  return static_cast<dbu_t>(std::llround(microns * dbu_per_micron));
}

struct LefReader {
  Lexer lex;
  TechLib tech;
  bool has_units = false;
  int metal_count = 0;

  explicit LefReader(const std::string& text) : lex(text) { tech.dbu_per_micron = 0; }

  void require_units(int line) const {
    if (!has_units) throw ParseError(line, "UNITS DATABASE MICRONS must appear first");
  }

  void run() {
    for (;;) {
      Lexer::Token t = lex.next();
      if (t.eof()) break;
      if (t.value == "UNITS") {
        read_units();
      } else if (t.value == "LAYER") {
        read_layer();
      } else if (t.value == "SITE") {
        read_site();
      } else if (t.value == "VIA") {
        read_via();
      } else if (t.value == "MACRO") {
        read_macro();
      } else if (t.value == "END") {
        Lexer::Token w = lex.next();
        if (!w.eof() && w.value == "LIBRARY") break;
        // stray END <name>: tolerate
      } else if (t.value == ";") {
        continue;
      } else {
        tech.diagnostics.push_back("lef: skipped statement '" + std::string(t.value) +
                                   "' at line " + std::to_string(t.line));
        lex.skip_statement();
      }
    }
    if (!has_units) throw ParseError(lex.line(), "missing UNITS DATABASE MICRONS");
  }

  void read_units() {
    for (;;) {
      Lexer::Token t = lex.expect("UNITS body");
      if (t.value == "END") {
        lex.expect("UNITS");
        return;
      }
      if (t.value == "DATABASE") {
        lex.expect_token("MICRONS");
        Lexer::Token n = lex.expect("dbu count");
        const std::int64_t dbu = Lexer::to_int(n);
        if (dbu <= 0) throw ParseError(n.line, "DATABASE MICRONS must be positive");
        tech.dbu_per_micron = static_cast<int>(dbu);
        has_units = true;
        lex.expect_token(";");
      } else {
        lex.skip_statement();
      }
    }
  }

  void read_layer() {
    Lexer::Token name = lex.expect("layer name");
    require_units(name.line);
    if (tech.find_layer(std::string(name.value))) throw DuplicateName(std::string(name.value));
    Layer layer;
    layer.name = std::string(name.value);
    layer.kind = LayerKind::Routing;
    bool saw_type = false;
    double pitch_um = 0.0;
    for (;;) {
      Lexer::Token t = lex.expect("LAYER body");
      if (t.value == "END") {
        Lexer::Token n = lex.expect("layer end name");
        if (n.value != name.value)
          throw ParseError(n.line, "mismatched END for layer " + layer.name);
        break;
      }
      if (t.value == "TYPE") {
        Lexer::Token k = lex.expect("layer type");
        if (k.value == "ROUTING") layer.kind = LayerKind::Routing;
        else if (k.value == "CUT") layer.kind = LayerKind::Cut;
        else tech.diagnostics.push_back("lef: layer " + layer.name + " has unsupported TYPE " +
                                        std::string(k.value) + ", treated as ROUTING");
        saw_type = true;
        lex.expect_token(";");
      } else if (t.value == "PITCH") {
        Lexer::Token p = lex.expect("pitch value");
        pitch_um = Lexer::to_double(p);
        // two-value form PITCH x y ;
        if (lex.peek().value != ";") lex.next();
        lex.expect_token(";");
      } else {
        lex.skip_statement();
      }
    }
    (void)saw_type;
    if (layer.kind == LayerKind::Routing) {
      ++metal_count;
      layer.index = 2 * metal_count;
      layer.pitch = to_dbu(pitch_um, tech.dbu_per_micron);
      if (layer.pitch <= 0)
        tech.diagnostics.push_back("lef: routing layer " + layer.name + " has no PITCH");
    } else {
      layer.index = 2 * metal_count + 1;
    }
    tech.layers.push_back(layer);
  }

  void read_site() {
    Lexer::Token name = lex.expect("site name");
    require_units(name.line);
    SiteDef site;
    site.name = std::string(name.value);
    for (;;) {
      Lexer::Token t = lex.expect("SITE body");
      if (t.value == "END") {
        lex.expect("site end name");
        break;
      }
      if (t.value == "SIZE") {
        Lexer::Token w = lex.expect("site width");
        lex.expect_token("BY");
        Lexer::Token h = lex.expect("site height");
        site.width = to_dbu(Lexer::to_double(w), tech.dbu_per_micron);
        site.height = to_dbu(Lexer::to_double(h), tech.dbu_per_micron);
        lex.expect_token(";");
      } else {
        lex.skip_statement();
      }
    }
    tech.site = site;
  }

  void read_via() {
    Lexer::Token name = lex.expect("via name");
    require_units(name.line);
    if (lex.peek().value == "DEFAULT") lex.next();
    ViaDef via;
    via.name = std::string(name.value);
    int lo = 0, hi = 0;
    for (;;) {
      Lexer::Token t = lex.expect("VIA body");
      if (t.value == "END") {
        lex.expect("via end name");
        break;
      }
      if (t.value == "LAYER") {
        Lexer::Token ln = lex.expect("via layer name");
        const Layer* l = tech.find_layer(std::string(ln.value));
        if (l && l->kind == LayerKind::Routing) {
          if (lo == 0 || l->index < lo) lo = lo == 0 ? l->index : std::min(lo, l->index);
          if (l->index > hi) hi = l->index;
        }
        lex.expect_token(";");
      } else {
        lex.skip_statement();
      }
    }
    if (lo != 0 && hi > lo) {
      via.layer_bot = lo;
      via.layer_top = hi;
      tech.vias.push_back(via);
    } else {
      tech.diagnostics.push_back("lef: via " + via.name +
                                 " does not span two known routing layers, skipped");
    }
  }

  void read_macro() {
    Lexer::Token name = lex.expect("macro name");
    require_units(name.line);
    if (tech.find_master(std::string(name.value))) throw DuplicateName(std::string(name.value));
    CellMaster master;
    master.name = std::string(name.value);
    master.class_tag = "CORE";
    for (;;) {
      Lexer::Token t = lex.expect("MACRO body");
      if (t.value == "END") {
        Lexer::Token n = lex.expect("macro end name");
        if (n.value != name.value)
          throw ParseError(n.line, "mismatched END for macro " + master.name);
        break;
      }
      if (t.value == "CLASS") {
        Lexer::Token c = lex.expect("macro class");
        master.class_tag = std::string(c.value);
        // CLASS may carry a subtype (e.g. PAD INPUT)
        while (lex.peek().value != ";" && !lex.peek().eof()) lex.next();
        lex.expect_token(";");
      } else if (t.value == "SIZE") {
        Lexer::Token w = lex.expect("macro width");
        lex.expect_token("BY");
        Lexer::Token h = lex.expect("macro height");
        master.width = to_dbu(Lexer::to_double(w), tech.dbu_per_micron);
        master.height = to_dbu(Lexer::to_double(h), tech.dbu_per_micron);
        lex.expect_token(";");
      } else if (t.value == "PIN") {
        master.pins.push_back(read_pin());
      } else {
        lex.skip_statement();
      }
    }
    tech.masters.push_back(master);
  }

  MasterPin read_pin() {
    Lexer::Token name = lex.expect("pin name");
    MasterPin pin;
    pin.name = std::string(name.value);
    bool has_offset = false;
    for (;;) {
      Lexer::Token t = lex.expect("PIN body");
      if (t.value == "END") {
        Lexer::Token n = lex.expect("pin end name");
        if (n.value != name.value) throw ParseError(n.line, "mismatched END for pin " + pin.name);
        break;
      }
      if (t.value == "DIRECTION") {
        Lexer::Token d = lex.expect("pin direction");
        if (d.value == "INPUT") pin.direction = PinDirection::Input;
        else if (d.value == "OUTPUT") pin.direction = PinDirection::Output;
        else pin.direction = PinDirection::Inout;
        lex.expect_token(";");
      } else if (t.value == "USE") {
        Lexer::Token u = lex.expect("pin use");
        if (u.value == "CLOCK") pin.is_clock = true;
        lex.expect_token(";");
      } else if (t.value == "PORT") {
        // first RECT center becomes the pin offset
        for (;;) {
          Lexer::Token p = lex.expect("PORT body");
          if (p.value == "END") break;
          if (p.value == "RECT") {
            Lexer::Token x1 = lex.expect("rect x1");
            Lexer::Token y1 = lex.expect("rect y1");
            Lexer::Token x2 = lex.expect("rect x2");
            Lexer::Token y2 = lex.expect("rect y2");
            if (!has_offset) {
              const double cx = (Lexer::to_double(x1) + Lexer::to_double(x2)) / 2.0;
              const double cy = (Lexer::to_double(y1) + Lexer::to_double(y2)) / 2.0;
              pin.offset = Point{to_dbu(cx, tech.dbu_per_micron), to_dbu(cy, tech.dbu_per_micron)};
              has_offset = true;
            }
            lex.expect_token(";");
          } else if (p.value == "LAYER") {
            lex.skip_statement();
          } else {
            lex.skip_statement();
          }
        }
      } else {
        lex.skip_statement();
      }
    }
    return pin;
  }
};

}  // namespace

TechLib parse_lef(const std::string& text) {
  LefReader reader(text);
  reader.run();
  return reader.tech;
}

}  // namespace chipvec
