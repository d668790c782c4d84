#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chipvec/geom.hpp"

namespace chipvec {

enum class LayerKind { Routing, Cut };

struct Layer {
  std::string name;
  int index = 0;  // even = metal, odd = cut, 0 reserved for placement
  LayerKind kind = LayerKind::Routing;
  dbu_t pitch = 0;       // routing track pitch, DBU (routing layers)
  double unit_r = 0.0;   // ohm per DBU of wire
  double unit_c = 0.0;   // farad per DBU of wire
};

struct ViaDef {
  std::string name;
  int layer_bot = 2;  // metal index below
  int layer_top = 4;  // metal index above
};

enum class PinDirection { Input, Output, Inout };

struct MasterPin {
  std::string name;
  PinDirection direction = PinDirection::Inout;
  Point offset;          // relative to master origin
  double capacitance = 0.0;  // farad
  bool is_clock = false;
};

enum class InstanceClass { Clock, Logic, Macro, Iopad };

std::string to_string(InstanceClass c);
InstanceClass instance_class_from_string(const std::string& s);

struct CellMaster {
  std::string name;
  dbu_t width = 0;
  dbu_t height = 0;
  std::string class_tag;  // LEF CLASS keyword (CORE, PAD, BLOCK, ...)
  std::vector<MasterPin> pins;
  double drive_resistance = 0.0;  // ohm, linear output driver model
  double intrinsic_delay = 0.0;   // seconds
  bool is_sequential = false;

  const MasterPin* find_pin(const std::string& pin_name) const;
  const MasterPin* first_output() const;
};

struct SiteDef {
  std::string name = "unit";
  dbu_t width = 200;
  dbu_t height = 2000;
};

struct TechLib {
  int dbu_per_micron = 1000;
  std::vector<Layer> layers;  // ascending index
  std::vector<ViaDef> vias;
  std::vector<CellMaster> masters;
  SiteDef site;
  // name-prefix classification rules applied to master names when the LEF
  // CLASS does not decide (CORE or absent); first match wins
  std::vector<std::pair<std::string, InstanceClass>> class_prefix_rules;

  std::vector<std::string> diagnostics;  // skipped statements etc.

  const Layer* find_layer(int index) const;
  const Layer* find_layer(const std::string& name) const;
  const Layer& routing_layer(int index) const;  // throws TechError if absent
  const CellMaster* find_master(const std::string& name) const;
  std::vector<int> routing_layer_indices() const;
  // Reference pitch for patch sizing: first routing layer.
  dbu_t reference_pitch() const;
  const ViaDef* via_between(int layer_bot, int layer_top) const;
};

// LEF CLASS first (PAD -> iopad, BLOCK -> macro), then prefix rules, else logic.
InstanceClass classify_instance(const std::string& master_name, const TechLib& tech);

// Sidecar JSON <-> TechLib (schema documented in docs/formats.md).
TechLib tech_from_json_text(const std::string& text);
std::string tech_to_json_text(const TechLib& tech);
// Overlay electrical data (unit R/C, pin caps, drive, sequential flags) from a
// sidecar onto a LEF-parsed tech; geometry from the LEF wins.
void apply_tech_sidecar(TechLib& tech, const std::string& sidecar_json_text);

// Built-in technology used by the synthetic generator (28nm-flavored values).
TechLib default_tech(int routing_layers = 3);

}  // namespace chipvec
