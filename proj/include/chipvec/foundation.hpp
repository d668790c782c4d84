#pragma once

#include <map>
#include <string>
#include <vector>

#include "chipvec/design.hpp"
#include "chipvec/geom.hpp"

namespace chipvec {

struct SubnetNode {
  dbu_t x = 0;
  dbu_t y = 0;
  int layer = 2;
  bool is_pin = false;

  bool operator==(const SubnetNode&) const = default;
};

// Driver-to-load walk through the routing tree (Steiner/critical points).
struct Subnet {
  std::string load_owner;
  std::string load_pin;
  std::vector<SubnetNode> nodes;
  int bends = 0;

  bool operator==(const Subnet&) const = default;
};

struct NetVec {
  std::string name;
  // features
  int fanout = 0;
  double aspect_ratio = 0.0;
  dbu_t hpwl = 0;
  dbu_t rsmt = 0;
  double l_ness = 0.0;
  dbu_t rwl = 0;
  int via_count = 0;
  std::map<int, dbu_t> layer_wirelength;  // metal layer index -> DBU
  // electricals
  double r_total = 0.0;                 // ohm
  double c_total = 0.0;                 // farad, wire + load pins
  std::vector<double> elmore_per_load;  // seconds, aligned with load order
  std::vector<double> slew_per_load;    // seconds
  double switching_power = 0.0;         // watt
  // geometry
  std::vector<NetPin> pins;  // driver first
  Rect bbox;                 // of pins
  std::vector<WireSegment> wires;
  std::vector<ViaInstance> vias;
  std::vector<Subnet> subnets;

  bool operator==(const NetVec&) const = default;
};

struct GraphNode {
  int id = 0;
  std::string name;
  InstanceClass cls = InstanceClass::Logic;

  bool operator==(const GraphNode&) const = default;
};

struct GraphEdge {
  int src = 0;
  int dst = 0;
  std::string net;

  bool operator==(const GraphEdge&) const = default;
};

struct GraphVec {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;

  bool operator==(const GraphVec&) const = default;
};

struct PathStage {
  std::string node;  // driving pin, "inst/PIN" or port name
  bool is_pin = true;
  Point position;
  double resistance = 0.0;   // driven net wire resistance, ohm
  double capacitance = 0.0;  // downstream cap of the driven net, farad
  double slew = 0.0;         // at the consumed load, seconds
  double cell_delay = 0.0;
  double wire_delay = 0.0;
  double incr_delay = 0.0;

  bool operator==(const PathStage&) const = default;
};

struct PathVec {
  std::string start;  // launching pin
  std::string end;    // capturing pin or port
  std::vector<PathStage> stages;
  double total_delay = 0.0;
  int stage_count = 0;

  bool operator==(const PathVec&) const = default;
};

struct PatchFragment {
  std::string net;
  WireSegment piece;  // clipped to the patch

  bool operator==(const PatchFragment&) const = default;
};

struct PatchVec {
  int id = 0;
  int ix = 0;
  int iy = 0;
  Rect boundary;  // grid cell rect clipped to the covered region
  double cell_density = 0.0;
  double pin_density = 0.0;  // normalized to [0,1] by the design max
  double net_density = 0.0;  // normalized to [0,1] by the design max
  double rudy = 0.0;
  std::map<int, dbu_t> layer_wirelength;    // exact rasterized demand, DBU
  std::map<int, double> layer_wire_density; // demand / patch area
  std::map<int, double> layer_congestion;   // demand / track capacity
  int via_count = 0;
  bool has_timing = false;
  double worst_slack = 0.0;  // over paths with a stage in this patch
  std::vector<PatchFragment> fragments;

  bool operator==(const PatchVec&) const = default;
};

struct DesignVec {
  std::string design_name;
  int num_cells = 0;
  int num_nets = 0;
  long long num_wires = 0;
  long long num_pins = 0;
  double core_usage = 0.0;
  std::map<std::string, double> class_shares;  // clock/logic/macro/iopad -> share
  std::map<int, dbu_t> layer_wirelength;
  std::map<int, int> pin_histogram;  // pins per net -> net count
  dbu_t total_rwl = 0;
  dbu_t total_hpwl = 0;
  double wns = 0.0;  // seconds
  double tns = 0.0;
  int violating_paths = 0;
  double total_power = 0.0;  // watt
  Rect die;
  Rect core;
  int dbu_per_micron = 1000;

  bool operator==(const DesignVec&) const = default;
};

// Complete multi-level foundation data for one design.
struct FoundationData {
  DesignVec design;
  std::vector<Instance> instances;  // placement preserved for reconstruction
  std::vector<Port> ports;
  GraphVec graph;
  std::vector<NetVec> nets;
  std::vector<PathVec> paths;
  GcellGrid grid;
  std::vector<PatchVec> patches;
  std::vector<std::string> diagnostics;
};

}  // namespace chipvec
