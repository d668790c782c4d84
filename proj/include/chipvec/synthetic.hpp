#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chipvec/design.hpp"

namespace chipvec {

// Parameters for the synthetic placed-and-routed design generator.
// Defaults target the usual profile of small digital blocks: ~80% of nets
// with 2-3 pins, ~15% sequential instances, three routing layers.
struct SynthParams {
  std::string name = "synthetic";
  dbu_t core_width = 200000;
  dbu_t core_height = 200000;
  dbu_t die_margin = 4000;
  int num_instances = 1000;
  int num_nets = 900;
  // (pin count, weight) pairs for data nets; pin count includes the driver
  std::vector<std::pair<int, double>> pin_count_weights = {
      {2, 0.52}, {3, 0.30}, {4, 0.08}, {5, 0.04}, {6, 0.03}, {8, 0.02}, {10, 0.01}};
  int routing_layers = 3;
  double sequential_fraction = 0.15;
  double macro_fraction = 0.0;
  double pad_fraction = 0.002;
  int input_ports = 4;
  int output_ports = 4;
  bool clock_tree = true;
  int clock_leaf_fanout = 16;
  double z_route_fraction = 0.2;
  std::uint64_t seed = 1;
};

SynthParams synth_params_from_json_text(const std::string& text);
std::string synth_params_to_json_text(const SynthParams& params);

// Deterministic per seed. The result is placed without overlaps at row
// granularity, fully routed (every net's wiring is a connected tree over its
// pins), sorted by name, and passes Design::validate().
Design generate_synthetic(const SynthParams& params);

}  // namespace chipvec
