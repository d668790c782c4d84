#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chipvec/design.hpp"
#include "chipvec/foundation.hpp"

namespace chipvec {

struct PowerParams {
  double activity = 0.2;     // switching activity factor
  double frequency = 1e9;    // Hz
  double voltage = 0.9;      // V
};

struct ExtractConfig {
  int patch_multiple = 9;       // patch edge = multiple x reference pitch
  int max_paths = 10000;
  int max_stages = 64;
  double clock_period = 1e-9;   // seconds
  PowerParams power;
  int threads = 1;
};

enum class VecLevel : unsigned {
  Net = 1u << 0,
  Graph = 1u << 1,
  Path = 1u << 2,
  Patch = 1u << 3,
  All = (1u << 4) - 1,
};

inline unsigned operator|(VecLevel a, VecLevel b) {
  return static_cast<unsigned>(a) | static_cast<unsigned>(b);
}
inline bool has_level(unsigned mask, VecLevel l) {
  return (mask & static_cast<unsigned>(l)) != 0;
}

// Geometry part of the net vector: wires/vias copied, subnets walked from
// the driver to every load through the routing tree, per-layer wirelength
// and the placement-stage features filled in.
NetVec decompose_net(const Net& net, const TechLib& tech);

// Parasitics and the delay model on top of the geometry part: per-segment
// R/C from the layer unit values, Elmore delay and ln(9)*Elmore slew per
// load, switching power alpha*f*V^2*C_total. load_caps aligns with the
// net's load pins in order; missing entries count as zero.
void net_electricals(NetVec& nv, const TechLib& tech, const PowerParams& power);
void net_electricals(NetVec& nv, const TechLib& tech, const PowerParams& power,
                     const std::vector<double>& load_caps);

// Star expansion of every net: one node per instance and port, one directed
// edge driver->load per load pin. Node order: instances by name, then ports
// by name. Self-loop edges are dropped with a diagnostic.
GraphVec build_graph(const Design& design, std::vector<std::string>* diagnostics = nullptr);

struct PathLimits {
  int max_paths = 10000;
  int max_stages = 64;
};

// Register-to-register (and port-to-register / register-to-port) paths by
// DFS over combinational fanout, ordered by decreasing total delay and
// truncated at max_paths. Requires net vectors with electricals.
std::vector<PathVec> extract_paths(const Design& design, const std::vector<NetVec>& nets,
                                   const PathLimits& limits,
                                   std::vector<std::string>* diagnostics = nullptr);

// Patch grid over the core (patch edge = patch_multiple x reference pitch)
// with density metrics, RUDY, per-layer demand/congestion, and clipped wire
// fragments. Wires outside the core are clipped with a diagnostic.
std::pair<GcellGrid, std::vector<PatchVec>> patch_features(
    const Design& design, int patch_multiple, const std::vector<NetVec>& nets,
    int threads = 1, std::vector<std::string>* diagnostics = nullptr);

// Worst slack per patch over paths with a stage inside the patch.
void annotate_patch_timing(std::vector<PatchVec>& patches, const GcellGrid& grid,
                           const std::vector<PathVec>& paths, double clock_period);

DesignVec extract_design_stats(const Design& design, const std::vector<NetVec>& nets,
                               const std::vector<PathVec>& paths, const ExtractConfig& config);

// Full multi-level extraction; deterministic and independent of thread count.
FoundationData extract_foundation(const Design& design, const ExtractConfig& config,
                                  unsigned levels = static_cast<unsigned>(VecLevel::All));

}  // namespace chipvec
