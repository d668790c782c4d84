#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "chipvec/foundation.hpp"

namespace chipvec {

struct TabularSet {
  std::vector<std::string> columns;
  std::vector<std::string> label_columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::vector<double>> labels;
  int excluded = 0;  // nets dropped for RSMT == 0 or no routing
};

struct SequenceSet {
  std::size_t n = 0, len = 0, features = 0;
  std::vector<double> tensor;  // n x len x features, zero padded
  std::vector<double> mask;    // n x len, 1 for real stages
  std::vector<int> lengths;    // original stage counts
  std::vector<double> feature_mean;
  std::vector<double> feature_std;
  std::vector<std::string> feature_names;
};

struct SpatialSet {
  std::size_t n = 0, channels = 0, h = 0, w = 0;
  std::vector<double> inputs;  // n x channels x h x w
  std::vector<double> labels;  // n x 1 x h x w
  std::vector<std::string> channel_names;
  int skipped = 0;
};

struct GraphSet {
  std::size_t feature_dim = 0;
  std::vector<double> node_features;      // total_nodes x feature_dim
  std::vector<std::array<int, 2>> edges;  // global node ids
  std::vector<int> offsets;               // per-design boundaries, size designs+1
  std::vector<double> targets;            // per-node normalized log delay
  std::vector<std::string> feature_names;
};

// One row per routed net: features [aspect_ratio, fanout, hpwl, rsmt,
// l_ness], labels [via_count, rwl_over_rsmt]. Nets with RSMT == 0 or no
// routing are excluded and counted.
TabularSet tabular_wirelength(const std::vector<FoundationData>& bundles);

// Per-stage [R, C, slew, incremental delay], source->sink order, padded or
// truncated (source-side prefix kept) to max_len, z-score normalized with
// the stats saved alongside.
SequenceSet sequence_paths(const std::vector<FoundationData>& bundles, int max_len);

// 4x4/stride-3 style sliding windows over the patch grid. Channels in order
// cell density, pin density, net density, RUDY; label is the per-window
// routed-congestion map.
SpatialSet spatial_congestion(const FoundationData& bundle, int window = 4, int stride = 3);

// Per 2-pin net: 10x16x16 sample = 8 composite patch-feature channels (4
// intra-design min-max normalized + 4 region-mean-relative) + one-hot source
// + one-hot target; label is the 16x16 ground-truth route mask.
SpatialSet routing_mask(const FoundationData& bundle, int size = 16);

// Critical-path subgraphs batched across designs: node features [x, y,
// capacitance, slew, class one-hot], per-design log-transformed and
// normalized delay targets, offsets partitioning nodes per design.
GraphSet graph_batch(const std::vector<FoundationData>& bundles,
                     std::vector<std::string>* diagnostics = nullptr);

// Designs sorted by patch count, cut into equal-count strata, sampled
// per-stratum with a seeded generator. Returns index lists (train, val,
// test); every design lands in exactly one split.
std::array<std::vector<int>, 3> split_stratified(const std::vector<int>& patch_counts, int strata,
                                                 const std::array<double, 3>& fractions,
                                                 std::uint64_t seed);

}  // namespace chipvec
