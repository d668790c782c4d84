#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chipvec/fidelity.hpp"
#include "chipvec/foundation.hpp"

namespace chipvec {

struct Quartiles {
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

struct StatSummary {
  int designs = 0;
  std::map<int, long long> pin_histogram;        // pins per net -> count
  std::map<std::string, double> class_shares;    // averaged over instances
  std::map<int, double> layer_wirelength_share;  // layer -> share of total
  double mean_core_usage = 0.0;
  Quartiles path_delay;   // seconds
  Quartiles path_stages;
  long long total_nets = 0;
  long long total_paths = 0;
  double two_three_pin_share = 0.0;
};

struct CorrMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> values;  // symmetric, diagonal 1
};

// Grid-shaped scalar field for rendering.
struct FeatureMap {
  int nx = 0, ny = 0;
  std::vector<double> values;  // row-major, ny rows of nx
};

StatSummary summarize(const std::vector<FoundationData>& bundles);

// Two-pass Pearson over equal-length columns; identical columns correlate
// exactly 1. Throws ConstantColumn for zero-variance input.
double pearson(const std::vector<double>& a, const std::vector<double>& b);
CorrMatrix correlate(const std::vector<std::string>& names,
                     const std::vector<std::vector<double>>& columns);

// Linear interpolation between closest ranks.
double percentile(std::vector<double> values, double p);
Quartiles quartiles(const std::vector<double>& values);

enum class HeatmapFormat { Pgm, Svg };

// Deterministic heatmap bytes: binary PGM (P5) grayscale or an SVG grid.
// min -> 0, max -> 255 linear; constant maps render mid-gray. One grid cell
// per pixel (PGM) or per square (SVG).
std::string render_heatmap(const FeatureMap& map, HeatmapFormat format = HeatmapFormat::Pgm);

FeatureMap patch_feature_map(const FoundationData& fd, const std::string& feature);

struct ReportInputs {
  StatSummary summary;
  std::optional<CorrMatrix> net_correlation;
  std::optional<FidelityReport> fidelity;
  std::vector<std::pair<std::string, std::string>> heatmap_files;  // label -> rel path
  std::vector<DesignVec> designs;
  // engine comparison rows: label -> (rsmt, hpwl, rwl, wns, tns, power)
  std::vector<std::pair<std::string, std::array<double, 6>>> comparison;
};

std::string generate_report(const ReportInputs& inputs);
std::string stats_json(const StatSummary& summary);

}  // namespace chipvec
