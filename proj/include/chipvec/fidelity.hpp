#pragma once

#include <string>

#include "chipvec/design.hpp"
#include "chipvec/extract.hpp"
#include "chipvec/foundation.hpp"

namespace chipvec {

// Ratio of reconstructed/original with sign-safe handling: both zero -> 1,
// same sign -> plain ratio, mixed signs -> not applicable (absolute
// difference reported instead).
struct MetricRatio {
  double original = 0.0;
  double reconstructed = 0.0;
  bool applicable = true;
  double ratio = 1.0;
  double abs_diff = 0.0;

  static MetricRatio of(double original, double reconstructed);
};

struct FidelityThresholds {
  double ratio_tolerance = 0.02;    // |ratio - 1| <= tolerance passes
  double min_correlation = 0.95;
};

struct FidelityReport {
  MetricRatio wirelength;
  MetricRatio wns;
  MetricRatio tns;
  MetricRatio power;
  int violating_original = 0;
  int violating_reconstructed = 0;
  double density_correlation = 0.0;
  int recon_coarsening = 1;
  bool wirelength_pass = false;
  bool wns_pass = false;
  bool tns_pass = false;
  bool power_pass = false;
  bool violating_pass = false;
  bool correlation_pass = false;

  bool all_pass() const {
    return wirelength_pass && wns_pass && tns_pass && power_pass && violating_pass &&
           correlation_pass;
  }
};

// Rebuild a Design from foundation data: placements and ports from the
// design file, net geometry from the per-net records (lossless, so routed
// wirelength matches the recorded RWL exactly).
Design reconstruct_design(const FoundationData& fd, const TechLib& tech);

// Cell-density map over the grid, row-major, one value per cell.
std::vector<double> density_map(const Design& design, const GcellGrid& grid);

// Recompute timing/power on both designs with the built-in models and
// compare; the reconstructed density map is evaluated on a grid coarsened by
// `recon_coarsening` and replicated back before correlation.
FidelityReport compare(const Design& original, const Design& reconstructed,
                       const GcellGrid& grid, const ExtractConfig& config,
                       int recon_coarsening = 1,
                       const FidelityThresholds& thresholds = {});

std::string fidelity_report_json(const FidelityReport& report);

}  // namespace chipvec
