#include "chipvec/fidelity.hpp"

#include <algorithm>
#include <cmath>

#include "chipvec/json_text.hpp"
#include "json.hpp"

namespace chipvec {

using nlohmann::json;

MetricRatio MetricRatio::of(double original, double reconstructed) {
  MetricRatio m;
  m.original = original;
  m.reconstructed = reconstructed;
  m.abs_diff = std::abs(reconstructed - original);
  if (original == 0.0 && reconstructed == 0.0) {
    m.ratio = 1.0;
  } else if (original != 0.0 && ((original > 0) == (reconstructed > 0)) && reconstructed != 0.0) {
    m.ratio = reconstructed / original;
  } else {
    m.applicable = false;
    m.ratio = 0.0;
  }
  return m;
}

Design reconstruct_design(const FoundationData& fd, const TechLib& tech) {
  if (fd.instances.empty() && fd.design.num_cells > 0)
    throw IncompleteBundle("net records present but no instance placements");
  if (fd.nets.empty() && fd.design.num_nets > 0 && fd.design.num_wires > 0)
    throw IncompleteBundle("no net geometry records");
  Design d;
  d.name = fd.design.design_name;
  d.tech = tech;
  d.die = fd.design.die;
  d.core = fd.design.core;
  d.instances = fd.instances;
  d.ports = fd.ports;
  d.nets.reserve(fd.nets.size());
  for (const auto& nv : fd.nets) {
    Net net;
    net.name = nv.name;
    net.pins = nv.pins;
    net.routing = nv.wires;
    net.vias = nv.vias;
    d.nets.push_back(std::move(net));
  }
  std::sort(d.nets.begin(), d.nets.end(),
            [](const Net& a, const Net& b) { return a.name < b.name; });
  return d;
}

std::vector<double> density_map(const Design& design, const GcellGrid& grid) {
  std::vector<double> map(static_cast<std::size_t>(grid.cells()), 0.0);
  for (const auto& inst : design.instances) {
    const Rect r = design.instance_rect(inst);
    const Rect clipped{{std::max(r.lo.x, grid.covered.lo.x), std::max(r.lo.y, grid.covered.lo.y)},
                       {std::min(r.hi.x, grid.covered.hi.x), std::min(r.hi.y, grid.covered.hi.y)}};
    if (clipped.lo.x >= clipped.hi.x || clipped.lo.y >= clipped.hi.y) continue;
    const int ix0 =
        std::clamp(static_cast<int>((clipped.lo.x - grid.origin.x) / grid.cell_w), 0, grid.nx - 1);
    const int ix1 =
        std::clamp(static_cast<int>((clipped.hi.x - grid.origin.x) / grid.cell_w), 0, grid.nx - 1);
    const int iy0 =
        std::clamp(static_cast<int>((clipped.lo.y - grid.origin.y) / grid.cell_h), 0, grid.ny - 1);
    const int iy1 =
        std::clamp(static_cast<int>((clipped.hi.y - grid.origin.y) / grid.cell_h), 0, grid.ny - 1);
    for (int iy = iy0; iy <= iy1; ++iy) {
      for (int ix = ix0; ix <= ix1; ++ix) {
        const Rect cell = grid.cell_clip_rect(ix, iy);
        const double area =
            static_cast<double>(cell.width()) * static_cast<double>(cell.height());
        if (area <= 0) continue;
        map[static_cast<std::size_t>(grid.cell_index(ix, iy))] +=
            static_cast<double>(overlap_area(cell, clipped)) / area;
      }
    }
  }
  return map;
}

namespace {

struct TimingSummary {
  dbu_t rwl = 0;
  double wns = 0.0, tns = 0.0, power = 0.0;
  int violating = 0;
};

TimingSummary summarize_design(const Design& design, const ExtractConfig& config) {
  // net + path levels suffice for the compared metrics
  FoundationData fd = extract_foundation(design, config,
                                         VecLevel::Net | VecLevel::Path);
  TimingSummary t;
  t.rwl = fd.design.total_rwl;
  t.wns = fd.design.wns;
  t.tns = fd.design.tns;
  t.power = fd.design.total_power;
  t.violating = fd.design.violating_paths;
  return t;
}

double pearson_exactable(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) throw InvalidMap("density maps incomparable");
  if (a == b) return 1.0;  // identical maps correlate exactly
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= static_cast<double>(a.size());
  mean_b /= static_cast<double>(b.size());
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a, db = b[i] - mean_b;
    cov += da * db;
    va += da * da;
    vb += db * db;
  }
  if (va == 0.0) throw ConstantColumn("original density map");
  if (vb == 0.0) throw ConstantColumn("reconstructed density map");
  return cov / std::sqrt(va * vb);
}

}  // namespace

FidelityReport compare(const Design& original, const Design& reconstructed,
                       const GcellGrid& grid, const ExtractConfig& config, int recon_coarsening,
                       const FidelityThresholds& thresholds) {
  if (!(original.die == reconstructed.die))
    throw IncomparableDesigns("die rects differ");
  if (original.tech.dbu_per_micron != reconstructed.tech.dbu_per_micron)
    throw IncomparableDesigns("dbu scales differ");
  if (recon_coarsening < 1) throw ConfigError("recon_coarsening", "must be >= 1");

  const TimingSummary orig = summarize_design(original, config);
  const TimingSummary recon = summarize_design(reconstructed, config);

  FidelityReport report;
  report.wirelength = MetricRatio::of(static_cast<double>(orig.rwl),
                                      static_cast<double>(recon.rwl));
  report.wns = MetricRatio::of(orig.wns, recon.wns);
  report.tns = MetricRatio::of(orig.tns, recon.tns);
  report.power = MetricRatio::of(orig.power, recon.power);
  report.violating_original = orig.violating;
  report.violating_reconstructed = recon.violating;
  report.recon_coarsening = recon_coarsening;

  const std::vector<double> fine = density_map(original, grid);
  std::vector<double> recon_fine;
  if (recon_coarsening == 1) {
    recon_fine = density_map(reconstructed, grid);
  } else {
    const GcellGrid coarse = GcellGrid::over(grid.covered, grid.cell_w * recon_coarsening,
                                             grid.cell_h * recon_coarsening);
    const std::vector<double> coarse_map = density_map(reconstructed, coarse);
    recon_fine.resize(fine.size());
    for (int iy = 0; iy < grid.ny; ++iy) {
      for (int ix = 0; ix < grid.nx; ++ix) {
        const int cx = std::min(ix / recon_coarsening, coarse.nx - 1);
        const int cy = std::min(iy / recon_coarsening, coarse.ny - 1);
        recon_fine[static_cast<std::size_t>(grid.cell_index(ix, iy))] =
            coarse_map[static_cast<std::size_t>(coarse.cell_index(cx, cy))];
      }
    }
  }
  report.density_correlation = pearson_exactable(fine, recon_fine);

  auto ratio_pass = [&](const MetricRatio& m) {
    return m.applicable && std::abs(m.ratio - 1.0) <= thresholds.ratio_tolerance;
  };
  report.wirelength_pass = ratio_pass(report.wirelength);
  report.wns_pass = ratio_pass(report.wns);
  report.tns_pass = ratio_pass(report.tns);
  report.power_pass = ratio_pass(report.power);
  report.violating_pass = report.violating_original == report.violating_reconstructed;
  report.correlation_pass = report.density_correlation >= thresholds.min_correlation;
  return report;
}

std::string fidelity_report_json(const FidelityReport& r) {
  auto metric = [](const MetricRatio& m) {
    json j;
    j["original"] = m.original;
    j["reconstructed"] = m.reconstructed;
    j["applicable"] = m.applicable;
    if (m.applicable) j["ratio"] = m.ratio;
    j["abs_diff"] = m.abs_diff;
    return j;
  };
  json j;
  j["wirelength"] = metric(r.wirelength);
  j["wns"] = metric(r.wns);
  j["tns"] = metric(r.tns);
  j["power"] = metric(r.power);
  j["violating_paths"] = {{"original", r.violating_original},
                          {"reconstructed", r.violating_reconstructed}};
  j["density_correlation"] = r.density_correlation;
  j["recon_coarsening"] = r.recon_coarsening;
  j["pass"] = {{"wirelength", r.wirelength_pass}, {"wns", r.wns_pass},
               {"tns", r.tns_pass},               {"power", r.power_pass},
               {"violating_paths", r.violating_pass}, {"density_correlation", r.correlation_pass},
               {"all", r.all_pass()}};
  return json_text(j);
}

}  // namespace chipvec
