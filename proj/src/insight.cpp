#include "chipvec/insight.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "chipvec/csv.hpp"
#include "chipvec/json_text.hpp"
#include "json.hpp"

namespace chipvec {

using nlohmann::json;

StatSummary summarize(const std::vector<FoundationData>& bundles) {
  if (bundles.empty()) throw EmptyDataset("no bundles to summarize");
  StatSummary s;
  s.designs = static_cast<int>(bundles.size());
  double usage_sum = 0.0;
  std::map<std::string, double> share_sum;
  std::map<int, dbu_t> layer_totals;
  std::vector<double> delays, stage_counts;
  long long nets_23 = 0;
  for (const auto& fd : bundles) {
    usage_sum += fd.design.core_usage;
    for (const auto& [cls, share] : fd.design.class_shares) share_sum[cls] += share;
    for (const auto& [pins, count] : fd.design.pin_histogram) {
      s.pin_histogram[pins] += count;
      s.total_nets += count;
      if (pins == 2 || pins == 3) nets_23 += count;
    }
    for (const auto& [layer, len] : fd.design.layer_wirelength) layer_totals[layer] += len;
    for (const auto& path : fd.paths) {
      delays.push_back(path.total_delay);
      stage_counts.push_back(static_cast<double>(path.stage_count));
      ++s.total_paths;
    }
  }
  s.mean_core_usage = usage_sum / s.designs;
  for (const auto& [cls, sum] : share_sum) s.class_shares[cls] = sum / s.designs;
  dbu_t grand = 0;
  for (const auto& [layer, len] : layer_totals) grand += len;
  for (const auto& [layer, len] : layer_totals)
    s.layer_wirelength_share[layer] =
        grand > 0 ? static_cast<double>(len) / static_cast<double>(grand) : 0.0;
  if (!delays.empty()) {
    s.path_delay = quartiles(delays);
    s.path_stages = quartiles(stage_counts);
  }
  s.two_three_pin_share =
      s.total_nets > 0 ? static_cast<double>(nets_23) / static_cast<double>(s.total_nets) : 0.0;
  return s;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error("pearson: length mismatch");
  if (a.size() < 2) throw Error("pearson: need at least 2 samples");
  if (a == b) return 1.0;
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
  if (va == 0.0 || vb == 0.0) throw ConstantColumn(va == 0.0 ? "first" : "second");
  return cov / std::sqrt(va * vb);
}

CorrMatrix correlate(const std::vector<std::string>& names,
                     const std::vector<std::vector<double>>& columns) {
  if (columns.size() < 2) throw Error("correlate: need at least 2 columns");
  if (names.size() != columns.size()) throw Error("correlate: names/columns mismatch");
  const std::size_t len = columns[0].size();
  if (len < 2) throw Error("correlate: need at least 2 samples");
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != len) throw Error("correlate: ragged columns");
    bool constant = true;
    for (double v : columns[c])
      if (v != columns[c][0]) {
        constant = false;
        break;
      }
    if (constant) throw ConstantColumn(names[c]);
  }
  CorrMatrix m;
  m.labels = names;
  m.values.assign(columns.size(), std::vector<double>(columns.size(), 1.0));
  for (std::size_t i = 0; i < columns.size(); ++i)
    for (std::size_t j = i + 1; j < columns.size(); ++j)
      m.values[i][j] = m.values[j][i] = pearson(columns[i], columns[j]);
  return m;
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw Error("percentile of empty set");
  std::sort(values.begin(), values.end());
  if (p <= 0) return values.front();
  if (p >= 1) return values.back();
  const double rank = p * (static_cast<double>(values.size()) - 1);
  const std::size_t lo = static_cast<std::size_t>(rank);
  const double frac = rank - static_cast<double>(lo);
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
}

Quartiles quartiles(const std::vector<double>& values) {
  Quartiles q;
  q.min = percentile(values, 0.0);
  q.q1 = percentile(values, 0.25);
  q.median = percentile(values, 0.5);
  q.q3 = percentile(values, 0.75);
  q.max = percentile(values, 1.0);
  return q;
}

std::string render_heatmap(const FeatureMap& map, HeatmapFormat format) {
  if (map.nx < 1 || map.ny < 1 ||
      map.values.size() != static_cast<std::size_t>(map.nx) * static_cast<std::size_t>(map.ny))
    throw InvalidMap("bad dimensions");
  double lo = map.values[0], hi = map.values[0];
  for (double v : map.values) {
    if (!std::isfinite(v)) throw InvalidMap("non-finite value");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double span = hi - lo;
  auto level = [&](double v) -> int {
    if (span == 0.0) return 128;  // constant map renders mid-gray
    return static_cast<int>(std::lround((v - lo) / span * 255.0));
  };

  if (format == HeatmapFormat::Pgm) {
    std::string out = "P5\n" + std::to_string(map.nx) + " " + std::to_string(map.ny) + "\n255\n";
    // row 0 of the grid is the bottom of the layout; PGM scans top-down
    for (int y = map.ny - 1; y >= 0; --y)
      for (int x = 0; x < map.nx; ++x)
        out.push_back(static_cast<char>(
            level(map.values[static_cast<std::size_t>(y) * map.nx + x])));
    return out;
  }

  const int cell = 8;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << map.nx * cell << "\" height=\""
      << map.ny * cell << "\" shape-rendering=\"crispEdges\">\n";
  for (int y = 0; y < map.ny; ++y) {
    for (int x = 0; x < map.nx; ++x) {
      const int g = level(map.values[static_cast<std::size_t>(y) * map.nx + x]);
      // blue->red ramp
      const int r = g;
      const int b = 255 - g;
      svg << "<rect x=\"" << x * cell << "\" y=\"" << (map.ny - 1 - y) * cell << "\" width=\""
          << cell << "\" height=\"" << cell << "\" fill=\"rgb(" << r << ",64," << b << ")\"/>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

FeatureMap patch_feature_map(const FoundationData& fd, const std::string& feature) {
  FeatureMap m;
  m.nx = fd.grid.nx;
  m.ny = fd.grid.ny;
  m.values.assign(fd.patches.size(), 0.0);
  for (std::size_t i = 0; i < fd.patches.size(); ++i) {
    const PatchVec& p = fd.patches[i];
    double v = 0.0;
    if (feature == "cell_density") v = p.cell_density;
    else if (feature == "pin_density") v = p.pin_density;
    else if (feature == "net_density") v = p.net_density;
    else if (feature == "rudy") v = p.rudy;
    else if (feature == "congestion") {
      for (const auto& [l, c] : p.layer_congestion) v += c;
    } else if (feature == "via_count") v = p.via_count;
    else throw InvalidMap("unknown patch feature " + feature);
    m.values[static_cast<std::size_t>(p.id)] = v;
  }
  return m;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string generate_report(const ReportInputs& in) {
  std::ostringstream md;
  md << "# Design data report\n\n";

  md << "## Summary\n\n";
  md << "| metric | value |\n|---|---|\n";
  md << "| designs | " << in.summary.designs << " |\n";
  md << "| nets | " << in.summary.total_nets << " |\n";
  md << "| paths | " << in.summary.total_paths << " |\n";
  md << "| mean core usage | " << fmt(in.summary.mean_core_usage) << " |\n";
  md << "| 2-3 pin net share | " << fmt(in.summary.two_three_pin_share) << " |\n\n";

  if (!in.summary.class_shares.empty()) {
    md << "## Instance class shares\n\n| class | share |\n|---|---|\n";
    for (const auto& [cls, share] : in.summary.class_shares)
      md << "| " << cls << " | " << fmt(share) << " |\n";
    md << "\n";
  }

  if (!in.summary.pin_histogram.empty()) {
    md << "## Pin count distribution\n\n| pins | nets |\n|---|---|\n";
    for (const auto& [pins, count] : in.summary.pin_histogram)
      md << "| " << pins << " | " << count << " |\n";
    md << "\n";
  }

  if (!in.summary.layer_wirelength_share.empty()) {
    md << "## Wirelength share by layer\n\n| layer | share |\n|---|---|\n";
    for (const auto& [layer, share] : in.summary.layer_wirelength_share)
      md << "| " << layer << " | " << fmt(share) << " |\n";
    md << "\n";
  }

  if (in.summary.total_paths > 0) {
    md << "## Path distributions\n\n";
    md << "| statistic | min | q1 | median | q3 | max |\n|---|---|---|---|---|---|\n";
    const Quartiles& d = in.summary.path_delay;
    md << "| total delay (s) | " << fmt(d.min) << " | " << fmt(d.q1) << " | " << fmt(d.median)
       << " | " << fmt(d.q3) << " | " << fmt(d.max) << " |\n";
    const Quartiles& st = in.summary.path_stages;
    md << "| stage count | " << fmt(st.min) << " | " << fmt(st.q1) << " | " << fmt(st.median)
       << " | " << fmt(st.q3) << " | " << fmt(st.max) << " |\n\n";
  }

  if (in.net_correlation) {
    md << "## Net metric correlation\n\n";
    const CorrMatrix& m = *in.net_correlation;
    md << "| |";
    for (const auto& l : m.labels) md << " " << l << " |";
    md << "\n|---|";
    for (std::size_t i = 0; i < m.labels.size(); ++i) md << "---|";
    md << "\n";
    for (std::size_t i = 0; i < m.labels.size(); ++i) {
      md << "| " << m.labels[i] << " |";
      for (std::size_t j = 0; j < m.labels.size(); ++j) md << " " << fmt(m.values[i][j]) << " |";
      md << "\n";
    }
    md << "\n";
  }

  if (in.fidelity) {
    const FidelityReport& f = *in.fidelity;
    md << "## Reconstruction fidelity\n\n";
    md << "| metric | original | reconstructed | ratio | pass |\n|---|---|---|---|---|\n";
    auto row = [&](const char* name, const MetricRatio& m, bool pass) {
      md << "| " << name << " | " << fmt(m.original) << " | " << fmt(m.reconstructed) << " | "
         << (m.applicable ? fmt(m.ratio) : std::string("n/a (|diff| ") + fmt(m.abs_diff) + ")")
         << " | " << (pass ? "yes" : "no") << " |\n";
    };
    row("wirelength", f.wirelength, f.wirelength_pass);
    row("WNS", f.wns, f.wns_pass);
    row("TNS", f.tns, f.tns_pass);
    row("power", f.power, f.power_pass);
    md << "| violating paths | " << f.violating_original << " | " << f.violating_reconstructed
       << " | " << (f.violating_pass ? "equal" : "differ") << " | "
       << (f.violating_pass ? "yes" : "no") << " |\n";
    md << "| density correlation | - | - | " << fmt(f.density_correlation) << " | "
       << (f.correlation_pass ? "yes" : "no") << " |\n\n";
  }

  if (!in.comparison.empty()) {
    md << "## Engine comparison\n\n";
    md << "| engine | RSMT | HPWL | wirelength | WNS | TNS | power |\n";
    md << "|---|---|---|---|---|---|---|\n";
    for (const auto& [label, v] : in.comparison) {
      md << "| " << label << " |";
      for (double x : v) md << " " << fmt(x) << " |";
      md << "\n";
    }
    md << "\n*RSMT and HPWL are intermediate (placement-stage) metrics; wirelength, WNS, TNS and "
          "power are the final metrics.*\n\n";
  }

  if (!in.heatmap_files.empty()) {
    md << "## Heatmaps\n\n";
    md << "Values are min-max mapped per image (min -> black, max -> white).\n\n";
    for (const auto& [label, path] : in.heatmap_files)
      md << "- " << label << ": `" << path << "`\n";
    md << "\n";
  }
  return md.str();
}

std::string stats_json(const StatSummary& s) {
  json j;
  j["designs"] = s.designs;
  j["total_nets"] = s.total_nets;
  j["total_paths"] = s.total_paths;
  j["mean_core_usage"] = s.mean_core_usage;
  j["two_three_pin_share"] = s.two_three_pin_share;
  json hist = json::object();
  for (const auto& [pins, count] : s.pin_histogram) hist[std::to_string(pins)] = count;
  j["pin_histogram"] = hist;
  j["class_shares"] = s.class_shares;
  json shares = json::object();
  for (const auto& [layer, share] : s.layer_wirelength_share)
    shares[std::to_string(layer)] = share;
  j["layer_wirelength_share"] = shares;
  if (s.total_paths > 0) {
    j["path_delay_s"] = {{"min", s.path_delay.min}, {"q1", s.path_delay.q1},
                         {"median", s.path_delay.median}, {"q3", s.path_delay.q3},
                         {"max", s.path_delay.max}};
    j["path_stage_count"] = {{"min", s.path_stages.min}, {"q1", s.path_stages.q1},
                             {"median", s.path_stages.median}, {"q3", s.path_stages.q3},
                             {"max", s.path_stages.max}};
  }
  return json_text(j);
}

}  // namespace chipvec
