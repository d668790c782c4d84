#include "chipvec/pipeline.hpp"

#include <filesystem>

#include "chipvec/csv.hpp"
#include "chipvec/def_io.hpp"
#include "chipvec/dse.hpp"
#include "chipvec/engines.hpp"
#include "chipvec/extract.hpp"
#include "chipvec/insight.hpp"
#include "chipvec/json_text.hpp"
#include "chipvec/lef.hpp"
#include "chipvec/npy.hpp"
#include "json.hpp"

namespace chipvec {

using nlohmann::json;
namespace fs = std::filesystem;

Design pipeline_generate(Workspace& ws, const SynthParams& params) {
  Design design = generate_synthetic(params);
  const fs::path def_path = ws.result_dir() / "design.def";
  const fs::path tech_path = ws.result_dir() / "tech.json";
  write_text_file(def_path.string(), write_def(design));
  write_text_file(tech_path.string(), tech_to_json_text(design.tech));

  WorkspaceConfig config = ws.config();
  config.design_name = design.name;
  config.def_path = def_path.string();
  config.tech_path = tech_path.string();
  config.lef_path.clear();
  config.seed = params.seed;
  config.generator_json = synth_params_to_json_text(params);
  ws.update_config(config);
  return design;
}

Design pipeline_ingest(Workspace& ws, const std::string& lef_path, const std::string& def_path,
                       const std::string& tech_path) {
  TechLib tech = parse_lef(read_text_file(lef_path));
  if (!tech_path.empty()) apply_tech_sidecar(tech, read_text_file(tech_path));
  Design design = parse_def(read_text_file(def_path), tech);

  const fs::path stored_def = ws.result_dir() / "design.def";
  const fs::path stored_tech = ws.result_dir() / "tech.json";
  write_text_file(stored_def.string(), write_def(design));
  write_text_file(stored_tech.string(), tech_to_json_text(design.tech));

  WorkspaceConfig config = ws.config();
  config.design_name = design.name;
  config.lef_path = lef_path;
  config.def_path = stored_def.string();
  config.tech_path = stored_tech.string();
  ws.update_config(config);
  return design;
}

Design pipeline_load_design(const Workspace& ws) {
  const WorkspaceConfig& config = ws.config();
  if (config.def_path.empty())
    throw ConfigError("inputs.def", "workspace has no design; run generate or ingest first");
  if (config.tech_path.empty())
    throw ConfigError("inputs.tech", "workspace has no tech; run generate or ingest first");
  const TechLib tech = tech_from_json_text(read_text_file(config.tech_path));
  return parse_def(read_text_file(config.def_path), tech);
}

BundleManifest pipeline_vectorize(const Workspace& ws, unsigned levels, int threads_override) {
  const Design design = pipeline_load_design(ws);
  ExtractConfig ec = ws.config().extract_config();
  if (threads_override > 0) ec.threads = threads_override;
  const FoundationData fd = extract_foundation(design, ec, levels);
  return save_bundle(ws, fd, levels);
}

FidelityReport pipeline_fidelity(const Workspace& ws, int recon_coarsening) {
  const Design original = pipeline_load_design(ws);
  const FoundationData fd = load_bundle(ws);
  const Design reconstructed = reconstruct_design(fd, original.tech);
  const ExtractConfig ec = ws.config().extract_config();
  GcellGrid grid = fd.grid;
  if (grid.cells() <= 1) {
    const dbu_t cell = ws.config().patch_multiple * original.tech.reference_pitch();
    grid = GcellGrid::over(original.core, cell, cell);
  }
  const FidelityReport report = compare(original, reconstructed, grid, ec, recon_coarsening);
  write_text_file((ws.report_dir() / "fidelity.json").string(), fidelity_report_json(report));
  return report;
}

std::string pipeline_report(const Workspace& ws) {
  const FoundationData fd = load_bundle(ws);
  ReportInputs inputs;
  inputs.summary = summarize({fd});
  inputs.designs = {fd.design};

  // net metric correlation (RWL, HPWL, R, C, power, mean delay, mean slew)
  std::vector<double> rwl, hp, r, c, power, delay, slew;
  for (const auto& nv : fd.nets) {
    rwl.push_back(static_cast<double>(nv.rwl));
    hp.push_back(static_cast<double>(nv.hpwl));
    r.push_back(nv.r_total);
    c.push_back(nv.c_total);
    power.push_back(nv.switching_power);
    double d = 0.0, s = 0.0;
    for (double x : nv.elmore_per_load) d += x;
    for (double x : nv.slew_per_load) s += x;
    delay.push_back(nv.elmore_per_load.empty() ? 0.0
                                               : d / static_cast<double>(nv.elmore_per_load.size()));
    slew.push_back(nv.slew_per_load.empty() ? 0.0
                                            : s / static_cast<double>(nv.slew_per_load.size()));
  }
  if (rwl.size() >= 2) {
    try {
      inputs.net_correlation =
          correlate({"rwl", "hpwl", "r", "c", "power", "delay", "slew"},
                    {rwl, hp, r, c, power, delay, slew});
    } catch (const ConstantColumn&) {
      // constant column on trivial designs: omit the section
    }
  }

  if (fs::exists(ws.report_dir() / "fidelity.json")) {
    const json j = parse_json_file((ws.report_dir() / "fidelity.json").string());
    FidelityReport f;
    auto metric = [&](const char* key) {
      MetricRatio m;
      m.original = j.at(key).value("original", 0.0);
      m.reconstructed = j.at(key).value("reconstructed", 0.0);
      m.applicable = j.at(key).value("applicable", true);
      m.ratio = j.at(key).value("ratio", 0.0);
      m.abs_diff = j.at(key).value("abs_diff", 0.0);
      return m;
    };
    f.wirelength = metric("wirelength");
    f.wns = metric("wns");
    f.tns = metric("tns");
    f.power = metric("power");
    f.violating_original = j.at("violating_paths").value("original", 0);
    f.violating_reconstructed = j.at("violating_paths").value("reconstructed", 0);
    f.density_correlation = j.value("density_correlation", 0.0);
    f.recon_coarsening = j.value("recon_coarsening", 1);
    const json pass = j.value("pass", json::object());
    f.wirelength_pass = pass.value("wirelength", false);
    f.wns_pass = pass.value("wns", false);
    f.tns_pass = pass.value("tns", false);
    f.power_pass = pass.value("power", false);
    f.violating_pass = pass.value("violating_paths", false);
    f.correlation_pass = pass.value("density_correlation", false);
    inputs.fidelity = f;
  }

  if (!fd.patches.empty()) {
    for (const char* feature : {"cell_density", "pin_density", "net_density", "rudy",
                                "congestion"}) {
      const FeatureMap map = patch_feature_map(fd, feature);
      const std::string rel = std::string(feature) + ".pgm";
      write_text_file((ws.report_dir() / rel).string(), render_heatmap(map, HeatmapFormat::Pgm));
      inputs.heatmap_files.emplace_back(feature, rel);
    }
  }

  const std::string md = generate_report(inputs);
  write_text_file((ws.report_dir() / "report.md").string(), md);
  write_text_file((ws.report_dir() / "stats.json").string(), stats_json(inputs.summary));
  return md;
}

namespace {

json shape_json(std::initializer_list<std::size_t> dims) {
  json j = json::array();
  for (std::size_t d : dims) j.push_back(d);
  return j;
}

}  // namespace

void pipeline_dataset(const Workspace& ws, const DatasetOptions& options) {
  std::vector<FoundationData> bundles;
  std::vector<std::string> names;
  bundles.push_back(load_bundle(ws));
  names.push_back(bundles.back().design.design_name);
  for (const auto& root : options.extra_workspaces) {
    const Workspace other = Workspace::open(root);
    bundles.push_back(load_bundle(other));
    names.push_back(bundles.back().design.design_name);
  }
  const fs::path out = ws.feature_dir();
  json manifest;
  manifest["seed"] = options.seed;
  manifest["designs"] = names;

  // tabular
  const TabularSet tab = tabular_wirelength(bundles);
  {
    std::vector<std::string> header = tab.columns;
    header.insert(header.end(), tab.label_columns.begin(), tab.label_columns.end());
    std::vector<std::vector<std::string>> rows;
    rows.reserve(tab.rows.size());
    for (std::size_t i = 0; i < tab.rows.size(); ++i) {
      std::vector<std::string> row;
      for (double v : tab.rows[i]) row.push_back(format_double(v));
      for (double v : tab.labels[i]) row.push_back(format_double(v));
      rows.push_back(std::move(row));
    }
    write_text_file((out / "tabular_wirelength.csv").string(), write_csv(header, rows));
    manifest["tabular_wirelength"] = {{"rows", tab.rows.size()},
                                      {"columns", tab.columns},
                                      {"labels", tab.label_columns},
                                      {"excluded", tab.excluded}};
  }

  // sequences
  bool have_paths = false;
  for (const auto& fd : bundles) have_paths = have_paths || !fd.paths.empty();
  if (have_paths) {
    const SequenceSet seq = sequence_paths(bundles, options.max_len);
    std::vector<double> lengths(seq.lengths.begin(), seq.lengths.end());
    write_npy_file((out / "sequence_inputs.npy").string(), seq.tensor,
                   {seq.n, seq.len, seq.features}, NpyDtype::Float32);
    write_npy_file((out / "sequence_mask.npy").string(), seq.mask, {seq.n, seq.len},
                   NpyDtype::Float32);
    json stats;
    stats["feature_names"] = seq.feature_names;
    stats["mean"] = seq.feature_mean;
    stats["std"] = seq.feature_std;
    stats["lengths"] = seq.lengths;
    write_text_file((out / "sequence_stats.json").string(), json_text(stats));
    manifest["sequence_paths"] = {{"shape", shape_json({seq.n, seq.len, seq.features})},
                                  {"max_len", options.max_len}};
  }

  // spatial windows (per primary bundle)
  const FoundationData& fd0 = bundles.front();
  if (!fd0.patches.empty() && fd0.grid.nx >= options.window && fd0.grid.ny >= options.window) {
    const SpatialSet sp = spatial_congestion(fd0, options.window, options.stride);
    write_npy_file((out / "spatial_inputs.npy").string(), sp.inputs,
                   {sp.n, sp.channels, sp.h, sp.w}, NpyDtype::Float32);
    write_npy_file((out / "spatial_labels.npy").string(), sp.labels, {sp.n, 1, sp.h, sp.w},
                   NpyDtype::Float32);
    manifest["spatial_congestion"] = {{"shape", shape_json({sp.n, sp.channels, sp.h, sp.w})},
                                      {"window", options.window},
                                      {"stride", options.stride},
                                      {"channels", sp.channel_names}};
  }

  // routing masks (per primary bundle)
  if (!fd0.patches.empty()) {
    const SpatialSet rm = routing_mask(fd0, options.mask_size);
    if (rm.n > 0) {
      write_npy_file((out / "routing_mask_inputs.npy").string(), rm.inputs,
                     {rm.n, rm.channels, rm.h, rm.w}, NpyDtype::Float32);
      write_npy_file((out / "routing_mask_labels.npy").string(), rm.labels, {rm.n, 1, rm.h, rm.w},
                     NpyDtype::Float32);
    }
    manifest["routing_mask"] = {{"shape", shape_json({rm.n, rm.channels, rm.h, rm.w})},
                                {"skipped", rm.skipped}};
  }

  // graph batch
  if (have_paths) {
    std::vector<std::string> diags;
    const GraphSet gs = graph_batch(bundles, &diags);
    const std::size_t total_nodes = gs.node_features.size() / gs.feature_dim;
    write_npy_file((out / "graph_nodes.npy").string(), gs.node_features,
                   {total_nodes, gs.feature_dim}, NpyDtype::Float32);
    std::vector<double> edges;
    edges.reserve(gs.edges.size() * 2);
    for (const auto& e : gs.edges) {
      edges.push_back(static_cast<double>(e[0]));
      edges.push_back(static_cast<double>(e[1]));
    }
    write_npy_file((out / "graph_edges.npy").string(), edges, {gs.edges.size(), 2},
                   NpyDtype::Float64);
    std::vector<double> offsets(gs.offsets.begin(), gs.offsets.end());
    write_npy_file((out / "graph_offsets.npy").string(), offsets, {offsets.size()},
                   NpyDtype::Float64);
    write_npy_file((out / "graph_targets.npy").string(), gs.targets, {gs.targets.size()},
                   NpyDtype::Float32);
    manifest["graph_batch"] = {{"nodes", total_nodes},
                               {"edges", gs.edges.size()},
                               {"features", gs.feature_names},
                               {"offsets", gs.offsets}};
  }

  // stratified split over all bundles
  if (bundles.size() >= static_cast<std::size_t>(options.strata)) {
    std::vector<int> patch_counts;
    for (const auto& fd : bundles) patch_counts.push_back(static_cast<int>(fd.patches.size()));
    const auto split =
        split_stratified(patch_counts, options.strata, options.fractions, options.seed);
    json js;
    const char* keys[3] = {"train", "val", "test"};
    for (int k = 0; k < 3; ++k) {
      json list = json::array();
      for (int idx : split[static_cast<std::size_t>(k)])
        list.push_back(names[static_cast<std::size_t>(idx)]);
      js[keys[k]] = list;
    }
    manifest["split"] = js;
    manifest["split_fractions"] = options.fractions;
    manifest["split_strata"] = options.strata;
  }

  write_text_file((out / "dataset_manifest.json").string(), json_text(manifest));
}

void pipeline_dse(const Workspace& ws, const DseOptions& options) {
  dse::TpeOptions tpe;
  tpe.gamma = options.gamma;
  tpe.n_candidates = options.n_candidates;

  dse::ParamSpace space;
  dse::Objective objective;
  std::vector<dse::Direction> directions;
  if (options.objective == "zdt1") {
    space = dse::zdt1_space(5);
    directions = {dse::Direction::Minimize, dse::Direction::Minimize};
    objective = [](const dse::Params& p) {
      std::vector<double> x;
      for (const auto& v : p) x.push_back(v.number);
      return dse::zdt1(x);
    };
  } else if (options.objective == "sphere") {
    space = dse::sphere_space(1);
    directions = {dse::Direction::Minimize};
    objective = [](const dse::Params& p) {
      std::vector<double> x;
      for (const auto& v : p) x.push_back(v.number);
      return dse::sphere(x);
    };
  } else if (options.objective == "placement_toy") {
    space = dse::placement_toy_space();
    directions = {dse::Direction::Minimize, dse::Direction::Minimize};
    objective = [](const dse::Params& p) { return dse::placement_toy(p); };
  } else {
    throw ConfigError("objective", "unknown objective " + options.objective);
  }

  const dse::RunResult result =
      dse::run(space, objective, directions, options.budget, options.seed, tpe);
  const fs::path out = ws.feature_dir() / "dse";
  std::error_code ec;
  fs::create_directories(out, ec);
  write_text_file((out / "space.json").string(), dse::space_to_json_text(space));
  write_text_file((out / "history.csv").string(), dse::history_csv(space, result.history));
  write_text_file((out / "front.json").string(), dse::front_json(space, result.front));
}

}  // namespace chipvec
