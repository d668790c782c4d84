#include "chipvec/cli.hpp"

#include <cstdlib>
#include <filesystem>

#include "CLI11.hpp"
#include "chipvec/json_text.hpp"
#include "chipvec/pipeline.hpp"

namespace chipvec {

namespace fs = std::filesystem;

namespace {

unsigned parse_level(const std::string& level) {
  if (level == "net") return static_cast<unsigned>(VecLevel::Net);
  if (level == "graph") return static_cast<unsigned>(VecLevel::Graph);
  if (level == "path") return static_cast<unsigned>(VecLevel::Path);
  if (level == "patch") return static_cast<unsigned>(VecLevel::Patch);
  if (level == "all") return static_cast<unsigned>(VecLevel::All);
  throw UsageError("unknown level '" + level + "'");
}

int threads_fallback(int cli_threads) {
  if (cli_threads > 0) return cli_threads;
  if (const char* env = std::getenv("CHIPVEC_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 0;  // use the workspace config value
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"design-to-vector toolkit"};
  app.require_subcommand(1);

  std::string ws_path;
  std::string config_file;
  auto* init = app.add_subcommand("init", "create a workspace");
  init->add_option("--workspace", ws_path, "workspace root")->required();
  init->add_option("--config", config_file, "config JSON to start from");

  std::string gen_params_file;
  int gen_cells = 1000, gen_nets = 900, gen_layers = 3;
  std::uint64_t gen_seed = 1;
  std::int64_t gen_core_w = 0, gen_core_h = 0;
  auto* gen = app.add_subcommand("generate", "synthesize a placed-and-routed design");
  gen->add_option("--workspace", ws_path, "workspace root")->required();
  gen->add_option("--cells", gen_cells, "instance count");
  gen->add_option("--nets", gen_nets, "data net count");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--core-width", gen_core_w, "core width in DBU");
  gen->add_option("--core-height", gen_core_h, "core height in DBU");
  gen->add_option("--routing-layers", gen_layers, "number of metal layers");
  gen->add_option("--params", gen_params_file, "full generator parameter JSON");

  std::string lef_file, def_file, tech_file;
  auto* ingest = app.add_subcommand("ingest", "parse LEF/DEF into the workspace");
  ingest->add_option("--workspace", ws_path, "workspace root")->required();
  ingest->add_option("--lef", lef_file, "LEF file")->required();
  ingest->add_option("--def", def_file, "DEF file")->required();
  ingest->add_option("--tech", tech_file, "electrical sidecar JSON");

  std::string level = "all";
  int threads = 0;
  auto* vectorize = app.add_subcommand("vectorize", "extract foundation data");
  vectorize->add_option("--workspace", ws_path, "workspace root")->required();
  vectorize->add_option("--level", level, "net|graph|path|patch|all");
  vectorize->add_option("--threads", threads, "worker threads");

  int coarsen = 1;
  auto* fidelity = app.add_subcommand("fidelity", "reconstruct and compare");
  fidelity->add_option("--workspace", ws_path, "workspace root")->required();
  fidelity->add_option("--coarsen", coarsen, "density grid coarsening for the reconstruction");

  auto* report = app.add_subcommand("report", "write report.md, stats, heatmaps");
  report->add_option("--workspace", ws_path, "workspace root")->required();

  DatasetOptions dopt;
  std::string workspaces_file;
  std::string fractions_arg;
  auto* dataset = app.add_subcommand("dataset", "assemble AI-ready datasets");
  dataset->add_option("--workspace", ws_path, "workspace root (output)")->required();
  dataset->add_option("--max-len", dopt.max_len, "sequence length");
  dataset->add_option("--window", dopt.window, "spatial window");
  dataset->add_option("--stride", dopt.stride, "spatial stride");
  dataset->add_option("--mask-size", dopt.mask_size, "routing mask grid size");
  dataset->add_option("--seed", dopt.seed, "split seed");
  dataset->add_option("--workspaces", workspaces_file,
                      "file listing extra workspace roots, one per line");
  dataset->add_option("--fractions", fractions_arg, "train,val,test fractions");
  dataset->add_option("--strata", dopt.strata, "stratum count for the split");

  DseOptions dse_opt;
  auto* dse_cmd = app.add_subcommand("dse", "run parameter optimization");
  dse_cmd->add_option("--workspace", ws_path, "workspace root")->required();
  dse_cmd->add_option("--objective", dse_opt.objective, "zdt1|sphere|placement_toy");
  dse_cmd->add_option("--budget", dse_opt.budget, "trial budget");
  dse_cmd->add_option("--seed", dse_opt.seed, "optimizer seed");
  dse_cmd->add_option("--gamma", dse_opt.gamma, "good-set share");
  dse_cmd->add_option("--candidates", dse_opt.n_candidates, "candidates per suggestion");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    err << app.help();
    return 2;
  }

  try {
    if (init->parsed()) {
      WorkspaceConfig config;
      if (!config_file.empty()) config = config_from_json_text(read_text_file(config_file));
      Workspace ws = Workspace::create(ws_path, config);
      out << "workspace ready at " << ws.root().string() << "\n";
      return 0;
    }
    if (gen->parsed()) {
      Workspace ws = fs::exists(fs::path(ws_path) / "config.json")
                         ? Workspace::open(ws_path)
                         : Workspace::create(ws_path, WorkspaceConfig{});
      SynthParams params;
      if (!gen_params_file.empty())
        params = synth_params_from_json_text(read_text_file(gen_params_file));
      if (gen->count("--cells")) params.num_instances = gen_cells;
      if (gen->count("--nets")) params.num_nets = gen_nets;
      if (gen->count("--seed")) params.seed = gen_seed;
      if (gen->count("--routing-layers")) params.routing_layers = gen_layers;
      if (gen_core_w > 0) params.core_width = gen_core_w;
      if (gen_core_h > 0) params.core_height = gen_core_h;
      const Design d = pipeline_generate(ws, params);
      out << "generated " << d.name << ": " << d.instances.size() << " instances, "
          << d.nets.size() << " nets\n";
      return 0;
    }
    if (ingest->parsed()) {
      Workspace ws = fs::exists(fs::path(ws_path) / "config.json")
                         ? Workspace::open(ws_path)
                         : Workspace::create(ws_path, WorkspaceConfig{});
      const Design d = pipeline_ingest(ws, lef_file, def_file, tech_file);
      out << "ingested " << d.name << ": " << d.instances.size() << " instances, "
          << d.nets.size() << " nets\n";
      return 0;
    }
    if (vectorize->parsed()) {
      Workspace ws = Workspace::open(ws_path);
      const BundleManifest m =
          pipeline_vectorize(ws, parse_level(level), threads_fallback(threads));
      out << "bundle: " << m.net_files << " net files, " << m.path_files << " path files, "
          << m.patch_files << " patch files\n";
      return 0;
    }
    if (fidelity->parsed()) {
      Workspace ws = Workspace::open(ws_path);
      const FidelityReport r = pipeline_fidelity(ws, coarsen);
      out << "fidelity: wirelength ratio "
          << (r.wirelength.applicable ? r.wirelength.ratio : 0.0) << ", density correlation "
          << r.density_correlation << (r.all_pass() ? " [pass]" : " [check report]") << "\n";
      return 0;
    }
    if (report->parsed()) {
      Workspace ws = Workspace::open(ws_path);
      pipeline_report(ws);
      out << "report written to " << (ws.report_dir() / "report.md").string() << "\n";
      return 0;
    }
    if (dataset->parsed()) {
      Workspace ws = Workspace::open(ws_path);
      if (!workspaces_file.empty()) {
        const std::string text = read_text_file(workspaces_file);
        std::string line;
        for (char c : text + "\n") {
          if (c == '\n') {
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
            if (!line.empty()) dopt.extra_workspaces.push_back(line);
            line.clear();
          } else {
            line.push_back(c);
          }
        }
      }
      if (!fractions_arg.empty()) {
        std::array<double, 3> f{};
        if (std::sscanf(fractions_arg.c_str(), "%lf,%lf,%lf", &f[0], &f[1], &f[2]) != 3)
          throw UsageError("--fractions expects three comma-separated numbers");
        dopt.fractions = f;
      }
      pipeline_dataset(ws, dopt);
      out << "datasets written to " << ws.feature_dir().string() << "\n";
      return 0;
    }
    if (dse_cmd->parsed()) {
      Workspace ws = Workspace::open(ws_path);
      pipeline_dse(ws, dse_opt);
      out << "dse outputs written to " << (ws.feature_dir() / "dse").string() << "\n";
      return 0;
    }
    err << "no command\n";
    return 2;
  } catch (const UsageError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace chipvec
