#pragma once

#include <array>
#include <string>
#include <vector>

#include "chipvec/bundle.hpp"
#include "chipvec/design.hpp"
#include "chipvec/fidelity.hpp"
#include "chipvec/synthetic.hpp"
#include "chipvec/workspace.hpp"

namespace chipvec {

// Workspace-level operations behind the CLI verbs and the python module.

// Synthesizes a design, writes result/design.def and result/tech.json, and
// records the generator parameters in the workspace config.
Design pipeline_generate(Workspace& ws, const SynthParams& params);

// Parses LEF/DEF (+ optional electrical sidecar), stores a normalized DEF
// copy under result/ and the input paths in the config.
Design pipeline_ingest(Workspace& ws, const std::string& lef_path, const std::string& def_path,
                       const std::string& tech_path);

// Loads the design the workspace config points at.
Design pipeline_load_design(const Workspace& ws);

// Extracts the requested levels and saves the bundle under vectors/.
BundleManifest pipeline_vectorize(const Workspace& ws, unsigned levels, int threads_override = 0);

// Reconstructs from the bundle, compares against the stored design, writes
// report/fidelity.json.
FidelityReport pipeline_fidelity(const Workspace& ws, int recon_coarsening);

// Writes report/report.md, report/stats.json, and report/*.pgm heatmaps.
// Returns the markdown text.
std::string pipeline_report(const Workspace& ws);

struct DatasetOptions {
  int max_len = 32;
  int window = 4;
  int stride = 3;
  int mask_size = 16;
  std::uint64_t seed = 1;
  std::vector<std::string> extra_workspaces;  // roots of additional bundles
  std::array<double, 3> fractions{0.6333333333333333, 0.1, 0.26666666666666666};
  int strata = 3;
};

// Assembles the AI-ready datasets from this workspace's bundle (plus any
// extra workspaces) into feature/: NPY tensors, CSV tables, and
// dataset_manifest.json with shapes, stats, split membership, and seed.
void pipeline_dataset(const Workspace& ws, const DatasetOptions& options);

struct DseOptions {
  std::string objective = "placement_toy";  // zdt1 | sphere | placement_toy
  int budget = 100;
  std::uint64_t seed = 1;
  double gamma = 0.25;
  int n_candidates = 24;
};

// Runs the optimizer on a built-in objective and writes feature/dse/
// (space.json, history.csv, front.json).
void pipeline_dse(const Workspace& ws, const DseOptions& options);

}  // namespace chipvec
