#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "chipvec/extract.hpp"

namespace chipvec {

// config.json schema documented in docs/formats.md.
struct WorkspaceConfig {
  std::string design_name = "design";
  std::string lef_path;        // inputs, empty until ingest/generate
  std::string def_path;
  std::string tech_path;       // optional electrical sidecar
  double clock_period_ns = 1.0;
  int patch_multiple = 9;
  int max_paths = 10000;
  int max_stages = 64;
  PowerParams power;
  int threads = 1;
  std::uint64_t seed = 1;
  std::string generator_json;  // provenance of `generate`, empty otherwise

  void validate() const;  // throws ConfigError(field)
  ExtractConfig extract_config() const;
};

WorkspaceConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const WorkspaceConfig& config);

// Directory map: result/ (design files), report/ (reports, heatmaps),
// feature/ (datasets), vectors/ (the foundation bundle).
class Workspace {
public:
  static Workspace create(const std::filesystem::path& root, const WorkspaceConfig& config);
  static Workspace open(const std::filesystem::path& root);

  const std::filesystem::path& root() const { return root_; }
  const WorkspaceConfig& config() const { return config_; }
  void update_config(const WorkspaceConfig& config);

  std::filesystem::path result_dir() const { return root_ / "result"; }
  std::filesystem::path report_dir() const { return root_ / "report"; }
  std::filesystem::path feature_dir() const { return root_ / "feature"; }
  std::filesystem::path vectors_dir() const { return root_ / "vectors"; }
  std::filesystem::path config_path() const { return root_ / "config.json"; }

private:
  Workspace(std::filesystem::path root, WorkspaceConfig config)
      : root_(std::move(root)), config_(std::move(config)) {}

  std::filesystem::path root_;
  WorkspaceConfig config_;
};

}  // namespace chipvec
