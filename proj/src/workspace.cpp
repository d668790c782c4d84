#include "chipvec/workspace.hpp"

#include "chipvec/json_text.hpp"
#include "json.hpp"

namespace chipvec {

using nlohmann::json;
namespace fs = std::filesystem;

void WorkspaceConfig::validate() const {
  if (design_name.empty()) throw ConfigError("design_name", "must be non-empty");
  if (clock_period_ns <= 0) throw ConfigError("clock_period_ns", "must be positive");
  if (patch_multiple < 1) throw ConfigError("patch_multiple", "must be >= 1");
  if (max_paths < 0) throw ConfigError("max_paths", "must be >= 0");
  if (max_stages < 1) throw ConfigError("max_stages", "must be >= 1");
  if (power.activity < 0 || power.activity > 1)
    throw ConfigError("power.activity", "must be in [0,1]");
  if (power.frequency <= 0) throw ConfigError("power.frequency", "must be positive");
  if (power.voltage <= 0) throw ConfigError("power.voltage", "must be positive");
  if (threads < 1) throw ConfigError("threads", "must be >= 1");
}

ExtractConfig WorkspaceConfig::extract_config() const {
  ExtractConfig ec;
  ec.patch_multiple = patch_multiple;
  ec.max_paths = max_paths;
  ec.max_stages = max_stages;
  ec.clock_period = clock_period_ns * 1e-9;
  ec.power = power;
  ec.threads = threads;
  return ec;
}

WorkspaceConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError("config", std::string("not valid JSON: ") + e.what());
  }
  WorkspaceConfig c;
  c.design_name = j.value("design_name", c.design_name);
  if (j.contains("inputs")) {
    c.lef_path = j["inputs"].value("lef", std::string());
    c.def_path = j["inputs"].value("def", std::string());
    c.tech_path = j["inputs"].value("tech", std::string());
  }
  c.clock_period_ns = j.value("clock_period_ns", c.clock_period_ns);
  c.patch_multiple = j.value("patch_multiple", c.patch_multiple);
  if (j.contains("path_limits")) {
    c.max_paths = j["path_limits"].value("max_paths", c.max_paths);
    c.max_stages = j["path_limits"].value("max_stages", c.max_stages);
  }
  if (j.contains("power")) {
    c.power.activity = j["power"].value("activity", c.power.activity);
    c.power.frequency = j["power"].value("frequency_hz", c.power.frequency);
    c.power.voltage = j["power"].value("voltage_v", c.power.voltage);
  }
  c.threads = j.value("threads", c.threads);
  c.seed = j.value("seed", c.seed);
  if (j.contains("generator")) c.generator_json = j["generator"].dump();
  c.validate();
  return c;
}

std::string config_to_json_text(const WorkspaceConfig& c) {
  json j;
  j["schema_version"] = "1.0";
  j["design_name"] = c.design_name;
  j["inputs"] = {{"lef", c.lef_path}, {"def", c.def_path}, {"tech", c.tech_path}};
  j["clock_period_ns"] = c.clock_period_ns;
  j["patch_multiple"] = c.patch_multiple;
  j["path_limits"] = {{"max_paths", c.max_paths}, {"max_stages", c.max_stages}};
  j["power"] = {{"activity", c.power.activity},
                {"frequency_hz", c.power.frequency},
                {"voltage_v", c.power.voltage}};
  j["threads"] = c.threads;
  j["seed"] = c.seed;
  if (!c.generator_json.empty()) j["generator"] = json::parse(c.generator_json);
  return json_text(j);
}

Workspace Workspace::create(const fs::path& root, const WorkspaceConfig& config) {
  config.validate();
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw IoError("cannot create workspace root " + root.string() + ": " + ec.message());
  for (const char* sub : {"result", "report", "feature", "vectors"}) {
    fs::create_directories(root / sub, ec);
    if (ec) throw IoError("cannot create " + (root / sub).string() + ": " + ec.message());
  }
  Workspace ws(root, config);
  write_text_file(ws.config_path().string(), config_to_json_text(config));
  return ws;
}

Workspace Workspace::open(const fs::path& root) {
  if (!fs::exists(root / "config.json"))
    throw IoError("no workspace at " + root.string() + " (missing config.json)");
  WorkspaceConfig config = config_from_json_text(read_text_file((root / "config.json").string()));
  // directories may have been pruned; recreate the map
  std::error_code ec;
  for (const char* sub : {"result", "report", "feature", "vectors"})
    fs::create_directories(root / sub, ec);
  return Workspace(root, config);
}

void Workspace::update_config(const WorkspaceConfig& config) {
  config.validate();
  config_ = config;
  write_text_file(config_path().string(), config_to_json_text(config));
}

}  // namespace chipvec
