#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "chipvec/bundle.hpp"
#include "chipvec/def_io.hpp"
#include "chipvec/dse.hpp"
#include "chipvec/elmore.hpp"
#include "chipvec/engines.hpp"
#include "chipvec/extract.hpp"
#include "chipvec/fidelity.hpp"
#include "chipvec/geom.hpp"
#include "chipvec/json_text.hpp"
#include "chipvec/lef.hpp"
#include "chipvec/npy.hpp"
#include "chipvec/pipeline.hpp"
#include "chipvec/rsmt.hpp"
#include "chipvec/synthetic.hpp"
#include "chipvec/workspace.hpp"
#include "json.hpp"

namespace py = pybind11;
using namespace chipvec;
using nlohmann::json;

namespace {

py::object json_to_py(const json& j) {
  switch (j.type()) {
    case json::value_t::object: {
      py::dict d;
      for (auto it = j.begin(); it != j.end(); ++it) d[py::str(it.key())] = json_to_py(it.value());
      return d;
    }
    case json::value_t::array: {
      py::list l;
      for (const auto& v : j) l.append(json_to_py(v));
      return l;
    }
    case json::value_t::string:
      return py::str(j.get<std::string>());
    case json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case json::value_t::number_integer:
      return py::int_(j.get<std::int64_t>());
    case json::value_t::number_unsigned:
      return py::int_(j.get<std::uint64_t>());
    case json::value_t::number_float:
      return py::float_(j.get<double>());
    default:
      return py::none();
  }
}

std::vector<Point> to_points(const std::vector<std::pair<std::int64_t, std::int64_t>>& pts) {
  std::vector<Point> out;
  out.reserve(pts.size());
  for (const auto& [x, y] : pts) out.push_back(Point{x, y});
  return out;
}

unsigned level_mask(const std::string& level) {
  if (level == "net") return static_cast<unsigned>(VecLevel::Net);
  if (level == "graph") return static_cast<unsigned>(VecLevel::Graph);
  if (level == "path") return static_cast<unsigned>(VecLevel::Path);
  if (level == "patch") return static_cast<unsigned>(VecLevel::Patch);
  if (level == "all") return static_cast<unsigned>(VecLevel::All);
  throw ConfigError("level", "expected net|graph|path|patch|all");
}

std::vector<dse::Direction> to_directions(const std::vector<std::string>& dirs) {
  std::vector<dse::Direction> out;
  for (const auto& d : dirs)
    out.push_back(d == "max" || d == "maximize" ? dse::Direction::Maximize
                                                : dse::Direction::Minimize);
  return out;
}

}  // namespace

PYBIND11_MODULE(_chipvec, m) {
  m.doc() = "design-to-vector toolkit";
  m.attr("__version__") = "0.1.0";

  py::register_exception<Error>(m, "ChipvecError");

  // geometry / wirelength primitives
  m.def("hpwl",
        [](const std::vector<std::pair<std::int64_t, std::int64_t>>& pts) {
          return hpwl(to_points(pts));
        },
        py::arg("points"), "Half-perimeter wirelength of a point set.");
  m.def("estimate_rsmt",
        [](const std::vector<std::pair<std::int64_t, std::int64_t>>& pts) {
          return estimate_rsmt(to_points(pts));
        },
        py::arg("points"), "Rectilinear Steiner tree length estimate.");
  m.def("rmst_length",
        [](const std::vector<std::pair<std::int64_t, std::int64_t>>& pts) {
          return rmst_length(to_points(pts));
        },
        py::arg("points"));
  m.def("overlap_area",
        [](std::array<std::int64_t, 4> a, std::array<std::int64_t, 4> b) {
          return overlap_area(Rect{{a[0], a[1]}, {a[2], a[3]}}, Rect{{b[0], b[1]}, {b[2], b[3]}});
        },
        py::arg("a"), py::arg("b"));

  m.def("elmore_delays",
        [](const std::vector<std::int64_t>& parents, const std::vector<double>& resistances,
           const std::vector<double>& caps) {
          if (parents.size() != resistances.size() || parents.size() != caps.size())
            throw ConfigError("rc_tree", "parents, resistances, caps must align");
          RcTree tree;
          for (std::size_t i = 0; i < parents.size(); ++i)
            tree.add_node(static_cast<std::size_t>(parents[i]), resistances[i], caps[i]);
          return tree.elmore_delays();
        },
        py::arg("parents"), py::arg("resistances"), py::arg("caps"),
        "Elmore delay per node of an RC tree (node 0 is the implicit root).");

  // text format round trip
  m.def("parse_lef_to_tech_json",
        [](const std::string& text) { return tech_to_json_text(parse_lef(text)); },
        py::arg("lef_text"));
  m.def("def_round_trip",
        [](const std::string& def_text, const std::string& tech_json) {
          const TechLib tech = tech_from_json_text(tech_json);
          const Design d = parse_def(def_text, tech);
          return write_def(d);
        },
        py::arg("def_text"), py::arg("tech_json"));

  // NPY bytes
  m.def("write_npy",
        [](const std::vector<double>& values, const std::vector<std::size_t>& shape,
           const std::string& dtype) {
          const NpyDtype d = dtype == "f8" ? NpyDtype::Float64 : NpyDtype::Float32;
          return py::bytes(write_npy(values, shape, d));
        },
        py::arg("values"), py::arg("shape"), py::arg("dtype") = "f4");

  // workspace pipeline
  m.def("init_workspace",
        [](const std::string& root, const std::string& config_json) {
          WorkspaceConfig config;
          if (!config_json.empty()) config = config_from_json_text(config_json);
          Workspace::create(root, config);
        },
        py::arg("root"), py::arg("config_json") = "");
  m.def("generate",
        [](const std::string& root, const std::string& params_json) {
          Workspace ws = Workspace::open(root);
          SynthParams params;
          if (!params_json.empty()) params = synth_params_from_json_text(params_json);
          const Design d = pipeline_generate(ws, params);
          py::dict out;
          out["name"] = d.name;
          out["instances"] = d.instances.size();
          out["nets"] = d.nets.size();
          return out;
        },
        py::arg("root"), py::arg("params_json") = "");
  m.def("ingest",
        [](const std::string& root, const std::string& lef, const std::string& def_path,
           const std::string& tech) {
          Workspace ws = Workspace::open(root);
          const Design d = pipeline_ingest(ws, lef, def_path, tech);
          py::dict out;
          out["name"] = d.name;
          out["instances"] = d.instances.size();
          out["nets"] = d.nets.size();
          return out;
        },
        py::arg("root"), py::arg("lef"), py::arg("def_path"), py::arg("tech") = "");
  m.def("vectorize",
        [](const std::string& root, const std::string& level, int threads) {
          Workspace ws = Workspace::open(root);
          const BundleManifest manifest = pipeline_vectorize(ws, level_mask(level), threads);
          py::dict out;
          out["net_files"] = manifest.net_files;
          out["path_files"] = manifest.path_files;
          out["patch_files"] = manifest.patch_files;
          out["nets_total"] = manifest.nets_total;
          out["nets_wireless"] = manifest.nets_wireless;
          out["has_graph"] = manifest.has_graph;
          return out;
        },
        py::arg("root"), py::arg("level") = "all", py::arg("threads") = 0);
  m.def("bundle_hash", [](const std::string& root) { return bundle_hash(Workspace::open(root)); },
        py::arg("root"));
  m.def("fidelity",
        [](const std::string& root, int coarsen) {
          Workspace ws = Workspace::open(root);
          const FidelityReport r = pipeline_fidelity(ws, coarsen);
          return json_to_py(json::parse(fidelity_report_json(r)));
        },
        py::arg("root"), py::arg("coarsen") = 1);
  m.def("report", [](const std::string& root) { return pipeline_report(Workspace::open(root)); },
        py::arg("root"));
  m.def("dataset",
        [](const std::string& root, int max_len, int window, int stride, int mask_size,
           std::uint64_t seed, const std::vector<std::string>& extra_workspaces) {
          Workspace ws = Workspace::open(root);
          DatasetOptions options;
          options.max_len = max_len;
          options.window = window;
          options.stride = stride;
          options.mask_size = mask_size;
          options.seed = seed;
          options.extra_workspaces = extra_workspaces;
          pipeline_dataset(ws, options);
        },
        py::arg("root"), py::arg("max_len") = 32, py::arg("window") = 4, py::arg("stride") = 3,
        py::arg("mask_size") = 16, py::arg("seed") = 1,
        py::arg("extra_workspaces") = std::vector<std::string>{});

  // optimization
  m.def("nondominated_sort",
        [](const std::vector<std::vector<double>>& objectives,
           const std::vector<std::string>& directions) {
          return dse::nondominated_sort(objectives, to_directions(directions));
        },
        py::arg("objectives"), py::arg("directions"));
  m.def("hypervolume_2d",
        [](const std::vector<std::array<double, 2>>& front, std::array<double, 2> ref) {
          return dse::hypervolume_2d(front, ref);
        },
        py::arg("front"), py::arg("ref"));
  m.def("dse_run",
        [](const std::string& objective, int budget, std::uint64_t seed, double gamma,
           int candidates) {
          dse::TpeOptions options;
          options.gamma = gamma;
          options.n_candidates = candidates;
          dse::ParamSpace space;
          std::vector<dse::Direction> directions;
          dse::Objective fn;
          if (objective == "zdt1") {
            space = dse::zdt1_space(5);
            directions = {dse::Direction::Minimize, dse::Direction::Minimize};
            fn = [](const dse::Params& p) {
              std::vector<double> x;
              for (const auto& v : p) x.push_back(v.number);
              return dse::zdt1(x);
            };
          } else if (objective == "sphere") {
            space = dse::sphere_space(1);
            directions = {dse::Direction::Minimize};
            fn = [](const dse::Params& p) {
              std::vector<double> x;
              for (const auto& v : p) x.push_back(v.number);
              return dse::sphere(x);
            };
          } else if (objective == "placement_toy") {
            space = dse::placement_toy_space();
            directions = {dse::Direction::Minimize, dse::Direction::Minimize};
            fn = [](const dse::Params& p) { return dse::placement_toy(p); };
          } else {
            throw ConfigError("objective", "expected zdt1|sphere|placement_toy");
          }
          const dse::RunResult result = dse::run(space, fn, directions, budget, seed, options);
          py::list history;
          for (const auto& t : result.history) {
            py::dict jt;
            py::list params;
            for (const auto& v : t.params) params.append(v.number);
            jt["params"] = params;
            jt["objectives"] = t.objectives;
            jt["failed"] = t.failed;
            jt["rank"] = t.rank;
            history.append(jt);
          }
          py::list front;
          for (const auto& t : result.front) front.append(t.objectives);
          py::dict out;
          out["history"] = history;
          out["front"] = front;
          return out;
        },
        py::arg("objective"), py::arg("budget") = 100, py::arg("seed") = 1,
        py::arg("gamma") = 0.25, py::arg("candidates") = 24);
}
