#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "chipvec/errors.hpp"
#include "chipvec/rng.hpp"

namespace chipvec::dse {

struct Dimension {
  enum class Kind { Continuous, Categorical };
  Kind kind = Kind::Continuous;
  std::string name;
  double low = 0.0, high = 1.0;       // continuous: uniform prior on [low, high]
  std::vector<std::string> choices;   // categorical
  double default_number = 0.0;
  std::string default_choice;
};

struct ParamSpace {
  std::vector<Dimension> dims;
  void validate() const;  // unique names, low < high, >= 1 choice
};

ParamSpace space_from_json_text(const std::string& text);
std::string space_to_json_text(const ParamSpace& space);

// One value per dimension: `number` for continuous, `choice` (index) for
// categorical.
struct ParamValue {
  double number = 0.0;
  int choice = 0;
};
using Params = std::vector<ParamValue>;

enum class Direction { Minimize, Maximize };

struct TrialRecord {
  Params params;
  std::vector<double> objectives;  // empty when failed
  bool failed = false;
  int rank = -1;  // nondomination rank, filled by run()
};

// Rank 0 = non-dominated set; rank k = non-dominated after removing ranks
// < k. Directions normalize objectives to minimization. NaN objectives are
// rejected.
std::vector<int> nondominated_sort(const std::vector<std::vector<double>>& objectives,
                                   const std::vector<Direction>& directions);

// Crowding distance within one front (boundary points infinite).
std::vector<double> crowding_distance(const std::vector<std::vector<double>>& objectives,
                                      const std::vector<std::size_t>& members);

struct TpeOptions {
  double gamma = 0.25;          // good-set share
  int n_candidates = 24;
  int n_startup = 10;           // prior sampling before the model kicks in
  double bandwidth_floor = 1e-3;  // fraction of the dimension range
};

// One MOTPE suggestion: dominance-ranked good/bad split (crowding distance
// breaks ties inside the cut rank), per-dimension Parzen densities, candidate
// maximizing l(x)/g(x). Degenerate histories fall back to prior sampling.
Params suggest(const ParamSpace& space, const std::vector<TrialRecord>& history,
               const std::vector<Direction>& directions, const TpeOptions& options, Rng& rng);

Params sample_prior(const ParamSpace& space, Rng& rng);

using Objective = std::function<std::vector<double>(const Params&)>;

struct RunResult {
  std::vector<TrialRecord> history;
  std::vector<TrialRecord> front;  // rank-0 successful trials
};

// Exactly `budget` trials; a throwing objective records a failed trial that
// still consumes budget but is excluded from density fitting.
RunResult run(const ParamSpace& space, const Objective& objective,
              const std::vector<Direction>& directions, int budget, std::uint64_t seed,
              const TpeOptions& options = {});

// Exact sweep-line area dominated by a 2-D minimization front up to `ref`.
// Every point must dominate ref. Empty front -> 0.
double hypervolume_2d(const std::vector<std::array<double, 2>>& front,
                      std::array<double, 2> ref);

// Built-in test objectives.
std::vector<double> zdt1(const std::vector<double>& x);
ParamSpace zdt1_space(int n = 5);
std::vector<double> sphere(const std::vector<double>& x);
ParamSpace sphere_space(int n = 1);
// Analytic placement-tuning surrogate: wirelength proxy vs overflow proxy
// over placement-style knobs.
std::vector<double> placement_toy(const Params& params);
ParamSpace placement_toy_space();

std::string history_csv(const ParamSpace& space, const std::vector<TrialRecord>& history);
std::string front_json(const ParamSpace& space, const std::vector<TrialRecord>& front);

}  // namespace chipvec::dse
