#include "chipvec/dse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "chipvec/csv.hpp"
#include "chipvec/json_text.hpp"
#include "json.hpp"

namespace chipvec::dse {

using nlohmann::json;

void ParamSpace::validate() const {
  if (dims.empty()) throw ConfigError("space", "needs at least one dimension");
  std::set<std::string> names;
  for (const auto& d : dims) {
    if (d.name.empty()) throw ConfigError("space", "dimension with empty name");
    if (!names.insert(d.name).second) throw ConfigError(d.name, "duplicate dimension name");
    if (d.kind == Dimension::Kind::Continuous) {
      if (!(d.low < d.high)) throw ConfigError(d.name, "low must be < high");
    } else if (d.choices.empty()) {
      throw ConfigError(d.name, "needs at least one choice");
    }
  }
}

ParamSpace space_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError("space", std::string("not valid JSON: ") + e.what());
  }
  ParamSpace s;
  for (const auto& jd : j.value("dimensions", json::array())) {
    Dimension d;
    d.name = jd.at("name").get<std::string>();
    if (jd.contains("choices")) {
      d.kind = Dimension::Kind::Categorical;
      for (const auto& c : jd["choices"]) d.choices.push_back(c.get<std::string>());
      d.default_choice = jd.value("default", d.choices.front());
    } else {
      d.kind = Dimension::Kind::Continuous;
      d.low = jd.at("low").get<double>();
      d.high = jd.at("high").get<double>();
      d.default_number = jd.value("default", (d.low + d.high) / 2);
    }
    s.dims.push_back(std::move(d));
  }
  s.validate();
  return s;
}

std::string space_to_json_text(const ParamSpace& s) {
  json j;
  j["dimensions"] = json::array();
  for (const auto& d : s.dims) {
    json jd;
    jd["name"] = d.name;
    if (d.kind == Dimension::Kind::Categorical) {
      jd["choices"] = d.choices;
      jd["default"] = d.default_choice;
    } else {
      jd["distribution"] = "uniform";
      jd["low"] = d.low;
      jd["high"] = d.high;
      jd["default"] = d.default_number;
    }
    j["dimensions"].push_back(jd);
  }
  return json_text(j);
}

namespace {

std::vector<std::vector<double>> to_minimization(
    const std::vector<std::vector<double>>& objectives, const std::vector<Direction>& directions) {
  std::vector<std::vector<double>> out = objectives;
  for (auto& row : out) {
    if (row.size() != directions.size())
      throw InvalidObjective("objective vector length does not match directions");
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (std::isnan(row[k])) throw InvalidObjective("NaN objective value");
      if (directions[k] == Direction::Maximize) row[k] = -row[k];
    }
  }
  return out;
}

bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
  bool strictly = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] > b[k]) return false;
    if (a[k] < b[k]) strictly = true;
  }
  return strictly;
}

}  // namespace

std::vector<int> nondominated_sort(const std::vector<std::vector<double>>& objectives,
                                   const std::vector<Direction>& directions) {
  const std::vector<std::vector<double>> objs = to_minimization(objectives, directions);
  const std::size_t n = objs.size();
  std::vector<int> rank(n, -1);
  if (n == 0) return rank;
  // Deb-style: domination counts + dominated lists, peel fronts by count
  std::vector<int> dominated_by(n, 0);
  std::vector<std::vector<std::size_t>> dominates_list(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dominates(objs[i], objs[j])) {
        dominates_list[i].push_back(j);
        ++dominated_by[j];
      } else if (dominates(objs[j], objs[i])) {
        dominates_list[j].push_back(i);
        ++dominated_by[i];
      }
    }
  }
  std::vector<std::size_t> front;
  for (std::size_t i = 0; i < n; ++i)
    if (dominated_by[i] == 0) front.push_back(i);
  int level = 0;
  while (!front.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t i : front) {
      rank[i] = level;
      for (std::size_t j : dominates_list[i])
        if (--dominated_by[j] == 0) next.push_back(j);
    }
    std::sort(next.begin(), next.end());  // stable order by insertion index
    front = std::move(next);
    ++level;
  }
  return rank;
}

std::vector<double> crowding_distance(const std::vector<std::vector<double>>& objectives,
                                      const std::vector<std::size_t>& members) {
  std::vector<double> dist(members.size(), 0.0);
  if (members.empty()) return dist;
  const std::size_t m = objectives[members[0]].size();
  for (std::size_t k = 0; k < m; ++k) {
    std::vector<std::size_t> order(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return objectives[members[a]][k] < objectives[members[b]][k];
    });
    const double lo = objectives[members[order.front()]][k];
    const double hi = objectives[members[order.back()]][k];
    dist[order.front()] = std::numeric_limits<double>::infinity();
    dist[order.back()] = std::numeric_limits<double>::infinity();
    if (hi <= lo) continue;
    for (std::size_t i = 1; i + 1 < order.size(); ++i)
      dist[order[i]] += (objectives[members[order[i + 1]]][k] -
                         objectives[members[order[i - 1]]][k]) /
                        (hi - lo);
  }
  return dist;
}

Params sample_prior(const ParamSpace& space, Rng& rng) {
  Params p;
  p.reserve(space.dims.size());
  for (const auto& d : space.dims) {
    ParamValue v;
    if (d.kind == Dimension::Kind::Continuous)
      v.number = rng.uniform(d.low, d.high);
    else
      v.choice = static_cast<int>(
          rng.uniform_int(0, static_cast<std::int64_t>(d.choices.size()) - 1));
    p.push_back(v);
  }
  return p;
}

namespace {

// Truncated-normal Parzen density over one continuous dimension.
struct ContinuousParzen {
  std::vector<double> centers;
  double bandwidth = 1.0;
  double low = 0.0, high = 1.0;

  static double phi(double z) { return std::exp(-0.5 * z * z) / 2.5066282746310002; }
  static double cdf(double z) { return 0.5 * std::erfc(-z / 1.4142135623730951); }

  void fit(std::vector<double> points, double low_, double high_, double floor_frac) {
    low = low_;
    high = high_;
    centers = std::move(points);
    const double n = static_cast<double>(centers.size());
    double mean = 0.0;
    for (double c : centers) mean += c;
    mean /= n;
    double var = 0.0;
    for (double c : centers) var += (c - mean) * (c - mean);
    const double sigma = std::sqrt(var / n);
    // Scott's rule with a floor to keep the density proper on ties
    bandwidth = std::max(sigma * std::pow(n, -0.2), floor_frac * (high - low));
  }

  double pdf(double x) const {
    double acc = 0.0;
    for (double c : centers) {
      const double z = (x - c) / bandwidth;
      const double norm = cdf((high - c) / bandwidth) - cdf((low - c) / bandwidth);
      if (norm > 0) acc += phi(z) / bandwidth / norm;
    }
    return acc / static_cast<double>(centers.size());
  }

  double sample(Rng& rng) const {
    const std::size_t i = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(centers.size()) - 1));
    for (int tries = 0; tries < 64; ++tries) {
      const double x = centers[i] + bandwidth * rng.normal();
      if (x >= low && x <= high) return x;
    }
    return std::clamp(centers[i], low, high);
  }
};

// Add-one smoothed categorical frequency.
struct CategoricalParzen {
  std::vector<double> probs;

  void fit(const std::vector<int>& picks, std::size_t k) {
    std::vector<double> counts(k, 1.0);  // add-one smoothing
    for (int c : picks) counts[static_cast<std::size_t>(c)] += 1.0;
    double total = 0.0;
    for (double c : counts) total += c;
    probs.resize(k);
    for (std::size_t i = 0; i < k; ++i) probs[i] = counts[i] / total;
  }

  double pmf(int choice) const { return probs[static_cast<std::size_t>(choice)]; }
  int sample(Rng& rng) const {
    std::vector<double> w = probs;
    return static_cast<int>(rng.weighted_pick(w));
  }
};

}  // namespace

Params suggest(const ParamSpace& space, const std::vector<TrialRecord>& history,
               const std::vector<Direction>& directions, const TpeOptions& options, Rng& rng) {
  space.validate();
  std::vector<std::size_t> ok;
  for (std::size_t i = 0; i < history.size(); ++i)
    if (!history[i].failed && !history[i].objectives.empty()) ok.push_back(i);
  if (static_cast<int>(ok.size()) < options.n_startup) return sample_prior(space, rng);

  std::vector<std::vector<double>> objs;
  objs.reserve(ok.size());
  for (std::size_t i : ok) objs.push_back(history[i].objectives);
  const std::vector<int> ranks = nondominated_sort(objs, directions);

  // good = top ceil(gamma*n) by rank, crowding distance breaks the cut rank
  const std::size_t n_good = static_cast<std::size_t>(
      std::ceil(options.gamma * static_cast<double>(ok.size())));
  const int max_rank = *std::max_element(ranks.begin(), ranks.end());
  std::vector<bool> good(ok.size(), false);
  std::size_t taken = 0;
  const std::vector<std::vector<double>> min_objs = to_minimization(objs, directions);
  for (int r = 0; r <= max_rank && taken < n_good; ++r) {
    std::vector<std::size_t> layer;
    for (std::size_t i = 0; i < ok.size(); ++i)
      if (ranks[i] == r) layer.push_back(i);
    if (taken + layer.size() <= n_good) {
      for (std::size_t i : layer) good[i] = true;
      taken += layer.size();
    } else {
      const std::vector<double> crowd = crowding_distance(min_objs, layer);
      std::vector<std::size_t> order(layer.size());
      for (std::size_t i = 0; i < layer.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (crowd[a] != crowd[b]) return crowd[a] > crowd[b];
        return layer[a] < layer[b];
      });
      for (std::size_t i = 0; i < order.size() && taken < n_good; ++i, ++taken)
        good[layer[order[i]]] = true;
      break;
    }
  }
  std::vector<std::size_t> good_ids, bad_ids;
  for (std::size_t i = 0; i < ok.size(); ++i) (good[i] ? good_ids : bad_ids).push_back(ok[i]);
  if (good_ids.empty() || bad_ids.empty()) return sample_prior(space, rng);

  // per-dimension densities
  std::vector<ContinuousParzen> l_cont(space.dims.size()), g_cont(space.dims.size());
  std::vector<CategoricalParzen> l_cat(space.dims.size()), g_cat(space.dims.size());
  for (std::size_t d = 0; d < space.dims.size(); ++d) {
    const Dimension& dim = space.dims[d];
    if (dim.kind == Dimension::Kind::Continuous) {
      std::vector<double> lpts, gpts;
      for (std::size_t i : good_ids) lpts.push_back(history[i].params[d].number);
      for (std::size_t i : bad_ids) gpts.push_back(history[i].params[d].number);
      l_cont[d].fit(std::move(lpts), dim.low, dim.high, options.bandwidth_floor);
      g_cont[d].fit(std::move(gpts), dim.low, dim.high, options.bandwidth_floor);
    } else {
      std::vector<int> lp, gp;
      for (std::size_t i : good_ids) lp.push_back(history[i].params[d].choice);
      for (std::size_t i : bad_ids) gp.push_back(history[i].params[d].choice);
      l_cat[d].fit(lp, dim.choices.size());
      g_cat[d].fit(gp, dim.choices.size());
    }
  }

  // draw candidates from l, keep the best l/g ratio (log-space)
  Params best;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < std::max(1, options.n_candidates); ++c) {
    Params cand(space.dims.size());
    double score = 0.0;
    for (std::size_t d = 0; d < space.dims.size(); ++d) {
      if (space.dims[d].kind == Dimension::Kind::Continuous) {
        const double x = l_cont[d].sample(rng);
        cand[d].number = x;
        const double l = std::max(l_cont[d].pdf(x), 1e-300);
        const double g = std::max(g_cont[d].pdf(x), 1e-300);
        score += std::log(l) - std::log(g);
      } else {
        const int x = l_cat[d].sample(rng);
        cand[d].choice = x;
        score += std::log(l_cat[d].pmf(x)) - std::log(g_cat[d].pmf(x));
      }
    }
    if (score > best_score) {
      best_score = score;
      best = std::move(cand);
    }
  }
  return best;
}

RunResult run(const ParamSpace& space, const Objective& objective,
              const std::vector<Direction>& directions, int budget, std::uint64_t seed,
              const TpeOptions& options) {
  space.validate();
  if (budget < 0) throw ConfigError("budget", "must be >= 0");
  Rng rng(seed);
  RunResult result;
  result.history.reserve(static_cast<std::size_t>(budget));
  for (int t = 0; t < budget; ++t) {
    TrialRecord trial;
    trial.params = suggest(space, result.history, directions, options, rng);
    try {
      trial.objectives = objective(trial.params);
      for (double v : trial.objectives)
        if (!std::isfinite(v)) throw InvalidObjective("non-finite objective");
      if (trial.objectives.size() != directions.size())
        throw InvalidObjective("objective arity mismatch");
    } catch (const std::exception&) {
      trial.failed = true;
      trial.objectives.clear();
    }
    result.history.push_back(std::move(trial));
  }
  // final ranking over successful trials
  std::vector<std::size_t> ok;
  std::vector<std::vector<double>> objs;
  for (std::size_t i = 0; i < result.history.size(); ++i) {
    if (!result.history[i].failed) {
      ok.push_back(i);
      objs.push_back(result.history[i].objectives);
    }
  }
  const std::vector<int> ranks = nondominated_sort(objs, directions);
  for (std::size_t k = 0; k < ok.size(); ++k) {
    result.history[ok[k]].rank = ranks[k];
    if (ranks[k] == 0) result.front.push_back(result.history[ok[k]]);
  }
  return result;
}

double hypervolume_2d(const std::vector<std::array<double, 2>>& front,
                      std::array<double, 2> ref) {
  if (front.empty()) return 0.0;
  for (const auto& p : front)
    if (p[0] > ref[0] || p[1] > ref[1])
      throw RefError("front point does not dominate the reference");
  std::vector<std::array<double, 2>> pts = front;
  std::sort(pts.begin(), pts.end());
  double hv = 0.0;
  double prev_y = ref[1];
  for (const auto& p : pts) {
    if (p[1] >= prev_y) continue;  // dominated by an earlier point
    hv += (ref[0] - p[0]) * (prev_y - p[1]);
    prev_y = p[1];
  }
  return hv;
}

std::vector<double> zdt1(const std::vector<double>& x) {
  const std::size_t n = x.size();
  double sum = 0.0;
  for (std::size_t i = 1; i < n; ++i) sum += x[i];
  const double g = 1.0 + 9.0 * sum / static_cast<double>(n - 1);
  const double f1 = x[0];
  return {f1, g * (1.0 - std::sqrt(f1 / g))};
}

ParamSpace zdt1_space(int n) {
  ParamSpace s;
  for (int i = 0; i < n; ++i) {
    Dimension d;
    d.name = "x" + std::to_string(i);
    d.low = 0.0;
    d.high = 1.0;
    s.dims.push_back(d);
  }
  return s;
}

std::vector<double> sphere(const std::vector<double>& x) {
  double acc = 0.0;
  for (double v : x) acc += (v - 0.3) * (v - 0.3);
  return {acc};
}

ParamSpace sphere_space(int n) {
  ParamSpace s;
  for (int i = 0; i < n; ++i) {
    Dimension d;
    d.name = "x" + std::to_string(i);
    d.low = 0.0;
    d.high = 1.0;
    s.dims.push_back(d);
  }
  return s;
}

std::vector<double> placement_toy(const Params& params) {
  // dims: target_density U(0.8,1.0), init_wirelength_coef U(0.1,0.5),
  //       max_backtrack U(5,50)
  const double density = params.at(0).number;
  const double coef = params.at(1).number;
  const double backtrack = params.at(2).number;
  const double wirelength = (1.2 - density) * (1.0 + 4.0 * (coef - 0.25) * (coef - 0.25));
  const double overflow = std::exp(8.0 * (density - 0.85)) / (1.0 + backtrack / 50.0);
  return {wirelength, overflow};
}

ParamSpace placement_toy_space() {
  ParamSpace s;
  Dimension density;
  density.name = "target_density";
  density.low = 0.8;
  density.high = 1.0;
  density.default_number = 0.8;
  Dimension coef;
  coef.name = "init_wirelength_coef";
  coef.low = 0.1;
  coef.high = 0.5;
  coef.default_number = 0.25;
  Dimension backtrack;
  backtrack.name = "max_backtrack";
  backtrack.low = 5.0;
  backtrack.high = 50.0;
  backtrack.default_number = 10.0;
  s.dims = {density, coef, backtrack};
  return s;
}

std::string history_csv(const ParamSpace& space, const std::vector<TrialRecord>& history) {
  std::vector<std::string> header{"trial"};
  for (const auto& d : space.dims) header.push_back(d.name);
  std::size_t n_obj = 0;
  for (const auto& t : history) n_obj = std::max(n_obj, t.objectives.size());
  for (std::size_t k = 0; k < n_obj; ++k) header.push_back("objective_" + std::to_string(k));
  header.push_back("failed");
  header.push_back("rank");
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < history.size(); ++i) {
    const TrialRecord& t = history[i];
    std::vector<std::string> row{std::to_string(i)};
    for (std::size_t d = 0; d < space.dims.size(); ++d) {
      if (space.dims[d].kind == Dimension::Kind::Categorical)
        row.push_back(space.dims[d].choices[static_cast<std::size_t>(t.params[d].choice)]);
      else
        row.push_back(format_double(t.params[d].number));
    }
    for (std::size_t k = 0; k < n_obj; ++k)
      row.push_back(k < t.objectives.size() ? format_double(t.objectives[k]) : "");
    row.push_back(t.failed ? "1" : "0");
    row.push_back(std::to_string(t.rank));
    rows.push_back(std::move(row));
  }
  return write_csv(header, rows);
}

std::string front_json(const ParamSpace& space, const std::vector<TrialRecord>& front) {
  json j = json::array();
  for (const auto& t : front) {
    json jt;
    json params = json::object();
    for (std::size_t d = 0; d < space.dims.size(); ++d) {
      if (space.dims[d].kind == Dimension::Kind::Categorical)
        params[space.dims[d].name] =
            space.dims[d].choices[static_cast<std::size_t>(t.params[d].choice)];
      else
        params[space.dims[d].name] = t.params[d].number;
    }
    jt["params"] = params;
    jt["objectives"] = t.objectives;
    j.push_back(jt);
  }
  return json_text(j);
}

}  // namespace chipvec::dse
