// Copyright 2026 The dyngame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dyngame/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "dyngame/observation.hpp"
#include "dyngame/rng.hpp"

namespace dyngame {

using nlohmann::json;

namespace {

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

Vector to_vector(const std::vector<double>& v) {
  Vector out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i];
  return out;
}

std::vector<double> from_vector(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

// ---------------------------------------------------------------------------
// Config (de)serialization
// ---------------------------------------------------------------------------

void ExperimentConfig::validate() const {
  if (!is_registered_model(model)) {
    throw ConfigError("config: unknown model '" + model + "'");
  }
  if (sigma_grid.empty()) throw ConfigError("config: empty sigma grid");
  for (double s : sigma_grid) {
    if (s < 0.0 || !std::isfinite(s)) {
      throw ConfigError("config: sigma values must be >= 0");
    }
  }
  if (seeds_per_level < 1) throw ConfigError("config: seeds_per_level < 1");
  if (regularization < 0.0) throw ConfigError("config: negative regularization");
  if (generalization_count < 0) {
    throw ConfigError("config: negative generalization count");
  }
  if (occlusion_begin < 0 || occlusion_end < 0 ||
      (occlusion_begin == 0) != (occlusion_end == 0) ||
      (occlusion_begin > 0 && occlusion_end < occlusion_begin)) {
    throw ConfigError("config: bad occlusion window");
  }
  if (workers < 0) throw ConfigError("config: negative worker count");
  if (solver.max_iterations < 0) {
    throw ConfigError("config: negative solver iteration budget");
  }
}

namespace {

json line_search_to_json(const LineSearchOptions& o) {
  return json{{"armijo", o.armijo},
              {"shrink", o.shrink},
              {"initial_step", o.initial_step},
              {"max_backtracks", o.max_backtracks}};
}

LineSearchOptions line_search_from_json(const json& j) {
  LineSearchOptions o;
  o.armijo = j.value("armijo", o.armijo);
  o.shrink = j.value("shrink", o.shrink);
  o.initial_step = j.value("initial_step", o.initial_step);
  o.max_backtracks = j.value("max_backtracks", o.max_backtracks);
  return o;
}

json ilq_to_json(const IlqOptions& o) {
  return json{{"max_iterations", o.max_iterations},
              {"trajectory_tolerance", o.trajectory_tolerance},
              {"initial_step", o.initial_step},
              {"backtrack_factor", o.backtrack_factor},
              {"max_backtracks", o.max_backtracks},
              {"trust_radius_scale", o.trust_radius_scale},
              {"psd_floor", o.psd_floor}};
}

IlqOptions ilq_from_json(const json& j) {
  IlqOptions o;
  o.max_iterations = j.value("max_iterations", o.max_iterations);
  o.trajectory_tolerance =
      j.value("trajectory_tolerance", o.trajectory_tolerance);
  o.initial_step = j.value("initial_step", o.initial_step);
  o.backtrack_factor = j.value("backtrack_factor", o.backtrack_factor);
  o.max_backtracks = j.value("max_backtracks", o.max_backtracks);
  o.trust_radius_scale = j.value("trust_radius_scale", o.trust_radius_scale);
  o.psd_floor = j.value("psd_floor", o.psd_floor);
  return o;
}

}  // namespace

std::string config_to_json_string(const ExperimentConfig& c) {
  json j;
  j["model"] = {{"name", c.model}};
  if (c.dt) j["model"]["dt"] = *c.dt;
  if (c.horizon) j["model"]["horizon"] = *c.horizon;
  if (c.target_lane) j["model"]["target_lane"] = *c.target_lane;
  if (c.theta_star) j["model"]["theta_star"] = *c.theta_star;
  if (c.x1_star) j["model"]["x1_star"] = *c.x1_star;

  j["observation"] = {{"occlusion_begin", c.occlusion_begin},
                      {"occlusion_end", c.occlusion_end},
                      {"sigma_grid", c.sigma_grid},
                      {"seeds_per_level", c.seeds_per_level}};
  if (c.observed_coordinates) {
    j["observation"]["coordinates"] = *c.observed_coordinates;
  }

  j["solver"] = {{"max_iterations", c.solver.max_iterations},
                 {"theta_tolerance", c.solver.theta_tolerance},
                 {"regularization", c.regularization},
                 {"x1_search", line_search_to_json(c.solver.x1_search)},
                 {"theta_search", line_search_to_json(c.solver.theta_search)},
                 {"ilq", ilq_to_json(c.solver.ilq)}};
  if (c.theta0) j["solver"]["theta0"] = *c.theta0;

  j["generalization"] = {{"count", c.generalization_count},
                         {"halfwidth", c.generalization_halfwidth}};

  j["run"] = {{"master_seed", c.master_seed},
              {"workers", c.workers},
              {"out_dir", c.out_dir},
              {"write_trajectories", c.write_trajectories}};
  return j.dump(2);
}

ExperimentConfig config_from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  ExperimentConfig c;
  try {
    const json& m = j.at("model");
    c.model = m.at("name").get<std::string>();
    if (m.contains("dt")) c.dt = m["dt"].get<double>();
    if (m.contains("horizon")) c.horizon = m["horizon"].get<int>();
    if (m.contains("target_lane")) c.target_lane = m["target_lane"].get<double>();
    if (m.contains("theta_star")) {
      c.theta_star = m["theta_star"].get<std::vector<double>>();
    }
    if (m.contains("x1_star")) {
      c.x1_star = m["x1_star"].get<std::vector<double>>();
    }

    if (j.contains("observation")) {
      const json& o = j["observation"];
      if (o.contains("coordinates")) {
        c.observed_coordinates = o["coordinates"].get<std::vector<int>>();
      }
      c.occlusion_begin = o.value("occlusion_begin", 0);
      c.occlusion_end = o.value("occlusion_end", 0);
      if (o.contains("sigma_grid")) {
        c.sigma_grid = o["sigma_grid"].get<std::vector<double>>();
      }
      c.seeds_per_level = o.value("seeds_per_level", c.seeds_per_level);
    }

    if (j.contains("solver")) {
      const json& s = j["solver"];
      c.solver.max_iterations =
          s.value("max_iterations", c.solver.max_iterations);
      c.solver.theta_tolerance =
          s.value("theta_tolerance", c.solver.theta_tolerance);
      c.regularization = s.value("regularization", c.regularization);
      if (s.contains("theta0")) {
        c.theta0 = s["theta0"].get<std::vector<double>>();
      }
      if (s.contains("x1_search")) {
        c.solver.x1_search = line_search_from_json(s["x1_search"]);
      }
      if (s.contains("theta_search")) {
        c.solver.theta_search = line_search_from_json(s["theta_search"]);
      }
      if (s.contains("ilq")) c.solver.ilq = ilq_from_json(s["ilq"]);
    }

    if (j.contains("generalization")) {
      c.generalization_count =
          j["generalization"].value("count", c.generalization_count);
      c.generalization_halfwidth =
          j["generalization"].value("halfwidth", c.generalization_halfwidth);
    }

    if (j.contains("run")) {
      const json& r = j["run"];
      c.master_seed = r.value("master_seed", c.master_seed);
      c.workers = r.value("workers", c.workers);
      c.out_dir = r.value("out_dir", c.out_dir);
      c.write_trajectories =
          r.value("write_trajectories", c.write_trajectories);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: schema violation: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return config_from_json_string(buffer.str());
}

void save_config(const ExperimentConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("config: cannot write file '" + path + "'");
  out << config_to_json_string(config) << "\n";
}

std::string config_hash(const ExperimentConfig& config) {
  // The hash identifies the experiment, not the execution substrate: worker
  // count and output paths are excluded so reruns can be byte-identical.
  json j = json::parse(config_to_json_string(config));
  j["run"].erase("workers");
  j["run"].erase("out_dir");
  j["run"].erase("write_trajectories");
  const std::string text = j.dump(2);
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001B3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(h));
  return buffer;
}

// ---------------------------------------------------------------------------
// Context
// ---------------------------------------------------------------------------

ExperimentContext::ExperimentContext(ExperimentConfig config)
    : config_(std::move(config)) {
  config_.validate();
  model_ = build_model(config_.model, config_.dt, config_.horizon,
                       config_.target_lane);
  if (config_.theta_star &&
      static_cast<int>(config_.theta_star->size()) !=
          model_.instance.cost.param_dim()) {
    throw ConfigError("config: theta_star dimension mismatch");
  }
  if (config_.x1_star &&
      static_cast<int>(config_.x1_star->size()) !=
          model_.instance.dynamics->shape().state_dim()) {
    throw ConfigError("config: x1_star dimension mismatch");
  }
  if (config_.theta0 && static_cast<int>(config_.theta0->size()) !=
                            model_.instance.cost.param_dim()) {
    throw ConfigError("config: theta0 dimension mismatch");
  }
}

Vector ExperimentContext::theta_star() const {
  return config_.theta_star ? to_vector(*config_.theta_star)
                            : model_.theta_star;
}

Vector ExperimentContext::x1_star() const {
  return config_.x1_star ? to_vector(*config_.x1_star) : model_.x1_star;
}

Vector ExperimentContext::theta0() const {
  return config_.theta0 ? to_vector(*config_.theta0)
                        : Vector::Ones(model_.instance.cost.param_dim());
}

ObservationModel ExperimentContext::observation_model(double sigma) const {
  ObservationModel m;
  m.selection = config_.observed_coordinates ? *config_.observed_coordinates
                                             : model_.default_observed;
  m.sigma = sigma;
  const int T = model_.instance.dynamics->shape().horizon;
  if (config_.occlusion_begin > 0) {
    m.times = occluded_times(T, config_.occlusion_begin, config_.occlusion_end);
  } else {
    m.times = occluded_times(T, 0, -1);  // all of [1, T]
  }
  return m;
}

Trajectory ExperimentContext::solve_truth(const Vector& x1) const {
  const IlqResult result =
      ilqgames_solve(*model_.instance.dynamics,
                     model_.instance.cost.with_theta(theta_star()), x1, {},
                     config_.solver.ilq);
  if (!result.converged) {
    throw DivergenceError("generate_expert: forward solve did not converge",
                          0);
  }
  return result.trajectory;
}

ExpertData ExperimentContext::generate_expert(double sigma,
                                              std::uint64_t noise_seed) const {
  ExpertData data;
  data.trajectory = solve_truth(x1_star());
  data.observations =
      apply_observation(data.trajectory, observation_model(sigma), noise_seed);
  if (!config_.out_dir.empty()) {
    std::filesystem::create_directories(config_.out_dir);
    write_trajectory_csv(config_.out_dir + "/expert_truth.csv",
                         data.trajectory);
    write_observations_csv(config_.out_dir + "/observations.csv",
                           data.observations);
  }
  return data;
}

InverseProblem ExperimentContext::make_problem(
    const ObservationSet& observations) const {
  InverseProblem problem;
  problem.dynamics = model_.instance.dynamics;
  problem.cost = model_.instance.cost;
  problem.observations = observations;
  problem.regularization = config_.regularization;
  problem.theta0 = theta0();
  problem.x1_0 = initial_state_guess(model_.default_state, observations);
  problem.options = config_.solver;
  return problem;
}

Trajectory ExperimentContext::predicted_trajectory(const Vector& theta,
                                                   const Vector& x1) const {
  return ilqgames_solve(*model_.instance.dynamics,
                        model_.instance.cost.with_theta(theta), x1, {},
                        config_.solver.ilq)
      .trajectory;
}

std::vector<Vector> ExperimentContext::generalization_states() const {
  const std::uint64_t key = rng::derive(config_.master_seed, 0xFEEDULL);
  const Vector base = x1_star();
  std::vector<Vector> states;
  states.reserve(config_.generalization_count);
  const auto& positions = model_.position_coordinates;
  for (int s = 0; s < config_.generalization_count; ++s) {
    Vector x = base;
    for (size_t p = 0; p < positions.size(); ++p) {
      const double u =
          rng::uniform(key, static_cast<std::uint64_t>(s) * positions.size() + p);
      x[positions[p]] += config_.generalization_halfwidth * (2.0 * u - 1.0);
    }
    states.push_back(std::move(x));
  }
  return states;
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

double metric_a(const Trajectory& predicted, const ObservationSet& obs) {
  double total = 0.0;
  for (size_t k = 0; k < obs.model.times.size(); ++k) {
    total += (obs.model.observe(predicted.states[obs.model.times[k] - 1]) -
              obs.measurements[k])
                 .squaredNorm();
  }
  return std::sqrt(total);
}

double metric_b(const Trajectory& predicted, const Trajectory& truth) {
  double total = 0.0;
  for (size_t t = 0; t < truth.states.size(); ++t) {
    total += (predicted.states[t] - truth.states[t]).squaredNorm();
  }
  return std::sqrt(total);
}

namespace {

double stacked_norm_states(const Trajectory& traj) {
  double total = 0.0;
  for (const auto& x : traj.states) total += x.squaredNorm();
  return std::sqrt(total);
}

double stacked_norm_observations(const ObservationSet& obs) {
  double total = 0.0;
  for (const auto& y : obs.measurements) total += y.squaredNorm();
  return std::sqrt(total);
}

}  // namespace

// ---------------------------------------------------------------------------
// Monte Carlo study
// ---------------------------------------------------------------------------

namespace {

struct ArmKey {
  int sigma_index;
  int seed;
  std::string method;
};

}  // namespace

std::vector<MonteCarloRecord> run_montecarlo(const ExperimentConfig& config) {
  const ExperimentContext ctx(config);
  const std::string hash = config_hash(config);
  const bool writing = !config.out_dir.empty();
  if (writing) std::filesystem::create_directories(config.out_dir);

  std::vector<double> sigmas = config.sigma_grid;
  std::sort(sigmas.begin(), sigmas.end());

  // Shared ground truth: one expert trajectory, one set of generalization
  // truths; arms differ only in their noise draws and solver runs.
  const Trajectory truth = ctx.solve_truth(ctx.x1_star());
  const std::vector<Vector> gen_states = ctx.generalization_states();
  std::vector<Trajectory> gen_truth;
  gen_truth.reserve(gen_states.size());
  for (const auto& x1 : gen_states) gen_truth.push_back(ctx.solve_truth(x1));

  if (writing) {
    write_trajectory_csv(config.out_dir + "/expert_truth.csv", truth);
    for (size_t s = 0; s < gen_truth.size(); ++s) {
      write_trajectory_csv(
          config.out_dir + "/gen_truth_" + std::to_string(s) + ".csv",
          gen_truth[s]);
    }
  }

  std::vector<ArmKey> arms;
  for (int si = 0; si < static_cast<int>(sigmas.size()); ++si) {
    for (int r = 0; r < config.seeds_per_level; ++r) {
      arms.push_back({si, r, "fbne"});
      arms.push_back({si, r, "olne_surrogate"});
    }
  }

  std::vector<MonteCarloRecord> records(arms.size());
  std::vector<ObservationSet> arm_observations(arms.size());
  std::vector<std::vector<Trajectory>> arm_gen_pred(arms.size());
  std::vector<Trajectory> arm_pred(arms.size());
  std::vector<bool> arm_pred_ok(arms.size(), false);

  auto run_arm = [&](size_t a) {
    const ArmKey& key = arms[a];
    MonteCarloRecord rec;
    rec.sigma_index = key.sigma_index;
    rec.sigma = sigmas[key.sigma_index];
    rec.seed = key.seed;
    rec.method = key.method;
    rec.config_hash = hash;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    rec.metric_a = rec.metric_b = rec.metric_c = nan;
    rec.metric_a_rel = rec.metric_b_rel = rec.metric_c_rel = nan;
    rec.final_loss = nan;

    const auto start = std::chrono::steady_clock::now();
    try {
      const std::uint64_t arm_seed = rng::derive(
          rng::derive(config.master_seed, key.sigma_index), key.seed);
      const ObservationSet obs = apply_observation(
          truth, ctx.observation_model(rec.sigma), arm_seed);
      arm_observations[a] = obs;

      const InverseProblem problem = ctx.make_problem(obs);
      const InverseReport report = key.method == "fbne"
                                       ? solve_inverse(problem)
                                       : solve_inverse_olne_baseline(problem);
      rec.converged = report.converged;
      rec.iterations = static_cast<int>(report.iterates.size()) - 1;
      rec.final_loss = report.best().loss;

      const Trajectory predicted =
          ctx.predicted_trajectory(report.best().theta, report.best().x1);
      arm_pred[a] = predicted;
      arm_pred_ok[a] = true;

      rec.metric_a = metric_a(predicted, obs);
      rec.metric_b = metric_b(predicted, truth);
      double c_total = 0.0;
      arm_gen_pred[a].reserve(gen_states.size());
      for (size_t s = 0; s < gen_states.size(); ++s) {
        const Trajectory gen_pred =
            ctx.predicted_trajectory(report.best().theta, gen_states[s]);
        c_total += metric_b(gen_pred, gen_truth[s]);
        arm_gen_pred[a].push_back(gen_pred);
      }
      rec.metric_c = gen_states.empty()
                         ? 0.0
                         : c_total / static_cast<double>(gen_states.size());

      const double obs_norm = stacked_norm_observations(obs);
      const double truth_norm = stacked_norm_states(truth);
      rec.metric_a_rel = obs_norm > 0.0 ? rec.metric_a / obs_norm : rec.metric_a;
      rec.metric_b_rel =
          truth_norm > 0.0 ? rec.metric_b / truth_norm : rec.metric_b;
      double gen_norm = 0.0;
      for (const auto& g : gen_truth) gen_norm += stacked_norm_states(g);
      gen_norm = gen_truth.empty() ? 0.0 : gen_norm / gen_truth.size();
      rec.metric_c_rel = gen_norm > 0.0 ? rec.metric_c / gen_norm : rec.metric_c;
    } catch (const std::exception&) {
      rec.converged = false;
    }
    rec.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    records[a] = std::move(rec);
  };

  int workers = config.workers > 0
                    ? config.workers
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min<int>(workers, static_cast<int>(arms.size())));
  if (workers == 1) {
    for (size_t a = 0; a < arms.size(); ++a) run_arm(a);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        for (size_t a = next.fetch_add(1); a < arms.size();
             a = next.fetch_add(1)) {
          run_arm(a);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  if (writing) {
    write_records_csv(config.out_dir + "/records.csv", records);

    // Per-(sigma, method) summary; both dispersion readings emitted.
    std::ofstream summary(config.out_dir + "/summary.csv");
    summary << "sigma,method,mean_a,mean_b,mean_c,"
               "var_over_sqrt_n_b,std_over_sqrt_n_b\n";
    for (int si = 0; si < static_cast<int>(sigmas.size()); ++si) {
      for (const std::string method : {"fbne", "olne_surrogate"}) {
        double sa = 0, sb = 0, sc = 0, sbb = 0;
        int count = 0;
        for (const auto& rec : records) {
          if (rec.sigma_index != si || rec.method != method) continue;
          if (!std::isfinite(rec.metric_b)) continue;
          sa += rec.metric_a;
          sb += rec.metric_b;
          sc += rec.metric_c;
          sbb += rec.metric_b * rec.metric_b;
          ++count;
        }
        if (count == 0) continue;
        const double mean_b = sb / count;
        const double var_b = sbb / count - mean_b * mean_b;
        summary << format_double(sigmas[si]) << "," << method << ","
                << format_double(sa / count) << "," << format_double(mean_b)
                << "," << format_double(sc / count) << ","
                << format_double(var_b / std::sqrt(double(count))) << ","
                << format_double(std::sqrt(std::max(0.0, var_b)) /
                                 std::sqrt(double(count)))
                << "\n";
      }
    }

    std::ofstream timings(config.out_dir + "/timings.csv");
    timings << "sigma_index,seed,method,wall_time_s\n";
    for (const auto& rec : records) {
      timings << rec.sigma_index << "," << rec.seed << "," << rec.method << ","
              << format_double(rec.wall_time_s) << "\n";
    }

    json meta;
    meta["config_hash"] = hash;
    meta["rng_algorithm"] = rng::algorithm_name();
    meta["config"] = json::parse(config_to_json_string(config));
    std::ofstream metafile(config.out_dir + "/metadata.json");
    metafile << meta.dump(2) << "\n";

    if (config.write_trajectories) {
      for (size_t a = 0; a < arms.size(); ++a) {
        const std::string stem = "s" + std::to_string(arms[a].sigma_index) +
                                 "_r" + std::to_string(arms[a].seed);
        if (arms[a].method == "fbne") {
          write_observations_csv(
              config.out_dir + "/observations_" + stem + ".csv",
              arm_observations[a]);
        }
        if (!arm_pred_ok[a]) continue;
        write_trajectory_csv(config.out_dir + "/pred_" + stem + "_" +
                                 arms[a].method + ".csv",
                             arm_pred[a]);
        for (size_t s = 0; s < arm_gen_pred[a].size(); ++s) {
          write_trajectory_csv(config.out_dir + "/gen_pred_" + stem + "_" +
                                   arms[a].method + "_" + std::to_string(s) +
                                   ".csv",
                               arm_gen_pred[a][s]);
        }
      }
    }
  }
  return records;
}

// ---------------------------------------------------------------------------
// Benchmark two-pair verification
// ---------------------------------------------------------------------------

Prop1Report verify_prop1(int samples, std::uint64_t seed) {
  if (samples < 1) throw DomainError("verify_prop1: samples must be >= 1");
  Prop1Report report;
  report.samples = samples;

  const AffineLQGame game_a = build_prop1(1.0, 1.0);
  const AffineLQGame game_b = build_prop1(0.5, 2.0);
  const FbneSolution sol_a = solve_fbne_lq(game_a);
  const FbneSolution sol_b = solve_fbne_lq(game_b);

  // Gains at t=2 against the closed-form values [2/5, 1/5] and [1/5, 2/5].
  report.max_gain_error = std::max(
      {std::abs(sol_a.strategy.gains[1][0](0, 0) - 0.4),
       std::abs(sol_a.strategy.gains[1][1](0, 0) - 0.2),
       std::abs(sol_b.strategy.gains[1][0](0, 0) - 0.2),
       std::abs(sol_b.strategy.gains[1][1](0, 0) - 0.4)});

  for (int s = 0; s < samples; ++s) {
    const double x1 = -10.0 + 20.0 * rng::uniform(seed, s);
    const Vector x1v = Vector::Constant(1, x1);
    const Trajectory ta = lq_rollout(game_a, sol_a.strategy, x1v);
    const Trajectory tb = lq_rollout(game_b, sol_b.strategy, x1v);
    const Prop1Evaluation oracle_a = prop1_oracle(1.0, 1.0, x1);
    const Prop1Evaluation oracle_b = prop1_oracle(0.5, 2.0, x1);

    double pair_gap = 0.0, oracle_gap = 0.0;
    for (int t = 0; t < 3; ++t) {
      pair_gap = std::max(pair_gap, std::abs(ta.states[t][0] - tb.states[t][0]));
    }
    oracle_gap = std::max(
        {std::abs(ta.states[1][0] - oracle_a.x2),
         std::abs(ta.states[2][0] - oracle_a.x3),
         std::abs(tb.states[1][0] - oracle_b.x2),
         std::abs(tb.states[2][0] - oracle_b.x3)});

    report.max_pair_gap = std::max(report.max_pair_gap, pair_gap);
    report.max_oracle_gap = std::max(report.max_oracle_gap, oracle_gap);
    if (pair_gap > 1e-10 || oracle_gap > 1e-10) {
      report.failed_x1.push_back(x1);
    }
  }
  report.all_passed =
      report.failed_x1.empty() && report.max_gain_error <= 1e-12;
  return report;
}

std::string Prop1Report::summary() const {
  std::ostringstream out;
  out << (all_passed ? "PASS" : "FAIL") << ": " << samples
      << " samples, max pair gap " << format_double(max_pair_gap)
      << ", max oracle gap " << format_double(max_oracle_gap)
      << ", max gain error " << format_double(max_gain_error);
  if (!failed_x1.empty()) {
    out << ", failing x1:";
    for (double x : failed_x1) out << " " << format_double(x);
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// x1 initialization and CSV I/O
// ---------------------------------------------------------------------------

Vector initial_state_guess(const Vector& default_state,
                           const ObservationSet& observations) {
  Vector x1 = default_state;
  const auto& sel = observations.model.selection;
  for (size_t c = 0; c < sel.size(); ++c) {
    x1[sel[c]] = observations.measurements.front()[c];
  }
  return x1;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << "t,coordinate_index,value\n";
  const int n = static_cast<int>(traj.states.front().size());
  for (size_t t = 0; t < traj.states.size(); ++t) {
    for (int c = 0; c < n; ++c) {
      out << (t + 1) << "," << c << "," << format_double(traj.states[t][c])
          << "\n";
    }
    if (t < traj.controls.size()) {
      for (int c = 0; c < traj.controls[t].size(); ++c) {
        out << (t + 1) << "," << (n + c) << ","
            << format_double(traj.controls[t][c]) << "\n";
      }
    }
  }
}

Trajectory read_trajectory_csv(const std::string& path,
                               const GameShape& shape) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  const int n = shape.state_dim();
  const int m = shape.control_dim();
  Trajectory traj;
  traj.states.assign(shape.horizon, Vector::Zero(n));
  traj.controls.assign(shape.horizon - 1, Vector::Zero(m));
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int t = 0, c = 0;
    double v = 0.0;
    if (std::sscanf(line.c_str(), "%d,%d,%lf", &t, &c, &v) != 3) {
      throw ConfigError("bad trajectory row in '" + path + "'");
    }
    if (c < n) {
      traj.states.at(t - 1)[c] = v;
    } else {
      traj.controls.at(t - 1)[c - n] = v;
    }
  }
  return traj;
}

void write_observations_csv(const std::string& path,
                            const ObservationSet& obs) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << "t,coordinate_index,value\n";
  for (size_t k = 0; k < obs.model.times.size(); ++k) {
    for (size_t c = 0; c < obs.model.selection.size(); ++c) {
      out << obs.model.times[k] << "," << obs.model.selection[c] << ","
          << format_double(obs.measurements[k][c]) << "\n";
    }
  }
}

ObservationSet read_observations_csv(const std::string& path,
                                     const ObservationModel& model) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  ObservationSet obs;
  obs.model = model;
  obs.measurements.assign(model.times.size(),
                          Vector::Zero(model.obs_dim()));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int t = 0, c = 0;
    double v = 0.0;
    if (std::sscanf(line.c_str(), "%d,%d,%lf", &t, &c, &v) != 3) {
      throw ConfigError("bad observation row in '" + path + "'");
    }
    const auto it = std::find(model.times.begin(), model.times.end(), t);
    const auto jt = std::find(model.selection.begin(), model.selection.end(), c);
    if (it == model.times.end() || jt == model.selection.end()) {
      throw ConfigError("observation row outside model in '" + path + "'");
    }
    obs.measurements[it - model.times.begin()][jt - model.selection.begin()] =
        v;
  }
  return obs;
}

void write_records_csv(const std::string& path,
                       const std::vector<MonteCarloRecord>& records) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << "sigma_index,sigma,seed,method,metric_a,metric_b,metric_c,"
         "metric_a_rel,metric_b_rel,metric_c_rel,final_loss,converged,"
         "iterations,config_hash\n";
  for (const auto& r : records) {
    out << r.sigma_index << "," << format_double(r.sigma) << "," << r.seed
        << "," << r.method << "," << format_double(r.metric_a) << ","
        << format_double(r.metric_b) << "," << format_double(r.metric_c) << ","
        << format_double(r.metric_a_rel) << "," << format_double(r.metric_b_rel)
        << "," << format_double(r.metric_c_rel) << ","
        << format_double(r.final_loss) << "," << (r.converged ? 1 : 0) << ","
        << r.iterations << "," << r.config_hash << "\n";
  }
}

}  // namespace dyngame
