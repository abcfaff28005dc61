// Copyright 2026 The recipebo Authors. All Rights Reserved.
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
// =============================================================================

#include "recipebo/recipebo.h"

#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "recipebo/config.hpp"
#include "recipebo/error.hpp"
#include "recipebo/expert_sim.hpp"
#include "recipebo/harness.hpp"
#include "recipebo/optimizer.hpp"
#include "recipebo/svr.hpp"

using namespace recipebo;

struct rbo_space {
  SearchSpace space;
};
struct rbo_benchmark {
  Benchmark bench;
};
struct rbo_dataset {
  SearchSpace space;
  Dataset data;
};
struct rbo_svr {
  SVRModel model;
};
struct rbo_trace {
  SearchSpace space;
  Trace trace;
  std::string recommendation_json;
};
struct rbo_experiment {
  ExperimentConfig cfg;
};
struct rbo_report {
  ExperimentReport report;
};

namespace {

thread_local std::string g_last_error;

rbo_status fail(rbo_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `f`, translating exceptions into status codes.
template <class F>
rbo_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return RBO_OK;
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::kValidation: return fail(RBO_ERR_INVALID, e.what());
      case ErrorKind::kNumerical: return fail(RBO_ERR_NUMERICAL, e.what());
      case ErrorKind::kIo: return fail(RBO_ERR_IO, e.what());
    }
    return fail(RBO_ERR_INTERNAL, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(RBO_ERR_INVALID, e.what());
  } catch (const std::bad_alloc&) {
    return fail(RBO_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RBO_ERR_INTERNAL, e.what());
  }
}

void require(bool cond, const char* what) {
  if (!cond) throw ValidationError(what);
}

OptimizationConfig to_config(const rbo_optimize_options* o, uint64_t seed) {
  rbo_optimize_options defaults;
  rbo_optimize_options_default(&defaults);
  const rbo_optimize_options& opt = o ? *o : defaults;
  OptimizationConfig cfg;
  cfg.budget = opt.budget;
  cfg.n_init = opt.n_init;
  cfg.seed = seed;
  cfg.acquisition.grid_size = opt.grid_size;
  cfg.acquisition.local_steps = opt.local_steps;
  cfg.acquisition.n_gp_samples = opt.n_gp_samples;
  cfg.hyper_mode = opt.optimize_hyperparams ? HyperparamMode::kOptimize : HyperparamMode::kSample;
  return cfg;
}

rbo_trace* make_trace(const SearchSpace& space, Trace trace) {
  auto* t = new rbo_trace{space, std::move(trace), {}};
  t->recommendation_json = point_to_json(space, recommend(t->trace).point).dump();
  return t;
}

}  // namespace

extern "C" {

const char* rbo_version(void) { return "1.0.0"; }

const char* rbo_last_error(void) { return g_last_error.c_str(); }

const char* rbo_status_name(rbo_status status) {
  switch (status) {
    case RBO_OK: return "ok";
    case RBO_ERR_INVALID: return "validation";
    case RBO_ERR_NUMERICAL: return "numerical";
    case RBO_ERR_IO: return "io";
    case RBO_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

rbo_status rbo_space_load(const char* path, rbo_space** out) {
  return guarded([&] {
    require(path && out, "rbo_space_load: null argument");
    *out = new rbo_space{space_from_json(read_json_file(path))};
  });
}

rbo_status rbo_space_from_json(const char* json_text, rbo_space** out) {
  return guarded([&] {
    require(json_text && out, "rbo_space_from_json: null argument");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError(std::string("search space config: ") + e.what());
    }
    *out = new rbo_space{space_from_json(j)};
  });
}

size_t rbo_space_variable_count(const rbo_space* space) { return space ? space->space.size() : 0; }
size_t rbo_space_latent_dim(const rbo_space* space) { return space ? space->space.latent_dim() : 0; }
void rbo_space_free(rbo_space* space) { delete space; }

rbo_status rbo_config_validate(const char* path, size_t* variable_count, size_t* latent_dim) {
  return guarded([&] {
    require(path, "rbo_config_validate: null path");
    const auto j = read_json_file(path);
    std::optional<SearchSpace> space;
    if (j.contains("rules")) {
      space = benchmark_from_json(j).space;
    } else {
      space = space_from_json(j);
    }
    if (variable_count) *variable_count = space->size();
    if (latent_dim) *latent_dim = space->latent_dim();
  });
}

rbo_status rbo_benchmark_builtin(const char* name, rbo_benchmark** out) {
  return guarded([&] {
    require(name && out, "rbo_benchmark_builtin: null argument");
    *out = new rbo_benchmark{builtin_benchmark(name)};
  });
}

rbo_status rbo_benchmark_load(const char* path, rbo_benchmark** out) {
  return guarded([&] {
    require(path && out, "rbo_benchmark_load: null argument");
    *out = new rbo_benchmark{benchmark_from_json(read_json_file(path))};
  });
}

rbo_status rbo_benchmark_save(const rbo_benchmark* bench, const char* path) {
  return guarded([&] {
    require(bench && path, "rbo_benchmark_save: null argument");
    write_text_file(path, benchmark_to_json(bench->bench).dump(2) + "\n");
  });
}

rbo_status rbo_benchmark_space(const rbo_benchmark* bench, rbo_space** out) {
  return guarded([&] {
    require(bench && out, "rbo_benchmark_space: null argument");
    *out = new rbo_space{bench->bench.space};
  });
}

void rbo_benchmark_free(rbo_benchmark* bench) { delete bench; }

void rbo_dataset_options_default(rbo_dataset_options* options) {
  if (!options) return;
  options->n_sim = 500;
  options->jury_size = 3;
  options->grid_points = 45;
}

rbo_status rbo_dataset_simulate(const rbo_benchmark* bench, const rbo_dataset_options* options, uint64_t seed,
                                rbo_dataset** out) {
  return guarded([&] {
    require(bench && out, "rbo_dataset_simulate: null argument");
    rbo_dataset_options o;
    rbo_dataset_options_default(&o);
    if (options) o = *options;
    DatasetOptions opts{bench->bench.grid_resolution, o.grid_points, o.n_sim, o.jury_size};
    Rng rng(seed);
    *out = new rbo_dataset{bench->bench.space,
                           generate_dataset(bench->bench.quality_model, bench->bench.space, opts, rng)};
  });
}

rbo_status rbo_dataset_load_real(const char* path, const rbo_space* space, rbo_dataset** out) {
  return guarded([&] {
    require(path && space && out, "rbo_dataset_load_real: null argument");
    *out = new rbo_dataset{space->space, load_real_dataset(path, space->space)};
  });
}

rbo_status rbo_dataset_save_csv(const rbo_dataset* data, const char* path) {
  return guarded([&] {
    require(data && path, "rbo_dataset_save_csv: null argument");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError(std::string("cannot open '") + path + "' for writing");
    write_dataset_csv(f, data->space, data->data);
    if (!f) throw IoError(std::string("write failed for '") + path + "'");
  });
}

size_t rbo_dataset_size(const rbo_dataset* data) { return data ? data->data.size() : 0; }
size_t rbo_dataset_real_count(const rbo_dataset* data) { return data ? data->data.count(Provenance::kReal) : 0; }
void rbo_dataset_free(rbo_dataset* data) { delete data; }

void rbo_surrogate_options_default(rbo_surrogate_options* options) {
  if (!options) return;
  *options = rbo_surrogate_options{nullptr, 0, nullptr, 0, 0.5, 10};
}

rbo_status rbo_surrogate_fit(const rbo_dataset* data, const rbo_surrogate_options* options, uint64_t seed,
                             rbo_svr** out, rbo_surrogate_summary* summary) {
  return guarded([&] {
    require(data && out, "rbo_surrogate_fit: null argument");
    rbo_surrogate_options o;
    rbo_surrogate_options_default(&o);
    if (options) o = *options;
    SurrogateConfig sc;
    if (o.C_grid) sc.C_grid.assign(o.C_grid, o.C_grid + o.C_count);
    if (o.gamma_grid) sc.gamma_grid.assign(o.gamma_grid, o.gamma_grid + o.gamma_count);
    const SearchSpace& space = data->space;
    const auto n = static_cast<Eigen::Index>(data->data.size());
    require(n > 0, "rbo_surrogate_fit: empty dataset");
    Eigen::MatrixXd X(n, static_cast<Eigen::Index>(space.latent_dim()));
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      X.row(i) = to_latent(space, data->data.rows[static_cast<std::size_t>(i)].point).transpose();
      y[i] = data->data.rows[static_cast<std::size_t>(i)].quality;
    }
    Rng rng(seed);
    const GridSearchResult gs = grid_search_cv(X, y, sc.C_grid, sc.gamma_grid, o.folds, rng, o.epsilon_tube);
    auto model = std::make_unique<rbo_svr>(rbo_svr{svr_fit(X, y, gs.best)});
    if (summary) {
      *summary = {gs.best.C, gs.best.gamma, gs.best.epsilon_tube, gs.cv_rmse, gs.cv_mse,
                  static_cast<size_t>(model->model.coefficients.size()), model->model.converged ? 1 : 0};
    }
    *out = model.release();
  });
}

rbo_status rbo_svr_save(const rbo_svr* model, const char* path) {
  return guarded([&] {
    require(model && path, "rbo_svr_save: null argument");
    save_svr(model->model, path);
  });
}

rbo_status rbo_svr_load(const char* path, rbo_svr** out) {
  return guarded([&] {
    require(path && out, "rbo_svr_load: null argument");
    *out = new rbo_svr{load_svr(path)};
  });
}

rbo_status rbo_svr_predict(const rbo_svr* model, const double* latent, size_t length, double* out) {
  return guarded([&] {
    require(model && latent && out, "rbo_svr_predict: null argument");
    const Eigen::Map<const Eigen::VectorXd> x(latent, static_cast<Eigen::Index>(length));
    *out = svr_predict(model->model, x);
  });
}

void rbo_svr_free(rbo_svr* model) { delete model; }

void rbo_optimize_options_default(rbo_optimize_options* options) {
  if (!options) return;
  *options = rbo_optimize_options{50, 3, 1000, 50, 10, 0};
}

rbo_status rbo_optimize_svr(const rbo_space* space, const rbo_svr* model, const rbo_optimize_options* options,
                            rbo_method method, uint64_t seed, rbo_trace** out) {
  return guarded([&] {
    require(space && model && out, "rbo_optimize_svr: null argument");
    const SearchSpace& s = space->space;
    require(model->model.coefficients.size() == 0 || model->model.dim() == s.latent_dim(),
            "rbo_optimize_svr: model dimension does not match the space's latent dimension");
    const Objective objective = [&](const Point& p) { return svr_predict(model->model, to_latent(s, p)); };
    const OptimizationConfig cfg = to_config(options, seed);
    Trace trace = method == RBO_METHOD_BO ? bo_run(objective, s, cfg) : random_search_run(objective, s, cfg);
    *out = make_trace(s, std::move(trace));
  });
}

rbo_status rbo_optimize_fn(const rbo_space* space, rbo_objective_fn objective, void* user,
                           const rbo_optimize_options* options, rbo_method method, uint64_t seed, rbo_trace** out) {
  return guarded([&] {
    require(space && objective && out, "rbo_optimize_fn: null argument");
    const SearchSpace& s = space->space;
    const Objective fn = [&](const Point& p) {
      const LatentVector x = to_latent(s, p);
      return objective(x.data(), static_cast<size_t>(x.size()), user);
    };
    const OptimizationConfig cfg = to_config(options, seed);
    Trace trace = method == RBO_METHOD_BO ? bo_run(fn, s, cfg) : random_search_run(fn, s, cfg);
    *out = make_trace(s, std::move(trace));
  });
}

size_t rbo_trace_size(const rbo_trace* trace) { return trace ? trace->trace.size() : 0; }

rbo_status rbo_trace_best(const rbo_trace* trace, double* quality, size_t* iteration) {
  return guarded([&] {
    require(trace, "rbo_trace_best: null trace");
    const Recommendation r = recommend(trace->trace);
    if (quality) *quality = r.quality;
    if (iteration) *iteration = r.iteration;
  });
}

const char* rbo_trace_recommendation_json(const rbo_trace* trace) {
  return trace ? trace->recommendation_json.c_str() : "";
}

rbo_status rbo_trace_save_csv(const rbo_trace* trace, const char* path) {
  return guarded([&] {
    require(trace && path, "rbo_trace_save_csv: null argument");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError(std::string("cannot open '") + path + "' for writing");
    write_trace_csv(f, trace->space, trace->trace);
    if (!f) throw IoError(std::string("write failed for '") + path + "'");
  });
}

void rbo_trace_free(rbo_trace* trace) { delete trace; }

rbo_status rbo_experiment_default(const char* benchmark_name, rbo_experiment** out) {
  return guarded([&] {
    require(benchmark_name && out, "rbo_experiment_default: null argument");
    ExperimentConfig cfg;
    cfg.benchmark = builtin_benchmark(benchmark_name);
    *out = new rbo_experiment{std::move(cfg)};
  });
}

rbo_status rbo_experiment_load(const char* path, rbo_experiment** out) {
  return guarded([&] {
    require(path && out, "rbo_experiment_load: null argument");
    const std::string base = std::filesystem::path(path).parent_path().string();
    *out = new rbo_experiment{experiment_from_json(read_json_file(path), base.empty() ? "." : base)};
  });
}

rbo_status rbo_experiment_set_benchmark(rbo_experiment* exp, const rbo_benchmark* bench) {
  return guarded([&] {
    require(exp && bench, "rbo_experiment_set_benchmark: null argument");
    exp->cfg.benchmark = bench->bench;
  });
}

rbo_status rbo_experiment_set_seed(rbo_experiment* exp, uint64_t seed) {
  return guarded([&] {
    require(exp, "rbo_experiment_set_seed: null experiment");
    exp->cfg.seed = seed;
  });
}

rbo_status rbo_experiment_set_replications(rbo_experiment* exp, size_t replications) {
  return guarded([&] {
    require(exp, "rbo_experiment_set_replications: null experiment");
    require(replications >= 1, "replications must be at least 1");
    exp->cfg.replications = replications;
  });
}

rbo_status rbo_experiment_set_iterations(rbo_experiment* exp, size_t iterations) {
  return guarded([&] {
    require(exp, "rbo_experiment_set_iterations: null experiment");
    require(iterations >= exp->cfg.optimizer.n_init, "iterations must be at least n_init");
    exp->cfg.iterations = iterations;
  });
}

rbo_status rbo_experiment_set_threads(rbo_experiment* exp, size_t threads) {
  return guarded([&] {
    require(exp, "rbo_experiment_set_threads: null experiment");
    exp->cfg.threads = threads;
  });
}

rbo_status rbo_experiment_run(const rbo_experiment* exp, rbo_progress_fn progress, void* user, rbo_report** out) {
  return guarded([&] {
    require(exp && out, "rbo_experiment_run: null argument");
    ProgressFn fn;
    if (progress) fn = [&](std::size_t done, std::size_t total) { progress(done, total, user); };
    *out = new rbo_report{run_experiment(exp->cfg, fn)};
  });
}

void rbo_experiment_free(rbo_experiment* exp) { delete exp; }

rbo_status rbo_report_export(const rbo_report* report, const char* out_dir, int record_timing) {
  return guarded([&] {
    require(report && out_dir, "rbo_report_export: null argument");
    export_report(report->report, out_dir, record_timing != 0);
  });
}

rbo_status rbo_report_load(const char* path, rbo_report** out) {
  return guarded([&] {
    require(path && out, "rbo_report_load: null argument");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(std::string("cannot open '") + path + "'");
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    *out = new rbo_report{report_from_json(text)};
  });
}

rbo_status rbo_report_final_means(const rbo_report* report, double* bo, double* random_search, double* expert) {
  return guarded([&] {
    require(report, "rbo_report_final_means: null report");
    const auto& r = report->report;
    const auto mean = [](const std::vector<double>& v) {
      double s = 0.0;
      for (double x : v) s += x;
      return v.empty() ? 0.0 : s / static_cast<double>(v.size());
    };
    if (bo) *bo = mean(r.bo_final);
    if (random_search) *random_search = mean(r.rs_final);
    if (expert) *expert = r.expert_quality;
  });
}

double rbo_report_wall_time(const rbo_report* report) { return report ? report->report.wall_time_s : 0.0; }

void rbo_report_free(rbo_report* report) { delete report; }

}  // extern "C"
