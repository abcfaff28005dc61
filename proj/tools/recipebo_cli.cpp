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

// recipebo command-line tool. Talks to the library only through recipebo.h.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "recipebo/recipebo.h"

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

// Carries a library status out of a subcommand.
struct Failure {
  rbo_status status;
  std::string message;
};

void check(rbo_status s) {
  if (s != RBO_OK) throw Failure{s, rbo_last_error()};
}

void usage_error(const std::string& message) { throw Failure{RBO_ERR_INVALID, message}; }

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Space = std::unique_ptr<rbo_space, Deleter<rbo_space, rbo_space_free>>;
using Bench = std::unique_ptr<rbo_benchmark, Deleter<rbo_benchmark, rbo_benchmark_free>>;
using Data = std::unique_ptr<rbo_dataset, Deleter<rbo_dataset, rbo_dataset_free>>;
using Model = std::unique_ptr<rbo_svr, Deleter<rbo_svr, rbo_svr_free>>;
using TraceH = std::unique_ptr<rbo_trace, Deleter<rbo_trace, rbo_trace_free>>;
using Exp = std::unique_ptr<rbo_experiment, Deleter<rbo_experiment, rbo_experiment_free>>;
using Report = std::unique_ptr<rbo_report, Deleter<rbo_report, rbo_report_free>>;

struct Flags {
  std::string config;
  std::string benchmark;
  std::string out;
  std::string model;
  std::string data;
  std::string method = "bo";
  std::uint64_t seed = kDefaultSeed;
  std::size_t iterations = 0;
  std::size_t replications = 0;
  std::size_t threads = 0;
  bool record_timing = false;
};

std::string in_out(const Flags& f, const std::string& name) { return (std::filesystem::path(f.out) / name).string(); }

void make_out_dir(const Flags& f) {
  std::error_code ec;
  std::filesystem::create_directories(f.out, ec);
  if (ec) throw Failure{RBO_ERR_IO, "cannot create output directory '" + f.out + "': " + ec.message()};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream o(path, std::ios::binary);
  o << text;
  if (!o) throw Failure{RBO_ERR_IO, "cannot write '" + path + "'"};
}

// --benchmark selects a built-in, --config a benchmark file; exactly one.
Bench load_benchmark(const Flags& f) {
  if (f.benchmark.empty() == f.config.empty()) usage_error("give exactly one of --benchmark or --config");
  rbo_benchmark* b = nullptr;
  if (!f.benchmark.empty()) {
    check(rbo_benchmark_builtin(f.benchmark.c_str(), &b));
  } else {
    check(rbo_benchmark_load(f.config.c_str(), &b));
  }
  return Bench(b);
}

void cmd_space_validate(const Flags& f) {
  size_t nvars = 0, latent = 0;
  check(rbo_config_validate(f.config.c_str(), &nvars, &latent));
  std::cout << nlohmann::json{{"valid", true}, {"variables", nvars}, {"latent_dim", latent}}.dump() << "\n";
}

Data simulate(const rbo_benchmark* b, std::uint64_t seed) {
  rbo_dataset* d = nullptr;
  check(rbo_dataset_simulate(b, nullptr, seed, &d));
  return Data(d);
}

void cmd_simulate(const Flags& f) {
  Bench b = load_benchmark(f);
  Data d = simulate(b.get(), f.seed);
  make_out_dir(f);
  check(rbo_dataset_save_csv(d.get(), in_out(f, "dataset.csv").c_str()));
  std::cerr << "simulated " << rbo_dataset_size(d.get()) << " rows (" << rbo_dataset_real_count(d.get())
            << " grid)\n";
}

void cmd_surrogate_fit(const Flags& f) {
  Bench b = load_benchmark(f);
  Data d;
  if (!f.data.empty()) {
    rbo_space* s = nullptr;
    check(rbo_benchmark_space(b.get(), &s));
    Space space(s);
    rbo_dataset* raw = nullptr;
    check(rbo_dataset_load_real(f.data.c_str(), space.get(), &raw));
    d.reset(raw);
  } else {
    d = simulate(b.get(), f.seed);
  }
  rbo_svr* m = nullptr;
  rbo_surrogate_summary sum{};
  check(rbo_surrogate_fit(d.get(), nullptr, f.seed, &m, &sum));
  Model model(m);
  make_out_dir(f);
  check(rbo_svr_save(model.get(), in_out(f, "model.json").c_str()));
  const nlohmann::json j{{"C", sum.C},
                         {"gamma", sum.gamma},
                         {"epsilon_tube", sum.epsilon_tube},
                         {"cv_rmse", sum.cv_rmse},
                         {"cv_mse", sum.cv_mse},
                         {"support_vectors", sum.support_vectors},
                         {"converged", sum.converged != 0},
                         {"rows", rbo_dataset_size(d.get())},
                         {"seed", f.seed}};
  write_file(in_out(f, "surrogate.json"), j.dump(2) + "\n");
  std::cout << j.dump() << "\n";
}

void cmd_optimize(const Flags& f) {
  if (f.method != "bo" && f.method != "random") usage_error("--method must be 'bo' or 'random'");
  Bench b = load_benchmark(f);
  rbo_space* s = nullptr;
  check(rbo_benchmark_space(b.get(), &s));
  Space space(s);
  Model model;
  rbo_svr* m = nullptr;
  if (!f.model.empty()) {
    check(rbo_svr_load(f.model.c_str(), &m));
  } else {
    Data d = simulate(b.get(), f.seed);
    check(rbo_surrogate_fit(d.get(), nullptr, f.seed, &m, nullptr));
  }
  model.reset(m);
  rbo_optimize_options opts;
  rbo_optimize_options_default(&opts);
  if (f.iterations) opts.budget = f.iterations;
  rbo_trace* t = nullptr;
  check(rbo_optimize_svr(space.get(), model.get(), &opts, f.method == "bo" ? RBO_METHOD_BO : RBO_METHOD_RANDOM_SEARCH,
                         f.seed, &t));
  TraceH trace(t);
  double best = 0.0;
  size_t at = 0;
  check(rbo_trace_best(trace.get(), &best, &at));
  make_out_dir(f);
  check(rbo_trace_save_csv(trace.get(), in_out(f, "trace.csv").c_str()));
  const nlohmann::json j{{"quality", best},
                         {"iteration", at},
                         {"recipe", nlohmann::json::parse(rbo_trace_recommendation_json(trace.get()))},
                         {"method", f.method},
                         {"seed", f.seed}};
  write_file(in_out(f, "recommendation.json"), j.dump(2) + "\n");
  std::cout << j.dump() << "\n";
}

void progress_line(size_t done, size_t total, void*) {
  std::fprintf(stderr, "replication %zu/%zu\n", done, total);
  std::fflush(stderr);
}

void cmd_benchmark(const Flags& f, bool seed_given) {
  rbo_experiment* e = nullptr;
  if (!f.config.empty()) {
    check(rbo_experiment_load(f.config.c_str(), &e));
    Exp held(e);
    if (!f.benchmark.empty()) {
      Bench b = load_benchmark(Flags{.benchmark = f.benchmark});
      check(rbo_experiment_set_benchmark(e, b.get()));
    }
    held.release();
  } else {
    if (f.benchmark.empty()) usage_error("benchmark needs --benchmark or --config");
    check(rbo_experiment_default(f.benchmark.c_str(), &e));
  }
  Exp exp(e);
  if (seed_given || f.config.empty()) check(rbo_experiment_set_seed(e, f.seed));
  if (f.replications) check(rbo_experiment_set_replications(e, f.replications));
  if (f.iterations) check(rbo_experiment_set_iterations(e, f.iterations));
  if (f.threads) check(rbo_experiment_set_threads(e, f.threads));
  rbo_report* r = nullptr;
  check(rbo_experiment_run(e, progress_line, nullptr, &r));
  Report report(r);
  make_out_dir(f);
  check(rbo_report_export(report.get(), f.out.c_str(), f.record_timing ? 1 : 0));
  double bo = 0, rs = 0, expert = 0;
  check(rbo_report_final_means(report.get(), &bo, &rs, &expert));
  std::cerr << "wall time " << rbo_report_wall_time(report.get()) << " s\n";
  std::cout << nlohmann::json{{"bo_final", bo}, {"random_search_final", rs}, {"expert", expert}, {"out", f.out}}.dump()
            << "\n";
}

void cmd_report(const Flags& f) {
  rbo_report* r = nullptr;
  check(rbo_report_load(f.config.c_str(), &r));
  Report report(r);
  make_out_dir(f);
  check(rbo_report_export(report.get(), f.out.c_str(), f.record_timing ? 1 : 0));
}

int emit_error(rbo_status status, const std::string& message) {
  std::cerr << nlohmann::json{{"error", rbo_status_name(status)}, {"message", message}}.dump() << "\n";
  return status == RBO_ERR_INVALID ? 1 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"recipebo: Bayesian optimization of recipes against a learned quality surrogate"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", rbo_version());
  Flags f;
  bool seed_given = false;

  auto add_seed = [&](CLI::App* c) {
    c->add_option("--seed", f.seed, "master seed")->default_val(kDefaultSeed)->each([&](const std::string&) {
      seed_given = true;
    });
  };

  auto* sv = app.add_subcommand("space-validate", "validate a search-space or benchmark config");
  sv->add_option("--config", f.config, "config file")->required()->check(CLI::ExistingFile);

  auto* sim = app.add_subcommand("simulate", "generate the simulated expert dataset");
  sim->add_option("--benchmark", f.benchmark)->check(CLI::IsMember({"hotdog", "cesar"}));
  sim->add_option("--config", f.config, "benchmark config file")->check(CLI::ExistingFile);
  sim->add_option("--out", f.out)->required();
  add_seed(sim);

  auto* sf = app.add_subcommand("surrogate-fit", "cross-validate and fit the SVR surrogate");
  sf->add_option("--benchmark", f.benchmark)->check(CLI::IsMember({"hotdog", "cesar"}));
  sf->add_option("--config", f.config, "benchmark config file")->check(CLI::ExistingFile);
  sf->add_option("--data", f.data, "real dataset CSV (default: simulate)")->check(CLI::ExistingFile);
  sf->add_option("--out", f.out)->required();
  add_seed(sf);

  auto* opt = app.add_subcommand("optimize", "single optimization run against the surrogate");
  opt->add_option("--config", f.config, "benchmark config file")->required()->check(CLI::ExistingFile);
  opt->add_option("--model", f.model, "saved surrogate (default: fit one)")->check(CLI::ExistingFile);
  opt->add_option("--method", f.method, "bo or random")->default_val("bo");
  opt->add_option("--iterations", f.iterations, "evaluation budget")->check(CLI::PositiveNumber);
  opt->add_option("--out", f.out)->required();
  add_seed(opt);

  auto* bm = app.add_subcommand("benchmark", "full experiment: BO vs random search vs expert");
  bm->add_option("--benchmark", f.benchmark)->check(CLI::IsMember({"hotdog", "cesar"}));
  bm->add_option("--config", f.config, "experiment config file")->check(CLI::ExistingFile);
  bm->add_option("--replications", f.replications)->check(CLI::PositiveNumber);
  bm->add_option("--iterations", f.iterations)->check(CLI::PositiveNumber);
  bm->add_option("--threads", f.threads, "worker threads (0: hardware)");
  bm->add_flag("--record-timing", f.record_timing, "write wall time into summary.json");
  bm->add_option("--out", f.out)->required();
  add_seed(bm);

  auto* rp = app.add_subcommand("report", "re-export a saved report.json");
  rp->add_option("--config", f.config, "report.json")->required()->check(CLI::ExistingFile);
  rp->add_option("--out", f.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << app.help();
    emit_error(RBO_ERR_INVALID, e.what());
    return 1;
  }

  try {
    if (*sv) cmd_space_validate(f);
    if (*sim) cmd_simulate(f);
    if (*sf) cmd_surrogate_fit(f);
    if (*opt) cmd_optimize(f);
    if (*bm) cmd_benchmark(f, seed_given);
    if (*rp) cmd_report(f);
  } catch (const Failure& e) {
    if (e.status == RBO_ERR_INVALID && e.message.rfind("give exactly", 0) == 0) std::cerr << app.help();
    return emit_error(e.status, e.message);
  } catch (const std::exception& e) {
    return emit_error(RBO_ERR_INTERNAL, e.what());
  }
  return 0;
}
