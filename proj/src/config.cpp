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

#include "recipebo/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "recipebo/error.hpp"

namespace recipebo {

using json = nlohmann::json;

namespace {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

Distribution distribution_from_json(const json& j) {
  const auto family = j.at("family").get<std::string>();
  if (family == "gaussian") return Distribution::gaussian(j.at("mean").get<double>(), j.at("sd").get<double>());
  if (family == "gamma") return Distribution::gamma(j.at("shape").get<double>(), j.at("scale").get<double>());
  throw ValidationError("unknown distribution family '" + family + "' (expected gaussian or gamma)");
}

json distribution_to_json(const Distribution& d) {
  if (d.family == Family::kGaussian) return {{"family", "gaussian"}, {"mean", d.a}, {"sd", d.b}};
  return {{"family", "gamma"}, {"shape", d.a}, {"scale", d.b}};
}

json interval_to_json(const std::string& var, const std::optional<double>& lo, const std::optional<double>& hi,
                      const std::vector<std::string>& labels) {
  json c = {{"variable", var}};
  if (!labels.empty()) {
    c["labels"] = labels;
  } else {
    if (lo) c["min"] = *lo;
    if (hi) c["max"] = *hi;
  }
  return c;
}

template <class Target>
Target interval_from_json(const json& j) {
  Target t;
  t.variable = j.at("variable").get<std::string>();
  if (j.contains("min")) t.min = j.at("min").get<double>();
  if (j.contains("max")) t.max = j.at("max").get<double>();
  if (j.contains("labels")) t.labels = j.at("labels").get<std::vector<std::string>>();
  return t;
}

// Wraps nlohmann parse/type errors into ValidationError with context.
template <class F>
auto with_context(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ValidationError(what + ": " + e.what());
  }
}

}  // namespace

SearchSpace space_from_json(const json& j) {
  return with_context("search space config", [&] {
    std::vector<VariableSpec> vars;
    for (const auto& v : j.at("variables")) {
      const auto name = v.at("name").get<std::string>();
      const auto kind = v.at("kind").get<std::string>();
      if (kind == "real") {
        vars.push_back(real_var(name, v.at("lower").get<double>(), v.at("upper").get<double>()));
      } else if (kind == "integer") {
        const double lo = v.at("lower").get<double>();
        const double hi = v.at("upper").get<double>();
        if (lo != std::floor(lo) || hi != std::floor(hi))
          throw ValidationError("variable '" + name + "': integer bounds must be whole numbers");
        vars.push_back(integer_var(name, static_cast<long long>(lo), static_cast<long long>(hi)));
      } else if (kind == "categorical") {
        vars.push_back(categorical_var(name, v.at("labels").get<std::vector<std::string>>()));
      } else {
        throw ValidationError("variable '" + name + "': unknown kind '" + kind + "'");
      }
    }
    return SearchSpace(std::move(vars));
  });
}

json space_to_json(const SearchSpace& space) {
  json vars = json::array();
  for (const auto& var : space.variables()) {
    json v = {{"name", var.name}};
    if (const auto* r = std::get_if<RealDomain>(&var.domain)) {
      v["kind"] = "real";
      v["lower"] = r->lower;
      v["upper"] = r->upper;
    } else if (const auto* i = std::get_if<IntegerDomain>(&var.domain)) {
      v["kind"] = "integer";
      v["lower"] = i->lower;
      v["upper"] = i->upper;
    } else {
      v["kind"] = "categorical";
      v["labels"] = std::get<CategoricalDomain>(var.domain).labels;
    }
    vars.push_back(std::move(v));
  }
  return {{"variables", std::move(vars)}};
}

Point point_from_json(const SearchSpace& space, const json& j) {
  return with_context("point", [&] {
    Point p;
    for (const auto& var : space.variables()) {
      const auto& v = j.at(var.name);
      if (var.is_real()) {
        p.emplace_back(v.get<double>());
      } else if (var.is_integer()) {
        const double x = v.get<double>();
        if (x != std::floor(x)) throw ValidationError("point: '" + var.name + "' must be a whole number");
        p.emplace_back(static_cast<long long>(x));
      } else {
        p.emplace_back(v.get<std::string>());
      }
    }
    if (j.size() != space.size()) throw ValidationError("point: unexpected extra fields");
    if (auto err = validate_point(space, p)) throw ValidationError("point: " + *err);
    return p;
  });
}

json point_to_json(const SearchSpace& space, const Point& p) {
  json j = json::object();
  for (std::size_t i = 0; i < space.size(); ++i)
    std::visit([&](const auto& v) { j[space.variables()[i].name] = v; }, p[i]);
  return j;
}

Benchmark benchmark_from_json(const json& j) {
  return with_context("benchmark config", [&] {
    SearchSpace space = space_from_json(j);
    std::vector<ExpertRule> rules;
    for (const auto& r : j.at("rules")) {
      ExpertRule rule;
      rule.name = get_or<std::string>(r, "name", "");
      for (const auto& c : r.at("when")) rule.when.push_back(interval_from_json<Condition>(c));
      rule.distribution = distribution_from_json(r.at("distribution"));
      rule.weight = get_or<double>(r, "weight", 1.0);
      rules.push_back(std::move(rule));
    }
    const Distribution fallback =
        j.contains("fallback") ? distribution_from_json(j.at("fallback")) : Distribution::gaussian(5.0, 2.0);
    QualityModel model(space, std::move(rules), fallback);
    Point expert = point_from_json(space, j.at("expert_point"));
    std::vector<TargetRegion> targets;
    if (j.contains("targets"))
      for (const auto& t : j.at("targets")) {
        auto region = interval_from_json<TargetRegion>(t);
        if (!space.index_of(region.variable))
          throw ValidationError("target references unknown variable '" + region.variable + "'");
        targets.push_back(std::move(region));
      }
    std::vector<std::size_t> res = get_or<std::vector<std::size_t>>(j, "grid_resolution", {});
    if (res.empty()) {
      for (const auto& var : space.variables()) res.push_back(var.is_categorical() ? var.latent_width() : 3);
    }
    return Benchmark{get_or<std::string>(j, "name", "custom"), std::move(space), std::move(model), std::move(expert),
                     std::move(targets), std::move(res)};
  });
}

json benchmark_to_json(const Benchmark& bench) {
  json j = space_to_json(bench.space);
  j["name"] = bench.name;
  json rules = json::array();
  for (const auto& rule : bench.quality_model.rules()) {
    json when = json::array();
    for (const auto& c : rule.when) when.push_back(interval_to_json(c.variable, c.min, c.max, c.labels));
    rules.push_back({{"name", rule.name},
                     {"when", std::move(when)},
                     {"distribution", distribution_to_json(rule.distribution)},
                     {"weight", rule.weight}});
  }
  j["rules"] = std::move(rules);
  j["fallback"] = distribution_to_json(bench.quality_model.fallback());
  j["expert_point"] = point_to_json(bench.space, bench.expert_point);
  json targets = json::array();
  for (const auto& t : bench.targets) targets.push_back(interval_to_json(t.variable, t.min, t.max, t.labels));
  j["targets"] = std::move(targets);
  j["grid_resolution"] = bench.grid_resolution;
  return j;
}

ExperimentConfig experiment_from_json(const json& j, const std::string& base_dir) {
  return with_context("experiment config", [&] {
    ExperimentConfig cfg;
    if (j.contains("benchmark_file")) {
      const std::filesystem::path p = std::filesystem::path(base_dir) / j.at("benchmark_file").get<std::string>();
      cfg.benchmark = benchmark_from_json(read_json_file(p.string()));
    } else {
      cfg.benchmark = builtin_benchmark(get_or<std::string>(j, "benchmark", "hotdog"));
    }
    cfg.replications = get_or(j, "replications", cfg.replications);
    cfg.iterations = get_or(j, "iterations", cfg.iterations);
    cfg.seed = get_or(j, "seed", cfg.seed);
    cfg.histogram_bins = get_or(j, "histogram_bins", cfg.histogram_bins);
    cfg.threads = get_or(j, "threads", cfg.threads);
    if (j.contains("optimizer")) {
      const auto& o = j.at("optimizer");
      auto& opt = cfg.optimizer;
      opt.n_init = get_or(o, "n_init", opt.n_init);
      opt.acquisition.grid_size = get_or(o, "grid_size", opt.acquisition.grid_size);
      opt.acquisition.local_steps = get_or(o, "local_steps", opt.acquisition.local_steps);
      opt.acquisition.n_gp_samples = get_or(o, "n_gp_samples", opt.acquisition.n_gp_samples);
      const auto mode = get_or<std::string>(o, "hyper_mode", "sample");
      if (mode == "sample") {
        opt.hyper_mode = HyperparamMode::kSample;
      } else if (mode == "optimize") {
        opt.hyper_mode = HyperparamMode::kOptimize;
      } else {
        throw ValidationError("optimizer.hyper_mode must be 'sample' or 'optimize'");
      }
      opt.ml_restarts = get_or(o, "ml_restarts", opt.ml_restarts);
      opt.sampler.burn_in = get_or(o, "burn_in", opt.sampler.burn_in);
      opt.warm_burn_in = get_or(o, "warm_burn_in", opt.warm_burn_in);
      if (o.contains("hyper_bounds")) {
        const auto& b = o.at("hyper_bounds");
        auto& hb = opt.bounds;
        hb.amplitude_min_factor = get_or(b, "amplitude_min_factor", hb.amplitude_min_factor);
        hb.amplitude_max_factor = get_or(b, "amplitude_max_factor", hb.amplitude_max_factor);
        hb.lengthscale_min = get_or(b, "lengthscale_min", hb.lengthscale_min);
        hb.lengthscale_max = get_or(b, "lengthscale_max", hb.lengthscale_max);
        hb.noise_min = get_or(b, "noise_min", hb.noise_min);
        hb.noise_max_factor = get_or(b, "noise_max_factor", hb.noise_max_factor);
      }
    }
    if (j.contains("surrogate")) {
      const auto& s = j.at("surrogate");
      cfg.surrogate.C_grid = get_or(s, "C_grid", cfg.surrogate.C_grid);
      cfg.surrogate.gamma_grid = get_or(s, "gamma_grid", cfg.surrogate.gamma_grid);
      cfg.surrogate.epsilon_tube = get_or(s, "epsilon_tube", cfg.surrogate.epsilon_tube);
      cfg.surrogate.folds = get_or(s, "folds", cfg.surrogate.folds);
    }
    if (j.contains("dataset")) {
      const auto& d = j.at("dataset");
      cfg.dataset.n_sim = get_or(d, "n_sim", cfg.dataset.n_sim);
      cfg.dataset.jury_size = get_or(d, "jury_size", cfg.dataset.jury_size);
      cfg.dataset.max_grid_points = get_or(d, "grid_points", cfg.dataset.max_grid_points);
      cfg.dataset.grid_resolution = get_or(d, "grid_resolution", cfg.dataset.grid_resolution);
    }
    validate_config(cfg);
    return cfg;
  });
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("'" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace recipebo
