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

#include "recipebo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "recipebo/config.hpp"
#include "recipebo/error.hpp"

namespace recipebo {

using json = nlohmann::json;

namespace {

template <class F>
auto staged(const std::string& stage, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), stage + ": " + e.what());
  }
}

double numeric(const Value& v) {
  return std::holds_alternative<double>(v) ? std::get<double>(v) : static_cast<double>(std::get<long long>(v));
}

std::string fmt(double x) { return format_value(x); }

Curve aggregate(const std::string& method, const std::vector<std::vector<double>>& runs) {
  Curve c;
  c.method = method;
  if (runs.empty()) return c;
  const std::size_t len = runs.front().size();
  const auto n = static_cast<double>(runs.size());
  c.mean.assign(len, 0.0);
  c.std.assign(len, 0.0);
  for (std::size_t t = 0; t < len; ++t) {
    double sum = 0.0;
    for (const auto& r : runs) sum += r[t];
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& r : runs) ss += (r[t] - mean) * (r[t] - mean);
    c.mean[t] = mean;
    c.std[t] = runs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  }
  return c;
}

json histogram_bin_to_json(const HistogramBin& b) {
  json j = {{"label", b.label}, {"count", b.count}};
  if (b.lower) j["lower"] = *b.lower;
  if (b.upper) j["upper"] = *b.upper;
  return j;
}

HistogramBin histogram_bin_from_json(const json& j) {
  HistogramBin b;
  b.label = j.at("label").get<std::string>();
  b.count = j.at("count").get<std::size_t>();
  if (j.contains("lower")) b.lower = j.at("lower").get<double>();
  if (j.contains("upper")) b.upper = j.at("upper").get<double>();
  return b;
}

json curves_to_json(const std::vector<Curve>& curves) {
  json out = json::array();
  for (const auto& c : curves) out.push_back({{"method", c.method}, {"mean", c.mean}, {"std", c.std}});
  return out;
}

std::vector<Curve> curves_from_json(const json& j) {
  std::vector<Curve> out;
  for (const auto& c : j)
    out.push_back({c.at("method").get<std::string>(), c.at("mean").get<std::vector<double>>(),
                   c.at("std").get<std::vector<double>>()});
  return out;
}

std::string svg_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Minimal line chart: mean curves over iterations on a fixed [0,10] quality axis.
std::string render_svg(const std::string& title, const std::vector<const Curve*>& curves) {
  constexpr double kW = 640, kH = 400, kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  std::size_t len = 0;
  for (const auto* c : curves) len = std::max(len, c->mean.size());
  const double pw = kW - kLeft - kRight;
  const double ph = kH - kTop - kBottom;
  const auto px = [&](std::size_t t) { return kLeft + (len > 1 ? pw * static_cast<double>(t) / static_cast<double>(len - 1) : 0.0); };
  const auto py = [&](double q) { return kTop + ph * (1.0 - std::clamp(q, 0.0, 10.0) / 10.0); };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\" viewBox=\"0 0 "
     << kW << ' ' << kH << "\">\n"
     << "  <rect x=\"0\" y=\"0\" width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n"
     << "  <text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
     << xml_escape(title) << "</text>\n"
     << "  <line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw << "\" y2=\"" << kTop + ph
     << "\" stroke=\"black\"/>\n"
     << "  <line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + ph
     << "\" stroke=\"black\"/>\n";
  for (int q = 0; q <= 10; q += 2) {
    os << "  <text x=\"" << kLeft - 8 << "\" y=\"" << svg_number(py(q) + 4) << "\" text-anchor=\"end\" "
       << "font-family=\"sans-serif\" font-size=\"11\">" << q << "</text>\n";
  }
  os << "  <text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 12 << "\" text-anchor=\"middle\" "
     << "font-family=\"sans-serif\" font-size=\"12\">iteration (1.." << len << ")</text>\n"
     << "  <text x=\"16\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
     << "font-size=\"12\" transform=\"rotate(-90 16 " << kTop + ph / 2 << ")\">quality</text>\n";
  for (std::size_t k = 0; k < curves.size(); ++k) {
    const char* color = kColors[k % 4];
    os << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t t = 0; t < curves[k]->mean.size(); ++t)
      os << (t ? " " : "") << svg_number(px(t)) << ',' << svg_number(py(curves[k]->mean[t]));
    os << "\"/>\n";
    os << "  <text x=\"" << kLeft + pw - 110 << "\" y=\"" << svg_number(kTop + 16 + 16.0 * static_cast<double>(k))
       << "\" fill=\"" << color << "\" font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(curves[k]->method)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.replications < 1) throw ValidationError("replications must be at least 1");
  if (cfg.iterations < cfg.optimizer.n_init)
    throw ValidationError("iterations (" + std::to_string(cfg.iterations) + ") must be at least n_init (" +
                          std::to_string(cfg.optimizer.n_init) + ")");
  if (cfg.histogram_bins < 1) throw ValidationError("histogram_bins must be at least 1");
  if (cfg.surrogate.C_grid.empty() || cfg.surrogate.gamma_grid.empty())
    throw ValidationError("surrogate grids must be non-empty");
  OptimizationConfig opt = cfg.optimizer;
  opt.budget = cfg.iterations;
  validate_config(opt);
}

SeedPlan plan_seeds(std::uint64_t master, std::size_t replications) {
  SeedPlan plan;
  plan.master = master;
  plan.dataset = derive_seed(master, 0);
  plan.cross_validation = derive_seed(master, 1);
  plan.replications.reserve(replications);
  for (std::size_t r = 0; r < replications; ++r) plan.replications.push_back(derive_seed(master, 1000 + r));
  return plan;
}

const Curve& ExperimentReport::best_curve(const std::string& method) const {
  for (const auto& c : best_curves)
    if (c.method == method) return c;
  throw ValidationError("report has no curve for method '" + method + "'");
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress) {
  const auto start = std::chrono::steady_clock::now();
  validate_config(cfg);
  const Benchmark& bench = cfg.benchmark;
  const SearchSpace& space = bench.space;

  ExperimentReport report;
  report.benchmark = bench.name;
  report.variables = space.variables();
  report.iterations = cfg.iterations;
  report.replications = cfg.replications;
  report.seeds = plan_seeds(cfg.seed, cfg.replications);

  const Dataset data = staged("dataset", [&] {
    DatasetOptions opts = cfg.dataset;
    if (opts.grid_resolution.empty()) opts.grid_resolution = bench.grid_resolution;
    Rng rng(report.seeds.dataset);
    return generate_dataset(bench.quality_model, space, opts, rng);
  });

  const SVRModel model = staged("surrogate", [&] {
    Eigen::MatrixXd X(static_cast<Eigen::Index>(data.size()), static_cast<Eigen::Index>(space.latent_dim()));
    Eigen::VectorXd y(static_cast<Eigen::Index>(data.size()));
    for (std::size_t i = 0; i < data.size(); ++i) {
      X.row(static_cast<Eigen::Index>(i)) = to_latent(space, data.rows[i].point).transpose();
      y[static_cast<Eigen::Index>(i)] = data.rows[i].quality;
    }
    Rng rng(report.seeds.cross_validation);
    const GridSearchResult gs = grid_search_cv(X, y, cfg.surrogate.C_grid, cfg.surrogate.gamma_grid,
                                               cfg.surrogate.folds, rng, cfg.surrogate.epsilon_tube);
    SVRModel m = svr_fit(X, y, gs.best);
    auto& s = report.surrogate;
    s.hp = gs.best;
    s.cv_rmse = gs.cv_rmse;
    s.cv_mse = gs.cv_mse;
    s.dataset_rows = data.size();
    s.real_rows = data.count(Provenance::kReal);
    s.support_vectors = static_cast<std::size_t>(m.coefficients.size());
    s.converged = m.converged;
    s.table = gs.table;
    return m;
  });

  const Objective objective = [&](const Point& p) { return svr_predict(model, to_latent(space, p)); };
  report.expert_quality = staged("expert criterion", [&] { return objective(bench.expert_point); });

  struct Replication {
    Trace bo;
    Trace rs;
  };
  std::vector<Replication> reps(cfg.replications);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex mu;
  std::exception_ptr failure;
  const auto worker = [&] {
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= cfg.replications) return;
      try {
        OptimizationConfig opt = cfg.optimizer;
        opt.budget = cfg.iterations;
        opt.seed = report.seeds.replications[r];
        reps[r].bo = staged("replication " + std::to_string(r) + " bo", [&] { return bo_run(objective, space, opt); });
        reps[r].rs = staged("replication " + std::to_string(r) + " random search",
                            [&] { return random_search_run(objective, space, opt); });
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        next.store(cfg.replications);
        return;
      }
      const std::size_t d = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard lock(mu);
        progress(d, cfg.replications);
      }
    }
  };
  std::size_t threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, cfg.replications);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<std::vector<double>> bo_best, rs_best, bo_raw, rs_raw;
  for (const auto& rep : reps) {
    bo_best.push_back(rep.bo.best_curve());
    rs_best.push_back(rep.rs.best_curve());
    bo_raw.push_back(rep.bo.raw_curve());
    rs_raw.push_back(rep.rs.raw_curve());
    report.bo_final.push_back(rep.bo.entries.back().best_so_far);
    report.rs_final.push_back(rep.rs.entries.back().best_so_far);
    report.recommendations.push_back(recommend(rep.bo).point);
  }
  Curve expert;
  expert.method = "expert";
  expert.mean.assign(cfg.iterations, report.expert_quality);
  expert.std.assign(cfg.iterations, 0.0);
  report.best_curves = {aggregate("bo", bo_best), aggregate("random_search", rs_best), expert};
  report.raw_curves = {aggregate("bo", bo_raw), aggregate("random_search", rs_raw)};

  for (const auto& var : space.variables())
    report.histograms.push_back(histogram(space, report.recommendations, var.name, cfg.histogram_bins));
  report.most_voted = most_voted_recipe(space, report.recommendations, cfg.histogram_bins);
  report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

VariableHistogram histogram(const SearchSpace& space, const std::vector<Point>& recommendations,
                            const std::string& variable, std::size_t bins) {
  const auto idx = space.index_of(variable);
  if (!idx) throw ValidationError("histogram: unknown variable '" + variable + "'");
  if (recommendations.empty()) throw ValidationError("histogram: no recommendations");
  const auto& var = space.variables()[*idx];
  VariableHistogram h;
  h.variable = variable;
  if (const auto* cat = std::get_if<CategoricalDomain>(&var.domain)) {
    for (const auto& label : cat->labels) h.bins.push_back({label, {}, {}, 0});
    for (const auto& p : recommendations) {
      const auto& label = std::get<std::string>(p.at(*idx));
      const auto it = std::find(cat->labels.begin(), cat->labels.end(), label);
      if (it == cat->labels.end()) throw ValidationError("histogram: unknown label '" + label + "'");
      ++h.bins[static_cast<std::size_t>(it - cat->labels.begin())].count;
    }
    return h;
  }
  if (bins < 1) throw ValidationError("histogram: need at least one bin");
  double lo = 0.0, hi = 1.0;
  if (const auto* r = std::get_if<RealDomain>(&var.domain)) {
    lo = r->lower;
    hi = r->upper;
  } else {
    const auto& d = std::get<IntegerDomain>(var.domain);
    lo = static_cast<double>(d.lower);
    hi = static_cast<double>(d.upper);
  }
  const auto edge = [&](std::size_t k) {
    return k == bins ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(bins);
  };
  for (std::size_t k = 0; k < bins; ++k) {
    const double a = edge(k), b = edge(k + 1);
    h.bins.push_back({"[" + fmt(a) + "," + fmt(b) + (k + 1 == bins ? "]" : ")"), a, b, 0});
  }
  for (const auto& p : recommendations) {
    const double x = numeric(p.at(*idx));
    auto k = static_cast<std::size_t>(std::clamp(std::floor((x - lo) / (hi - lo) * static_cast<double>(bins)), 0.0,
                                                 static_cast<double>(bins - 1)));
    // Guard against rounding across an edge.
    while (k > 0 && x < edge(k)) --k;
    while (k + 1 < bins && x >= edge(k + 1)) ++k;
    ++h.bins[k].count;
  }
  return h;
}

std::vector<HistogramBin> most_voted_recipe(const SearchSpace& space, const std::vector<Point>& recommendations,
                                            std::size_t bins) {
  std::vector<HistogramBin> out;
  for (const auto& var : space.variables()) {
    const VariableHistogram h = histogram(space, recommendations, var.name, bins);
    const HistogramBin* best = &h.bins.front();
    for (const auto& b : h.bins)
      if (b.count > best->count) best = &b;
    out.push_back(*best);
  }
  return out;
}

double sign_test_p_value(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw ValidationError("sign test: paired samples differ in length");
  std::size_t pos = 0, neg = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) ++pos;
    if (a[i] < b[i]) ++neg;
  }
  const std::size_t n = pos + neg;
  if (n == 0) return 1.0;
  const std::size_t k = std::min(pos, neg);
  // P(X <= k) for X ~ Binomial(n, 1/2), computed in log space.
  double tail = 0.0;
  for (std::size_t i = 0; i <= k; ++i) {
    const double log_term = std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(i) + 1.0) -
                            std::lgamma(static_cast<double>(n - i) + 1.0) - static_cast<double>(n) * std::log(2.0);
    tail += std::exp(log_term);
  }
  return std::min(1.0, 2.0 * tail);
}

std::string report_to_json(const ExperimentReport& r) {
  const SearchSpace space = r.space();
  json j;
  j["format"] = "recipebo-report";
  j["version"] = 1;
  j["benchmark"] = r.benchmark;
  j["space"] = space_to_json(space);
  j["iterations"] = r.iterations;
  j["replications"] = r.replications;
  j["seeds"] = {{"master", r.seeds.master},
                {"dataset", r.seeds.dataset},
                {"cross_validation", r.seeds.cross_validation},
                {"replications", r.seeds.replications}};
  json table = json::array();
  for (const auto& c : r.surrogate.table) table.push_back({{"C", c.C}, {"gamma", c.gamma}, {"rmse", c.rmse}, {"mse", c.mse}});
  j["surrogate"] = {{"C", r.surrogate.hp.C},
                    {"gamma", r.surrogate.hp.gamma},
                    {"epsilon_tube", r.surrogate.hp.epsilon_tube},
                    {"cv_rmse", r.surrogate.cv_rmse},
                    {"cv_mse", r.surrogate.cv_mse},
                    {"dataset_rows", r.surrogate.dataset_rows},
                    {"real_rows", r.surrogate.real_rows},
                    {"support_vectors", r.surrogate.support_vectors},
                    {"converged", r.surrogate.converged},
                    {"grid", std::move(table)}};
  j["expert_quality"] = r.expert_quality;
  j["best_curves"] = curves_to_json(r.best_curves);
  j["raw_curves"] = curves_to_json(r.raw_curves);
  j["bo_final"] = r.bo_final;
  j["rs_final"] = r.rs_final;
  json recs = json::array();
  for (const auto& p : r.recommendations) recs.push_back(point_to_json(space, p));
  j["recommendations"] = std::move(recs);
  json hists = json::array();
  for (const auto& h : r.histograms) {
    json bins = json::array();
    for (const auto& b : h.bins) bins.push_back(histogram_bin_to_json(b));
    hists.push_back({{"variable", h.variable}, {"bins", std::move(bins)}});
  }
  j["histograms"] = std::move(hists);
  json mv = json::array();
  for (const auto& b : r.most_voted) mv.push_back(histogram_bin_to_json(b));
  j["most_voted"] = std::move(mv);
  return j.dump(2) + "\n";
}

ExperimentReport report_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.value("format", "") != "recipebo-report") throw ValidationError("report: missing format tag 'recipebo-report'");
    ExperimentReport r;
    const SearchSpace space = space_from_json(j.at("space"));
    r.variables = space.variables();
    r.benchmark = j.at("benchmark").get<std::string>();
    r.iterations = j.at("iterations").get<std::size_t>();
    r.replications = j.at("replications").get<std::size_t>();
    const auto& s = j.at("seeds");
    r.seeds.master = s.at("master").get<std::uint64_t>();
    r.seeds.dataset = s.at("dataset").get<std::uint64_t>();
    r.seeds.cross_validation = s.at("cross_validation").get<std::uint64_t>();
    r.seeds.replications = s.at("replications").get<std::vector<std::uint64_t>>();
    const auto& sur = j.at("surrogate");
    r.surrogate.hp = {sur.at("C").get<double>(), sur.at("gamma").get<double>(), sur.at("epsilon_tube").get<double>()};
    r.surrogate.cv_rmse = sur.at("cv_rmse").get<double>();
    r.surrogate.cv_mse = sur.at("cv_mse").get<double>();
    r.surrogate.dataset_rows = sur.at("dataset_rows").get<std::size_t>();
    r.surrogate.real_rows = sur.at("real_rows").get<std::size_t>();
    r.surrogate.support_vectors = sur.at("support_vectors").get<std::size_t>();
    r.surrogate.converged = sur.at("converged").get<bool>();
    for (const auto& c : sur.at("grid"))
      r.surrogate.table.push_back({c.at("C").get<double>(), c.at("gamma").get<double>(), c.at("rmse").get<double>(),
                                   c.at("mse").get<double>()});
    r.expert_quality = j.at("expert_quality").get<double>();
    r.best_curves = curves_from_json(j.at("best_curves"));
    r.raw_curves = curves_from_json(j.at("raw_curves"));
    r.bo_final = j.at("bo_final").get<std::vector<double>>();
    r.rs_final = j.at("rs_final").get<std::vector<double>>();
    for (const auto& p : j.at("recommendations")) r.recommendations.push_back(point_from_json(space, p));
    for (const auto& h : j.at("histograms")) {
      VariableHistogram vh;
      vh.variable = h.at("variable").get<std::string>();
      for (const auto& b : h.at("bins")) vh.bins.push_back(histogram_bin_from_json(b));
      r.histograms.push_back(std::move(vh));
    }
    for (const auto& b : j.at("most_voted")) r.most_voted.push_back(histogram_bin_from_json(b));
    return r;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("report: ") + e.what());
  }
}

void export_report(const ExperimentReport& r, const std::string& out_dir, bool record_timing) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create directory '" + out_dir + "': " + ec.message());
  const auto path = [&](const std::string& name) { return (fs::path(out_dir) / name).string(); };

  std::ostringstream curves;
  curves << "iteration,method,mean_quality,std_quality\n";
  for (const auto& c : r.best_curves)
    for (std::size_t t = 0; t < c.mean.size(); ++t)
      curves << t + 1 << ',' << c.method << ',' << fmt(c.mean[t]) << ',' << fmt(c.std[t]) << '\n';
  write_text_file(path("curves.csv"), curves.str());

  std::ostringstream raw;
  raw << "iteration,method,mean_quality,std_quality\n";
  for (const auto& c : r.raw_curves)
    for (std::size_t t = 0; t < c.mean.size(); ++t)
      raw << t + 1 << ',' << c.method << ',' << fmt(c.mean[t]) << ',' << fmt(c.std[t]) << '\n';
  write_text_file(path("raw_curves.csv"), raw.str());

  std::ostringstream hist;
  hist << "variable,bin_label,count\n";
  for (const auto& h : r.histograms)
    for (const auto& b : h.bins) hist << h.variable << ',' << b.label << ',' << b.count << '\n';
  write_text_file(path("histograms.csv"), hist.str());

  std::ostringstream recipe;
  recipe << "Most voted recipe for " << r.benchmark << " (" << r.replications << " replications, " << r.iterations
         << " iterations)\n";
  for (std::size_t i = 0; i < r.most_voted.size() && i < r.variables.size(); ++i)
    recipe << r.variables[i].name << ": " << r.most_voted[i].label << " (" << r.most_voted[i].count << " votes)\n";
  write_text_file(path("recipe.txt"), recipe.str());

  const auto final_mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
  };
  json summary;
  summary["benchmark"] = r.benchmark;
  summary["iterations"] = r.iterations;
  summary["replications"] = r.replications;
  summary["seeds"] = {{"master", r.seeds.master},
                      {"dataset", r.seeds.dataset},
                      {"cross_validation", r.seeds.cross_validation},
                      {"replications", r.seeds.replications}};
  summary["surrogate"] = {{"C", r.surrogate.hp.C},
                          {"gamma", r.surrogate.hp.gamma},
                          {"epsilon_tube", r.surrogate.hp.epsilon_tube},
                          {"cv_rmse", r.surrogate.cv_rmse},
                          {"cv_mse", r.surrogate.cv_mse},
                          {"dataset_rows", r.surrogate.dataset_rows},
                          {"real_rows", r.surrogate.real_rows}};
  summary["final_best"] = {{"bo_mean", final_mean(r.bo_final)},
                           {"random_search_mean", final_mean(r.rs_final)},
                           {"expert", r.expert_quality},
                           {"sign_test_p_bo_vs_random_search", sign_test_p_value(r.bo_final, r.rs_final)}};
  json mv = json::object();
  for (std::size_t i = 0; i < r.most_voted.size() && i < r.variables.size(); ++i)
    mv[r.variables[i].name] = r.most_voted[i].label;
  summary["most_voted"] = std::move(mv);
  if (record_timing) summary["wall_time_s"] = r.wall_time_s;
  write_text_file(path("summary.json"), summary.dump(2) + "\n");
  write_text_file(path("report.json"), report_to_json(r));

  std::vector<const Curve*> all;
  for (const auto& c : r.best_curves) {
    all.push_back(&c);
    write_text_file(path("curve_" + c.method + ".svg"), render_svg(r.benchmark + ": " + c.method, {&c}));
  }
  write_text_file(path("quality_curves.svg"), render_svg(r.benchmark + ": best observed quality", all));
}

}  // namespace recipebo
