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

#include "recipebo/expert_sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>

#include "recipebo/error.hpp"

namespace recipebo {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell += c;
    }
  }
  out.push_back(cell);
  for (auto& s : out) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  }
  return out;
}

std::optional<double> parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) return std::nullopt;
  return v;
}

void check_distribution(const Distribution& d, const std::string& where) {
  if (!std::isfinite(d.a) || !std::isfinite(d.b) || !(d.b > 0.0) || (d.family == Family::kGamma && !(d.a > 0.0)))
    throw ValidationError(where + ": distribution parameters must be finite with positive scale/shape");
}

}  // namespace

double Distribution::draw(Rng& rng) const {
  if (family == Family::kGaussian) return std::normal_distribution<double>(a, b)(rng);
  return std::gamma_distribution<double>(a, b)(rng);
}

QualityModel::QualityModel(const SearchSpace& space, std::vector<ExpertRule> rules, Distribution fallback)
    : space_(space), rules_(std::move(rules)), fallback_(fallback) {
  check_distribution(fallback_, "fallback");
  for (std::size_t r = 0; r < rules_.size(); ++r) {
    const auto& rule = rules_[r];
    const std::string where = "rule " + std::to_string(r) + (rule.name.empty() ? "" : " '" + rule.name + "'");
    check_distribution(rule.distribution, where);
    if (!(rule.weight > 0.0) || !std::isfinite(rule.weight)) throw ValidationError(where + ": weight must be positive");
    std::vector<ResolvedCondition> conds;
    for (const auto& c : rule.when) {
      const auto idx = space_.index_of(c.variable);
      if (!idx) throw ValidationError(where + ": unknown variable '" + c.variable + "'");
      const auto& var = space_.variables()[*idx];
      ResolvedCondition rc;
      rc.var = *idx;
      if (var.is_categorical()) {
        if (c.labels.empty()) throw ValidationError(where + ": categorical condition on '" + c.variable + "' needs labels");
        const auto& labels = std::get<CategoricalDomain>(var.domain).labels;
        for (const auto& l : c.labels)
          if (std::find(labels.begin(), labels.end(), l) == labels.end())
            throw ValidationError(where + ": unknown label '" + l + "' for '" + c.variable + "'");
        rc.labels = c.labels;
      } else {
        if (!c.labels.empty()) throw ValidationError(where + ": numeric condition on '" + c.variable + "' has labels");
        rc.min = c.min.value_or(-INFINITY);
        rc.max = c.max.value_or(INFINITY);
        if (rc.min > rc.max) throw ValidationError(where + ": empty interval on '" + c.variable + "'");
      }
      conds.push_back(std::move(rc));
    }
    resolved_.push_back(std::move(conds));
  }
}

bool QualityModel::fires(std::size_t rule, const Point& point) const {
  for (const auto& c : resolved_.at(rule)) {
    const Value& v = point.at(c.var);
    if (const auto* s = std::get_if<std::string>(&v)) {
      if (std::find(c.labels.begin(), c.labels.end(), *s) == c.labels.end()) return false;
    } else {
      const double x = std::holds_alternative<double>(v) ? std::get<double>(v) : static_cast<double>(std::get<long long>(v));
      if (x < c.min || x > c.max) return false;
    }
  }
  return true;
}

std::vector<std::size_t> QualityModel::firing(const Point& point) const {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < rules_.size(); ++r)
    if (fires(r, point)) out.push_back(r);
  return out;
}

double sample_quality(const QualityModel& model, const Point& point, Rng& rng) {
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t r = 0; r < model.rules().size(); ++r) {
    if (!model.fires(r, point)) continue;
    const auto& rule = model.rules()[r];
    weighted += rule.weight * rule.distribution.draw(rng);
    total += rule.weight;
  }
  const double y = total > 0.0 ? weighted / total : model.fallback().draw(rng);
  return std::clamp(y, kQualityMin, kQualityMax);
}

double jury_mean(const std::vector<double>& evaluations) {
  if (evaluations.empty()) throw ValidationError("jury_mean: no evaluations");
  double sum = 0.0;
  for (double e : evaluations) sum += e;
  return sum / static_cast<double>(evaluations.size());
}

std::size_t Dataset::count(Provenance p) const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [p](const DatasetRow& r) { return r.provenance == p; }));
}

Dataset generate_dataset(const QualityModel& model, const SearchSpace& space, const DatasetOptions& options, Rng& rng) {
  if (options.jury_size < 1) throw ValidationError("jury size must be at least 1");
  std::vector<Point> grid = uniform_grid(space, options.grid_resolution);
  if (options.max_grid_points > 0 && grid.size() > options.max_grid_points) {
    // Partial Fisher-Yates, then restore grid order.
    std::vector<std::size_t> idx(grid.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < options.max_grid_points; ++i)
      std::swap(idx[i], idx[i + uniform_index(rng, idx.size() - i)]);
    idx.resize(options.max_grid_points);
    std::sort(idx.begin(), idx.end());
    std::vector<Point> kept;
    kept.reserve(idx.size());
    for (std::size_t i : idx) kept.push_back(std::move(grid[i]));
    grid = std::move(kept);
  }
  Dataset data;
  data.rows.reserve(grid.size() + options.n_sim);
  for (auto& p : grid) {
    std::vector<double> votes(options.jury_size);
    for (auto& v : votes) v = sample_quality(model, p, rng);
    const double y = jury_mean(votes);
    data.rows.push_back({std::move(p), y, Provenance::kReal});
  }
  for (auto& p : sample_uniform(space, rng, options.n_sim)) {
    const double y = sample_quality(model, p, rng);
    data.rows.push_back({std::move(p), y, Provenance::kSimulated});
  }
  return data;
}

Dataset parse_real_dataset(std::istream& in, const SearchSpace& space) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("dataset: missing header row");
  const auto header = split_csv_line(line);
  std::vector<std::optional<std::size_t>> column_var(header.size());
  std::optional<std::size_t> quality_col;
  std::vector<bool> seen(space.size(), false);
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "quality") {
      quality_col = c;
    } else if (header[c] == "provenance") {
      continue;
    } else if (const auto idx = space.index_of(header[c])) {
      if (seen[*idx]) throw ValidationError("dataset: duplicate column '" + header[c] + "'");
      seen[*idx] = true;
      column_var[c] = *idx;
    } else {
      throw ValidationError("dataset: unknown column '" + header[c] + "'");
    }
  }
  if (!quality_col) throw ValidationError("dataset: missing 'quality' column");
  for (std::size_t i = 0; i < space.size(); ++i)
    if (!seen[i]) throw ValidationError("dataset: missing column '" + space.variables()[i].name + "'");

  Dataset data;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++row;
    const std::string at = "dataset row " + std::to_string(row);
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw ValidationError(at + ": expected " + std::to_string(header.size()) + " fields, got " +
                            std::to_string(cells.size()));
    Point p(space.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!column_var[c]) continue;
      const auto& var = space.variables()[*column_var[c]];
      if (var.is_categorical()) {
        const auto& labels = std::get<CategoricalDomain>(var.domain).labels;
        if (std::find(labels.begin(), labels.end(), cells[c]) == labels.end())
          throw ValidationError(at + ": unknown label '" + cells[c] + "' for '" + var.name + "'");
        p[*column_var[c]] = cells[c];
        continue;
      }
      const auto num = parse_double(cells[c]);
      if (!num) throw ValidationError(at + ": malformed number '" + cells[c] + "' in column '" + var.name + "'");
      if (var.is_integer()) {
        if (*num != std::floor(*num))
          throw ValidationError(at + ": '" + var.name + "' must be a whole number, got '" + cells[c] + "'");
        p[*column_var[c]] = static_cast<long long>(*num);
      } else {
        p[*column_var[c]] = *num;
      }
    }
    if (auto err = validate_point(space, p)) throw ValidationError(at + ": " + *err);
    const auto q = parse_double(cells[*quality_col]);
    if (!q) throw ValidationError(at + ": malformed quality '" + cells[*quality_col] + "'");
    if (*q < kQualityMin || *q > kQualityMax)
      throw ValidationError(at + ": quality " + cells[*quality_col] + " outside [0,10]");
    data.rows.push_back({std::move(p), *q, Provenance::kReal});
  }
  return data;
}

Dataset load_real_dataset(const std::string& path, const SearchSpace& space) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset '" + path + "'");
  return parse_real_dataset(in, space);
}

void write_dataset_csv(std::ostream& out, const SearchSpace& space, const Dataset& data) {
  for (const auto& var : space.variables()) out << var.name << ',';
  out << "quality,provenance\n";
  for (const auto& row : data.rows) {
    for (const auto& v : row.point) out << format_value(v) << ',';
    out << format_value(row.quality) << ',' << (row.provenance == Provenance::kReal ? "real" : "simulated") << '\n';
  }
}

bool in_target(const TargetRegion& region, const Value& value) {
  if (const auto* s = std::get_if<std::string>(&value))
    return std::find(region.labels.begin(), region.labels.end(), *s) != region.labels.end();
  const double x = std::holds_alternative<double>(value) ? std::get<double>(value)
                                                         : static_cast<double>(std::get<long long>(value));
  return x >= region.min.value_or(-INFINITY) && x <= region.max.value_or(INFINITY);
}

Point sample_target_point(const Benchmark& bench, Rng& rng) {
  Point p = sample_uniform(bench.space, rng, 1).front();
  for (const auto& t : bench.targets) {
    const std::size_t i = *bench.space.index_of(t.variable);
    const auto& var = bench.space.variables()[i];
    if (var.is_categorical()) {
      p[i] = t.labels[uniform_index(rng, t.labels.size())];
    } else if (const auto* r = std::get_if<RealDomain>(&var.domain)) {
      const double lo = t.min.value_or(r->lower);
      const double hi = t.max.value_or(r->upper);
      p[i] = lo + uniform01(rng) * (hi - lo);
    } else {
      const auto& d = std::get<IntegerDomain>(var.domain);
      const auto lo = static_cast<long long>(std::ceil(t.min.value_or(static_cast<double>(d.lower))));
      const auto hi = static_cast<long long>(std::floor(t.max.value_or(static_cast<double>(d.upper))));
      p[i] = lo + static_cast<long long>(uniform_index(rng, static_cast<std::uint64_t>(hi - lo + 1)));
    }
  }
  return p;
}

}  // namespace recipebo
