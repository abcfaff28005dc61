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

#include "recipebo/search_space.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <set>

#include "recipebo/error.hpp"

namespace recipebo {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

long long round_half_up(double x) { return static_cast<long long>(std::floor(x + 0.5)); }

std::string describe(const Value& v) {
  return std::visit(Overloaded{[](double d) { return std::string("real ") + format_value(d); },
                               [](long long i) { return "integer " + std::to_string(i); },
                               [](const std::string& s) { return "label '" + s + "'"; }},
                    v);
}

}  // namespace

std::size_t VariableSpec::latent_width() const {
  if (const auto* c = std::get_if<CategoricalDomain>(&domain)) return c->labels.size();
  return 1;
}

VariableSpec real_var(std::string name, double lower, double upper) {
  return {std::move(name), RealDomain{lower, upper}};
}

VariableSpec integer_var(std::string name, long long lower, long long upper) {
  return {std::move(name), IntegerDomain{lower, upper}};
}

VariableSpec categorical_var(std::string name, std::vector<std::string> labels) {
  return {std::move(name), CategoricalDomain{std::move(labels)}};
}

std::optional<std::string> validate(const std::vector<VariableSpec>& variables) {
  if (variables.empty()) return "search space has no variables";
  std::set<std::string> seen;
  for (const auto& var : variables) {
    if (var.name.empty()) return "variable with empty name";
    if (!seen.insert(var.name).second) return "duplicate variable name '" + var.name + "'";
    if (const auto* r = std::get_if<RealDomain>(&var.domain)) {
      if (!std::isfinite(r->lower) || !std::isfinite(r->upper))
        return "variable '" + var.name + "': non-finite bounds";
      if (!(r->lower < r->upper)) return "variable '" + var.name + "': inverted bounds";
    } else if (const auto* i = std::get_if<IntegerDomain>(&var.domain)) {
      if (!(i->lower < i->upper)) return "variable '" + var.name + "': inverted bounds";
    } else {
      const auto& labels = std::get<CategoricalDomain>(var.domain).labels;
      std::set<std::string> distinct(labels.begin(), labels.end());
      if (distinct.size() != labels.size())
        return "variable '" + var.name + "': repeated categorical label";
      if (labels.size() < 2) return "variable '" + var.name + "': categorical needs at least 2 labels";
    }
  }
  return std::nullopt;
}

SearchSpace::SearchSpace(std::vector<VariableSpec> variables) : variables_(std::move(variables)) {
  if (auto err = validate(variables_)) throw ValidationError(*err);
  offsets_.reserve(variables_.size());
  for (const auto& var : variables_) {
    offsets_.push_back(latent_dim_);
    latent_dim_ += var.latent_width();
  }
}

SearchSpace SearchSpace::unit_cube(std::size_t dims) {
  std::vector<VariableSpec> vars;
  for (std::size_t i = 0; i < dims; ++i) vars.push_back(real_var("x" + std::to_string(i), 0.0, 1.0));
  return SearchSpace(std::move(vars));
}

std::optional<std::size_t> SearchSpace::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i)
    if (variables_[i].name == name) return i;
  return std::nullopt;
}

bool SearchSpace::all_real() const {
  return std::all_of(variables_.begin(), variables_.end(), [](const VariableSpec& v) { return v.is_real(); });
}

bool SearchSpace::operator==(const SearchSpace& other) const {
  if (variables_.size() != other.variables_.size()) return false;
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    const auto& a = variables_[i];
    const auto& b = other.variables_[i];
    if (a.name != b.name || a.domain.index() != b.domain.index()) return false;
    const bool same = std::visit(
        Overloaded{[&](const RealDomain& r) {
                     const auto& o = std::get<RealDomain>(b.domain);
                     return r.lower == o.lower && r.upper == o.upper;
                   },
                   [&](const IntegerDomain& r) {
                     const auto& o = std::get<IntegerDomain>(b.domain);
                     return r.lower == o.lower && r.upper == o.upper;
                   },
                   [&](const CategoricalDomain& c) {
                     return c.labels == std::get<CategoricalDomain>(b.domain).labels;
                   }},
        a.domain);
    if (!same) return false;
  }
  return true;
}

std::optional<std::string> validate_point(const SearchSpace& space, const Point& point) {
  if (point.size() != space.size())
    return "point has " + std::to_string(point.size()) + " values, space has " + std::to_string(space.size());
  for (std::size_t i = 0; i < point.size(); ++i) {
    const auto& var = space.variables()[i];
    const auto& value = point[i];
    if (const auto* r = std::get_if<RealDomain>(&var.domain)) {
      const auto* x = std::get_if<double>(&value);
      if (!x) return "variable '" + var.name + "': expected a real value, got " + describe(value);
      if (!std::isfinite(*x) || *x < r->lower || *x > r->upper)
        return "variable '" + var.name + "': value " + format_value(*x) + " out of bounds";
    } else if (const auto* d = std::get_if<IntegerDomain>(&var.domain)) {
      const auto* x = std::get_if<long long>(&value);
      if (!x) return "variable '" + var.name + "': expected an integer value, got " + describe(value);
      if (*x < d->lower || *x > d->upper)
        return "variable '" + var.name + "': value " + std::to_string(*x) + " out of bounds";
    } else {
      const auto& labels = std::get<CategoricalDomain>(var.domain).labels;
      const auto* x = std::get_if<std::string>(&value);
      if (!x) return "variable '" + var.name + "': expected a label, got " + describe(value);
      if (std::find(labels.begin(), labels.end(), *x) == labels.end())
        return "variable '" + var.name + "': unknown label '" + *x + "'";
    }
  }
  return std::nullopt;
}

LatentVector to_latent(const SearchSpace& space, const Point& point) {
  if (auto err = validate_point(space, point)) throw ValidationError(*err);
  LatentVector v = LatentVector::Zero(static_cast<Eigen::Index>(space.latent_dim()));
  for (std::size_t i = 0; i < point.size(); ++i) {
    const auto& var = space.variables()[i];
    const auto off = static_cast<Eigen::Index>(space.offset(i));
    if (const auto* r = std::get_if<RealDomain>(&var.domain)) {
      v[off] = (std::get<double>(point[i]) - r->lower) / (r->upper - r->lower);
    } else if (const auto* d = std::get_if<IntegerDomain>(&var.domain)) {
      v[off] = static_cast<double>(std::get<long long>(point[i]) - d->lower) /
               static_cast<double>(d->upper - d->lower);
    } else {
      const auto& labels = std::get<CategoricalDomain>(var.domain).labels;
      const auto it = std::find(labels.begin(), labels.end(), std::get<std::string>(point[i]));
      v[off + (it - labels.begin())] = 1.0;
    }
  }
  return v;
}

Point from_latent(const SearchSpace& space, const LatentVector& v) {
  if (static_cast<std::size_t>(v.size()) != space.latent_dim())
    throw ValidationError("latent vector has length " + std::to_string(v.size()) + ", expected " +
                          std::to_string(space.latent_dim()));
  Point point;
  point.reserve(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto& var = space.variables()[i];
    const auto off = static_cast<Eigen::Index>(space.offset(i));
    if (const auto* r = std::get_if<RealDomain>(&var.domain)) {
      const double t = std::clamp(v[off], 0.0, 1.0);
      point.emplace_back(std::clamp(r->lower + t * (r->upper - r->lower), r->lower, r->upper));
    } else if (const auto* d = std::get_if<IntegerDomain>(&var.domain)) {
      const double t = std::clamp(v[off], 0.0, 1.0);
      const long long k = round_half_up(static_cast<double>(d->lower) + t * static_cast<double>(d->upper - d->lower));
      point.emplace_back(std::clamp(k, d->lower, d->upper));
    } else {
      const auto& labels = std::get<CategoricalDomain>(var.domain).labels;
      std::size_t best = 0;
      for (std::size_t j = 1; j < labels.size(); ++j)
        if (v[off + static_cast<Eigen::Index>(j)] > v[off + static_cast<Eigen::Index>(best)]) best = j;
      point.emplace_back(labels[best]);
    }
  }
  return point;
}

LatentVector snap_latent(const SearchSpace& space, const LatentVector& v) {
  if (static_cast<std::size_t>(v.size()) != space.latent_dim())
    throw ValidationError("latent vector has length " + std::to_string(v.size()) + ", expected " +
                          std::to_string(space.latent_dim()));
  LatentVector out = v;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto& var = space.variables()[i];
    const auto off = static_cast<Eigen::Index>(space.offset(i));
    if (var.is_real()) {
      // Real coordinates pass through; only clamp into the cube.
      out[off] = std::clamp(v[off], 0.0, 1.0);
    } else if (const auto* d = std::get_if<IntegerDomain>(&var.domain)) {
      const double span = static_cast<double>(d->upper - d->lower);
      const long long k = std::clamp(round_half_up(static_cast<double>(d->lower) + std::clamp(v[off], 0.0, 1.0) * span),
                                     d->lower, d->upper);
      out[off] = static_cast<double>(k - d->lower) / span;
    } else {
      const auto width = static_cast<Eigen::Index>(var.latent_width());
      Eigen::Index best = 0;
      for (Eigen::Index j = 1; j < width; ++j)
        if (v[off + j] > v[off + best]) best = j;
      out.segment(off, width).setZero();
      out[off + best] = 1.0;
    }
  }
  return out;
}

std::vector<Point> sample_uniform(const SearchSpace& space, Rng& rng, std::size_t n) {
  std::vector<Point> points;
  points.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    Point p;
    p.reserve(space.size());
    for (const auto& var : space.variables()) {
      if (const auto* r = std::get_if<RealDomain>(&var.domain)) {
        p.emplace_back(std::min(r->lower + uniform01(rng) * (r->upper - r->lower), r->upper));
      } else if (const auto* d = std::get_if<IntegerDomain>(&var.domain)) {
        const auto count = static_cast<std::uint64_t>(d->upper - d->lower + 1);
        p.emplace_back(d->lower + static_cast<long long>(uniform_index(rng, count)));
      } else {
        const auto& labels = std::get<CategoricalDomain>(var.domain).labels;
        p.emplace_back(labels[uniform_index(rng, labels.size())]);
      }
    }
    points.push_back(std::move(p));
  }
  return points;
}

std::vector<Point> uniform_grid(const SearchSpace& space, const std::vector<std::size_t>& resolution) {
  if (resolution.size() != space.size())
    throw ValidationError("grid resolution has " + std::to_string(resolution.size()) + " entries, space has " +
                          std::to_string(space.size()) + " variables");
  std::vector<std::vector<Value>> axes;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto& var = space.variables()[i];
    const std::size_t m = resolution[i];
    if (m == 0) throw ValidationError("variable '" + var.name + "': grid resolution must be at least 1");
    std::vector<Value> axis;
    if (const auto* r = std::get_if<RealDomain>(&var.domain)) {
      if (m == 1) {
        axis.emplace_back(0.5 * (r->lower + r->upper));
      } else {
        for (std::size_t j = 0; j < m; ++j) {
          const double t = static_cast<double>(j) / static_cast<double>(m - 1);
          axis.emplace_back(j + 1 == m ? r->upper : r->lower + t * (r->upper - r->lower));
        }
      }
    } else if (const auto* d = std::get_if<IntegerDomain>(&var.domain)) {
      const auto distinct = static_cast<std::size_t>(d->upper - d->lower + 1);
      if (m > distinct)
        throw ValidationError("variable '" + var.name + "': grid resolution " + std::to_string(m) + " exceeds " +
                              std::to_string(distinct) + " whole values");
      const double span = static_cast<double>(d->upper - d->lower);
      if (m == 1) {
        axis.emplace_back(round_half_up(static_cast<double>(d->lower) + 0.5 * span));
      } else {
        for (std::size_t j = 0; j < m; ++j)
          axis.emplace_back(round_half_up(static_cast<double>(d->lower) +
                                          span * static_cast<double>(j) / static_cast<double>(m - 1)));
      }
    } else {
      const auto& labels = std::get<CategoricalDomain>(var.domain).labels;
      if (m != labels.size())
        throw ValidationError("variable '" + var.name + "': categorical grid resolution " + std::to_string(m) +
                              " must equal label count " + std::to_string(labels.size()));
      for (const auto& label : labels) axis.emplace_back(label);
    }
    axes.push_back(std::move(axis));
  }

  std::size_t total = 1;
  for (const auto& axis : axes) total *= axis.size();
  std::vector<Point> grid;
  grid.reserve(total);
  std::vector<std::size_t> idx(axes.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    Point p;
    p.reserve(axes.size());
    for (std::size_t i = 0; i < axes.size(); ++i) p.push_back(axes[i][idx[i]]);
    grid.push_back(std::move(p));
    for (std::size_t i = axes.size(); i-- > 0;) {
      if (++idx[i] < axes[i].size()) break;
      idx[i] = 0;
    }
  }
  return grid;
}

std::string format_value(const Value& value) {
  return std::visit(Overloaded{[](double d) {
                                 char buf[32];
                                 const auto res = std::to_chars(buf, buf + sizeof(buf), d);
                                 return std::string(buf, res.ptr);
                               },
                               [](long long i) { return std::to_string(i); },
                               [](const std::string& s) { return s; }},
                    value);
}

}  // namespace recipebo
