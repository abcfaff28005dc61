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

#include "recipebo/svr.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "recipebo/error.hpp"

namespace recipebo {

namespace {

using json = nlohmann::json;

constexpr double kTau = 1e-12;

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& X) {
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd D(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    D(i, i) = 0.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double d = (X.row(i) - X.row(j)).squaredNorm();
      D(i, j) = d;
      D(j, i) = d;
    }
  }
  return D;
}

double dual_objective(const Eigen::VectorXd& beta, const Eigen::VectorXd& G, const Eigen::VectorXd& p) {
  return 0.5 * beta.dot(G + p);
}

}  // namespace

bool SVRHyperparams::valid() const {
  return std::isfinite(C) && C > 0.0 && std::isfinite(gamma) && gamma > 0.0 && std::isfinite(epsilon_tube) &&
         epsilon_tube > 0.0;
}

SvrDualSolution solve_svr_dual(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, const SVRHyperparams& hp,
                               const SmoOptions& options) {
  if (!hp.valid()) throw ValidationError("SVR hyperparameters must be finite and strictly positive");
  const Eigen::Index n = y.size();
  if (n == 0) throw ValidationError("svr: no training data");
  if (K.rows() != n || K.cols() != n) throw ValidationError("svr: Gram matrix shape does not match targets");
  if (!y.allFinite()) throw ValidationError("svr: non-finite target");

  const Eigen::Index l = 2 * n;
  const double C = hp.C;
  // Variable t < n is alpha_t (sign +1), t >= n is alpha*_{t-n} (sign -1).
  const auto sign = [n](Eigen::Index t) { return t < n ? 1.0 : -1.0; };
  const auto q = [&](Eigen::Index t, Eigen::Index u) { return sign(t) * sign(u) * K(t % n, u % n); };

  Eigen::VectorXd p(l);
  p.head(n) = hp.epsilon_tube - y.array();
  p.tail(n) = hp.epsilon_tube + y.array();
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(l);
  Eigen::VectorXd G = p;

  const std::size_t cap = options.max_iterations ? options.max_iterations
                                                 : std::max<std::size_t>(10'000'000, 100 * static_cast<std::size_t>(l));
  SvrDualSolution sol;
  if (options.record_objective) sol.objective_history.push_back(0.0);

  std::size_t iter = 0;
  for (;; ++iter) {
    // Maximal violating pair.
    double gmax = -std::numeric_limits<double>::infinity();
    double gmax2 = -std::numeric_limits<double>::infinity();
    Eigen::Index i = -1, j = -1;
    for (Eigen::Index t = 0; t < l; ++t) {
      const double s = sign(t);
      const bool up = s > 0 ? beta[t] < C : beta[t] > 0.0;
      const bool low = s > 0 ? beta[t] > 0.0 : beta[t] < C;
      if (up && -s * G[t] >= gmax) {
        gmax = -s * G[t];
        i = t;
      }
      if (low && s * G[t] >= gmax2) {
        gmax2 = s * G[t];
        j = t;
      }
    }
    sol.kkt_gap = gmax + gmax2;
    if (i < 0 || j < 0 || sol.kkt_gap < options.tolerance) {
      sol.converged = true;
      break;
    }
    if (iter >= cap) break;

    const double old_i = beta[i];
    const double old_j = beta[j];
    const double qii = K(i % n, i % n);
    const double qjj = K(j % n, j % n);
    const double qij = q(i, j);
    if (sign(i) != sign(j)) {
      double quad = qii + qjj + 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = beta[i] - beta[j];
      beta[i] += delta;
      beta[j] += delta;
      if (diff > 0.0) {
        if (beta[j] < 0.0) {
          beta[j] = 0.0;
          beta[i] = diff;
        }
      } else if (beta[i] < 0.0) {
        beta[i] = 0.0;
        beta[j] = -diff;
      }
      if (diff > 0.0) {
        if (beta[i] > C) {
          beta[i] = C;
          beta[j] = C - diff;
        }
      } else if (beta[j] > C) {
        beta[j] = C;
        beta[i] = C + diff;
      }
    } else {
      double quad = qii + qjj - 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (G[i] - G[j]) / quad;
      const double sum = beta[i] + beta[j];
      beta[i] -= delta;
      beta[j] += delta;
      if (sum > C) {
        if (beta[i] > C) {
          beta[i] = C;
          beta[j] = sum - C;
        }
      } else if (beta[j] < 0.0) {
        beta[j] = 0.0;
        beta[i] = sum;
      }
      if (sum > C) {
        if (beta[j] > C) {
          beta[j] = C;
          beta[i] = sum - C;
        }
      } else if (beta[i] < 0.0) {
        beta[i] = 0.0;
        beta[j] = sum;
      }
    }

    const double di = beta[i] - old_i;
    const double dj = beta[j] - old_j;
    const double si = sign(i) * di;
    const double sj = sign(j) * dj;
    const auto ki = K.col(i % n);
    const auto kj = K.col(j % n);
    // G_t += Q_ti di + Q_tj dj, with Q_tu = s_t s_u K.
    const Eigen::VectorXd delta_g = ki * si + kj * sj;
    G.head(n) += delta_g;
    G.tail(n) -= delta_g;
    if (options.record_objective) sol.objective_history.push_back(dual_objective(beta, G, p));
  }
  sol.iterations = iter;

  // Bias from free variables, or the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t n_free = 0;
  for (Eigen::Index t = 0; t < l; ++t) {
    const double s = sign(t);
    const double yg = s * G[t];
    if (beta[t] >= C) {
      if (s < 0) {
        ub = std::min(ub, yg);
      } else {
        lb = std::max(lb, yg);
      }
    } else if (beta[t] <= 0.0) {
      if (s > 0) {
        ub = std::min(ub, yg);
      } else {
        lb = std::max(lb, yg);
      }
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : 0.5 * (ub + lb);
  sol.bias = -rho;
  sol.alpha = beta.head(n);
  sol.alpha_star = beta.tail(n);
  sol.objective = dual_objective(beta, G, p);
  return sol;
}

double rbf_kernel(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b,
                  double gamma) {
  return std::exp(-gamma * (a - b).squaredNorm());
}

Eigen::MatrixXd rbf_gram(const Eigen::MatrixXd& X, double gamma) {
  return (-gamma * squared_distances(X).array()).exp().matrix();
}

SVRModel svr_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const SVRHyperparams& hp,
                 const SmoOptions& options) {
  if (X.rows() != y.size())
    throw ValidationError("svr_fit: " + std::to_string(X.rows()) + " inputs but " + std::to_string(y.size()) +
                          " targets");
  if (!X.allFinite()) throw ValidationError("svr_fit: non-finite input");
  const SvrDualSolution sol = solve_svr_dual(rbf_gram(X, hp.gamma), y, hp, options);
  SVRModel model;
  model.hp = hp;
  model.bias = sol.bias;
  model.converged = sol.converged;
  model.iterations = sol.iterations;
  model.dual_objective = sol.objective;
  const Eigen::VectorXd coef = sol.alpha - sol.alpha_star;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < coef.size(); ++i)
    if (coef[i] != 0.0) keep.push_back(i);
  model.support_vectors.resize(static_cast<Eigen::Index>(keep.size()), X.cols());
  model.coefficients.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    model.support_vectors.row(static_cast<Eigen::Index>(k)) = X.row(keep[k]);
    model.coefficients[static_cast<Eigen::Index>(k)] = coef[keep[k]];
  }
  return model;
}

double svr_predict(const SVRModel& model, const Eigen::VectorXd& x) {
  if (model.coefficients.size() == 0) return model.bias;
  if (x.size() != model.support_vectors.cols())
    throw ValidationError("svr_predict: input has length " + std::to_string(x.size()) + ", model expects " +
                          std::to_string(model.support_vectors.cols()));
  double sum = model.bias;
  for (Eigen::Index i = 0; i < model.coefficients.size(); ++i)
    sum += model.coefficients[i] * std::exp(-model.hp.gamma * (model.support_vectors.row(i).transpose() - x).squaredNorm());
  return sum;
}

std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, std::size_t k, Rng& rng) {
  if (k == 0) throw ValidationError("kfold_split: need at least one fold");
  if (k > n)
    throw ValidationError("kfold_split: " + std::to_string(k) + " folds exceed " + std::to_string(n) + " rows");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[uniform_index(rng, i)]);
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = n / k + (f < n % k ? 1 : 0);
    folds[f].assign(idx.begin() + static_cast<std::ptrdiff_t>(pos), idx.begin() + static_cast<std::ptrdiff_t>(pos + size));
    pos += size;
  }
  return folds;
}

GridSearchResult grid_search_cv(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::vector<double> C_grid,
                                std::vector<double> gamma_grid, std::size_t folds, Rng& rng, double epsilon_tube) {
  if (C_grid.empty() || gamma_grid.empty()) throw ValidationError("grid_search_cv: empty hyperparameter grid");
  if (X.rows() != y.size()) throw ValidationError("grid_search_cv: input/target count mismatch");
  std::sort(C_grid.begin(), C_grid.end());
  std::sort(gamma_grid.begin(), gamma_grid.end());
  const auto n = static_cast<std::size_t>(y.size());
  if (folds < 2) throw ValidationError("grid_search_cv: need at least 2 folds");
  const auto split = kfold_split(n, folds, rng);

  std::vector<std::vector<Eigen::Index>> train(folds), test(folds);
  for (std::size_t f = 0; f < folds; ++f) {
    for (std::size_t g = 0; g < folds; ++g)
      for (std::size_t i : split[g]) (g == f ? test[f] : train[f]).push_back(static_cast<Eigen::Index>(i));
    std::sort(train[f].begin(), train[f].end());
    std::sort(test[f].begin(), test[f].end());
  }

  const Eigen::MatrixXd D = squared_distances(X);
  GridSearchResult result;
  result.cv_rmse = std::numeric_limits<double>::infinity();
  result.cv_mse = std::numeric_limits<double>::infinity();
  std::vector<GridCell> cells(C_grid.size() * gamma_grid.size());
  for (std::size_t gi = 0; gi < gamma_grid.size(); ++gi) {
    const double gamma = gamma_grid[gi];
    const Eigen::MatrixXd K = (-gamma * D.array()).exp().matrix();
    for (std::size_t ci = 0; ci < C_grid.size(); ++ci) {
      GridCell cell{C_grid[ci], gamma, 0.0, 0.0};
      try {
        for (std::size_t f = 0; f < folds; ++f) {
          const SVRHyperparams hp{C_grid[ci], gamma, epsilon_tube};
          const SvrDualSolution sol = solve_svr_dual(K(train[f], train[f]), y(train[f]), hp);
          const Eigen::VectorXd coef = sol.alpha - sol.alpha_star;
          const Eigen::VectorXd pred = (K(test[f], train[f]) * coef).array() + sol.bias;
          const double mse = (pred - y(test[f])).squaredNorm() / static_cast<double>(test[f].size());
          cell.mse += mse / static_cast<double>(folds);
          cell.rmse += std::sqrt(mse) / static_cast<double>(folds);
        }
        if (!std::isfinite(cell.rmse)) throw NumericalError("non-finite CV error");
      } catch (const Error&) {
        cell.rmse = std::numeric_limits<double>::infinity();
        cell.mse = std::numeric_limits<double>::infinity();
      }
      cells[ci * gamma_grid.size() + gi] = cell;
    }
  }
  // Cells are C-major with ascending grids, so a strict comparison keeps the
  // smaller C (then gamma) on ties.
  bool first = true;
  for (const auto& cell : cells) {
    if (first || cell.rmse < result.cv_rmse) {
      first = false;
      result.cv_rmse = cell.rmse;
      result.cv_mse = cell.mse;
      result.best = {cell.C, cell.gamma, epsilon_tube};
    }
  }
  result.table = std::move(cells);
  return result;
}

std::string svr_to_json(const SVRModel& model) {
  json j;
  j["format"] = "recipebo-svr";
  j["version"] = 1;
  j["hyperparams"] = {{"C", model.hp.C}, {"gamma", model.hp.gamma}, {"epsilon_tube", model.hp.epsilon_tube}};
  j["bias"] = model.bias;
  j["converged"] = model.converged;
  j["dim"] = model.support_vectors.cols();
  json svs = json::array();
  for (Eigen::Index i = 0; i < model.support_vectors.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < model.support_vectors.cols(); ++k) row.push_back(model.support_vectors(i, k));
    svs.push_back(std::move(row));
  }
  j["support_vectors"] = std::move(svs);
  j["coefficients"] = std::vector<double>(model.coefficients.data(), model.coefficients.data() + model.coefficients.size());
  return j.dump(2) + "\n";
}

SVRModel svr_from_json(const std::string& text) {
  SVRModel model;
  try {
    const json j = json::parse(text);
    if (j.value("format", "") != "recipebo-svr") throw ValidationError("svr model: missing format tag 'recipebo-svr'");
    const auto& h = j.at("hyperparams");
    model.hp = {h.at("C").get<double>(), h.at("gamma").get<double>(), h.at("epsilon_tube").get<double>()};
    if (!model.hp.valid()) throw ValidationError("svr model: invalid hyperparameters");
    model.bias = j.at("bias").get<double>();
    model.converged = j.value("converged", true);
    const auto coefs = j.at("coefficients").get<std::vector<double>>();
    const auto& svs = j.at("support_vectors");
    if (svs.size() != coefs.size()) throw ValidationError("svr model: support vector / coefficient count mismatch");
    const auto dim = j.at("dim").get<Eigen::Index>();
    model.support_vectors.resize(static_cast<Eigen::Index>(coefs.size()), dim);
    model.coefficients.resize(static_cast<Eigen::Index>(coefs.size()));
    for (std::size_t i = 0; i < coefs.size(); ++i) {
      const auto row = svs[i].get<std::vector<double>>();
      if (static_cast<Eigen::Index>(row.size()) != dim)
        throw ValidationError("svr model: support vector " + std::to_string(i) + " has wrong length");
      for (Eigen::Index k = 0; k < dim; ++k) model.support_vectors(static_cast<Eigen::Index>(i), k) = row[static_cast<std::size_t>(k)];
      if (std::abs(coefs[i]) > model.hp.C + 1e-8)
        throw ValidationError("svr model: coefficient " + std::to_string(i) + " exceeds C");
      model.coefficients[static_cast<Eigen::Index>(i)] = coefs[i];
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("svr model: ") + e.what());
  }
  return model;
}

void save_svr(const SVRModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << svr_to_json(model);
  if (!out) throw IoError("write failed for '" + path + "'");
}

SVRModel load_svr(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return svr_from_json(ss.str());
}

}  // namespace recipebo
