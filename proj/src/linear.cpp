/*
 * Copyright 2026 The featrank Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "featrank/errors.hpp"
#include "learners.hpp"

namespace featrank {
namespace internal {

// ---------------------------------------------------------------------------
// Logistic regression, Newton's method with backtracking.
//
// Objective: mean log-loss + (l2 / 2) * |w|^2, intercept unpenalized.

namespace {

double glm_objective(const Matrix& x, std::span<const int> y,
                     const Eigen::VectorXd& theta, double l2) {
  const std::size_t d = x.cols;
  double loss = 0.0;
  for (std::size_t i = 0; i < x.rows; ++i) {
    const double* row = x.row(i);
    double z = theta[static_cast<Eigen::Index>(d)];
    for (std::size_t j = 0; j < d; ++j) z += theta[static_cast<Eigen::Index>(j)] * row[j];
    loss += softplus(z) - y[i] * z;
  }
  loss /= static_cast<double>(x.rows);
  return loss + 0.5 * l2 * theta.head(static_cast<Eigen::Index>(d)).squaredNorm();
}

}  // namespace

GlmParams fit_glm(const Matrix& inputs, std::span<const int> labels,
                  const Params& params) {
  const double l2 = params.at("l2");
  const double tolerance = params.at("tolerance");
  const auto max_iter = static_cast<std::size_t>(params.at("max_iter"));
  const std::size_t n = inputs.rows;
  const std::size_t d = inputs.cols;
  const auto dim = static_cast<Eigen::Index>(d + 1);

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(dim);
  const double pos = std::accumulate(labels.begin(), labels.end(), 0.0);
  const double prior = std::clamp(pos / static_cast<double>(n), 1e-6, 1 - 1e-6);
  theta[dim - 1] = std::log(prior / (1.0 - prior));

  GlmParams out;
  double objective = glm_objective(inputs, labels, theta, l2);
  Eigen::VectorXd grad(dim);
  Eigen::MatrixXd hess(dim, dim);
  Eigen::VectorXd features(dim);
  for (std::size_t iter = 0;; ++iter) {
    grad.setZero();
    hess.setZero();
    for (std::size_t i = 0; i < n; ++i) {
      const double* row = inputs.row(i);
      for (std::size_t j = 0; j < d; ++j) features[static_cast<Eigen::Index>(j)] = row[j];
      features[dim - 1] = 1.0;
      const double p = sigmoid(theta.dot(features));
      grad.noalias() += (p - labels[i]) * features;
      hess.selfadjointView<Eigen::Lower>().rankUpdate(features, p * (1.0 - p));
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    grad *= inv_n;
    hess = hess.selfadjointView<Eigen::Lower>();
    hess *= inv_n;
    for (Eigen::Index j = 0; j + 1 < dim; ++j) {
      grad[j] += l2 * theta[j];
      hess(j, j) += l2;
    }
    hess(dim - 1, dim - 1) += 1e-12;

    out.iterations = iter;
    out.gradient_norm = grad.norm();
    if (out.gradient_norm <= tolerance || iter >= max_iter) break;

    const Eigen::VectorXd step = hess.ldlt().solve(grad);
    // Armijo backtracking on the Newton direction.
    const double slope = -grad.dot(step);
    double t = 1.0;
    Eigen::VectorXd candidate;
    double cand_objective = objective;
    bool accepted = false;
    for (int k = 0; k < 50; ++k) {
      candidate = theta - t * step;
      cand_objective = glm_objective(inputs, labels, candidate, l2);
      if (cand_objective <= objective + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    theta = candidate;
    objective = cand_objective;
  }
  out.coefficients.assign(theta.data(), theta.data() + d);
  out.intercept = theta[dim - 1];
  return out;
}

double predict_glm(const GlmParams& glm, const double* x) {
  double z = glm.intercept;
  for (std::size_t j = 0; j < glm.coefficients.size(); ++j) {
    z += glm.coefficients[j] * x[j];
  }
  return sigmoid(z);
}

// ---------------------------------------------------------------------------
// One-hidden-layer tanh network with a logistic output.

MlpParams init_mlp(std::size_t inputs, std::size_t hidden, double scale,
                   Rng& rng) {
  MlpParams net;
  net.inputs = inputs;
  net.hidden = hidden;
  net.w1.resize(hidden * inputs);
  net.b1.resize(hidden);
  net.w2.resize(hidden);
  for (auto& w : net.w1) w = rng.uniform(-scale, scale);
  for (auto& b : net.b1) b = rng.uniform(-scale, scale);
  for (auto& w : net.w2) w = rng.uniform(-scale, scale);
  net.b2 = rng.uniform(-scale, scale);
  return net;
}

namespace {

// Output logit for one row; fills the hidden activations.
double forward(const MlpParams& net, const double* x, double* act) {
  double z = net.b2;
  for (std::size_t h = 0; h < net.hidden; ++h) {
    const double* w = net.w1.data() + h * net.inputs;
    double a = net.b1[h];
    for (std::size_t j = 0; j < net.inputs; ++j) a += w[j] * x[j];
    act[h] = std::tanh(a);
    z += net.w2[h] * act[h];
  }
  return z;
}

// Adds the loss gradient of one row to the packed gradient vector and
// returns its loss.
double accumulate_row(const MlpParams& net, const double* x, int y,
                      double* act, double* grad) {
  const double z = forward(net, x, act);
  const double dz = sigmoid(z) - y;
  const std::size_t nw1 = net.hidden * net.inputs;
  double* g_w1 = grad;
  double* g_b1 = grad + nw1;
  double* g_w2 = g_b1 + net.hidden;
  double* g_b2 = g_w2 + net.hidden;
  for (std::size_t h = 0; h < net.hidden; ++h) {
    g_w2[h] += dz * act[h];
    const double dh = dz * net.w2[h] * (1.0 - act[h] * act[h]);
    g_b1[h] += dh;
    double* gw = g_w1 + h * net.inputs;
    for (std::size_t j = 0; j < net.inputs; ++j) gw[j] += dh * x[j];
  }
  *g_b2 += dz;
  return softplus(z) - y * z;
}

std::size_t packed_size(const MlpParams& net) {
  return net.hidden * net.inputs + 2 * net.hidden + 1;
}

}  // namespace

MlpParams fit_mlp(const Matrix& inputs, std::span<const int> labels,
                  const Params& params, std::uint64_t seed) {
  const auto hidden = static_cast<std::size_t>(params.at("hidden"));
  const auto batch = static_cast<std::size_t>(params.at("batch_size"));
  const double rate = params.at("learning_rate");
  const auto epochs = static_cast<std::size_t>(params.at("epochs"));
  const double scale = params.at("init_scale");

  Rng rng(derive_seed(seed, "mlp"));
  MlpParams net = init_mlp(inputs.cols, hidden, scale, rng);
  std::vector<double> packed = mlp_pack(net);
  std::vector<double> grad(packed.size());
  std::vector<double> act(hidden);
  std::vector<std::size_t> order(inputs.rows);
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t stop = std::min(order.size(), start + batch);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t t = start; t < stop; ++t) {
        accumulate_row(net, inputs.row(order[t]), labels[order[t]], act.data(),
                       grad.data());
      }
      const double step = rate / static_cast<double>(stop - start);
      for (std::size_t k = 0; k < packed.size(); ++k) packed[k] -= step * grad[k];
      mlp_unpack(packed, net);
    }
  }
  return net;
}

double predict_mlp(const MlpParams& net, const double* x) {
  std::vector<double> act(net.hidden);
  return sigmoid(forward(net, x, act.data()));
}

}  // namespace internal

std::vector<double> mlp_pack(const MlpParams& net) {
  std::vector<double> out;
  out.reserve(internal::packed_size(net));
  out.insert(out.end(), net.w1.begin(), net.w1.end());
  out.insert(out.end(), net.b1.begin(), net.b1.end());
  out.insert(out.end(), net.w2.begin(), net.w2.end());
  out.push_back(net.b2);
  return out;
}

void mlp_unpack(std::span<const double> packed, MlpParams& net) {
  if (packed.size() != internal::packed_size(net)) {
    throw ComputeError("packed parameter vector has the wrong size");
  }
  auto it = packed.begin();
  const auto nw1 = static_cast<long>(net.w1.size());
  const auto nh = static_cast<long>(net.hidden);
  std::copy(it, it + nw1, net.w1.begin());
  it += nw1;
  std::copy(it, it + nh, net.b1.begin());
  it += nh;
  std::copy(it, it + nh, net.w2.begin());
  it += nh;
  net.b2 = *it;
}

double mlp_loss_and_gradient(const MlpParams& net, const Matrix& inputs,
                             std::span<const int> labels,
                             std::vector<double>* gradient) {
  if (inputs.cols != net.inputs || labels.size() != inputs.rows ||
      inputs.rows == 0) {
    throw ComputeError("inputs do not match the network");
  }
  std::vector<double> act(net.hidden);
  std::vector<double> grad(internal::packed_size(net), 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < inputs.rows; ++i) {
    loss += internal::accumulate_row(net, inputs.row(i), labels[i], act.data(),
                                     grad.data());
  }
  const double inv_n = 1.0 / static_cast<double>(inputs.rows);
  if (gradient) {
    for (auto& g : grad) g *= inv_n;
    *gradient = std::move(grad);
  }
  return loss * inv_n;
}

}  // namespace featrank
