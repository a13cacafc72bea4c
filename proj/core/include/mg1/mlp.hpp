// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mg1/dataset.hpp"
#include "mg1/linalg.hpp"
#include "mg1/random.hpp"

namespace mg1 {

inline constexpr std::array<int, 5> kHiddenLayers{30, 40, 50, 60, 60};

/// Feedforward network: ReLU hidden layers, softmax output.
///
/// weights[k] has shape (layer_dims[k+1], layer_dims[k]); inputs are
/// standardized with feature_stats before the first layer.
struct MlpModel {
  std::vector<int> layer_dims;
  std::vector<Matrix> weights;
  std::vector<Vector> biases;
  FeatureStats feature_stats;
  int n_moments = 0;

  /// Zero biases, weights ~ N(0, 2 / fan_in).
  static MlpModel initialize(std::vector<int> layer_dims, Rng& rng);
  static MlpModel zeros(std::vector<int> layer_dims);

  int input_dim() const { return layer_dims.front(); }
  int output_dim() const { return layer_dims.back(); }
  std::size_t parameter_count() const;

  /// Row-per-sample batch of standardized features -> row-per-sample probabilities.
  Matrix forward(const Matrix& standardized) const;
  std::vector<double> forward(std::span<const double> standardized) const;
  /// Applies the stored standardizer first.
  std::vector<double> predict(std::span<const double> raw_features) const;
  Matrix predict(const Matrix& raw_features) const;
};

/// [n, 30, 40, 50, 60, 60, levels]
std::vector<int> default_layer_dims(int n_moments, int levels = kDefaultLevels);

/// (1/B) sum_i sum_j |Y_ij - Yhat_ij| + (1/B) sum_i max_j |Y_ij - Yhat_ij|
double loss(const Matrix& y, const Matrix& yhat);

struct Gradients {
  std::vector<Matrix> weights;
  std::vector<Vector> biases;
};

/// Gradient of `loss` at a batch (standardized inputs). Subgradient
/// conventions: d|x|/dx = 0 at x = 0, the max term picks the lowest index
/// among ties.
Gradients backward(const MlpModel& model, const Matrix& standardized, const Matrix& y,
                   double* loss_value = nullptr);

struct TrainConfig {
  int batch_size = 128;
  int epochs = 300;
  double lr0 = 0.01;
  /// Per-epoch multiplicative learning-rate decay.
  double lr_decay = 0.97;
  /// L2 penalty added to the gradient (coupled Adam weight decay).
  double weight_decay = 1e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 42;
  /// Stop after this many epochs without a validation improvement; 0 disables.
  int patience = 0;

  void check() const;
};

struct EpochLog {
  int epoch = 0;
  double learning_rate = 0.0;
  double train_loss = 0.0;
  double val_metric1 = 0.0;
};

struct TrainResult {
  MlpModel model;  ///< weights of the epoch with the lowest validation Metric1
  std::vector<EpochLog> log;
  int best_epoch = -1;
  double best_val_metric1 = 0.0;
};

using EpochCallback = std::function<void(const EpochLog&)>;

/// Adam training. Standardizer is fit on `train`; batches are reshuffled each
/// epoch from the config seed. Single-threaded and deterministic.
TrainResult train(const Dataset& train, const Dataset& val, const TrainConfig& config,
                  const EpochCallback& on_epoch = {});

/// Same, starting from a given model (its feature_stats are kept).
TrainResult train_from(MlpModel model, const Dataset& train, const Dataset& val, const TrainConfig& config,
                       const EpochCallback& on_epoch = {});

struct SweepRow {
  int n_moments = 0;
  double best_val_metric1 = 0.0;
  int best_epoch = -1;
};

/// Trains one model per moment count on the leading features of shared
/// datasets, so only the inputs differ between rows.
std::vector<SweepRow> moment_sweep(const Dataset& train, const Dataset& val, std::span<const int> moment_counts,
                                   const TrainConfig& config,
                                   const std::function<void(int, const EpochLog&)>& on_epoch = {});

/// Smallest n whose validation Metric1 is within `plateau_eps` of the best.
int select_moment_count(std::span<const SweepRow> table, double plateau_eps = 1e-6);

void write_model(std::ostream& out, const MlpModel& model);
MlpModel read_model(std::istream& in);
void save_model(const std::string& path, const MlpModel& model);
MlpModel load_model(const std::string& path);

}  // namespace mg1
