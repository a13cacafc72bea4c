// SPDX-License-Identifier: Apache-2.0
#include "mg1/mlp.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "mg1/errors.hpp"
#include "mg1/metrics.hpp"

namespace mg1 {

namespace {

void softmax_rows(Matrix& z) {
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const double top = z.row(i).maxCoeff();
    z.row(i) = (z.row(i).array() - top).exp();
    z.row(i) /= z.row(i).sum();
  }
}

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void check_input(const MlpModel& model, Eigen::Index cols) {
  if (cols != model.input_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(model.input_dim()) +
                                                  " features, got " + std::to_string(cols));
  }
}

struct AdamState {
  std::vector<Matrix> mw, vw;
  std::vector<Vector> mb, vb;
  long step = 0;

  explicit AdamState(const MlpModel& model) {
    for (std::size_t k = 0; k < model.weights.size(); ++k) {
      mw.push_back(Matrix::Zero(model.weights[k].rows(), model.weights[k].cols()));
      vw.push_back(mw.back());
      mb.push_back(Vector::Zero(model.biases[k].size()));
      vb.push_back(mb.back());
    }
  }
};

template <typename Param, typename Grad>
void adam_update(Param& theta, Grad grad, Param& m, Param& v, const TrainConfig& cfg, double lr, double c1,
                 double c2) {
  grad += cfg.weight_decay * theta;
  m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
  v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
  theta.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + cfg.adam_eps);
}

}  // namespace

MlpModel MlpModel::zeros(std::vector<int> dims) {
  if (dims.size() < 2) throw Error(ErrorKind::InvalidArgument, "a network needs at least two layer sizes");
  MlpModel model;
  for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
    if (dims[k] < 1 || dims[k + 1] < 1) throw Error(ErrorKind::InvalidArgument, "layer sizes must be positive");
    model.weights.push_back(Matrix::Zero(dims[k + 1], dims[k]));
    model.biases.push_back(Vector::Zero(dims[k + 1]));
  }
  model.n_moments = dims.front();
  model.feature_stats.mean.assign(dims.front(), 0.0);
  model.feature_stats.std.assign(dims.front(), 1.0);
  model.layer_dims = std::move(dims);
  return model;
}

MlpModel MlpModel::initialize(std::vector<int> dims, Rng& rng) {
  MlpModel model = zeros(std::move(dims));
  for (auto& w : model.weights) {
    const double scale = std::sqrt(2.0 / static_cast<double>(w.cols()));
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = scale * rng.normal();
    }
  }
  return model;
}

std::size_t MlpModel::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) n += weights[k].size() + biases[k].size();
  return n;
}

Matrix MlpModel::forward(const Matrix& standardized) const {
  check_input(*this, standardized.cols());
  Matrix a = standardized;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    Matrix z = a * weights[k].transpose();
    z.rowwise() += biases[k].transpose();
    if (k + 1 < weights.size()) {
      a = z.cwiseMax(0.0);
    } else {
      softmax_rows(z);
      a = std::move(z);
    }
  }
  return a;
}

std::vector<double> MlpModel::forward(std::span<const double> standardized) const {
  const Matrix x = Eigen::Map<const RowVector>(standardized.data(), static_cast<Eigen::Index>(standardized.size()));
  const Matrix y = forward(x);
  return std::vector<double>(y.data(), y.data() + y.size());
}

std::vector<double> MlpModel::predict(std::span<const double> raw_features) const {
  return forward(apply_standardizer(feature_stats, raw_features));
}

Matrix MlpModel::predict(const Matrix& raw_features) const {
  return forward(apply_standardizer(feature_stats, raw_features));
}

std::vector<int> default_layer_dims(int n_moments, int levels) {
  std::vector<int> dims{n_moments};
  dims.insert(dims.end(), kHiddenLayers.begin(), kHiddenLayers.end());
  dims.push_back(levels);
  return dims;
}

double loss(const Matrix& y, const Matrix& yhat) {
  if (y.rows() != yhat.rows() || y.cols() != yhat.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "loss: shapes differ");
  }
  if (y.rows() == 0) return 0.0;
  const Matrix d = (y - yhat).cwiseAbs();
  return (d.sum() + d.rowwise().maxCoeff().sum()) / static_cast<double>(y.rows());
}

Gradients backward(const MlpModel& model, const Matrix& standardized, const Matrix& y, double* loss_value) {
  check_input(model, standardized.cols());
  const std::size_t layers = model.weights.size();
  if (y.rows() != standardized.rows() || y.cols() != model.output_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "backward: target shape mismatch");
  }
  const auto batch = static_cast<double>(standardized.rows());

  // activations[k] is the input of layer k; pre[k] its affine output.
  std::vector<Matrix> activations(layers + 1);
  std::vector<Matrix> pre(layers);
  activations[0] = standardized;
  for (std::size_t k = 0; k < layers; ++k) {
    pre[k] = activations[k] * model.weights[k].transpose();
    pre[k].rowwise() += model.biases[k].transpose();
    if (k + 1 < layers) {
      activations[k + 1] = pre[k].cwiseMax(0.0);
    } else {
      activations[k + 1] = pre[k];
      softmax_rows(activations[k + 1]);
    }
  }
  const Matrix& yhat = activations[layers];
  if (loss_value) *loss_value = loss(y, yhat);

  // dLoss/dYhat
  Matrix g(y.rows(), y.cols());
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index j = 0; j < y.cols(); ++j) {
      const double d = y(i, j) - yhat(i, j);
      g(i, j) = -sign(d);
      if (std::abs(d) > best) {
        best = std::abs(d);
        arg = j;
      }
    }
    g(i, arg) -= sign(y(i, arg) - yhat(i, arg));
  }
  g /= batch;

  // softmax: dz = yhat * (g - <g, yhat>)
  const Vector inner = g.cwiseProduct(yhat).rowwise().sum();
  Matrix dz = yhat.cwiseProduct(g.colwise() - inner);

  Gradients grads;
  grads.weights.resize(layers);
  grads.biases.resize(layers);
  for (std::size_t k = layers; k-- > 0;) {
    grads.weights[k] = dz.transpose() * activations[k];
    grads.biases[k] = dz.colwise().sum().transpose();
    if (k > 0) {
      Matrix da = dz * model.weights[k];
      dz = da.cwiseProduct((pre[k - 1].array() > 0.0).cast<double>().matrix());
    }
  }
  return grads;
}

void TrainConfig::check() const {
  if (batch_size < 1) throw Error(ErrorKind::InvalidArgument, "batch size must be positive");
  if (epochs < 0) throw Error(ErrorKind::InvalidArgument, "epochs must be nonnegative");
  if (!(lr0 >= 0.0)) throw Error(ErrorKind::InvalidArgument, "learning rate must be nonnegative");
  if (!(lr_decay > 0.0 && lr_decay <= 1.0)) throw Error(ErrorKind::InvalidArgument, "lr decay must be in (0,1]");
  if (!(weight_decay >= 0.0)) throw Error(ErrorKind::InvalidArgument, "weight decay must be nonnegative");
}

TrainResult train(const Dataset& train_set, const Dataset& val, const TrainConfig& config,
                  const EpochCallback& on_epoch) {
  Rng init_rng = Rng::derive(config.seed, {0x1417u});
  MlpModel model = MlpModel::initialize(default_layer_dims(train_set.n_moments, train_set.levels), init_rng);
  model.feature_stats = fit_standardizer(train_set);
  model.n_moments = train_set.n_moments;
  return train_from(std::move(model), train_set, val, config, on_epoch);
}

TrainResult train_from(MlpModel model, const Dataset& train_set, const Dataset& val, const TrainConfig& config,
                       const EpochCallback& on_epoch) {
  config.check();
  if (train_set.n_moments != val.n_moments || train_set.levels != val.levels) {
    throw Error(ErrorKind::DatasetMismatch, "train and validation sets differ in n_moments or levels");
  }
  if (train_set.n_moments != model.input_dim() || train_set.levels != model.output_dim()) {
    throw Error(ErrorKind::DatasetMismatch, "dataset shape does not match the model");
  }
  if (train_set.size() == 0 || val.size() == 0) throw Error(ErrorKind::DatasetMismatch, "empty dataset");

  const Matrix x_train = apply_standardizer(model.feature_stats, train_set.features());
  const Matrix y_train = train_set.targets();
  const Matrix x_val = apply_standardizer(model.feature_stats, val.features());
  const Matrix y_val = val.targets();

  TrainResult result;
  result.model = model;
  result.best_val_metric1 = std::numeric_limits<double>::infinity();

  AdamState adam(model);
  const auto n = static_cast<Eigen::Index>(train_set.size());
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  Matrix xb, yb;
  int since_best = 0;
  double lr = config.lr0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Rng shuffle = Rng::derive(config.seed, {0x5407u, static_cast<std::uint64_t>(epoch)});
    for (Eigen::Index i = n - 1; i > 0; --i) {
      std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(shuffle.uniform_int(0, i))]);
    }

    double loss_total = 0.0;
    for (Eigen::Index start = 0; start < n; start += config.batch_size) {
      const Eigen::Index b = std::min<Eigen::Index>(config.batch_size, n - start);
      xb.resize(b, x_train.cols());
      yb.resize(b, y_train.cols());
      for (Eigen::Index r = 0; r < b; ++r) {
        const auto src = order[static_cast<std::size_t>(start + r)];
        xb.row(r) = x_train.row(src);
        yb.row(r) = y_train.row(src);
      }
      double batch_loss = 0.0;
      Gradients grads = backward(model, xb, yb, &batch_loss);
      loss_total += batch_loss * static_cast<double>(b);

      ++adam.step;
      const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(adam.step));
      const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(adam.step));
      for (std::size_t k = 0; k < model.weights.size(); ++k) {
        adam_update(model.weights[k], std::move(grads.weights[k]), adam.mw[k], adam.vw[k], config, lr, c1, c2);
        adam_update(model.biases[k], std::move(grads.biases[k]), adam.mb[k], adam.vb[k], config, lr, c1, c2);
      }
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.learning_rate = lr;
    entry.train_loss = loss_total / static_cast<double>(n);
    entry.val_metric1 = metric1(y_val, model.forward(x_val));
    result.log.push_back(entry);
    if (on_epoch) on_epoch(entry);

    if (entry.val_metric1 < result.best_val_metric1) {
      result.best_val_metric1 = entry.val_metric1;
      result.best_epoch = epoch;
      result.model = model;
      since_best = 0;
    } else if (config.patience > 0 && ++since_best >= config.patience) {
      break;
    }
    lr *= config.lr_decay;
  }
  if (config.epochs == 0) {
    result.model = model;
    result.best_val_metric1 = metric1(y_val, model.forward(x_val));
  }
  return result;
}

std::vector<SweepRow> moment_sweep(const Dataset& train_set, const Dataset& val, std::span<const int> moment_counts,
                                   const TrainConfig& config,
                                   const std::function<void(int, const EpochLog&)>& on_epoch) {
  std::vector<SweepRow> table;
  for (int n : moment_counts) {
    const Dataset tr = with_moments(train_set, n);
    const Dataset va = with_moments(val, n);
    EpochCallback cb;
    if (on_epoch) cb = [&on_epoch, n](const EpochLog& e) { on_epoch(n, e); };
    const TrainResult r = train(tr, va, config, cb);
    table.push_back({n, r.best_val_metric1, r.best_epoch});
  }
  return table;
}

int select_moment_count(std::span<const SweepRow> table, double plateau_eps) {
  if (table.empty()) throw Error(ErrorKind::InvalidArgument, "empty sweep table");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& row : table) best = std::min(best, row.best_val_metric1);
  int chosen = std::numeric_limits<int>::max();
  for (const auto& row : table) {
    if (row.best_val_metric1 <= best + plateau_eps) chosen = std::min(chosen, row.n_moments);
  }
  return chosen;
}

void write_model(std::ostream& out, const MlpModel& model) {
  nlohmann::json j;
  j["version"] = 1;
  j["n_moments"] = model.n_moments;
  j["layer_dims"] = model.layer_dims;
  nlohmann::json weights = nlohmann::json::array();
  nlohmann::json biases = nlohmann::json::array();
  for (std::size_t k = 0; k < model.weights.size(); ++k) {
    const Matrix& w = model.weights[k];
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      std::vector<double> row(static_cast<std::size_t>(w.cols()));
      for (Eigen::Index c = 0; c < w.cols(); ++c) row[static_cast<std::size_t>(c)] = w(i, c);
      rows.push_back(std::move(row));
    }
    weights.push_back(std::move(rows));
    biases.push_back(std::vector<double>(model.biases[k].data(), model.biases[k].data() + model.biases[k].size()));
  }
  j["weights"] = std::move(weights);
  j["biases"] = std::move(biases);
  j["feature_mean"] = model.feature_stats.mean;
  j["feature_std"] = model.feature_stats.std;
  out << j.dump() << '\n';
}

MlpModel read_model(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
    if (j.at("version").get<int>() != 1) throw Error(ErrorKind::ParseError, "unsupported model version");
    MlpModel model = MlpModel::zeros(j.at("layer_dims").get<std::vector<int>>());
    model.n_moments = j.at("n_moments").get<int>();
    const auto weights = j.at("weights").get<std::vector<std::vector<std::vector<double>>>>();
    const auto biases = j.at("biases").get<std::vector<std::vector<double>>>();
    if (weights.size() != model.weights.size() || biases.size() != model.biases.size()) {
      throw Error(ErrorKind::DimensionMismatch, "model: layer count disagrees with layer_dims");
    }
    for (std::size_t k = 0; k < weights.size(); ++k) {
      Matrix& w = model.weights[k];
      if (weights[k].size() != static_cast<std::size_t>(w.rows()) ||
          biases[k].size() != static_cast<std::size_t>(w.rows())) {
        throw Error(ErrorKind::DimensionMismatch, "model: layer " + std::to_string(k) + " has wrong shape");
      }
      for (Eigen::Index i = 0; i < w.rows(); ++i) {
        const auto& row = weights[k][static_cast<std::size_t>(i)];
        if (row.size() != static_cast<std::size_t>(w.cols())) {
          throw Error(ErrorKind::DimensionMismatch, "model: ragged weight row");
        }
        for (Eigen::Index c = 0; c < w.cols(); ++c) w(i, c) = row[static_cast<std::size_t>(c)];
        model.biases[k][i] = biases[k][static_cast<std::size_t>(i)];
      }
    }
    model.feature_stats.mean = j.at("feature_mean").get<std::vector<double>>();
    model.feature_stats.std = j.at("feature_std").get<std::vector<double>>();
    if (model.feature_stats.mean.size() != static_cast<std::size_t>(model.input_dim()) ||
        model.feature_stats.std.size() != static_cast<std::size_t>(model.input_dim())) {
      throw Error(ErrorKind::DimensionMismatch, "model: feature statistics length mismatch");
    }
    for (double sd : model.feature_stats.std) {
      if (!(sd > 0.0)) throw Error(ErrorKind::DegenerateFeature, "model: non-positive feature std");
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("model: ") + e.what());
  }
}

void save_model(const std::string& path, const MlpModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
  write_model(out, model);
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path);
}

MlpModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  return read_model(in);
}

}  // namespace mg1
