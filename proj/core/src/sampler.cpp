// SPDX-License-Identifier: Apache-2.0
#include "mg1/sampler.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "mg1/errors.hpp"

namespace mg1 {

void SamplerConfig::check() const {
  if (max_ph < 1) throw Error(ErrorKind::InvalidArgument, "max_ph must be at least 1");
  if (!(rate_lo > 0.0 && rate_lo < rate_hi)) throw Error(ErrorKind::InvalidArgument, "need 0 < rate_lo < rate_hi");
  if (!(rho_max > 0.0 && rho_max < 1.0)) throw Error(ErrorKind::InvalidArgument, "rho_max must be in (0,1)");
  if (max_retries < 1) throw Error(ErrorKind::InvalidArgument, "max_retries must be at least 1");
}

StateType StateTyping::type_of(int state) const {
  auto has = [state](const std::vector<int>& v) { return std::find(v.begin(), v.end(), state) != v.end(); };
  if (has(full_absorbing)) return StateType::FullAbsorbing;
  if (has(partial_absorbing)) return StateType::PartialAbsorbing;
  return StateType::NonAbsorbing;
}

StateTyping sample_state_types(int size, Rng& rng) {
  if (size < 1) throw Error(ErrorKind::InvalidArgument, "class size must be at least 1");
  const auto p = sample_dirichlet_random_weights(rng, 3);
  StateTyping typing;
  for (int j = 0; j < size; ++j) {
    std::size_t category;
    if (j == 0) {
      // At least one state must be able to absorb.
      const std::array<double, 2> first{p[0] / (p[0] + p[1]), p[1] / (p[0] + p[1])};
      category = sample_categorical(rng, first);
    } else {
      category = sample_categorical(rng, p);
    }
    switch (category) {
      case 0: typing.full_absorbing.push_back(j); break;
      case 1: typing.partial_absorbing.push_back(j); break;
      default: typing.non_absorbing.push_back(j); break;
    }
  }
  return typing;
}

ClassDraft sample_class(int size, const SamplerConfig& config, Rng& rng) {
  ClassDraft draft;
  draft.size = size;
  draft.typing = sample_state_types(size, rng);
  draft.trans.assign(size, std::vector<int>(size, 0));

  // Transition pattern: only partial / non-absorbing states leave to other states.
  for (int j = 0; j < size; ++j) {
    if (draft.typing.type_of(j) == StateType::FullAbsorbing || size == 1) continue;
    const int extra = size >= 3 ? sample_binomial(rng, size - 2, rng.uniform()) : 0;
    std::vector<int> pool;
    for (int k = 0; k < size; ++k) {
      if (k != j) pool.push_back(k);
    }
    for (int k : choose_without_replacement(rng, std::move(pool), static_cast<std::size_t>(1 + extra))) {
      draft.trans[j][k] = 1;
    }
  }

  Matrix s = Matrix::Zero(size, size);
  for (int j = 0; j < size; ++j) s(j, j) = -rng.uniform(config.rate_lo, config.rate_hi);
  for (int j = 0; j < size; ++j) {
    for (int k = 0; k < size; ++k) {
      if (draft.trans[j][k] == 1) s(j, k) = rng.uniform(config.rate_lo, config.rate_hi);
    }
  }
  for (int j : draft.typing.partial_absorbing) draft.absorb_prob[j] = rng.uniform();

  // Rescale off-diagonals so that they sum to (1 - p_j)|S_jj| (partial) or
  // |S_jj| (non-absorbing). Full-absorbing rows keep only their diagonal.
  for (int j = 0; j < size; ++j) {
    const auto type = draft.typing.type_of(j);
    if (type == StateType::FullAbsorbing) continue;
    double off = 0.0;
    for (int k = 0; k < size; ++k) {
      if (k != j) off += s(j, k);
    }
    if (off == 0.0) continue;  // size 1: nowhere to go
    const double keep = type == StateType::PartialAbsorbing ? 1.0 - draft.absorb_prob[j] : 1.0;
    const double factor = keep * -s(j, j) / off;
    for (int k = 0; k < size; ++k) {
      if (k != j) s(j, k) *= factor;
    }
  }

  const auto alpha = sample_dirichlet_random_weights(rng, size);
  draft.alpha = Eigen::Map<const Vector>(alpha.data(), size);
  draft.generator = std::move(s);
  return draft;
}

PhaseType sample_ph(const SamplerConfig& config, Rng& rng, SampleStats* stats) {
  config.check();
  for (int attempt = 0; attempt < config.max_retries; ++attempt) {
    if (stats) ++stats->attempts;
    const int m = static_cast<int>(rng.uniform_int(1, config.max_ph));
    const int num_classes = static_cast<int>(rng.uniform_int(1, m));
    const auto entry = sample_dirichlet_random_weights(rng, num_classes);

    Vector alpha = Vector::Zero(m);
    Matrix s = Matrix::Zero(m, m);
    int assigned = 0;
    std::vector<int> sizes;
    for (int i = 0; i < num_classes; ++i) {
      // Leave at least one state for each class still to come; the last
      // class takes whatever remains so the sizes sum to m.
      const int upper = m - assigned - (num_classes - 1 - i);
      const int size = i + 1 == num_classes ? upper : static_cast<int>(rng.uniform_int(1, upper));
      const ClassDraft draft = sample_class(size, config, rng);
      s.block(assigned, assigned, size, size) = draft.generator;
      alpha.segment(assigned, size) = draft.alpha * entry[i];
      assigned += size;
      sizes.push_back(size);
    }
    alpha /= alpha.sum();

    try {
      PhaseType ph = PhaseType::validate(std::move(alpha), std::move(s));
      if (stats) stats->class_sizes = std::move(sizes);
      return ph;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularGenerator) throw;
      if (stats) ++stats->rejections;
    }
  }
  throw Error(ErrorKind::RejectionBudgetExceeded,
              "no finite-mean PH after " + std::to_string(config.max_retries) + " attempts");
}

QueueInstance sample_instance(const SamplerConfig& config, Rng& rng, SampleStats* stats) {
  PhaseType service = scale_to_unit_mean(sample_ph(config, rng, stats));
  const double lambda = rng.uniform(0.0, config.rho_max);
  return QueueInstance{lambda, std::move(service)};
}

}  // namespace mg1
