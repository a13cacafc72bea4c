// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "mg1/phtype.hpp"
#include "mg1/qbd.hpp"
#include "mg1/random.hpp"

namespace mg1 {

struct SamplerConfig {
  int max_ph = 20;
  double rate_lo = 1.0;
  double rate_hi = 1000.0;
  double rho_max = 0.95;
  std::uint64_t seed = 42;
  /// Full restarts allowed before giving up on a draw.
  int max_retries = 1000;

  /// Throws InvalidArgument when a field is out of range.
  void check() const;
};

enum class StateType { FullAbsorbing, PartialAbsorbing, NonAbsorbing };

/// Partition of a class's states (0-based indices) by absorption behaviour.
struct StateTyping {
  std::vector<int> full_absorbing;
  std::vector<int> partial_absorbing;
  std::vector<int> non_absorbing;

  StateType type_of(int state) const;
};

/// One sampled class: its typing, transition pattern, per-state absorption
/// probabilities and the resulting sub-PH (alpha_i, S_i).
struct ClassDraft {
  int size = 0;
  StateTyping typing;
  std::vector<std::vector<int>> trans;  ///< trans[j][k] == 1 iff j -> k is permitted
  std::map<int, double> absorb_prob;    ///< p_j for partially absorbing states
  Vector alpha;
  Matrix generator;
};

/// Counts of attempts spent by sample_ph; `rejections` are livelocked draws.
struct SampleStats {
  long attempts = 0;
  long rejections = 0;
  std::vector<int> class_sizes;  ///< class sizes of the accepted draw, in embedding order
};

/// Assigns each state to full / partial / non-absorbing using Dirichlet
/// weights with U(0,1) concentrations. State 0 is never non-absorbing.
StateTyping sample_state_types(int size, Rng& rng);

/// Samples one class of `size` states.
ClassDraft sample_class(int size, const SamplerConfig& config, Rng& rng);

/// Samples a PH by drawing a phase count, splitting it into classes, sampling
/// each class and embedding them block-diagonally. Draws with a singular
/// generator are rejected and restarted from scratch.
PhaseType sample_ph(const SamplerConfig& config, Rng& rng, SampleStats* stats = nullptr);

/// sample_ph, rescaled to unit mean, paired with lambda ~ U(0, rho_max).
QueueInstance sample_instance(const SamplerConfig& config, Rng& rng, SampleStats* stats = nullptr);

}  // namespace mg1
