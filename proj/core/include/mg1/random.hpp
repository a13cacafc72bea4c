// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace mg1 {

/// Seeded generator with portable variate methods.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. All distributions are implemented here rather than taken from
/// <random>, whose distribution algorithms vary between standard libraries;
/// this keeps every sampled dataset reproducible bit for bit.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Counter-based stream split: the stream for (master, keys...) depends only
  /// on its key path, never on how many other streams were drawn before it.
  static Rng derive(std::uint64_t master, std::initializer_list<std::uint64_t> keys);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return engine_(); }

  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Uniform on (lo, hi).
  double uniform(double lo, double hi);
  /// Uniform integer on the closed range [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  double normal();
  double exponential(double rate);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Marsaglia-Tsang gamma variate with unit scale.
double sample_gamma(Rng& rng, double shape);

/// log of a Gamma(shape, 1) variate. Stays finite for shapes where the
/// variate itself underflows to zero (shape << 1).
double sample_log_gamma(Rng& rng, double shape);

/// Dirichlet draw via normalized gamma variates (normalized in log space).
std::vector<double> sample_dirichlet(Rng& rng, std::span<const double> concentration);

/// Dirichlet with concentration weights drawn i.i.d. from U(0, 1).
std::vector<double> sample_dirichlet_random_weights(Rng& rng, std::size_t dim);

int sample_binomial(Rng& rng, int trials, double p);

/// Index i with probability probs[i] / sum(probs).
std::size_t sample_categorical(Rng& rng, std::span<const double> probs);

/// k distinct elements of pool, uniformly at random, in draw order.
std::vector<int> choose_without_replacement(Rng& rng, std::vector<int> pool, std::size_t k);

}  // namespace mg1
