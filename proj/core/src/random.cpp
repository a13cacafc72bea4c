// SPDX-License-Identifier: Apache-2.0
#include "mg1/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mg1/errors.hpp"

namespace mg1 {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng Rng::derive(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = splitmix64(master);
  for (auto k : keys) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
  return Rng(h);
}

double Rng::uniform() {
  // 53 random bits, offset by half an ulp so 0 is never returned.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw Error(ErrorKind::InvalidArgument, "uniform_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(engine_());
  const std::uint64_t limit = max() - max() % span;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return lo + static_cast<std::int64_t>(x % span);
}

double Rng::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::exponential(double rate) { return -std::log(uniform()) / rate; }

double sample_log_gamma(Rng& rng, double shape) {
  if (!(shape > 0.0)) throw Error(ErrorKind::InvalidArgument, "gamma shape must be positive");
  if (shape < 1.0) {
    // Gamma(a) = Gamma(a + 1) * U^(1/a)
    return sample_log_gamma(rng, shape + 1.0) + std::log(rng.uniform()) / shape;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return std::log(d * v);
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return std::log(d * v);
  }
}

double sample_gamma(Rng& rng, double shape) { return std::exp(sample_log_gamma(rng, shape)); }

std::vector<double> sample_dirichlet(Rng& rng, std::span<const double> concentration) {
  std::vector<double> logs(concentration.size());
  for (std::size_t i = 0; i < logs.size(); ++i) logs[i] = sample_log_gamma(rng, concentration[i]);
  const double top = *std::max_element(logs.begin(), logs.end());
  double total = 0.0;
  for (auto& l : logs) {
    l = std::exp(l - top);
    total += l;
  }
  for (auto& l : logs) l /= total;
  return logs;
}

std::vector<double> sample_dirichlet_random_weights(Rng& rng, std::size_t dim) {
  std::vector<double> weights(dim);
  for (auto& w : weights) w = rng.uniform();
  return sample_dirichlet(rng, weights);
}

int sample_binomial(Rng& rng, int trials, double p) {
  int hits = 0;
  for (int i = 0; i < trials; ++i) hits += rng.uniform() < p ? 1 : 0;
  return hits;
}

std::size_t sample_categorical(Rng& rng, std::span<const double> probs) {
  double total = 0.0;
  for (double p : probs) total += p;
  const double u = rng.uniform() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    acc += probs[i];
    last_positive = i;
    if (u < acc) return i;
  }
  return last_positive;
}

std::vector<int> choose_without_replacement(Rng& rng, std::vector<int> pool, std::size_t k) {
  k = std::min(k, pool.size());
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = static_cast<std::size_t>(
        rng.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(pool.size()) - 1));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace mg1
