// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mg1/linalg.hpp"
#include "mg1/qbd.hpp"
#include "mg1/sampler.hpp"

namespace mg1 {

/// Raw (unstandardized) features [lambda, log m2, ..., log mn] and the exact
/// queue-length target.
struct TrainingSample {
  std::vector<double> features;
  std::vector<double> target;
  double tail_mass = 0.0;
};

struct Dataset {
  int n_moments = 0;
  int levels = kDefaultLevels;
  std::uint64_t seed = 0;
  std::vector<TrainingSample> samples;

  std::size_t size() const { return samples.size(); }
  /// size() x n_moments
  Matrix features() const;
  /// size() x levels
  Matrix targets() const;
};

struct GenerateOptions {
  std::size_t count = 1;
  int n_moments = 5;
  SamplerConfig sampler;  ///< sampler.seed is the master seed
  SolveOptions solve;
  /// Split name; train, val and test draw from disjoint streams of one seed.
  std::string split = "train";
  int workers = 1;
  int max_attempts_per_sample = 10'000;
};

struct GenerateReport {
  long tail_retries = 0;   ///< draws redrawn because the tail exceeded epsilon
  long other_retries = 0;  ///< draws redrawn for any other solver or sampler error
  long sampler_attempts = 0;
  long sampler_rejections = 0;
};

/// [lambda, log m2, ..., log mn]; the unit first moment is dropped.
std::vector<double> raw_features(double lambda, std::span<const double> moments);

/// Generates `count` samples. Sample i depends only on (seed, split, i), so
/// the result is identical for any worker count.
Dataset generate(const GenerateOptions& options, GenerateReport* report = nullptr);

/// Keeps the first n features (lambda plus n-1 log-moments).
Dataset with_moments(const Dataset& data, int n);

/// `#mg1ds v1 n=<n> l=<l> count=<N> seed=<s>` then one line per sample:
/// features, `|`, target probabilities, `|`, tail mass.
void write_dataset(std::ostream& out, const Dataset& data);
Dataset read_dataset(std::istream& in);
void save_dataset(const std::string& path, const Dataset& data);
Dataset load_dataset(const std::string& path);

/// Per-feature z-score parameters, fit on a training split.
struct FeatureStats {
  std::vector<double> mean;
  std::vector<double> std;
};

/// Population mean / standard deviation per column. Throws DegenerateFeature
/// on a zero-variance column.
FeatureStats fit_standardizer(const Matrix& rows);
FeatureStats fit_standardizer(const Dataset& train);
std::vector<double> apply_standardizer(const FeatureStats& stats, std::span<const double> features);
Matrix apply_standardizer(const FeatureStats& stats, const Matrix& rows);
std::vector<double> invert_standardizer(const FeatureStats& stats, std::span<const double> standardized);

/// Shortest round-trip decimal text for a double.
std::string format_double(double x);

}  // namespace mg1
