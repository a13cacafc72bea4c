// SPDX-License-Identifier: Apache-2.0
#include "mg1/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "mg1/errors.hpp"

namespace mg1 {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw Error(ErrorKind::ParseError, "bad number '" + std::string(text) + "'");
  }
  return value;
}

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    out.push_back(parse_double(text.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void write_list(std::ostream& out, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ',';
    out << format_double(values[i]);
  }
}

struct WorkerResult {
  GenerateReport report;
  std::exception_ptr error;
};

TrainingSample generate_one(const GenerateOptions& options, std::uint64_t split_key, std::size_t index,
                            GenerateReport& report) {
  for (int attempt = 0; attempt < options.max_attempts_per_sample; ++attempt) {
    Rng rng = Rng::derive(options.sampler.seed, {split_key, index, static_cast<std::uint64_t>(attempt)});
    try {
      SampleStats stats;
      QueueInstance instance = sample_instance(options.sampler, rng, &stats);
      report.sampler_attempts += stats.attempts;
      report.sampler_rejections += stats.rejections;
      const auto m = moments(instance.service, options.n_moments);
      QbdSolution sol = solve(instance, options.solve);
      TrainingSample sample;
      sample.features = raw_features(instance.lambda, m);
      sample.target = std::move(sol.dist.probs);
      sample.tail_mass = sol.dist.tail_mass;
      return sample;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::TailTooHeavy) {
        ++report.tail_retries;
      } else {
        ++report.other_retries;
      }
    }
  }
  throw Error(ErrorKind::RejectionBudgetExceeded,
              "sample " + std::to_string(index) + " failed after " +
                  std::to_string(options.max_attempts_per_sample) + " attempts");
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

Matrix Dataset::features() const {
  Matrix x(static_cast<Eigen::Index>(size()), n_moments);
  for (std::size_t i = 0; i < size(); ++i) {
    for (int j = 0; j < n_moments; ++j) x(static_cast<Eigen::Index>(i), j) = samples[i].features[j];
  }
  return x;
}

Matrix Dataset::targets() const {
  Matrix y(static_cast<Eigen::Index>(size()), levels);
  for (std::size_t i = 0; i < size(); ++i) {
    for (int j = 0; j < levels; ++j) y(static_cast<Eigen::Index>(i), j) = samples[i].target[j];
  }
  return y;
}

std::vector<double> raw_features(double lambda, std::span<const double> moments) {
  std::vector<double> f;
  f.reserve(moments.size());
  f.push_back(lambda);
  for (std::size_t k = 1; k < moments.size(); ++k) f.push_back(std::log(moments[k]));
  return f;
}

Dataset generate(const GenerateOptions& options, GenerateReport* report) {
  if (options.n_moments < 2) throw Error(ErrorKind::InvalidArgument, "n_moments must be at least 2");
  if (options.count < 1) throw Error(ErrorKind::InvalidArgument, "count must be at least 1");
  options.sampler.check();

  Dataset data;
  data.n_moments = options.n_moments;
  data.levels = options.solve.levels;
  data.seed = options.sampler.seed;
  data.samples.resize(options.count);

  const std::uint64_t split_key = fnv1a(options.split);
  const int workers = std::max(1, std::min<int>(options.workers, static_cast<int>(options.count)));
  std::vector<WorkerResult> results(workers);
  auto run = [&](int w) {
    try {
      for (std::size_t i = static_cast<std::size_t>(w); i < options.count; i += static_cast<std::size_t>(workers)) {
        data.samples[i] = generate_one(options, split_key, i, results[w].report);
      }
    } catch (...) {
      results[w].error = std::current_exception();
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }

  GenerateReport total;
  for (const auto& r : results) {
    if (r.error) std::rethrow_exception(r.error);
    total.tail_retries += r.report.tail_retries;
    total.other_retries += r.report.other_retries;
    total.sampler_attempts += r.report.sampler_attempts;
    total.sampler_rejections += r.report.sampler_rejections;
  }
  if (report) *report = total;
  return data;
}

Dataset with_moments(const Dataset& data, int n) {
  if (n < 2 || n > data.n_moments) {
    throw Error(ErrorKind::DatasetMismatch,
                "cannot take " + std::to_string(n) + " moments from a dataset with " + std::to_string(data.n_moments));
  }
  Dataset out = data;
  out.n_moments = n;
  for (auto& s : out.samples) s.features.resize(n);
  return out;
}

void write_dataset(std::ostream& out, const Dataset& data) {
  out << "#mg1ds v1 n=" << data.n_moments << " l=" << data.levels << " count=" << data.size()
      << " seed=" << data.seed << '\n';
  for (const auto& s : data.samples) {
    write_list(out, s.features);
    out << '|';
    write_list(out, s.target);
    out << '|' << format_double(s.tail_mass) << '\n';
  }
}

Dataset read_dataset(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw Error(ErrorKind::ParseError, "empty dataset file");
  Dataset data;
  std::size_t count = 0;
  {
    std::istringstream hs(header);
    std::string magic, version, tok;
    hs >> magic >> version;
    if (magic != "#mg1ds" || version != "v1") throw Error(ErrorKind::ParseError, "not an mg1ds v1 file");
    while (hs >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) throw Error(ErrorKind::ParseError, "bad header token " + tok);
      const auto key = tok.substr(0, eq);
      const auto value = tok.substr(eq + 1);
      try {
        if (key == "n") data.n_moments = std::stoi(value);
        else if (key == "l") data.levels = std::stoi(value);
        else if (key == "count") count = std::stoull(value);
        else if (key == "seed") data.seed = std::stoull(value);
      } catch (const std::exception&) {
        throw Error(ErrorKind::ParseError, "bad header value " + tok);
      }
    }
  }
  data.samples.reserve(count);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto bar1 = line.find('|');
    const auto bar2 = line.find('|', bar1 == std::string::npos ? 0 : bar1 + 1);
    if (bar1 == std::string::npos || bar2 == std::string::npos) {
      throw Error(ErrorKind::ParseError, "sample line without two '|' separators");
    }
    const std::string_view view(line);
    TrainingSample s;
    s.features = parse_list(view.substr(0, bar1));
    s.target = parse_list(view.substr(bar1 + 1, bar2 - bar1 - 1));
    s.tail_mass = parse_double(view.substr(bar2 + 1));
    if (static_cast<int>(s.features.size()) != data.n_moments || static_cast<int>(s.target.size()) != data.levels) {
      throw Error(ErrorKind::DatasetMismatch, "sample row length disagrees with header");
    }
    data.samples.push_back(std::move(s));
  }
  if (data.samples.size() != count) {
    throw Error(ErrorKind::DatasetMismatch, "header count " + std::to_string(count) + " but file has " +
                                                std::to_string(data.samples.size()) + " rows");
  }
  return data;
}

void save_dataset(const std::string& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
  write_dataset(out, data);
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path);
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  return read_dataset(in);
}

FeatureStats fit_standardizer(const Matrix& rows) {
  if (rows.rows() == 0) throw Error(ErrorKind::InvalidArgument, "cannot standardize an empty split");
  FeatureStats stats;
  const auto n = static_cast<double>(rows.rows());
  for (Eigen::Index j = 0; j < rows.cols(); ++j) {
    const double mean = rows.col(j).sum() / n;
    const double var = (rows.col(j).array() - mean).square().sum() / n;
    const double sd = std::sqrt(var);
    if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) {
      throw Error(ErrorKind::DegenerateFeature, "feature " + std::to_string(j) + " has zero variance");
    }
    stats.mean.push_back(mean);
    stats.std.push_back(sd);
  }
  return stats;
}

FeatureStats fit_standardizer(const Dataset& train) { return fit_standardizer(train.features()); }

std::vector<double> apply_standardizer(const FeatureStats& stats, std::span<const double> features) {
  if (features.size() != stats.mean.size()) throw Error(ErrorKind::DimensionMismatch, "feature length mismatch");
  std::vector<double> out(features.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = (features[j] - stats.mean[j]) / stats.std[j];
  return out;
}

Matrix apply_standardizer(const FeatureStats& stats, const Matrix& rows) {
  if (static_cast<std::size_t>(rows.cols()) != stats.mean.size()) {
    throw Error(ErrorKind::DimensionMismatch, "feature width mismatch");
  }
  Matrix out(rows.rows(), rows.cols());
  for (Eigen::Index j = 0; j < rows.cols(); ++j) {
    out.col(j) = (rows.col(j).array() - stats.mean[j]) / stats.std[j];
  }
  return out;
}

std::vector<double> invert_standardizer(const FeatureStats& stats, std::span<const double> standardized) {
  if (standardized.size() != stats.mean.size()) throw Error(ErrorKind::DimensionMismatch, "feature length mismatch");
  std::vector<double> out(standardized.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = standardized[j] * stats.std[j] + stats.mean[j];
  return out;
}

}  // namespace mg1
