// SPDX-License-Identifier: Apache-2.0
#include "mg1/phtype.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "mg1/errors.hpp"

namespace mg1 {

namespace {

std::string describe(const char* what, int i) { return std::string(what) + " at index " + std::to_string(i); }

}  // namespace

PhaseType PhaseType::validate(Vector alpha, Matrix generator) {
  const auto m = alpha.size();
  if (m == 0 || generator.rows() != m || generator.cols() != m) {
    throw Error(ErrorKind::DimensionMismatch, "alpha has length " + std::to_string(m) + " but S is " +
                                                  std::to_string(generator.rows()) + "x" +
                                                  std::to_string(generator.cols()));
  }
  for (int i = 0; i < m; ++i) {
    if (!(alpha[i] >= 0.0)) throw Error(ErrorKind::NegativeProbability, describe("negative alpha", i));
  }
  if (std::abs(alpha.sum() - 1.0) > kProbabilityTolerance) {
    throw Error(ErrorKind::NegativeProbability, "alpha sums to " + std::to_string(alpha.sum()) + ", not 1");
  }
  for (int i = 0; i < m; ++i) {
    if (!(generator(i, i) < 0.0)) throw Error(ErrorKind::BadDiagonal, describe("non-negative diagonal", i));
    double row = 0.0;
    for (int j = 0; j < m; ++j) {
      if (i != j && !(generator(i, j) >= 0.0)) {
        throw Error(ErrorKind::BadDiagonal, describe("negative off-diagonal rate in row", i));
      }
      row += generator(i, j);
    }
    // Rows rescaled to sum to zero carry roundoff of a few ulps of |S_ii|.
    if (row > kProbabilityTolerance * -generator(i, i)) {
      throw Error(ErrorKind::PositiveRowSum, describe("positive row sum", i));
    }
  }

  const Matrix neg = -generator;
  const LuFactor lu(neg);
  if (lu.singular()) throw Error(ErrorKind::SingularGenerator, "S is singular: no absorption (infinite mean)");

  PhaseType ph;
  ph.exit_rates_ = (-generator.rowwise().sum()).cwiseMax(0.0);
  ph.mean_ = alpha.dot(lu.solve(Vector(Vector::Ones(m))));
  if (!std::isfinite(ph.mean_) || !(ph.mean_ > 0.0)) {
    throw Error(ErrorKind::SingularGenerator, "mean is not finite and positive");
  }

  ph.initial_cdf_.resize(m);
  double acc = 0.0;
  for (int i = 0; i < m; ++i) ph.initial_cdf_[i] = (acc += alpha[i]);
  ph.jump_cdf_.assign(m, std::vector<double>(m + 1));
  ph.holding_rate_.resize(m);
  for (int i = 0; i < m; ++i) {
    const double rate = -generator(i, i);
    ph.holding_rate_[i] = rate;
    double c = 0.0;
    for (int j = 0; j < m; ++j) {
      if (j != i) c += generator(i, j) / rate;
      ph.jump_cdf_[i][j] = c;
    }
    ph.jump_cdf_[i][m] = c + ph.exit_rates_[i] / rate;
  }
  ph.alpha_ = std::move(alpha);
  ph.generator_ = std::move(generator);
  return ph;
}

double PhaseType::cdf(double t) const {
  if (t <= 0.0) return 0.0;
  const Matrix e = expm(generator_ * t);
  const double survival = alpha_.transpose() * e * Vector::Ones(phases());
  return std::clamp(1.0 - survival, 0.0, 1.0);
}

double PhaseType::quantile(double p, double rel_tol) const {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::InvalidArgument, "quantile level must be in (0,1)");
  double lo = 0.0;
  double hi = mean_;
  while (cdf(hi) < p) {
    lo = hi;
    hi *= 2.0;
  }
  if (lo == 0.0) {
    lo = hi;
    while (lo > 0.0 && cdf(lo) >= p) {
      hi = lo;
      lo /= 2.0;
    }
  }
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) >= p) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

std::vector<double> moments(const PhaseType& ph, int k_max) {
  if (k_max < 1) throw Error(ErrorKind::InvalidArgument, "k_max must be at least 1");
  const LuFactor lu(-ph.generator());
  if (lu.singular()) throw Error(ErrorKind::SingularGenerator, "S is singular");
  std::vector<double> out;
  out.reserve(k_max);
  Vector v = Vector::Ones(ph.phases());
  double factorial = 1.0;
  for (int k = 1; k <= k_max; ++k) {
    v = lu.solve(v);
    factorial *= k;
    out.push_back(factorial * ph.alpha().dot(v));
  }
  return out;
}

PhaseType scale_to_unit_mean(const PhaseType& ph) {
  return PhaseType::validate(ph.alpha(), ph.generator() * ph.mean());
}

double sample_variate(const PhaseType& ph, Rng& rng) {
  const int m = ph.phases();
  auto pick = [&rng](const std::vector<double>& cdf, int n) {
    const double u = rng.uniform() * cdf[n - 1];
    int i = 0;
    while (i < n - 1 && !(u < cdf[i])) ++i;
    return i;
  };
  int phase = pick(ph.initial_cdf_, m);
  double t = 0.0;
  for (;;) {
    t += rng.exponential(ph.holding_rate_[phase]);
    const int next = pick(ph.jump_cdf_[phase], m + 1);
    if (next == m) return t;
    phase = next;
  }
}

std::string to_json_line(const PhaseType& ph) {
  const int m = ph.phases();
  nlohmann::json j;
  j["m"] = m;
  std::vector<double> alpha(ph.alpha().data(), ph.alpha().data() + m);
  j["alpha"] = alpha;
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m; ++i) {
    std::vector<double> row(m);
    for (int k = 0; k < m; ++k) row[k] = ph.generator()(i, k);
    rows.push_back(row);
  }
  j["S"] = rows;
  return j.dump();
}

PhaseType parse_phase_type(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("PH record: ") + e.what());
  }
  try {
    const int m = j.at("m").get<int>();
    const auto alpha = j.at("alpha").get<std::vector<double>>();
    const auto rows = j.at("S").get<std::vector<std::vector<double>>>();
    if (m <= 0 || static_cast<int>(alpha.size()) != m || static_cast<int>(rows.size()) != m) {
      throw Error(ErrorKind::DimensionMismatch, "PH record: field sizes disagree with m");
    }
    Vector a(m);
    Matrix s(m, m);
    for (int i = 0; i < m; ++i) {
      a[i] = alpha[i];
      if (static_cast<int>(rows[i].size()) != m) throw Error(ErrorKind::DimensionMismatch, "PH record: ragged S");
      for (int k = 0; k < m; ++k) s(i, k) = rows[i][k];
    }
    return PhaseType::validate(std::move(a), std::move(s));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("PH record: ") + e.what());
  }
}

PhaseType load_phase_type(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    return parse_phase_type(line);
  }
  throw Error(ErrorKind::ParseError, path + ": no PH record found");
}

}  // namespace mg1
