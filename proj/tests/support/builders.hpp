// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <initializer_list>

#include "mg1/phtype.hpp"

namespace mg1::test {

inline PhaseType make_ph(std::initializer_list<double> alpha, std::initializer_list<std::initializer_list<double>> s) {
  Vector a(static_cast<Eigen::Index>(alpha.size()));
  Eigen::Index i = 0;
  for (double x : alpha) a(i++) = x;
  Matrix m(static_cast<Eigen::Index>(s.size()), static_cast<Eigen::Index>(s.begin()->size()));
  i = 0;
  for (const auto& row : s) {
    Eigen::Index j = 0;
    for (double x : row) m(i, j++) = x;
    ++i;
  }
  return PhaseType::validate(a, m);
}

inline PhaseType exponential(double rate) { return make_ph({1.0}, {{-rate}}); }

inline PhaseType erlang2(double rate) { return make_ph({1.0, 0.0}, {{-rate, rate}, {0.0, -rate}}); }

}  // namespace mg1::test
