#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "cdshift/bundle.hpp"
#include "cdshift/kernel.hpp"
#include "cdshift/moebius.hpp"
#include "cdshift/series.hpp"

namespace cdshift::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Uniform in the square [-1, 1] x [-1, 1] scaled by s.
inline Complex random_complex(Rng& rng, double s = 1.0) {
  return {s * uniform(rng, -1.0, 1.0), s * uniform(rng, -1.0, 1.0)};
}

inline Complex random_point(Rng& rng, double radius) {
  const double r = radius * std::sqrt(uniform(rng, 0.0, 1.0));
  return std::polar(r, uniform(rng, -M_PI, M_PI));
}

/// Element with |b| <= radius and |arg a| <= radius.
inline MoebiusElement random_near_identity(Rng& rng, double radius) {
  const Complex b = std::polar(uniform(rng, 0.0, radius), uniform(rng, -M_PI, M_PI));
  return MoebiusElement::from_parameters(b, uniform(rng, -radius, radius));
}

inline CMatrix random_matrix(Rng& rng, int rows, int cols, double s = 1.0) {
  CMatrix out(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) out(i, j) = random_complex(rng, s);
  }
  return out;
}

inline CMatrix random_unitary(Rng& rng, int d) {
  Eigen::HouseholderQR<CMatrix> qr(random_matrix(rng, d, d));
  return qr.householderQ() * CMatrix::Identity(d, d);
}

inline BlockDiagonal random_block_unitary(Rng& rng, const std::vector<int>& mult) {
  BlockDiagonal u;
  for (int d : mult) u.blocks.push_back(random_unitary(rng, d));
  return u;
}

inline BundleSpec make_spec(double eta, std::vector<int> mult, Rng& rng, double scale = 1.0) {
  BundleSpec s;
  s.eta = eta;
  s.multiplicities = std::move(mult);
  for (std::size_t j = 1; j < s.multiplicities.size(); ++j) {
    s.blocks.push_back(random_matrix(rng, s.multiplicities[j], s.multiplicities[j - 1], scale));
  }
  return s;
}

inline BundleSpec random_spec(Rng& rng, int m_max, int d_max, double eta, double scale = 1.0) {
  const int m = std::uniform_int_distribution<int>(0, m_max)(rng);
  std::vector<int> mult;
  for (int j = 0; j <= m; ++j) mult.push_back(std::uniform_int_distribution<int>(1, d_max)(rng));
  return make_spec(eta, std::move(mult), rng, scale);
}

/// Shrinks the blocks until the spec admits a kernel.
inline BundleSpec shrink_until_kernel(BundleSpec s) {
  while (!kernel_exists(s).exists) {
    for (auto& y : s.blocks) y *= 0.7;
  }
  return s;
}

inline BundleSpec scalar_spec(double eta, const std::vector<Complex>& ys) {
  BundleSpec s;
  s.eta = eta;
  s.multiplicities.assign(ys.size() + 1, 1);
  for (Complex y : ys) s.blocks.push_back(CMatrix::Constant(1, 1, y));
  return s;
}

/// Random polynomial of the given degree living in one grade.
inline GradedSeries random_grade_polynomial(Rng& rng, const std::vector<int>& mult, int grade,
                                            int degree, int truncation) {
  GradedSeries f(mult, truncation);
  for (int n = 0; n <= degree; ++n) {
    for (int q = 0; q < mult[grade]; ++q) f.component(n, grade)(q) = random_complex(rng);
  }
  return f;
}

}  // namespace cdshift::testing
