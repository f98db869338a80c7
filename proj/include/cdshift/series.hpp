#pragma once

#include <limits>
#include <vector>

#include "cdshift/moebius.hpp"
#include "cdshift/types.hpp"

namespace cdshift {

/// A truncated power series sum_n c_n z^n with vector coefficients c_n in
/// C^d, d = d_0 + ... + d_m, where each c_n splits into graded components of
/// sizes d_0..d_m.
///
/// Every series carries an exactness watermark: coefficients of degree
/// <= exact_degree() are exact Taylor coefficients of the function the series
/// stands for. A polynomial (all coefficients above the truncation are zero)
/// is exact at every degree and reports kPolynomial.
class GradedSeries {
 public:
  static constexpr int kPolynomial = std::numeric_limits<int>::max();

  /// All-zero polynomial with the given grading and truncation degree.
  GradedSeries(std::vector<int> multiplicities, int truncation);

  /// Scalar (single component of size 1) polynomial with the given
  /// coefficients, lowest degree first.
  static GradedSeries scalar(const std::vector<Complex>& coeffs);

  /// The polynomial z^degree * v placed in grade j.
  static GradedSeries monomial(std::vector<int> multiplicities, int truncation,
                               int grade, int degree, const CVector& v);

  int truncation() const { return static_cast<int>(coeffs_.size()) - 1; }
  int dim() const { return dim_; }
  int grades() const { return static_cast<int>(multiplicities_.size()); }
  const std::vector<int>& multiplicities() const { return multiplicities_; }
  int offset(int grade) const { return offsets_[grade]; }

  CVector& coeff(int n) { return coeffs_[n]; }
  const CVector& coeff(int n) const { return coeffs_[n]; }

  auto component(int n, int grade) { return coeffs_[n].segment(offsets_[grade], multiplicities_[grade]); }
  auto component(int n, int grade) const {
    return coeffs_[n].segment(offsets_[grade], multiplicities_[grade]);
  }

  int exact_degree() const { return exact_degree_; }
  bool is_polynomial() const { return exact_degree_ == kPolynomial; }
  void set_exact_degree(int degree) { exact_degree_ = degree; }
  /// Highest degree whose coefficient may be asserted on.
  int exact_through() const { return std::min(exact_degree_, truncation()); }

  /// Coefficient at degree n, reading zero above the truncation of a
  /// polynomial. Throws InputError for an unknown coefficient of a
  /// non-polynomial series.
  CVector coeff_or_zero(int n) const;

  /// Same polynomial with truncation raised (or lowered) to n.
  GradedSeries padded(int n) const;

  /// Restriction to one grade as a series with a single component.
  GradedSeries grade_part(int grade) const;

 private:
  std::vector<int> multiplicities_;
  std::vector<int> offsets_;
  int dim_ = 0;
  std::vector<CVector> coeffs_;
  int exact_degree_ = kPolynomial;
};

/// k-th termwise derivative. The truncation and the exactness watermark both
/// drop by k (a polynomial stays a polynomial). Throws for k > truncation.
GradedSeries series_differentiate(const GradedSeries& f, int k);

/// Taylor coefficients at 0, through degree n, of z -> g'(z)^lambda.
std::vector<Complex> derivative_power_series(const MoebiusElement& g, double lambda, int n);

/// Taylor coefficients at 0, through degree n, of g(z).
std::vector<Complex> moebius_series(const MoebiusElement& g, int n);

/// Truncated expansion of z -> g'(z)^lambda f(g(z)) through degree n, every
/// coordinate transformed with the same lambda. Exact through n when f is a
/// polynomial; a truncated non-polynomial f composed with a non-rotation g
/// yields nothing exact.
GradedSeries series_transform(const GradedSeries& f, const MoebiusElement& g, double lambda, int n);

/// sum_{i=0}^{k} C(k,i) (2l+i)_{k-i} (-c_g)^{k-i} (g')^{l+(k+i)/2} (f^{(i)} o g)
/// through degree n, for a scalar polynomial f. This is the closed form of
/// the k-th derivative of (g')^l (f o g).
GradedSeries leibnitz_rhs(const GradedSeries& f, const MoebiusElement& g, double ell, int k, int n);

/// Max coefficient difference of two identically graded series through the
/// given degree.
double max_coeff_diff(const GradedSeries& a, const GradedSeries& b, int through);

}  // namespace cdshift
