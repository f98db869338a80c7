#include "cdshift/series.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace cdshift {

GradedSeries::GradedSeries(std::vector<int> multiplicities, int truncation)
    : multiplicities_(std::move(multiplicities)) {
  if (truncation < 0) throw InputError("series truncation must be nonnegative");
  if (multiplicities_.empty()) throw InputError("series needs at least one grade");
  offsets_.reserve(multiplicities_.size());
  for (int d : multiplicities_) {
    if (d < 0) throw InputError("grade multiplicities must be nonnegative");
    offsets_.push_back(dim_);
    dim_ += d;
  }
  if (dim_ < 1) throw InputError("series dimension must be at least 1");
  coeffs_.assign(truncation + 1, CVector::Zero(dim_));
}

GradedSeries GradedSeries::scalar(const std::vector<Complex>& coeffs) {
  if (coeffs.empty()) throw InputError("scalar series needs at least one coefficient");
  GradedSeries out({1}, static_cast<int>(coeffs.size()) - 1);
  for (std::size_t n = 0; n < coeffs.size(); ++n) out.coeffs_[n](0) = coeffs[n];
  return out;
}

GradedSeries GradedSeries::monomial(std::vector<int> multiplicities, int truncation, int grade,
                                    int degree, const CVector& v) {
  GradedSeries out(std::move(multiplicities), truncation);
  if (grade < 0 || grade >= out.grades()) throw InputError("monomial grade out of range");
  if (degree < 0 || degree > truncation) throw InputError("monomial degree out of range");
  if (v.size() != out.multiplicities_[grade]) throw InputError("monomial vector has wrong size");
  out.component(degree, grade) = v;
  return out;
}

CVector GradedSeries::coeff_or_zero(int n) const {
  if (n <= truncation()) return coeffs_[n];
  if (!is_polynomial()) {
    throw InputError("coefficient of degree " + std::to_string(n) +
                     " is beyond the truncation of a non-polynomial series");
  }
  return CVector::Zero(dim_);
}

GradedSeries GradedSeries::padded(int n) const {
  if (!is_polynomial() && n > truncation()) {
    throw InputError("only polynomials can be padded beyond their truncation");
  }
  GradedSeries out(multiplicities_, n);
  for (int k = 0; k <= n; ++k) out.coeffs_[k] = coeff_or_zero(k);
  out.exact_degree_ = exact_degree_;
  return out;
}

GradedSeries GradedSeries::grade_part(int grade) const {
  GradedSeries out({multiplicities_.at(grade)}, truncation());
  for (int n = 0; n <= truncation(); ++n) out.coeffs_[n] = component(n, grade);
  out.exact_degree_ = exact_degree_;
  return out;
}

GradedSeries series_differentiate(const GradedSeries& f, int k) {
  if (k < 0 || k > f.truncation()) {
    throw InputError("differentiation order " + std::to_string(k) +
                     " exceeds truncation " + std::to_string(f.truncation()));
  }
  GradedSeries out(f.multiplicities(), f.truncation() - k);
  for (int n = 0; n <= out.truncation(); ++n) {
    // (n+k)! / n!
    double falling = 1.0;
    for (int i = 1; i <= k; ++i) falling *= n + i;
    out.coeff(n) = falling * f.coeff(n + k);
  }
  out.set_exact_degree(f.is_polynomial() ? GradedSeries::kPolynomial : f.exact_degree() - k);
  return out;
}

std::vector<Complex> derivative_power_series(const MoebiusElement& g, double lambda, int n) {
  // (b̄z + ā)^{-2λ} = ā^{-2λ} (1 + t z)^{-2λ},  t = b̄/ā
  const Complex lead = derivative_power(g, Complex(0.0), lambda);
  const Complex t = std::conj(g.b()) / std::conj(g.a());
  std::vector<Complex> out(n + 1);
  Complex term = lead;
  for (int k = 0; k <= n; ++k) {
    out[k] = term;
    term *= -t * (2.0 * lambda + k) / static_cast<double>(k + 1);
  }
  return out;
}

std::vector<Complex> moebius_series(const MoebiusElement& g, int n) {
  // (az + b) / (ā (1 + t z)) with 1/(1+tz) = sum (-t)^k z^k
  const Complex abar = std::conj(g.a());
  const Complex t = std::conj(g.b()) / abar;
  std::vector<Complex> geo(n + 1);
  geo[0] = 1.0;
  for (int k = 1; k <= n; ++k) geo[k] = geo[k - 1] * (-t);
  std::vector<Complex> out(n + 1);
  for (int k = 0; k <= n; ++k) {
    out[k] = g.b() * geo[k];
    if (k >= 1) out[k] += g.a() * geo[k - 1];
    out[k] /= abar;
  }
  return out;
}

namespace {

std::vector<Complex> cauchy_product(const std::vector<Complex>& p, const std::vector<Complex>& q,
                                    int n) {
  std::vector<Complex> out(n + 1, Complex(0.0));
  for (int i = 0; i <= n && i < static_cast<int>(p.size()); ++i) {
    if (p[i] == Complex(0.0)) continue;
    for (int j = 0; i + j <= n && j < static_cast<int>(q.size()); ++j) out[i + j] += p[i] * q[j];
  }
  return out;
}

}  // namespace

GradedSeries series_transform(const GradedSeries& f, const MoebiusElement& g, double lambda, int n) {
  if (n < 0 || n > f.truncation()) {
    throw InputError("transform degree " + std::to_string(n) + " exceeds truncation " +
                     std::to_string(f.truncation()));
  }
  const auto gs = moebius_series(g, n);
  const auto weight = derivative_power_series(g, lambda, n);

  // f o g = sum_k f_k g^k, every power of g truncated at degree n
  std::vector<CVector> composed(n + 1, CVector::Zero(f.dim()));
  std::vector<Complex> power(n + 1, Complex(0.0));
  power[0] = 1.0;
  for (int k = 0; k <= f.truncation(); ++k) {
    const CVector& fk = f.coeff(k);
    if (!fk.isZero(0.0)) {
      for (int d = 0; d <= n; ++d) composed[d] += power[d] * fk;
    }
    if (k < f.truncation()) power = cauchy_product(power, gs, n);
  }

  GradedSeries out(f.multiplicities(), n);
  for (int d = 0; d <= n; ++d) {
    CVector acc = CVector::Zero(f.dim());
    for (int i = 0; i <= d; ++i) acc += weight[i] * composed[d - i];
    out.coeff(d) = acc;
  }

  if (f.is_polynomial()) {
    out.set_exact_degree(n);
  } else if (g.b() == Complex(0.0)) {
    // a rotation maps degree to degree
    out.set_exact_degree(std::min(n, f.exact_degree()));
  } else {
    out.set_exact_degree(-1);
  }
  return out;
}

GradedSeries leibnitz_rhs(const GradedSeries& f, const MoebiusElement& g, double ell, int k, int n) {
  if (!f.is_polynomial()) throw InputError("leibnitz_rhs expects a polynomial");
  if (k < 0) throw InputError("derivative order must be nonnegative");
  const Complex minus_c = -c_of(g);
  GradedSeries out(f.multiplicities(), n);
  double binom = 1.0;  // C(k, i)
  for (int i = 0; i <= k; ++i) {
    if (i > 0) binom = binom * (k - i + 1) / i;
    GradedSeries fi = i <= f.truncation() ? series_differentiate(f, i)
                                          : GradedSeries(f.multiplicities(), 0);
    const GradedSeries term = series_transform(fi.padded(n), g, ell + (k + i) / 2.0, n);
    const Complex scale = binom * pochhammer(2.0 * ell + i, k - i) * ipow(minus_c, k - i);
    for (int d = 0; d <= n; ++d) out.coeff(d) += scale * term.coeff(d);
  }
  out.set_exact_degree(n);
  return out;
}

double max_coeff_diff(const GradedSeries& a, const GradedSeries& b, int through) {
  if (a.dim() != b.dim()) throw InputError("series dimensions differ");
  double out = 0.0;
  for (int n = 0; n <= through; ++n) {
    out = std::max(out, (a.coeff_or_zero(n) - b.coeff_or_zero(n)).cwiseAbs().maxCoeff());
  }
  return out;
}

}  // namespace cdshift
