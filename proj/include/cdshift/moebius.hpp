#pragma once

#include "cdshift/types.hpp"

namespace cdshift {

/// Rising factorial x(x+1)...(x+n-1); equals 1 for n = 0.
double pochhammer(double x, int n);

/// log of the rising factorial for x > 0, through lgamma. Stays finite for n
/// in the thousands where the direct product overflows.
double log_pochhammer(double x, int n);

/// An element of SU(1,1), [[a, b], [b̄, ā]] with |a|^2 - |b|^2 = 1, acting on
/// the unit disc by z -> (az + b) / (b̄z + ā).
///
/// Fractional powers of g'(z) = (b̄z + ā)^{-2} are taken on the principal
/// branch only; see branch_valid().
class MoebiusElement {
 public:
  /// Throws InputError unless |a|^2 - |b|^2 = 1 to within 1e-12 (scaled by
  /// |a|^2 for elements far from the identity).
  MoebiusElement(Complex a, Complex b);

  static MoebiusElement identity() { return {Complex(1.0), Complex(0.0)}; }
  /// k_theta: z -> e^{i theta} z, represented with a = e^{i theta / 2}.
  static MoebiusElement rotation(double theta);
  /// Builds the element with the given b and a = e^{i phase} sqrt(1 + |b|^2).
  static MoebiusElement from_parameters(Complex b, double phase);

  Complex a() const { return a_; }
  Complex b() const { return b_; }

  /// b̄z + ā, the denominator of the action.
  Complex denominator(Complex z) const { return std::conj(b_) * z + std::conj(a_); }

  MoebiusElement inverse() const;

 private:
  Complex a_;
  Complex b_;
};

/// (h * g) acts as h after g: (h * g)(z) = h(g(z)).
MoebiusElement operator*(const MoebiusElement& h, const MoebiusElement& g);

/// max(|b|, |arg a|): how far an element is from the identity in the
/// parameters of from_parameters().
double distance_from_identity(const MoebiusElement& g);

/// True iff b̄z + ā lies off the closed negative real axis, the domain on
/// which the principal-branch powers of g'(z) are used.
bool branch_valid(const MoebiusElement& g, Complex z);

Complex mobius_apply(const MoebiusElement& g, Complex z);

/// g'(z)^lambda = exp(-2 lambda Log(b̄z + ā)); throws BranchError outside
/// branch_valid and InputError for |z| >= 1.
Complex derivative_power(const MoebiusElement& g, Complex z, double lambda);

/// c_g, the lower-left matrix entry b̄; g''(z) = -2 c_g g'(z)^{3/2}.
Complex c_of(const MoebiusElement& g);

/// p_z = (1 - |z|^2)^{-1/2} [[1, z], [z̄, 1]], the element with p_z(0) = z.
MoebiusElement point_section(Complex z);

}  // namespace cdshift
