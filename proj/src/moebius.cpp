#include "cdshift/moebius.hpp"

#include <cmath>
#include <string>

namespace cdshift {

double pochhammer(double x, int n) {
  double out = 1.0;
  for (int k = 0; k < n; ++k) out *= x + k;
  return out;
}

double log_pochhammer(double x, int n) {
  if (n == 0) return 0.0;
  return std::lgamma(x + n) - std::lgamma(x);
}

MoebiusElement::MoebiusElement(Complex a, Complex b) : a_(a), b_(b) {
  const double det = std::norm(a) - std::norm(b);
  if (!(std::abs(det - 1.0) <= 1e-12 * std::max(1.0, std::norm(a)))) {
    throw InputError("Moebius element must satisfy |a|^2 - |b|^2 = 1, got " +
                     std::to_string(det));
  }
}

MoebiusElement MoebiusElement::rotation(double theta) {
  return {std::polar(1.0, theta / 2.0), Complex(0.0)};
}

MoebiusElement MoebiusElement::from_parameters(Complex b, double phase) {
  return {std::polar(std::sqrt(1.0 + std::norm(b)), phase), b};
}

MoebiusElement MoebiusElement::inverse() const { return {std::conj(a_), -b_}; }

MoebiusElement operator*(const MoebiusElement& h, const MoebiusElement& g) {
  // [[a_h, b_h], [b̄_h, ā_h]] [[a_g, b_g], [b̄_g, ā_g]]
  const Complex a = h.a() * g.a() + h.b() * std::conj(g.b());
  const Complex b = h.a() * g.b() + h.b() * std::conj(g.a());
  return {a, b};
}

double distance_from_identity(const MoebiusElement& g) {
  return std::max(std::abs(g.b()), std::abs(std::arg(g.a())));
}

bool branch_valid(const MoebiusElement& g, Complex z) {
  const Complex w = g.denominator(z);
  return !(w.imag() == 0.0 && w.real() <= 0.0);
}

namespace {

void require_in_disc(Complex z) {
  if (!(std::abs(z) < 1.0)) {
    throw InputError("point must lie in the open unit disc, |z| = " +
                     std::to_string(std::abs(z)));
  }
}

}  // namespace

Complex mobius_apply(const MoebiusElement& g, Complex z) {
  require_in_disc(z);
  return (g.a() * z + g.b()) / g.denominator(z);
}

Complex derivative_power(const MoebiusElement& g, Complex z, double lambda) {
  require_in_disc(z);
  if (!branch_valid(g, z)) {
    throw BranchError("b̄z+ā lies on the closed negative real axis; principal "
                      "branch of g'(z)^lambda undefined");
  }
  return std::exp(-2.0 * lambda * std::log(g.denominator(z)));
}

Complex c_of(const MoebiusElement& g) { return std::conj(g.b()); }

MoebiusElement point_section(Complex z) {
  require_in_disc(z);
  const double s = 1.0 / std::sqrt(1.0 - std::norm(z));
  return {Complex(s), s * z};
}

}  // namespace cdshift
