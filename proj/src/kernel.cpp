#include "cdshift/kernel.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace cdshift {

bool NormalizerSolution::all_positive() const {
  for (bool p : positive) {
    if (!p) return false;
  }
  return true;
}

bool positive_definite(const CMatrix& h) {
  if (h.size() == 0) return true;
  const CMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return ev(0) > 1e-10 * std::max(1.0, ev(ev.size() - 1));
}

void NormalizerSolution::classify() {
  min_eigenvalues.clear();
  max_eigenvalues.clear();
  positive.clear();
  for (CMatrix& p : products) {
    p = (0.5 * (p + p.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(p, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    min_eigenvalues.push_back(ev(0));
    max_eigenvalues.push_back(ev(ev.size() - 1));
    positive.push_back(ev(0) > 1e-10 * std::max(1.0, ev(ev.size() - 1)));
  }
}

NormalizerSolution NormalizerSolution::identity(const std::vector<int>& multiplicities) {
  NormalizerSolution out;
  for (int d : multiplicities) out.products.push_back(CMatrix::Identity(d, d));
  out.classify();
  return out;
}

double gamma_coefficient(double eta, int l, int j) {
  double factorial = 1.0;
  for (int k = 2; k <= l - j; ++k) factorial *= k;
  return 1.0 / (factorial * pochhammer(2.0 * eta + 2.0 * j, l - j));
}

namespace {

void require_positive_eta(const BundleSpec& spec) {
  if (!(spec.eta > 0.0)) throw InputError("eta must be positive");
}

}  // namespace

GradedSeries gamma_apply(const BundleSpec& spec, const std::optional<BlockDiagonal>& normalizer,
                         const GradedSeries& f) {
  spec.validate();
  if (f.multiplicities() != spec.multiplicities) {
    throw InputError("series grading does not match the spec multiplicities");
  }
  for (int l = 0; l <= spec.m(); ++l) {
    for (int j = 0; j < l; ++j) {
      if (pochhammer(2.0 * spec.eta + 2.0 * j, l - j) == 0.0) {
        throw InputError("eta makes a Pochhammer denominator of the intertwining operator vanish");
      }
    }
  }

  GradedSeries nf = f;
  if (normalizer) {
    if (normalizer->blocks.size() != spec.multiplicities.size()) {
      throw InputError("normalizer has the wrong number of blocks");
    }
    for (int n = 0; n <= f.truncation(); ++n) {
      for (int j = 0; j <= spec.m(); ++j) {
        nf.component(n, j) = normalizer->blocks[j] * f.component(n, j);
      }
    }
  }

  const int trunc = f.truncation();
  GradedSeries out(spec.multiplicities, trunc);
  for (int l = 0; l <= spec.m(); ++l) {
    for (int j = 0; j <= l; ++j) {
      const int k = l - j;
      const CMatrix coeff = gamma_coefficient(spec.eta, l, j) * spec.chain(l, j);
      for (int n = 0; n + k <= trunc; ++n) {
        double falling = 1.0;
        for (int i = 1; i <= k; ++i) falling *= n + i;
        out.component(n, l) += falling * (coeff * nf.component(n + k, j));
      }
    }
  }
  out.set_exact_degree(f.is_polynomial() ? GradedSeries::kPolynomial
                                         : f.exact_degree() - spec.m());
  return out;
}

NormalizerSolution solve_normalizer(const BundleSpec& spec) {
  spec.validate();
  require_positive_eta(spec);
  NormalizerSolution out;
  for (int l = 0; l <= spec.m(); ++l) {
    CMatrix p = CMatrix::Identity(spec.multiplicities[l], spec.multiplicities[l]);
    for (int j = 0; j < l; ++j) {
      const CMatrix c = spec.chain(l, j);
      p -= gamma_coefficient(spec.eta, l, j) * c * out.products[j] * c.adjoint();
    }
    out.products.push_back(std::move(p));
  }
  out.classify();
  return out;
}

NormalizerSolution closed_form_normalizer(const BundleSpec& spec) {
  spec.validate();
  require_positive_eta(spec);
  NormalizerSolution out;
  for (int j = 0; j <= spec.m(); ++j) {
    CMatrix p = CMatrix::Zero(spec.multiplicities[j], spec.multiplicities[j]);
    double factorial = 1.0;  // (j-k)!
    for (int k = j; k >= 0; --k) {
      if (k < j) factorial *= j - k;
      const double sign = ((j + k) % 2 == 0) ? 1.0 : -1.0;
      const double coeff = sign / (factorial * pochhammer(2.0 * spec.eta + j + k - 1.0, j - k));
      const CMatrix c = spec.chain(j, k);
      p += coeff * c * c.adjoint();
    }
    out.products.push_back(std::move(p));
  }
  out.classify();
  return out;
}

KernelVerdict kernel_exists(const BundleSpec& spec) {
  spec.validate();
  KernelVerdict v;
  if (!(spec.eta > 0.0)) {
    v.reason = "eta must be positive";
    return v;
  }
  v.witness = solve_normalizer(spec);
  v.exists = v.witness->all_positive();
  if (!v.exists) {
    for (std::size_t j = 0; j < v.witness->positive.size(); ++j) {
      if (!v.witness->positive[j]) {
        v.reason = "normalizer product P_" + std::to_string(j) + " is not positive definite";
        break;
      }
    }
  }
  return v;
}

double eta_threshold(const BundleSpec& spec, double tol) {
  if (!(tol > 0.0)) throw InputError("threshold tolerance must be positive");
  BundleSpec probe = spec;
  auto holds = [&probe](double eta) {
    probe.eta = eta;
    return solve_normalizer(probe).all_positive();
  };
  double lo = 1e-6;
  if (holds(lo)) return 0.0;
  double hi = 1.0;
  while (!holds(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1048576.0) throw NumericalError("no positivity found for eta up to 2^20");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

CMatrix kernel_at_origin(const BundleSpec& spec, const NormalizerSolution& p) {
  spec.validate();
  require_positive_eta(spec);
  const int d = spec.dim();
  CMatrix out = CMatrix::Zero(d, d);
  for (int l = 0; l <= spec.m(); ++l) {
    auto block = out.block(spec.offset(l), spec.offset(l), spec.multiplicities[l],
                           spec.multiplicities[l]);
    for (int j = 0; j <= l; ++j) {
      const CMatrix c = spec.chain(l, j);
      block += gamma_coefficient(spec.eta, l, j) * c * p.products[j] * c.adjoint();
    }
  }
  return out;
}

Complex scalar_kernel_derivative(int a, int b, double alpha, Complex z, Complex wbar) {
  // d_w̄^b gives (alpha)_b z^b (1 - z w̄)^{-alpha-b}; then Leibniz in z.
  const Complex base = 1.0 - z * wbar;
  Complex out(0.0);
  double binom = 1.0;    // C(a, i)
  double falling = 1.0;  // b! / (b-i)!
  for (int i = 0; i <= std::min(a, b); ++i) {
    if (i > 0) {
      binom = binom * (a - i + 1) / i;
      falling *= b - i + 1;
    }
    const double coeff = binom * falling * pochhammer(alpha, b) * pochhammer(alpha + b, a - i);
    out += coeff * ipow(z, b - i) * ipow(wbar, a - i) *
           std::pow(base, -(alpha + a + b - i));
  }
  return out;
}

CMatrix kernel_at(const BundleSpec& spec, const NormalizerSolution& p, Complex z, Complex w) {
  spec.validate();
  require_positive_eta(spec);
  if (!(std::abs(z) < 1.0) || !(std::abs(w) < 1.0)) {
    throw InputError("kernel points must lie in the open unit disc");
  }
  const int d = spec.dim();
  const Complex wbar = std::conj(w);
  CMatrix out = CMatrix::Zero(d, d);
  for (int l = 0; l <= spec.m(); ++l) {
    for (int q = 0; q <= spec.m(); ++q) {
      auto block = out.block(spec.offset(l), spec.offset(q), spec.multiplicities[l],
                             spec.multiplicities[q]);
      for (int j = 0; j <= std::min(l, q); ++j) {
        const double weight = gamma_coefficient(spec.eta, l, j) * gamma_coefficient(spec.eta, q, j);
        const Complex deriv =
            scalar_kernel_derivative(l - j, q - j, 2.0 * (spec.eta + j), z, wbar);
        block += (weight * deriv) * spec.chain(l, j) * p.products[j] * spec.chain(q, j).adjoint();
      }
    }
  }
  return out;
}

double invariance_residual(const BundleSpec& spec, const KernelFunction& kernel,
                           const MoebiusElement& g, Complex z, Complex w) {
  const CMatrix jz = multiplier(spec, g, z);
  const CMatrix jw = multiplier(spec, g, w);
  const CMatrix moved = jz * kernel(mobius_apply(g, z), mobius_apply(g, w)) * jw.adjoint();
  return max_abs(moved - kernel(z, w));
}

double kernel_invariance_residual(const BundleSpec& spec, const NormalizerSolution& p,
                                  const MoebiusElement& g, Complex z, Complex w) {
  return invariance_residual(
      spec, [&](Complex x, Complex y) { return kernel_at(spec, p, x, y); }, g, z, w);
}

CMatrix transport_matrix(const BundleSpec& spec, Complex z) {
  return multiplier(spec, point_section(-z), z);
}

double transport_residual(const BundleSpec& spec, const NormalizerSolution& p, Complex z) {
  const CMatrix j = transport_matrix(spec, z);
  return max_abs(kernel_at(spec, p, z, z) - j * kernel_at_origin(spec, p) * j.adjoint());
}

CMatrix hermitian_structure_at(const BundleSpec& spec, const NormalizerSolution& p, Complex z) {
  const CMatrix k = kernel_at(spec, p, z, z);
  const CMatrix sym = 0.5 * (k + k.adjoint());
  if (!positive_definite(sym)) {
    throw NumericalError("K(z,z) is not positive definite; the kernel does not exist");
  }
  Eigen::LLT<CMatrix> llt(sym);
  if (llt.info() != Eigen::Success) throw NumericalError("K(z,z) is numerically singular");
  return llt.solve(CMatrix::Identity(sym.rows(), sym.cols()));
}

double hermitian_law_residual(const BundleSpec& spec, const NormalizerSolution& p,
                              const MoebiusElement& g, Complex z) {
  const CMatrix j = multiplier(spec, g, z);
  const CMatrix lhs = hermitian_structure_at(spec, p, mobius_apply(g, z));
  const CMatrix rhs = j.adjoint() * hermitian_structure_at(spec, p, z) * j;
  return max_abs(lhs - rhs);
}

LineBundleTwist::LineBundleTwist(BundleSpec spec, NormalizerSolution p, double eps)
    : base_(std::move(spec)), twisted_(base_), p_(std::move(p)), eps_(eps) {
  if (!(eps >= 0.0)) throw InputError("twist parameter must be nonnegative");
  twisted_.eta = base_.eta + eps;
}

CMatrix LineBundleTwist::operator()(Complex z, Complex w) const {
  return std::pow(1.0 - z * std::conj(w), -2.0 * eps_) * kernel_at(base_, p_, z, w);
}

KernelFunction LineBundleTwist::as_function() const {
  return [twist = *this](Complex z, Complex w) { return twist(z, w); };
}

}  // namespace cdshift
