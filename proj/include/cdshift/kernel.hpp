#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cdshift/bundle.hpp"
#include "cdshift/series.hpp"
#include "cdshift/types.hpp"

namespace cdshift {

/// The Hermitian products P_j = N_j N_j^* of a block-diagonal normalizer,
/// with P_0 = I. The N_j themselves are never formed.
struct NormalizerSolution {
  std::vector<CMatrix> products;
  std::vector<double> min_eigenvalues;
  std::vector<double> max_eigenvalues;
  std::vector<bool> positive;

  bool all_positive() const;
  /// Fills the eigenvalue summaries and positivity flags from products.
  void classify();
  /// The normalizer N = I (all products the identity).
  static NormalizerSolution identity(const std::vector<int>& multiplicities);
};

/// 1 / ((l-j)! (2 eta + 2j)_{l-j}), the weight of Y_l...Y_{j+1} d^{l-j}/dz^{l-j}
/// in the intertwining operator.
double gamma_coefficient(double eta, int l, int j);

/// True iff the smallest eigenvalue of the Hermitian matrix exceeds
/// 1e-10 * max(1, largest eigenvalue).
bool positive_definite(const CMatrix& h);

/// (Gamma f)_l = sum_{j<=l} gamma_coefficient(eta, l, j) Y_l...Y_{j+1} (N f)_j^{(l-j)}.
/// The normalizer factor N is optional (identity when absent); note that only
/// its blocks are used, not the products P_j.
GradedSeries gamma_apply(const BundleSpec& spec, const std::optional<BlockDiagonal>& normalizer,
                         const GradedSeries& f);

/// Forward recursion P_l = I - sum_{j<l} gamma_coefficient Y_l..Y_{j+1} P_j (..)^*,
/// the unique solution of K(0,0) = I with P_0 = I. Requires eta > 0.
NormalizerSolution solve_normalizer(const BundleSpec& spec);

/// P_j = sum_k (-1)^{j+k} / ((j-k)! (2 eta + j + k - 1)_{j-k}) Y_j..Y_{k+1} (Y_j..Y_{k+1})^*.
NormalizerSolution closed_form_normalizer(const BundleSpec& spec);

struct KernelVerdict {
  bool exists = false;
  std::string reason;
  std::optional<NormalizerSolution> witness;
};

/// An invariant reproducing kernel exists iff eta > 0 and every P_j from
/// solve_normalizer is positive definite.
KernelVerdict kernel_exists(const BundleSpec& spec);

/// The threshold eta_Y for the blocks of spec (spec.eta is ignored): the
/// kernel exists for eta > eta_Y and not below. Bisection to width tol.
double eta_threshold(const BundleSpec& spec, double tol = 1e-6);

/// K(0,0), block diagonal, for the given products P_j.
CMatrix kernel_at_origin(const BundleSpec& spec, const NormalizerSolution& p);

/// d^a/dz^a d^b/dw̄^b (1 - z w̄)^{-alpha} in closed form.
Complex scalar_kernel_derivative(int a, int b, double alpha, Complex z, Complex wbar);

/// K(z, w), obtained by applying the intertwining operator to the diagonal
/// kernel (1 - z w̄)^{-2(eta+j)} P_j in z and, adjointly, in w.
CMatrix kernel_at(const BundleSpec& spec, const NormalizerSolution& p, Complex z, Complex w);

using KernelFunction = std::function<CMatrix(Complex, Complex)>;

/// max |J_g(z) K(gz, gw) J_g(w)^* - K(z, w)| for an arbitrary kernel whose
/// multiplier is that of spec.
double invariance_residual(const BundleSpec& spec, const KernelFunction& kernel,
                           const MoebiusElement& g, Complex z, Complex w);

double kernel_invariance_residual(const BundleSpec& spec, const NormalizerSolution& p,
                                  const MoebiusElement& g, Complex z, Complex w);

/// The matrix J carrying K(0,0) to K(z,z) = J K(0,0) J^*. It is the
/// multiplier of p_z^{-1} = p_{-z} at z (equivalently J_{p_z}(0)^{-1}).
CMatrix transport_matrix(const BundleSpec& spec, Complex z);

/// max |K(z,z) - J K(0,0) J^*| with J = transport_matrix(spec, z).
double transport_residual(const BundleSpec& spec, const NormalizerSolution& p, Complex z);

/// H(z) = K(z,z)^{-1}; throws NumericalError when K(z,z) is not positive
/// definite.
CMatrix hermitian_structure_at(const BundleSpec& spec, const NormalizerSolution& p, Complex z);

/// max |H(gz) - J_g(z)^* H(z) J_g(z)|.
double hermitian_law_residual(const BundleSpec& spec, const NormalizerSolution& p,
                              const MoebiusElement& g, Complex z);

/// The kernel (1 - z w̄)^{-2 eps} K(z, w) of the bundle with eta + eps.
class LineBundleTwist {
 public:
  LineBundleTwist(BundleSpec spec, NormalizerSolution p, double eps);

  CMatrix operator()(Complex z, Complex w) const;
  const BundleSpec& twisted_spec() const { return twisted_; }
  KernelFunction as_function() const;

 private:
  BundleSpec base_;
  BundleSpec twisted_;
  NormalizerSolution p_;
  double eps_;
};

}  // namespace cdshift
