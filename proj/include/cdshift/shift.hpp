#pragma once

#include <vector>

#include "cdshift/bundle.hpp"
#include "cdshift/types.hpp"

namespace cdshift {

/// c(eta, l, j, n): the coefficient of z^{n-l} in grade l of the orthonormal
/// basis vector Gamma(e_j^{n-j}), i.e.
/// (1/((l-j)! (2eta+2j)_{l-j})) sqrt((2eta+2j)_{n-j} / (n-j)!) (n-j)!/(n-l)!,
/// evaluated through log-Gamma. Requires 0 <= j <= l <= n and eta > 0.
double basis_coefficient(double eta, int l, int j, int n);

/// Dimension of the level space H(n): sum of d_j over j <= min(m, n).
int level_dim(const BundleSpec& spec, int n);

/// E(n): rows are monomial coefficients (grade l, index r), columns the
/// basis vectors (grade j, index q) of level n; block (l, j) is
/// c(eta, l, j, n) Y_l...Y_{j+1}. Lower triangular with positive diagonal.
CMatrix e_matrix(const BundleSpec& spec, int n);

/// Condition number of E(n) after scaling each row by its diagonal entry.
double e_matrix_condition(const BundleSpec& spec, int n);

/// M(n) = E(n+1)^{-1} [E(n); 0], the matrix of multiplication by z from
/// level n to level n+1 (shape level_dim(n+1) x level_dim(n)). Throws
/// NumericalError if E(n+1) is conditioned worse than 1e12.
CMatrix shift_block(const BundleSpec& spec, int n);

/// The operator realized as a weighted block shift up to level n_max.
struct ShiftRealization {
  BundleSpec spec;
  int n_max = 0;
  std::vector<int> level_dims;  // n = 0..n_max
  std::vector<CMatrix> blocks;  // M(0)..M(n_max - 1)
};

ShiftRealization realize(const BundleSpec& spec, int n_max);

/// Diagonal weights of M(n) per level; they are sqrt((k+1)/(2eta+2j+k)) with
/// k = n - j for a grade-j basis vector.
struct WeightProfile {
  int first_level = 0;
  std::vector<std::vector<double>> weights;  // weights[n - first_level]
  double fit_exponent = 0.0;                 // of max_k |1 - w_k(n)| versus n
  double fit_constant = 0.0;

  int last_level() const { return first_level + static_cast<int>(weights.size()) - 1; }
};

WeightProfile weight_profile(const ShiftRealization& r);

/// Largest doubling-block ratio of the Hilbert-Schmidt tail accepted as
/// convergent. Squared terms ~ n^{-p} give a ratio of 2^{1-p}; O(1/n) blocks
/// (p = 2) sit at 0.5 from above, so the bound certifies p > 3/2.
inline constexpr double kHsTailRatioBound = 0.70710678118654752;

struct AsymptoticReport {
  int first_level = 0;             // m; rectangular levels below are skipped
  double sup_norm = 0.0;           // sup_n ||M(n)||
  int sup_level = 0;
  std::vector<double> deviation;   // ||M(n) - I||, n = first_level..n_max-1
  bool deviation_vanishes = false;
  double decay_exponent = 0.0;     // least-squares slope of log deviation vs log n
  double decay_constant = 0.0;
  int fit_from = 0;
  int fit_to = 0;
  double max_scaled_deviation = 0.0;  // max n ||M(n) - I|| over the fit range
  double hs_partial_sum = 0.0;        // sum ||M(n) - I||_F^2
  double tail_ratio = 0.0;            // (sum over (N, 2N]) / (sum over (N/2, N]), N = n_max/2
  bool hs_converges = false;
};

/// Boundedness and Hilbert-Schmidt perturbation diagnostics up to n_max
/// (>= 50). The decay fit uses levels [fit_from, fit_to]; fit_from <= 0 means
/// the top half of the computed range.
AsymptoticReport asymptotic_diagnostics(const ShiftRealization& r, int fit_from = 0,
                                        int fit_to = 0);
AsymptoticReport asymptotic_diagnostics(const BundleSpec& spec, int n_max);

struct RecoveredParameters {
  double eta = 0.0;
  std::vector<int> multiplicities;
  bool well_separated = true;
  double worst_grade_residual = 0.0;  // distance of a fitted grade from an integer
};

/// Recovers eta from the grade-0 (largest) weights and the multiplicities by
/// assigning every weight its grade; insensitive to the order of weights
/// within a level. Needs at least 200 levels.
RecoveredParameters recover_parameters(const WeightProfile& weights);

/// Similar iff same eta (within 1e-9) and the same multiplicities. Both
/// specs must admit a kernel.
bool similar(const BundleSpec& a, const BundleSpec& b);

enum class ContractionClass { SimilarToContraction, NotPowerBounded };

const char* to_string(ContractionClass c);

ContractionClass contraction_class(const BundleSpec& spec);

/// sqrt(n! / (2 eta)_n), the norm of z^n in the grade-0 discrete series.
double grade0_power_norm(double eta, long long n);

/// First n with grade0_power_norm(eta, n) > threshold for eta < 1/2
/// (exponential search plus bisection on the log-Gamma form); -1 if it
/// exceeds limit.
long long first_power_norm_exceeding(double eta, double threshold, long long limit = (1LL << 62));

/// ||M^n e_0|| for the first level-0 basis vector, n = 0..n_max, computed
/// from the realization blocks.
std::vector<double> power_norms_level0(const BundleSpec& spec, int n_max);

}  // namespace cdshift
