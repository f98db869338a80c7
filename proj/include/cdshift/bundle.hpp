#pragma once

#include <algorithm>
#include <vector>

#include "cdshift/moebius.hpp"
#include "cdshift/series.hpp"
#include "cdshift/types.hpp"

namespace cdshift {

/// The representation data (eta, Y) of an elementary homogeneous bundle:
/// multiplicities d_0..d_m and blocks Y_1..Y_m with Y_j of shape
/// d_j x d_{j-1}. The diagonal -(eta + j) of rho(h) is implicit.
struct BundleSpec {
  double eta = 0.0;
  std::vector<int> multiplicities;
  std::vector<CMatrix> blocks;

  /// Throws InputError on inconsistent shapes or nonpositive multiplicities.
  void validate() const;

  int m() const { return static_cast<int>(multiplicities.size()) - 1; }
  int dim() const;
  int offset(int grade) const;

  /// Y_l ... Y_{j+1}, a d_l x d_j matrix; the identity for l == j.
  CMatrix chain(int l, int j) const;

  /// The full strictly block-lower-triangular d x d matrix built from Y.
  CMatrix full_y() const;
};

/// Block-diagonal matrix A_0..A_m with A_j of size d_j x d_j.
struct BlockDiagonal {
  std::vector<CMatrix> blocks;

  static BlockDiagonal identity(const std::vector<int>& multiplicities);
  CMatrix dense() const;
};

/// J_g(z) from the closed blockwise formula: block (p, l) is
/// (-c_g)^{p-l} / (p-l)! g'(z)^{eta + (p+l)/2} Y_p...Y_{l+1} for p >= l.
CMatrix multiplier(const BundleSpec& spec, const MoebiusElement& g, Complex z);

/// J_g(z) = g'(z)^eta D exp(-c_g Y) D with D_j = (b̄z + ā)^{-j}; the matrix
/// exponential is the finite nilpotent sum.
CMatrix multiplier_exp_form(const BundleSpec& spec, const MoebiusElement& g, Complex z);

/// max |J_{hg}(z) - J_g(z) J_h(g z)|.
double cocycle_residual(const BundleSpec& spec, const MoebiusElement& g, const MoebiusElement& h,
                        Complex z);

/// The multiplier action (U_g F)(z) = J_g(z) F(g z) on a graded series,
/// truncated at degree n. Each block of J_g is expanded as its own power
/// series, so this never goes through multiplier() pointwise.
GradedSeries multiplier_action(const BundleSpec& spec, const MoebiusElement& g,
                               const GradedSeries& f, int n);

/// Y'_j = U_j Y_j U_{j-1}^*.
BundleSpec conjugate(const BundleSpec& spec, const BlockDiagonal& u);

/// Real-linear basis of the Hermitian block-diagonal A with
/// A_j Y_j = Y_j A_{j-1}. The first element is always the normalized
/// identity; the dimension is 1 exactly for irreducible specs.
std::vector<BlockDiagonal> commutant_basis(const BundleSpec& spec);

/// One irreducible piece of a spec. The piece lives in grades
/// grade_offset..grade_offset + sub.m() of the parent; its own spec carries
/// eta + grade_offset so that its multiplier matches the parent's blocks.
/// isometries[j] (d_j x d'_{j - grade_offset}) embeds the piece into parent
/// grade j; grades outside the piece get a d_j x 0 matrix.
struct Component {
  int grade_offset = 0;
  BundleSpec sub;
  std::vector<CMatrix> isometries;

  BlockDiagonal projection() const;
};

/// Orthogonal decomposition into irreducible pieces, refined until each
/// piece has a one-dimensional commutant.
std::vector<Component> decompose(const BundleSpec& spec);

/// U (direct sum of the component multipliers) U^*, which must reproduce
/// multiplier(spec, g, z).
CMatrix reassembled_multiplier(const BundleSpec& spec, const std::vector<Component>& parts,
                               const MoebiusElement& g, Complex z);

/// All d_j = 1: replace each y_j by |y_j|.
BundleSpec canonical_scalar_chain(const BundleSpec& spec);

struct Canonical121 {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  /// All three parameters nonzero, up to 1e-12 relative to the largest.
  bool irreducible() const {
    const double floor = 1e-12 * std::max({1.0, a, b, c});
    return a > floor && b > floor && c > floor;
  }
};

/// Multiplicities (1,2,1): Y_1 = (a; 0), Y_2 = (b c) with a, b, c >= 0.
Canonical121 canonical_121(const BundleSpec& spec);

BundleSpec spec_from_121(double eta, const Canonical121& abc);

}  // namespace cdshift
