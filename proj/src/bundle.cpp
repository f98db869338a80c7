#include "cdshift/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cdshift {

void BundleSpec::validate() const {
  if (!std::isfinite(eta)) throw InputError("eta must be finite");
  if (multiplicities.empty()) throw InputError("multiplicities must be nonempty");
  for (std::size_t j = 0; j < multiplicities.size(); ++j) {
    if (multiplicities[j] < 1) {
      throw InputError("multiplicities[" + std::to_string(j) + "] must be a positive integer");
    }
  }
  if (blocks.size() + 1 != multiplicities.size()) {
    throw InputError("expected " + std::to_string(multiplicities.size() - 1) +
                     " blocks for " + std::to_string(multiplicities.size()) +
                     " multiplicities, got " + std::to_string(blocks.size()));
  }
  for (std::size_t j = 1; j < multiplicities.size(); ++j) {
    const CMatrix& y = blocks[j - 1];
    if (y.rows() != multiplicities[j] || y.cols() != multiplicities[j - 1]) {
      throw InputError("blocks[" + std::to_string(j - 1) + "] must be " +
                       std::to_string(multiplicities[j]) + "x" +
                       std::to_string(multiplicities[j - 1]) + ", got " +
                       std::to_string(y.rows()) + "x" + std::to_string(y.cols()));
    }
    if (!y.allFinite()) throw InputError("blocks[" + std::to_string(j - 1) + "] has non-finite entries");
  }
}

int BundleSpec::dim() const {
  int d = 0;
  for (int dj : multiplicities) d += dj;
  return d;
}

int BundleSpec::offset(int grade) const {
  int o = 0;
  for (int j = 0; j < grade; ++j) o += multiplicities[j];
  return o;
}

CMatrix BundleSpec::chain(int l, int j) const {
  CMatrix out = CMatrix::Identity(multiplicities[j], multiplicities[j]);
  for (int k = j + 1; k <= l; ++k) out = (blocks[k - 1] * out).eval();
  return out;
}

CMatrix BundleSpec::full_y() const {
  const int d = dim();
  CMatrix y = CMatrix::Zero(d, d);
  for (int j = 1; j <= m(); ++j) {
    y.block(offset(j), offset(j - 1), multiplicities[j], multiplicities[j - 1]) = blocks[j - 1];
  }
  return y;
}

BlockDiagonal BlockDiagonal::identity(const std::vector<int>& multiplicities) {
  BlockDiagonal out;
  for (int d : multiplicities) out.blocks.push_back(CMatrix::Identity(d, d));
  return out;
}

CMatrix BlockDiagonal::dense() const {
  Eigen::Index d = 0;
  for (const auto& b : blocks) d += b.rows();
  CMatrix out = CMatrix::Zero(d, d);
  Eigen::Index o = 0;
  for (const auto& b : blocks) {
    out.block(o, o, b.rows(), b.cols()) = b;
    o += b.rows();
  }
  return out;
}

CMatrix multiplier(const BundleSpec& spec, const MoebiusElement& g, Complex z) {
  const int d = spec.dim();
  const Complex minus_c = -c_of(g);
  CMatrix out = CMatrix::Zero(d, d);
  for (int p = 0; p <= spec.m(); ++p) {
    double factorial = 1.0;
    for (int l = p; l >= 0; --l) {
      if (l < p) factorial *= p - l;
      const Complex scale = ipow(minus_c, p - l) / factorial *
                            derivative_power(g, z, spec.eta + (p + l) / 2.0);
      out.block(spec.offset(p), spec.offset(l), spec.multiplicities[p], spec.multiplicities[l]) =
          scale * spec.chain(p, l);
    }
  }
  return out;
}

CMatrix multiplier_exp_form(const BundleSpec& spec, const MoebiusElement& g, Complex z) {
  const int d = spec.dim();
  const Complex w = g.denominator(z);
  const Complex line = derivative_power(g, z, spec.eta);

  CMatrix diag = CMatrix::Zero(d, d);
  for (int j = 0; j <= spec.m(); ++j) {
    Complex wj(1.0);
    for (int k = 0; k < j; ++k) wj /= w;
    diag.block(spec.offset(j), spec.offset(j), spec.multiplicities[j], spec.multiplicities[j])
        .diagonal()
        .setConstant(wj);
  }

  const CMatrix x = -c_of(g) * spec.full_y();
  CMatrix expx = CMatrix::Identity(d, d);
  CMatrix term = CMatrix::Identity(d, d);
  for (int k = 1; k <= spec.m(); ++k) {
    term = (term * x / static_cast<double>(k)).eval();
    expx += term;
  }
  return line * diag * expx * diag;
}

double cocycle_residual(const BundleSpec& spec, const MoebiusElement& g, const MoebiusElement& h,
                        Complex z) {
  const CMatrix lhs = multiplier(spec, h * g, z);
  const CMatrix rhs = multiplier(spec, g, z) * multiplier(spec, h, mobius_apply(g, z));
  return max_abs(lhs - rhs);
}

GradedSeries multiplier_action(const BundleSpec& spec, const MoebiusElement& g,
                               const GradedSeries& f, int n) {
  if (f.multiplicities() != spec.multiplicities) {
    throw InputError("series grading does not match the spec multiplicities");
  }
  const Complex minus_c = -c_of(g);
  GradedSeries out(spec.multiplicities, n);
  int exact = GradedSeries::kPolynomial;
  for (int p = 0; p <= spec.m(); ++p) {
    double factorial = 1.0;
    for (int l = p; l >= 0; --l) {
      if (l < p) factorial *= p - l;
      const GradedSeries moved =
          series_transform(f.grade_part(l), g, spec.eta + (p + l) / 2.0, n);
      exact = std::min(exact, moved.exact_degree());
      const CMatrix coeff = (ipow(minus_c, p - l) / factorial) * spec.chain(p, l);
      for (int k = 0; k <= n; ++k) out.component(k, p) += coeff * moved.coeff(k);
    }
  }
  out.set_exact_degree(exact);
  return out;
}

BundleSpec conjugate(const BundleSpec& spec, const BlockDiagonal& u) {
  if (u.blocks.size() != spec.multiplicities.size()) {
    throw InputError("conjugating matrix has the wrong number of blocks");
  }
  BundleSpec out = spec;
  for (int j = 1; j <= spec.m(); ++j) {
    out.blocks[j - 1] = u.blocks[j] * spec.blocks[j - 1] * u.blocks[j - 1].adjoint();
  }
  return out;
}

namespace {

// Real coordinates of a Hermitian d x d matrix: the diagonal, then for each
// p < q the real and imaginary parts of entry (p, q).
int hermitian_params(int d) { return d * d; }

CMatrix hermitian_from_params(const Eigen::VectorXd& x, int d) {
  CMatrix h = CMatrix::Zero(d, d);
  int k = 0;
  for (int p = 0; p < d; ++p) h(p, p) = x(k++);
  for (int p = 0; p < d; ++p) {
    for (int q = p + 1; q < d; ++q) {
      const Complex v(x(k), x(k + 1));
      k += 2;
      h(p, q) = v;
      h(q, p) = std::conj(v);
    }
  }
  return h;
}

BlockDiagonal block_from_params(const BundleSpec& spec, const Eigen::VectorXd& x) {
  BlockDiagonal out;
  int k = 0;
  for (int d : spec.multiplicities) {
    const int np = hermitian_params(d);
    out.blocks.push_back(hermitian_from_params(x.segment(k, np), d));
    k += np;
  }
  return out;
}

Eigen::VectorXd commutation_defect(const BundleSpec& spec, const BlockDiagonal& a) {
  int rows = 0;
  for (int j = 1; j <= spec.m(); ++j) rows += 2 * spec.multiplicities[j] * spec.multiplicities[j - 1];
  Eigen::VectorXd out(rows);
  int k = 0;
  for (int j = 1; j <= spec.m(); ++j) {
    const CMatrix r = a.blocks[j] * spec.blocks[j - 1] - spec.blocks[j - 1] * a.blocks[j - 1];
    for (Eigen::Index c = 0; c < r.cols(); ++c) {
      for (Eigen::Index i = 0; i < r.rows(); ++i) {
        out(k++) = r(i, c).real();
        out(k++) = r(i, c).imag();
      }
    }
  }
  return out;
}

constexpr double kRankTolerance = 1e-9;

// Orthonormal basis (columns) for the range of m, whose columns have norm at
// most 1; singular values below kRankTolerance are treated as zero.
Eigen::MatrixXd range_basis(const Eigen::MatrixXd& m) {
  if (m.cols() == 0) return Eigen::MatrixXd(m.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  int rank = 0;
  while (rank < s.size() && s(rank) > kRankTolerance) ++rank;
  return svd.matrixU().leftCols(rank);
}

}  // namespace

std::vector<BlockDiagonal> commutant_basis(const BundleSpec& spec) {
  spec.validate();
  int unknowns = 0;
  for (int d : spec.multiplicities) unknowns += hermitian_params(d);

  // Columns: images of the coordinate basis under A -> (A_j Y_j - Y_j A_{j-1})_j.
  const int rows = static_cast<int>(
      commutation_defect(spec, BlockDiagonal::identity(spec.multiplicities)).size());
  Eigen::MatrixXd map(rows, unknowns);
  for (int k = 0; k < unknowns; ++k) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(unknowns);
    e(k) = 1.0;
    map.col(k) = commutation_defect(spec, block_from_params(spec, e));
  }

  Eigen::MatrixXd null;
  if (rows == 0) {
    null = Eigen::MatrixXd::Identity(unknowns, unknowns);
  } else {
    Eigen::MatrixXd square = Eigen::MatrixXd::Zero(std::max(rows, unknowns), unknowns);
    square.topRows(rows) = map;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(square, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double smax = s(0);
    int rank = 0;
    while (rank < s.size() && smax > 0.0 && s(rank) > kRankTolerance * smax) ++rank;
    null = svd.matrixV().rightCols(unknowns - rank);
  }

  // Identity first, then an orthonormal basis of the rest of the nullspace.
  Eigen::VectorXd ident = Eigen::VectorXd::Zero(unknowns);
  {
    int k = 0;
    for (int d : spec.multiplicities) {
      ident.segment(k, d).setOnes();
      k += hermitian_params(d);
    }
  }
  ident.normalize();
  const Eigen::MatrixXd rest = range_basis(null - ident * (ident.transpose() * null));

  std::vector<BlockDiagonal> out;
  out.push_back(block_from_params(spec, ident));
  for (Eigen::Index c = 0; c < rest.cols(); ++c) out.push_back(block_from_params(spec, rest.col(c)));
  return out;
}

BlockDiagonal Component::projection() const {
  BlockDiagonal out;
  for (const auto& v : isometries) out.blocks.push_back(v * v.adjoint());
  return out;
}

namespace {

std::vector<Component> trivial_component(const BundleSpec& spec) {
  Component c;
  c.grade_offset = 0;
  c.sub = spec;
  for (int d : spec.multiplicities) c.isometries.push_back(CMatrix::Identity(d, d));
  return {c};
}

std::vector<Component> decompose_recursive(const BundleSpec& spec) {
  const auto basis = commutant_basis(spec);
  if (basis.size() == 1) return trivial_component(spec);

  // Spectral subspaces of a non-scalar Hermitian commutant element.
  const BlockDiagonal& a = basis[1];
  const int grades = spec.m() + 1;
  std::vector<Eigen::VectorXd> values(grades);
  std::vector<CMatrix> vectors(grades);
  std::vector<double> all;
  for (int j = 0; j < grades; ++j) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a.blocks[j]);
    values[j] = es.eigenvalues();
    vectors[j] = es.eigenvectors();
    for (Eigen::Index i = 0; i < values[j].size(); ++i) all.push_back(values[j](i));
  }
  std::sort(all.begin(), all.end());
  const double scale = std::max(1.0, std::max(std::abs(all.front()), std::abs(all.back())));
  const double gap = 1e-6 * scale;
  std::vector<double> centers;
  for (double v : all) {
    if (centers.empty() || v - centers.back() > gap) centers.push_back(v);
  }

  std::vector<Component> out;
  for (double lambda : centers) {
    std::vector<CMatrix> basis_j(grades);
    for (int j = 0; j < grades; ++j) {
      std::vector<Eigen::Index> cols;
      for (Eigen::Index i = 0; i < values[j].size(); ++i) {
        if (std::abs(values[j](i) - lambda) <= gap) cols.push_back(i);
      }
      basis_j[j] = CMatrix(spec.multiplicities[j], static_cast<Eigen::Index>(cols.size()));
      for (std::size_t c = 0; c < cols.size(); ++c) basis_j[j].col(c) = vectors[j].col(cols[c]);
    }
    // An empty grade cuts the eigenspace into separately invariant runs.
    int j = 0;
    while (j < grades) {
      if (basis_j[j].cols() == 0) {
        ++j;
        continue;
      }
      const int first = j;
      while (j < grades && basis_j[j].cols() > 0) ++j;
      const int last = j - 1;

      BundleSpec sub;
      sub.eta = spec.eta + first;
      for (int k = first; k <= last; ++k) {
        sub.multiplicities.push_back(static_cast<int>(basis_j[k].cols()));
        if (k > first) {
          sub.blocks.push_back(basis_j[k].adjoint() * spec.blocks[k - 1] * basis_j[k - 1]);
        }
      }
      for (Component& child : decompose_recursive(sub)) {
        Component c;
        c.grade_offset = first + child.grade_offset;
        c.sub = std::move(child.sub);
        for (int k = 0; k < grades; ++k) {
          if (k < first || k > last) {
            c.isometries.push_back(CMatrix(spec.multiplicities[k], 0));
          } else {
            c.isometries.push_back(basis_j[k] * child.isometries[k - first]);
          }
        }
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

}  // namespace

std::vector<Component> decompose(const BundleSpec& spec) {
  spec.validate();
  return decompose_recursive(spec);
}

CMatrix reassembled_multiplier(const BundleSpec& spec, const std::vector<Component>& parts,
                               const MoebiusElement& g, Complex z) {
  const int d = spec.dim();
  CMatrix u = CMatrix::Zero(d, d);
  CMatrix sum = CMatrix::Zero(d, d);
  Eigen::Index col = 0;
  for (const Component& c : parts) {
    const int dc = c.sub.dim();
    if (col + dc > d) throw InputError("components exceed the spec dimension");
    for (int j = 0; j <= c.sub.m(); ++j) {
      const int parent = c.grade_offset + j;
      u.block(spec.offset(parent), col + c.sub.offset(j), spec.multiplicities[parent],
              c.sub.multiplicities[j]) = c.isometries[parent];
    }
    sum.block(col, col, dc, dc) = multiplier(c.sub, g, z);
    col += dc;
  }
  if (col != d) throw InputError("components do not cover the spec dimension");
  return u * sum * u.adjoint();
}

BundleSpec canonical_scalar_chain(const BundleSpec& spec) {
  spec.validate();
  for (int d : spec.multiplicities) {
    if (d != 1) throw InputError("canonical_scalar_chain requires all multiplicities equal to 1");
  }
  BundleSpec out = spec;
  for (auto& y : out.blocks) y(0, 0) = std::abs(y(0, 0));
  return out;
}

Canonical121 canonical_121(const BundleSpec& spec) {
  spec.validate();
  if (spec.multiplicities != std::vector<int>{1, 2, 1}) {
    throw InputError("canonical_121 requires multiplicities (1,2,1)");
  }
  const CVector v = spec.blocks[0].col(0);
  const Eigen::RowVectorXcd r = spec.blocks[1].row(0);
  Canonical121 out;
  out.a = v.norm();
  if (out.a > 0.0) {
    const CVector u1 = v / out.a;
    CVector u2(2);
    u2 << -std::conj(v(1)), std::conj(v(0));
    u2 /= out.a;
    out.b = std::abs((r * u1)(0));
    out.c = std::abs((r * u2)(0));
  } else {
    // Any middle frame is allowed; align Y_2 with the first axis.
    out.b = r.norm();
    out.c = 0.0;
  }
  return out;
}

BundleSpec spec_from_121(double eta, const Canonical121& abc) {
  BundleSpec s;
  s.eta = eta;
  s.multiplicities = {1, 2, 1};
  CMatrix y1(2, 1);
  y1 << abc.a, 0.0;
  CMatrix y2(1, 2);
  y2 << abc.b, abc.c;
  s.blocks = {y1, y2};
  return s;
}

}  // namespace cdshift
