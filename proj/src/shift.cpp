#include "cdshift/shift.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cdshift/kernel.hpp"

namespace cdshift {

namespace {

double log_factorial(int k) { return std::lgamma(k + 1.0); }

// Least-squares slope and intercept of log y against log x over positive y.
std::pair<double, double> loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] > 0.0)) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  if (count < 2) return {0.0, 0.0};
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / count;
  return {slope, std::exp(intercept)};
}

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace

double basis_coefficient(double eta, int l, int j, int n) {
  if (!(eta > 0.0)) throw InputError("basis_coefficient needs eta > 0");
  if (j < 0 || l < j || n < l) {
    throw InputError("basis_coefficient needs 0 <= j <= l <= n, got j=" + std::to_string(j) +
                     " l=" + std::to_string(l) + " n=" + std::to_string(n));
  }
  const double x = 2.0 * eta + 2.0 * j;
  const double log_c = -log_factorial(l - j) - log_pochhammer(x, l - j) +
                       0.5 * (log_pochhammer(x, n - j) - log_factorial(n - j)) +
                       log_factorial(n - j) - log_factorial(n - l);
  return std::exp(log_c);
}

int level_dim(const BundleSpec& spec, int n) {
  int d = 0;
  for (int j = 0; j <= std::min(spec.m(), n); ++j) d += spec.multiplicities[j];
  return d;
}

CMatrix e_matrix(const BundleSpec& spec, int n) {
  spec.validate();
  if (!(spec.eta > 0.0)) throw InputError("eta must be positive");
  if (n < 0) throw InputError("level must be nonnegative");
  const int top = std::min(spec.m(), n);
  const int d = level_dim(spec, n);
  CMatrix e = CMatrix::Zero(d, d);
  for (int l = 0; l <= top; ++l) {
    for (int j = 0; j <= l; ++j) {
      e.block(spec.offset(l), spec.offset(j), spec.multiplicities[l], spec.multiplicities[j]) =
          basis_coefficient(spec.eta, l, j, n) * spec.chain(l, j);
    }
  }
  return e;
}

double e_matrix_condition(const BundleSpec& spec, int n) {
  CMatrix e = e_matrix(spec, n);
  for (Eigen::Index r = 0; r < e.rows(); ++r) e.row(r) /= e(r, r);
  Eigen::JacobiSVD<CMatrix> svd(e);
  const auto& s = svd.singularValues();
  return s(0) / s(s.size() - 1);
}

CMatrix shift_block(const BundleSpec& spec, int n) {
  const CMatrix upper = e_matrix(spec, n + 1);
  const double cond = e_matrix_condition(spec, n + 1);
  if (!(cond <= 1e12)) {
    throw NumericalError("E(" + std::to_string(n + 1) + ") is ill-conditioned (condition " +
                         std::to_string(cond) + ")");
  }
  const CMatrix lower = e_matrix(spec, n);
  CMatrix padded = CMatrix::Zero(upper.rows(), lower.cols());
  padded.topRows(lower.rows()) = lower;
  return upper.triangularView<Eigen::Lower>().solve(padded);
}

ShiftRealization realize(const BundleSpec& spec, int n_max) {
  if (n_max < 1) throw InputError("n_max must be at least 1");
  ShiftRealization r;
  r.spec = spec;
  r.n_max = n_max;
  for (int n = 0; n <= n_max; ++n) r.level_dims.push_back(level_dim(spec, n));
  r.blocks.reserve(n_max);
  for (int n = 0; n < n_max; ++n) r.blocks.push_back(shift_block(spec, n));
  return r;
}

WeightProfile weight_profile(const ShiftRealization& r) {
  WeightProfile w;
  w.first_level = r.spec.m();
  std::vector<double> levels, dev;
  for (int n = w.first_level; n < r.n_max; ++n) {
    const CMatrix& b = r.blocks[n];
    std::vector<double> level;
    double worst = 0.0;
    for (Eigen::Index k = 0; k < b.cols(); ++k) {
      level.push_back(b(k, k).real());
      worst = std::max(worst, std::abs(1.0 - b(k, k).real()));
    }
    w.weights.push_back(std::move(level));
    levels.push_back(n);
    dev.push_back(worst);
  }
  // fit over the top half of the levels
  const std::size_t half = levels.size() / 2;
  const auto [slope, constant] =
      loglog_fit({levels.begin() + half, levels.end()}, {dev.begin() + half, dev.end()});
  w.fit_exponent = slope;
  w.fit_constant = constant;
  return w;
}

AsymptoticReport asymptotic_diagnostics(const ShiftRealization& r, int fit_from, int fit_to) {
  AsymptoticReport rep;
  rep.first_level = r.spec.m();
  const int last = r.n_max - 1;
  if (last < rep.first_level) throw InputError("realization has no square levels");
  rep.fit_from = fit_from > 0 ? fit_from : std::max(rep.first_level, r.n_max / 2);
  rep.fit_to = fit_to > 0 ? std::min(fit_to, last) : last;

  std::vector<double> frob;
  for (int n = rep.first_level; n <= last; ++n) {
    const CMatrix& b = r.blocks[n];
    const double norm = spectral_norm(b);
    if (norm > rep.sup_norm) {
      rep.sup_norm = norm;
      rep.sup_level = n;
    }
    const CMatrix diff = b - CMatrix::Identity(b.rows(), b.cols());
    rep.deviation.push_back(spectral_norm(diff));
    frob.push_back(diff.squaredNorm());
    rep.hs_partial_sum += frob.back();
  }
  rep.deviation_vanishes =
      std::all_of(rep.deviation.begin(), rep.deviation.end(), [](double v) { return v == 0.0; });

  std::vector<double> xs, ys;
  for (int n = std::max(rep.fit_from, 1); n <= rep.fit_to; ++n) {
    const double dev = rep.deviation[n - rep.first_level];
    xs.push_back(n);
    ys.push_back(dev);
    rep.max_scaled_deviation = std::max(rep.max_scaled_deviation, n * dev);
  }
  if (!rep.deviation_vanishes) {
    const auto [slope, constant] = loglog_fit(xs, ys);
    rep.decay_exponent = slope;
    rep.decay_constant = constant;
  }

  const int mid = last / 2;
  const int quarter = mid / 2;
  double upper_tail = 0.0, lower_tail = 0.0;
  for (int n = std::max(rep.first_level, quarter + 1); n <= last; ++n) {
    (n > mid ? upper_tail : lower_tail) += frob[n - rep.first_level];
  }
  rep.tail_ratio = lower_tail > 0.0 ? upper_tail / lower_tail : 0.0;
  rep.hs_converges = rep.deviation_vanishes || rep.tail_ratio < kHsTailRatioBound;
  return rep;
}

AsymptoticReport asymptotic_diagnostics(const BundleSpec& spec, int n_max) {
  if (n_max < 50) throw InputError("asymptotic diagnostics need n_max >= 50");
  return asymptotic_diagnostics(realize(spec, n_max));
}

RecoveredParameters recover_parameters(const WeightProfile& profile) {
  if (profile.weights.size() < 200) {
    throw InputError("parameter recovery needs weights on at least 200 levels");
  }
  const int last = profile.last_level();
  const int from = std::max(profile.first_level, last - last / 10);

  RecoveredParameters out;
  double eta_sum = 0.0;
  int count = 0;
  for (int n = from; n <= last; ++n) {
    const auto& level = profile.weights[n - profile.first_level];
    const double w = *std::max_element(level.begin(), level.end());
    eta_sum += ((n + 1.0) / (w * w) - n) / 2.0;
    ++count;
  }
  out.eta = eta_sum / count;

  std::vector<int> reference;
  for (int n = from; n <= last; ++n) {
    std::vector<int> counts;
    for (double w : profile.weights[n - profile.first_level]) {
      const double w2 = w * w;
      const double grade = (n + 1.0 - w2 * (n + 2.0 * out.eta)) / (1.0 + w2);
      const long nearest = std::lround(grade);
      out.worst_grade_residual = std::max(out.worst_grade_residual, std::abs(grade - nearest));
      if (nearest < 0) {
        out.well_separated = false;
        continue;
      }
      if (static_cast<std::size_t>(nearest) >= counts.size()) counts.resize(nearest + 1, 0);
      ++counts[nearest];
    }
    if (reference.empty()) {
      reference = counts;
    } else if (counts != reference) {
      out.well_separated = false;
    }
  }
  if (out.worst_grade_residual > 0.25) out.well_separated = false;
  out.multiplicities = reference;
  return out;
}

bool similar(const BundleSpec& a, const BundleSpec& b) {
  if (!kernel_exists(a).exists || !kernel_exists(b).exists) {
    throw InputError("similarity is only defined for specs that admit a kernel");
  }
  return std::abs(a.eta - b.eta) <= 1e-9 && a.multiplicities == b.multiplicities;
}

const char* to_string(ContractionClass c) {
  switch (c) {
    case ContractionClass::SimilarToContraction:
      return "SimilarToContraction";
    case ContractionClass::NotPowerBounded:
      return "NotPowerBounded";
  }
  return "unknown";
}

ContractionClass contraction_class(const BundleSpec& spec) {
  if (!kernel_exists(spec).exists) {
    throw InputError("contraction class is only defined for specs that admit a kernel");
  }
  return spec.eta >= 0.5 ? ContractionClass::SimilarToContraction
                         : ContractionClass::NotPowerBounded;
}

namespace {

// log(n! / (2 eta)_n)
double log_grade0_power_norm_sq(double eta, long long n) {
  const double a = 2.0 * eta;
  const double x = static_cast<double>(n);
  if (n < 10000000) return std::lgamma(x + 1.0) - std::lgamma(x + a) + std::lgamma(a);
  // lgamma(x+1) - lgamma(x+a) by its large-x expansion, avoiding cancellation
  return (1.0 - a) * std::log(x) + (1.0 - a) * a / (2.0 * x) + std::lgamma(a);
}

}  // namespace

double grade0_power_norm(double eta, long long n) {
  if (!(eta > 0.0)) throw InputError("eta must be positive");
  if (n < 0) throw InputError("power must be nonnegative");
  if (n == 0) return 1.0;
  return std::exp(0.5 * log_grade0_power_norm_sq(eta, n));
}

long long first_power_norm_exceeding(double eta, double threshold, long long limit) {
  if (!(eta > 0.0)) throw InputError("eta must be positive");
  if (eta >= 0.5) return threshold < 1.0 ? 0 : -1;
  if (grade0_power_norm(eta, 0) > threshold) return 0;
  long long hi = 1;
  while (grade0_power_norm(eta, hi) <= threshold) {
    if (hi > limit / 2) return -1;
    hi *= 2;
  }
  long long lo = hi / 2;  // norm(lo) <= threshold
  while (hi - lo > 1) {
    const long long mid = lo + (hi - lo) / 2;
    (grade0_power_norm(eta, mid) > threshold ? hi : lo) = mid;
  }
  return hi;
}

std::vector<double> power_norms_level0(const BundleSpec& spec, int n_max) {
  std::vector<double> out;
  out.reserve(n_max + 1);
  CVector v = CVector::Zero(level_dim(spec, 0));
  v(0) = 1.0;
  out.push_back(1.0);
  for (int n = 0; n < n_max; ++n) {
    v = shift_block(spec, n) * v;
    out.push_back(v.norm());
  }
  return out;
}

}  // namespace cdshift
