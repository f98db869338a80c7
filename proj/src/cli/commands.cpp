#include "cdshift/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "cdshift/bundle.hpp"
#include "cdshift/kernel.hpp"
#include "cdshift/series.hpp"
#include "cdshift/shift.hpp"

namespace cdshift::cli {

using nlohmann::ordered_json;

namespace {

using Rng = std::mt19937_64;

ordered_json header(const std::string& command, const SpecFile& file, const Tolerances& tol) {
  ordered_json body;
  body["command"] = command;
  body["spec_digest"] = spec_digest(file);
  body["spec"] = {{"eta", file.spec.eta}, {"multiplicities", file.spec.multiplicities}};
  body["tolerances"] = tol.to_json();
  return body;
}

// Records a residual check and returns whether it passed.
bool add_check(ordered_json& body, const std::string& name, double residual, double tolerance) {
  const bool pass = std::isfinite(residual) && residual <= tolerance;
  body["checks"].push_back({{"name", name},
                            {"max_residual", residual},
                            {"tolerance", tolerance},
                            {"pass", pass}});
  return pass;
}

void add_skip(ordered_json& body, const std::string& name, const std::string& reason) {
  body["skipped"].push_back({{"name", name}, {"reason", reason}});
}

Report finish(ordered_json body, int code) {
  body["exit_code"] = code;
  return {std::move(body), code};
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Complex random_point(Rng& rng, double radius) {
  const double r = radius * std::sqrt(uniform(rng, 0.0, 1.0));
  return std::polar(r, uniform(rng, -M_PI, M_PI));
}

MoebiusElement random_near_identity(Rng& rng, double radius) {
  const Complex b = std::polar(uniform(rng, 0.0, radius), uniform(rng, -M_PI, M_PI));
  return MoebiusElement::from_parameters(b, uniform(rng, -radius, radius));
}

CMatrix random_matrix(Rng& rng, int rows, int cols) {
  CMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = {uniform(rng, -1, 1), uniform(rng, -1, 1)};
  }
  return m;
}

BlockDiagonal random_block_unitary(Rng& rng, const std::vector<int>& mult) {
  BlockDiagonal u;
  for (int d : mult) {
    Eigen::HouseholderQR<CMatrix> qr(random_matrix(rng, d, d));
    u.blocks.push_back(qr.householderQ() * CMatrix::Identity(d, d));
  }
  return u;
}

ordered_json eigen_summary(const NormalizerSolution& p) {
  ordered_json out = ordered_json::array();
  for (std::size_t j = 0; j < p.products.size(); ++j) {
    out.push_back({{"grade", j},
                   {"min_eigenvalue", p.min_eigenvalues[j]},
                   {"max_eigenvalue", p.max_eigenvalues[j]},
                   {"positive", static_cast<bool>(p.positive[j])}});
  }
  return out;
}

ordered_json kernel_json(const KernelVerdict& v) {
  ordered_json out;
  out["exists"] = v.exists;
  if (!v.reason.empty()) out["reason"] = v.reason;
  if (v.witness) out["normalizer_eigenvalues"] = eigen_summary(*v.witness);
  return out;
}

ordered_json structure_json(const std::vector<Component>& parts, std::size_t commutant_dim) {
  ordered_json out;
  out["commutant_dimension"] = commutant_dim;
  out["irreducible"] = commutant_dim == 1;
  ordered_json comps = ordered_json::array();
  for (const auto& c : parts) {
    comps.push_back({{"grade_offset", c.grade_offset},
                     {"multiplicities", c.sub.multiplicities},
                     {"eta", c.sub.eta}});
  }
  out["components"] = std::move(comps);
  return out;
}

double supplied_normalizer_residual(const SpecFile& file, const NormalizerSolution& solved) {
  double worst = 0.0;
  for (std::size_t j = 0; j < solved.products.size(); ++j) {
    worst = std::max(worst, max_abs((*file.normalizer)[j] - solved.products[j]));
  }
  return worst;
}

GradedSeries random_grade_polynomial(Rng& rng, const std::vector<int>& mult, int grade, int degree,
                                     int truncation) {
  GradedSeries f(mult, truncation);
  for (int n = 0; n <= degree; ++n) {
    for (int q = 0; q < mult[grade]; ++q) f.component(n, grade)(q) = {uniform(rng, -1, 1), uniform(rng, -1, 1)};
  }
  return f;
}

// The fixed group elements and point pairs used for kernel residual panels.
std::vector<MoebiusElement> default_panel() {
  return {MoebiusElement::rotation(0.7), MoebiusElement::from_parameters(Complex(0.2, 0.1), 0.3),
          point_section(Complex(0.0, -0.25)), MoebiusElement::from_parameters(Complex(-0.15), -0.2)};
}

std::vector<std::pair<Complex, Complex>> default_panel_points() {
  return {{0.0, 0.0}, {Complex(0.3), Complex(0.2)}, {Complex(0.0, -0.4), Complex(0.1, 0.1)},
          {Complex(-0.5, 0.2), Complex(0.45, -0.3)}};
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

Report cmd_classify(const SpecFile& file, const Tolerances& tol) {
  const BundleSpec& spec = file.spec;
  ordered_json body = header("classify", file, tol);
  ordered_json results;
  const auto basis = commutant_basis(spec);
  const auto parts = decompose(spec);
  results["structure"] = structure_json(parts, basis.size());

  const KernelVerdict verdict = kernel_exists(spec);
  results["kernel"] = kernel_json(verdict);
  try {
    results["eta_threshold"] = eta_threshold(spec, tol["eta_threshold"]);
  } catch (const NumericalError& e) {
    results["eta_threshold"] = nullptr;
    results["eta_threshold_error"] = e.what();
  }
  results["similarity_invariants"] = {{"eta", spec.eta}, {"multiplicities", spec.multiplicities}};
  if (verdict.exists) {
    results["contraction_class"] = to_string(contraction_class(spec));
  } else {
    results["contraction_class"] = nullptr;
  }
  body["results"] = std::move(results);
  return finish(std::move(body), verdict.exists ? kExitOk : kExitKernelAbsent);
}

Report cmd_kernel(const SpecFile& file, const std::vector<std::pair<Complex, Complex>>& points,
                  const Tolerances& tol) {
  const BundleSpec& spec = file.spec;
  ordered_json body = header("kernel", file, tol);
  body["checks"] = ordered_json::array();
  const KernelVerdict verdict = kernel_exists(spec);
  ordered_json results;
  results["kernel"] = kernel_json(verdict);
  if (!verdict.exists) {
    body["results"] = std::move(results);
    return finish(std::move(body), kExitKernelAbsent);
  }
  const NormalizerSolution& p = *verdict.witness;
  ordered_json products = ordered_json::array();
  for (const auto& b : p.products) products.push_back(matrix_to_json(b));
  results["normalizer_products"] = std::move(products);
  const CMatrix origin = kernel_at_origin(spec, p);
  results["kernel_at_origin"] = matrix_to_json(origin);

  ordered_json values = ordered_json::array();
  for (const auto& [z, w] : points) {
    values.push_back({{"z", complex_to_json(z)},
                      {"w", complex_to_json(w)},
                      {"value", matrix_to_json(kernel_at(spec, p, z, w))}});
  }
  results["values"] = std::move(values);
  body["results"] = std::move(results);

  bool ok = add_check(body, "kernel_origin", max_abs(origin - CMatrix::Identity(spec.dim(), spec.dim())),
                      tol["kernel_origin"]);
  double worst = 0.0;
  for (const auto& g : default_panel()) {
    for (const auto& [z, w] : default_panel_points()) {
      worst = std::max(worst, kernel_invariance_residual(spec, p, g, z, w));
    }
  }
  ok = add_check(body, "kernel_invariance", worst, tol["kernel_invariance"]) && ok;
  if (file.normalizer) {
    ok = add_check(body, "supplied_normalizer", supplied_normalizer_residual(file, p),
                   tol["supplied_normalizer"]) && ok;
  }
  return finish(std::move(body), ok ? kExitOk : kExitNumericalFailure);
}

std::string weight_table_csv(const ShiftRealization& r) {
  std::ostringstream out;
  out << "n,grade,index,weight\n";
  for (int n = 0; n < r.n_max; ++n) {
    const CMatrix& b = r.blocks[n];
    int grade = 0, index = 0;
    for (Eigen::Index k = 0; k < b.cols(); ++k) {
      while (index >= r.spec.multiplicities[grade]) {
        index = 0;
        ++grade;
      }
      out << n << ',' << grade << ',' << index << ',' << format_double(b(k, k).real()) << '\n';
      ++index;
    }
  }
  return out.str();
}

Report cmd_realize(const SpecFile& file, int n_max, const std::optional<std::string>& csv_path,
                   bool include_blocks, const Tolerances& tol) {
  if (n_max < 1) throw InputError("--n-max must be at least 1");
  const BundleSpec& spec = file.spec;
  ordered_json body = header("realize", file, tol);
  body["checks"] = ordered_json::array();
  const KernelVerdict verdict = kernel_exists(spec);
  ordered_json results;
  results["kernel"] = kernel_json(verdict);
  if (!verdict.exists) {
    body["results"] = std::move(results);
    return finish(std::move(body), kExitKernelAbsent);
  }

  const ShiftRealization r = realize(spec, n_max);
  results["n_max"] = n_max;
  results["level_dims"] = r.level_dims;
  if (include_blocks) {
    ordered_json blocks = ordered_json::array();
    for (const auto& b : r.blocks) blocks.push_back(matrix_to_json(b));
    results["blocks"] = std::move(blocks);
  }

  bool ok = true;
  double relation = 0.0;
  for (int n = 0; n < std::min(n_max, 30); ++n) {
    const CMatrix lower = e_matrix(spec, n);
    CMatrix padded = CMatrix::Zero(r.blocks[n].rows(), r.blocks[n].cols());
    padded.topRows(lower.rows()) = lower;
    relation = std::max(relation, max_abs(e_matrix(spec, n + 1) * r.blocks[n] - padded) /
                                      std::max(1.0, max_abs(padded)));
  }
  ok = add_check(body, "shift_relation", relation, tol["shift_relation"]) && ok;

  if (n_max >= 50 && n_max > spec.m()) {
    const AsymptoticReport rep = asymptotic_diagnostics(r);
    results["asymptotics"] = {{"first_level", rep.first_level},
                              {"sup_norm", rep.sup_norm},
                              {"sup_level", rep.sup_level},
                              {"deviation_vanishes", rep.deviation_vanishes},
                              {"decay_exponent", rep.decay_exponent},
                              {"decay_constant", rep.decay_constant},
                              {"fit_from", rep.fit_from},
                              {"fit_to", rep.fit_to},
                              {"max_scaled_deviation", rep.max_scaled_deviation},
                              {"hs_partial_sum", rep.hs_partial_sum},
                              {"tail_ratio", rep.tail_ratio},
                              {"tail_ratio_bound", kHsTailRatioBound},
                              {"hs_converges", rep.hs_converges}};
    if (!rep.deviation_vanishes && n_max >= 100) {
      ok = add_check(body, "decay_exponent", std::abs(rep.decay_exponent + 1.0), tol["decay_exponent"]) && ok;
    }
    if (!rep.hs_converges) ok = add_check(body, "hs_tail_ratio", rep.tail_ratio, kHsTailRatioBound) && ok;
  }
  if (n_max - spec.m() >= 200) {
    const RecoveredParameters rec = recover_parameters(weight_profile(r));
    results["recovered"] = {{"eta", rec.eta},
                            {"multiplicities", rec.multiplicities},
                            {"well_separated", rec.well_separated},
                            {"worst_grade_residual", rec.worst_grade_residual}};
  }
  results["contraction_class"] = to_string(contraction_class(spec));
  if (csv_path) {
    std::ofstream out(*csv_path, std::ios::binary);
    if (!out) throw InputError("cannot write " + *csv_path);
    out << weight_table_csv(r);
    results["weight_table"] = *csv_path;
  }
  body["results"] = std::move(results);
  return finish(std::move(body), ok ? kExitOk : kExitNumericalFailure);
}

Report cmd_verify(const SpecFile& file, std::uint64_t seed, int samples, const Tolerances& tol) {
  if (samples < 1) throw InputError("--samples must be at least 1");
  const BundleSpec& spec = file.spec;
  const int d = spec.dim();
  ordered_json body = header("verify", file, tol);
  body["seed"] = seed;
  body["samples"] = samples;
  body["checks"] = ordered_json::array();
  body["skipped"] = ordered_json::array();
  Rng rng(seed);
  bool ok = true;

  // classification flags
  const auto basis = commutant_basis(spec);
  const auto parts = decompose(spec);
  const KernelVerdict verdict = kernel_exists(spec);
  ordered_json results;
  results["structure"] = structure_json(parts, basis.size());
  results["kernel"] = kernel_json(verdict);
  body["results"] = std::move(results);

  {
    const Complex z = random_point(rng, 0.9);
    const auto id = MoebiusElement::identity();
    double worst = cocycle_residual(spec, id, id, z);
    worst = std::max(worst, max_abs(multiplier(spec, id, z) - CMatrix::Identity(d, d)));
    if (verdict.exists) {
      worst = std::max(worst, kernel_invariance_residual(spec, *verdict.witness, id, z, random_point(rng, 0.9)));
    }
    ok = add_check(body, "identity_panel", worst, tol["identity_panel"]) && ok;
  }

  double cocycle = 0.0, two_path = 0.0, conj = 0.0;
  for (int i = 0; i < samples; ++i) {
    const auto g = random_near_identity(rng, 0.3);
    const auto h = random_near_identity(rng, 0.3);
    const Complex z = random_point(rng, 0.9);
    cocycle = std::max(cocycle, cocycle_residual(spec, g, h, z));
    two_path = std::max(two_path, max_abs(multiplier(spec, g, z) - multiplier_exp_form(spec, g, z)));
    const auto u = random_block_unitary(rng, spec.multiplicities);
    const CMatrix ud = u.dense();
    conj = std::max(conj, max_abs(multiplier(conjugate(spec, u), g, z) -
                                  ud * multiplier(spec, g, z) * ud.adjoint()));
  }
  ok = add_check(body, "cocycle", cocycle, tol["cocycle"]) && ok;
  ok = add_check(body, "multiplier_two_path", two_path, tol["multiplier_two_path"]) && ok;
  ok = add_check(body, "conjugation", conj, tol["conjugation"]) && ok;

  {
    double worst = 0.0;
    const double ells[] = {0.5, 1.0, 2.75};
    for (int i = 0; i < samples; ++i) {
      const auto g = random_near_identity(rng, 0.3);
      const int degree = std::uniform_int_distribution<int>(0, 8)(rng);
      const int k = std::uniform_int_distribution<int>(0, 5)(rng);
      const double ell = ells[i % 3];
      std::vector<Complex> c(degree + 1);
      for (auto& x : c) x = {uniform(rng, -1, 1), uniform(rng, -1, 1)};
      const auto f = GradedSeries::scalar(c);
      const int n = 12;
      const auto direct = series_differentiate(series_transform(f.padded(n + k), g, ell, n + k), k);
      worst = std::max(worst, max_coeff_diff(direct, leibnitz_rhs(f.padded(n), g, ell, k, n), n));
    }
    ok = add_check(body, "leibnitz", worst, tol["leibnitz"]) && ok;
  }

  {
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
      const auto g = random_near_identity(rng, 0.3);
      const Complex z = random_point(rng, 0.8);
      worst = std::max(worst, max_abs(reassembled_multiplier(spec, parts, g, z) - multiplier(spec, g, z)));
    }
    ok = add_check(body, "reassembly", worst, tol["reassembly"]) && ok;
  }

  if (spec.eta > 0.0) {
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
      const auto g = random_near_identity(rng, 0.3);
      const int j = std::uniform_int_distribution<int>(0, spec.m())(rng);
      const int n = 16;
      const auto f = random_grade_polynomial(rng, spec.multiplicities, j, 6, n);
      const auto lhs = gamma_apply(spec, std::nullopt, series_transform(f, g, spec.eta + j, n));
      const auto rhs = multiplier_action(spec, g, gamma_apply(spec, std::nullopt, f), n);
      worst = std::max(worst, max_coeff_diff(lhs, rhs, lhs.exact_through()));
    }
    ok = add_check(body, "intertwining", worst, tol["intertwining"]) && ok;

    const auto solved = solve_normalizer(spec);
    const auto closed = closed_form_normalizer(spec);
    double oracle = 0.0;
    for (std::size_t j = 0; j < solved.products.size(); ++j) {
      oracle = std::max(oracle, max_abs(solved.products[j] - closed.products[j]));
    }
    ok = add_check(body, "normalizer_oracle", oracle, tol["normalizer_oracle"]) && ok;
    if (file.normalizer) {
      ok = add_check(body, "supplied_normalizer", supplied_normalizer_residual(file, solved),
                     tol["supplied_normalizer"]) && ok;
    }
  } else {
    for (const char* name : {"intertwining", "normalizer_oracle"}) add_skip(body, name, "eta must be positive");
    if (file.normalizer) {
      ok = add_check(body, "supplied_normalizer", INFINITY, tol["supplied_normalizer"]) && ok;
    }
  }

  if (verdict.exists) {
    const NormalizerSolution& p = *verdict.witness;
    ok = add_check(body, "kernel_origin", max_abs(kernel_at_origin(spec, p) - CMatrix::Identity(d, d)),
                   tol["kernel_origin"]) && ok;
    double inv = 0.0, transport = 0.0, law = 0.0;
    for (int i = 0; i < samples; ++i) {
      const auto g = random_near_identity(rng, 0.3);
      const Complex z = random_point(rng, 0.6), w = random_point(rng, 0.6);
      inv = std::max(inv, kernel_invariance_residual(spec, p, g, z, w));
      transport = std::max(transport, transport_residual(spec, p, z));
      law = std::max(law, hermitian_law_residual(spec, p, g, random_point(rng, 0.5)));
    }
    ok = add_check(body, "kernel_invariance", inv, tol["kernel_invariance"]) && ok;
    ok = add_check(body, "transport", transport, tol["transport"]) && ok;
    ok = add_check(body, "hermitian_law", law, tol["hermitian_law"]) && ok;
  } else {
    for (const char* name : {"kernel_origin", "kernel_invariance", "transport", "hermitian_law"}) {
      add_skip(body, name, verdict.reason);
    }
  }

  const int code = !ok ? kExitNumericalFailure : (verdict.exists ? kExitOk : kExitKernelAbsent);
  return finish(std::move(body), code);
}

Report cmd_canonical(const SpecFile& file, const Tolerances& tol) {
  const BundleSpec& spec = file.spec;
  ordered_json body = header("canonical", file, tol);
  const KernelVerdict verdict = kernel_exists(spec);
  ordered_json results;
  const auto& mult = spec.multiplicities;
  const bool scalar_chain = std::all_of(mult.begin(), mult.end(), [](int x) { return x == 1; });
  if (scalar_chain) {
    const BundleSpec c = canonical_scalar_chain(spec);
    std::vector<double> ys;
    bool irreducible = true;
    for (const auto& y : c.blocks) {
      ys.push_back(y(0, 0).real());
      irreducible = irreducible && y(0, 0) != Complex(0.0);
    }
    results["family"] = "scalar_chain";
    results["canonical"] = {{"y", ys}};
    results["irreducible"] = irreducible;
    const KernelVerdict cv = kernel_exists(c);
    results["kernel"] = kernel_json(verdict);
    results["canonical_kernel_agrees"] = cv.exists == verdict.exists;
  } else if (mult == std::vector<int>{1, 2, 1}) {
    const Canonical121 c = canonical_121(spec);
    const double eta = spec.eta;
    results["family"] = "(1,2,1)";
    results["canonical"] = {{"a", c.a}, {"b", c.b}, {"c", c.c}};
    results["irreducible"] = c.irreducible();
    results["kernel"] = kernel_json(verdict);

    const double a2 = c.a * c.a, b2 = c.b * c.b, c2 = c.c * c.c;
    const double shrink = 1.0 - a2 / (2.0 * (2.0 * eta + 1.0));
    const bool first = a2 < 2.0 * eta;
    const bool second = shrink > 0.0 && b2 < (2.0 * eta + 2.0) / shrink;
    const bool third = c2 < 2.0 * eta + 2.0;
    const bool joint = eta > 0.0 && first && b2 * shrink + c2 < 2.0 * eta + 2.0;
    ordered_json violated = ordered_json::array();
    if (!first) violated.push_back("a^2 < 2 eta");
    if (!second) violated.push_back("b^2 < (2 eta + 2) / (1 - a^2 / (2 (2 eta + 1)))");
    if (!third) violated.push_back("c^2 < 2 eta + 2");
    results["paper_inequalities"] = {{"a^2 < 2 eta", first},
                                     {"b^2 < (2 eta + 2) / (1 - a^2 / (2 (2 eta + 1)))", second},
                                     {"c^2 < 2 eta + 2", third},
                                     {"violated", violated}};
    results["joint_condition"] = {
        {"statement", "a^2 < 2 eta and b^2 (1 - a^2 / (2 (2 eta + 1))) + c^2 < 2 eta + 2"},
        {"holds", joint}};
    const bool paper_all = first && second && third && eta > 0.0;
    results["paper_agrees_with_recursion"] = paper_all == verdict.exists;
    results["joint_agrees_with_recursion"] = joint == verdict.exists;
  } else {
    throw InputError("canonical forms exist only for all-ones or (1,2,1) multiplicities");
  }
  body["results"] = std::move(results);
  return finish(std::move(body), verdict.exists ? kExitOk : kExitKernelAbsent);
}

std::string human_summary(const ordered_json& body) {
  std::ostringstream out;
  out << body.value("command", std::string("?")) << "  spec " << body.value("spec_digest", std::string("?"))
      << "  exit " << body.value("exit_code", -1) << '\n';
  if (body.contains("results")) {
    std::function<void(const ordered_json&, const std::string&)> walk = [&](const ordered_json& node,
                                                                           const std::string& prefix) {
      for (const auto& [key, value] : node.items()) {
        const std::string name = prefix.empty() ? key : prefix + "." + key;
        if (value.is_object()) {
          walk(value, name);
        } else if (value.is_array() && value.size() > 8) {
          out << "  " << name << ": [" << value.size() << " entries]\n";
        } else {
          out << "  " << name << ": " << value.dump() << '\n';
        }
      }
    };
    walk(body["results"], "");
  }
  if (body.contains("checks")) {
    for (const auto& c : body["checks"]) {
      out << "  " << (c["pass"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>()
          << "  residual " << c["max_residual"].dump() << "  tol " << c["tolerance"].dump() << '\n';
    }
  }
  if (body.contains("skipped")) {
    for (const auto& s : body["skipped"]) {
      out << "  SKIP " << s["name"].get<std::string>() << "  (" << s["reason"].get<std::string>() << ")\n";
    }
  }
  return out.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Homogeneous Cowen-Douglas operators: classification, kernels, shift realization"};
  app.require_subcommand(1);
  std::optional<std::string> tol_file;
  bool human = false;
  app.add_option("--tol-file", tol_file, "JSON object overriding named tolerances");
  app.add_flag("--human", human, "plain-text summary instead of JSON");

  std::string spec_path;
  std::optional<std::string> points_path, csv_path;
  int n_max = 200;
  bool blocks = false;
  std::uint64_t seed = 20240601;
  int samples = 20;

  auto* classify = app.add_subcommand("classify", "irreducibility, kernel existence, threshold, invariants");
  auto* kernel = app.add_subcommand("kernel", "normalizer, K(0,0) and K(z,w) at given points");
  auto* realize_cmd = app.add_subcommand("realize", "weighted block shift and weight table");
  auto* verify = app.add_subcommand("verify", "residual suite for every identity");
  auto* canonical = app.add_subcommand("canonical", "canonical parameters of the scalar and (1,2,1) families");
  for (auto* sub : {classify, kernel, realize_cmd, verify, canonical}) {
    sub->add_option("spec", spec_path, "spec file (JSON)")->required();
    sub->add_option("--tol-file", tol_file, "JSON object overriding named tolerances");
    sub->add_flag("--human", human, "plain-text summary instead of JSON");
  }
  kernel->add_option("--points", points_path, "JSON list of [z, w] pairs, each [re, im]");
  realize_cmd->add_option("--n-max", n_max, "highest level")->capture_default_str();
  realize_cmd->add_option("--out", csv_path, "weight table CSV path");
  realize_cmd->add_flag("--blocks", blocks, "include every M(n) in the report");
  verify->add_option("--seed", seed, "random seed")->capture_default_str();
  verify->add_option("--samples", samples, "samples per identity")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    const Tolerances tol = load_tolerances(tol_file);
    const SpecFile file = load_spec(spec_path);
    Report report;
    if (classify->parsed()) {
      report = cmd_classify(file, tol);
    } else if (kernel->parsed()) {
      std::vector<std::pair<Complex, Complex>> points;
      if (points_path) points = load_points(*points_path);
      report = cmd_kernel(file, points, tol);
    } else if (realize_cmd->parsed()) {
      report = cmd_realize(file, n_max, csv_path, blocks, tol);
    } else if (verify->parsed()) {
      report = cmd_verify(file, seed, samples, tol);
    } else {
      report = cmd_canonical(file, tol);
    }
    out << (human ? human_summary(report.body) : report.body.dump(2) + "\n");
    return report.exit_code;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const Error& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumericalFailure;
  }
}

}  // namespace cdshift::cli
