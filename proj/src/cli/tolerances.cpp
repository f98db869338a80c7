#include "cdshift/cli/tolerances.hpp"

#include <cmath>
#include <cstdlib>

#include "cdshift/cli/spec_file.hpp"
#include "cdshift/types.hpp"

namespace cdshift::cli {

Tolerances Tolerances::defaults() {
  Tolerances t;
  t.values_ = {
      {"cocycle", 1e-9},
      {"multiplier_two_path", 1e-10},
      {"conjugation", 1e-10},
      {"normalizer_oracle", 1e-10},
      {"supplied_normalizer", 1e-10},
      {"kernel_origin", 1e-12},
      {"intertwining", 1e-8},
      {"leibnitz", 1e-10},
      {"kernel_invariance", 1e-8},
      {"transport", 1e-8},
      {"hermitian_law", 1e-8},
      {"reassembly", 1e-10},
      {"identity_panel", 1e-13},
      {"e_matrix_oracle", 1e-12},
      {"shift_relation", 1e-10},
      {"decay_exponent", 0.1},
      {"eta_threshold", 1e-6},
      {"positivity", 1e-10},
  };
  return t;
}

double Tolerances::operator[](const std::string& name) const {
  const auto it = values_.find(name);
  if (it == values_.end()) throw InputError("unknown tolerance '" + name + "'");
  return it->second;
}

void Tolerances::override_with(const std::string& text, const std::string& source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(source + ": syntax error at byte " + std::to_string(e.byte));
  }
  if (!doc.is_object()) throw InputError(source + ": expected an object of tolerances");
  for (const auto& [key, value] : doc.items()) {
    if (!values_.count(key)) throw InputError(source + ": " + key + ": unknown tolerance");
    if (!value.is_number() || !(value.get<double>() > 0.0) || !std::isfinite(value.get<double>())) {
      throw InputError(source + ": " + key + ": must be a positive number");
    }
    values_[key] = value.get<double>();
  }
}

nlohmann::ordered_json Tolerances::to_json() const {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& [k, v] : values_) out[k] = v;
  return out;
}

Tolerances load_tolerances(const std::optional<std::string>& path) {
  Tolerances t = Tolerances::defaults();
  if (const char* env = std::getenv("CDSHIFT_TOL_FILE"); env != nullptr && *env != '\0') {
    t.override_with(read_file(env), env);
  }
  if (path) t.override_with(read_file(*path), *path);
  return t;
}

}  // namespace cdshift::cli
