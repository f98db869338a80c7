#pragma once

#include <map>
#include <optional>
#include <string>

#include "json.hpp"

namespace cdshift::cli {

/// Named tolerances used by every report. Defaults live in one table;
/// an override file is a flat JSON object {"name": value, ...} whose names
/// must already exist.
class Tolerances {
 public:
  static Tolerances defaults();

  double operator[](const std::string& name) const;
  void override_with(const std::string& text, const std::string& source);
  nlohmann::ordered_json to_json() const;

 private:
  std::map<std::string, double> values_;
};

/// Defaults, then CDSHIFT_TOL_FILE if set, then the explicit path (the
/// --tol-file flag) if given.
Tolerances load_tolerances(const std::optional<std::string>& path);

}  // namespace cdshift::cli
