#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cdshift/bundle.hpp"
#include "cdshift/kernel.hpp"
#include "json.hpp"

namespace cdshift::cli {

/// Parsed contents of a spec file:
///
///   {
///     "eta": 1.0,
///     "multiplicities": [1, 1],
///     "blocks": [ [[ [1.0, 0.0] ]] ],
///     "normalizer": [ [[ [1.0, 0.0] ]], [[ [0.5, 0.0] ]] ]   (optional)
///   }
///
/// Each matrix is a row-major list of rows of [re, im] pairs; "normalizer"
/// lists the products P_0..P_m.
struct SpecFile {
  BundleSpec spec;
  std::optional<std::vector<CMatrix>> normalizer;
};

/// Parses and validates. Syntax errors report line and column; structural
/// errors name the offending field (e.g. "blocks[1][0][2]").
SpecFile parse_spec(const std::string& text, const std::string& source = "<input>");
SpecFile load_spec(const std::string& path);

/// Normalized form: fixed key order, two-space indentation, shortest
/// round-trip doubles, trailing newline.
std::string serialize_spec(const SpecFile& file);

/// 16 hex digits identifying the normalized spec.
std::string spec_digest(const SpecFile& file);

nlohmann::ordered_json matrix_to_json(const CMatrix& m);
nlohmann::ordered_json complex_to_json(Complex z);

/// Pairs (z, w) from a points file: [ [[zre, zim], [wre, wim]], ... ].
std::vector<std::pair<Complex, Complex>> parse_points(const std::string& text,
                                                      const std::string& source = "<points>");
std::vector<std::pair<Complex, Complex>> load_points(const std::string& path);

std::string read_file(const std::string& path);

}  // namespace cdshift::cli
