#include "cdshift/cli/spec_file.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cdshift::cli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void field_error(const std::string& source, const std::string& field,
                              const std::string& what) {
  throw InputError(source + ": " + field + ": " + what);
}

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // byte offset -> line:column
    std::size_t line = 1, column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string message = e.what();
    const auto colon = message.rfind(": ");
    if (colon != std::string::npos) message = message.substr(colon + 2);
    throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                     ": syntax error: " + message);
  }
}

double read_number(const json& v, const std::string& source, const std::string& field) {
  if (!v.is_number()) field_error(source, field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) field_error(source, field, "must be finite");
  return x;
}

Complex read_complex(const json& v, const std::string& source, const std::string& field) {
  if (!v.is_array() || v.size() != 2) field_error(source, field, "expected an [re, im] pair");
  return {read_number(v[0], source, field + "[0]"), read_number(v[1], source, field + "[1]")};
}

CMatrix read_matrix(const json& v, int rows, int cols, const std::string& source,
                    const std::string& field) {
  const std::string shape = std::to_string(rows) + "x" + std::to_string(cols);
  if (!v.is_array()) field_error(source, field, "expected a list of rows");
  if (static_cast<int>(v.size()) != rows) {
    field_error(source, field,
                "must be " + shape + ", got " + std::to_string(v.size()) + " rows");
  }
  CMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const std::string rf = field + "[" + std::to_string(r) + "]";
    if (!v[r].is_array()) field_error(source, rf, "expected a row list");
    if (static_cast<int>(v[r].size()) != cols) {
      field_error(source, rf,
                  "must have " + std::to_string(cols) + " entries (matrix " + shape + "), got " +
                      std::to_string(v[r].size()));
    }
    for (int c = 0; c < cols; ++c) {
      m(r, c) = read_complex(v[r][c], source, rf + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

}  // namespace

SpecFile parse_spec(const std::string& text, const std::string& source) {
  const json doc = parse_json(text, source);
  if (!doc.is_object()) field_error(source, "<root>", "expected an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "eta" && key != "multiplicities" && key != "blocks" && key != "normalizer") {
      field_error(source, key, "unknown field");
    }
  }

  SpecFile out;
  if (!doc.contains("eta")) field_error(source, "eta", "missing");
  out.spec.eta = read_number(doc["eta"], source, "eta");

  if (!doc.contains("multiplicities")) field_error(source, "multiplicities", "missing");
  const json& mult = doc["multiplicities"];
  if (!mult.is_array() || mult.empty()) {
    field_error(source, "multiplicities", "expected a nonempty list of positive integers");
  }
  for (std::size_t j = 0; j < mult.size(); ++j) {
    const std::string f = "multiplicities[" + std::to_string(j) + "]";
    if (!mult[j].is_number_integer() || mult[j].get<long long>() < 1 ||
        mult[j].get<long long>() > 1000) {
      field_error(source, f, "must be a positive integer");
    }
    out.spec.multiplicities.push_back(mult[j].get<int>());
  }

  const json blocks = doc.contains("blocks") ? doc["blocks"] : json::array();
  if (!blocks.is_array()) field_error(source, "blocks", "expected a list of matrices");
  const std::size_t m = out.spec.multiplicities.size() - 1;
  if (blocks.size() != m) {
    field_error(source, "blocks",
                "expected " + std::to_string(m) + " blocks for " + std::to_string(m + 1) +
                    " multiplicities, got " + std::to_string(blocks.size()));
  }
  for (std::size_t j = 1; j <= m; ++j) {
    out.spec.blocks.push_back(read_matrix(blocks[j - 1], out.spec.multiplicities[j],
                                          out.spec.multiplicities[j - 1], source,
                                          "blocks[" + std::to_string(j - 1) + "]"));
  }

  if (doc.contains("normalizer")) {
    const json& p = doc["normalizer"];
    if (!p.is_array() || p.size() != m + 1) {
      field_error(source, "normalizer", "expected " + std::to_string(m + 1) + " products P_0..P_m");
    }
    std::vector<CMatrix> products;
    for (std::size_t j = 0; j <= m; ++j) {
      const int d = out.spec.multiplicities[j];
      products.push_back(read_matrix(p[j], d, d, source, "normalizer[" + std::to_string(j) + "]"));
    }
    out.normalizer = std::move(products);
  }

  try {
    out.spec.validate();
  } catch (const InputError& e) {
    throw InputError(source + ": " + e.what());
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

SpecFile load_spec(const std::string& path) { return parse_spec(read_file(path), path); }

ordered_json complex_to_json(Complex z) { return ordered_json::array({z.real(), z.imag()}); }

ordered_json matrix_to_json(const CMatrix& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string serialize_spec(const SpecFile& file) {
  ordered_json doc;
  doc["eta"] = file.spec.eta;
  doc["multiplicities"] = file.spec.multiplicities;
  ordered_json blocks = ordered_json::array();
  for (const auto& y : file.spec.blocks) blocks.push_back(matrix_to_json(y));
  doc["blocks"] = std::move(blocks);
  if (file.normalizer) {
    ordered_json p = ordered_json::array();
    for (const auto& b : *file.normalizer) p.push_back(matrix_to_json(b));
    doc["normalizer"] = std::move(p);
  }
  return doc.dump(2) + "\n";
}

std::string spec_digest(const SpecFile& file) {
  // FNV-1a over the normalized text
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : serialize_spec(file)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::pair<Complex, Complex>> parse_points(const std::string& text,
                                                      const std::string& source) {
  const json doc = parse_json(text, source);
  if (!doc.is_array()) field_error(source, "<root>", "expected a list of [z, w] pairs");
  std::vector<std::pair<Complex, Complex>> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string f = "[" + std::to_string(i) + "]";
    if (!doc[i].is_array() || doc[i].size() != 2) field_error(source, f, "expected a [z, w] pair");
    const Complex z = read_complex(doc[i][0], source, f + "[0]");
    const Complex w = read_complex(doc[i][1], source, f + "[1]");
    if (!(std::abs(z) < 1.0) || !(std::abs(w) < 1.0)) {
      field_error(source, f, "points must lie in the open unit disc");
    }
    out.emplace_back(z, w);
  }
  return out;
}

std::vector<std::pair<Complex, Complex>> load_points(const std::string& path) {
  return parse_points(read_file(path), path);
}

}  // namespace cdshift::cli
