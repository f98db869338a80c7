#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cdshift/cli/spec_file.hpp"
#include "cdshift/cli/tolerances.hpp"
#include "cdshift/shift.hpp"
#include "json.hpp"

namespace cdshift::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitKernelAbsent = 1,
  kExitInputError = 2,
  kExitNumericalFailure = 3,
};

struct Report {
  nlohmann::ordered_json body;
  int exit_code = kExitOk;
};

Report cmd_classify(const SpecFile& file, const Tolerances& tol);
Report cmd_kernel(const SpecFile& file, const std::vector<std::pair<Complex, Complex>>& points,
                  const Tolerances& tol);
/// Writes the weight table to csv_path when given.
Report cmd_realize(const SpecFile& file, int n_max, const std::optional<std::string>& csv_path,
                   bool include_blocks, const Tolerances& tol);
Report cmd_verify(const SpecFile& file, std::uint64_t seed, int samples, const Tolerances& tol);
Report cmd_canonical(const SpecFile& file, const Tolerances& tol);

/// CSV with header n,grade,index,weight: the diagonal of M(n) for every
/// computed level.
std::string weight_table_csv(const ShiftRealization& r);

/// Short plain-text view of a report.
std::string human_summary(const nlohmann::ordered_json& body);

/// The cdshift command line; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cdshift::cli
