#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smix/engine.hpp"

namespace smix {

/// Fixed notation with 12 digits after the point; negative zero prints as zero.
std::string format_value(double x);

/// Column order of the entropy table.
inline constexpr const char* kReportHeader =
    "reference,alpha,value_bits,method,decomposition_size,converged,seed";
inline constexpr const char* kVerificationHeader = "theorem_id,alpha,passed,lhs,rhs,slack";

std::string write_report_csv(const std::vector<EntropyReport>& rows,
                             const std::vector<VerificationResult>& checks);

std::string write_report_text(const std::vector<EntropyReport>& rows,
                              const std::vector<VerificationResult>& checks);

/// One parsed line of the entropy table.
struct ReportRow {
  std::string reference;
  double alpha = 0.0;
  double value_bits = 0.0;
  std::string method;
  int decomposition_size = 0;
  bool converged = false;
  std::uint64_t seed = 0;
};

struct VerificationRow {
  std::string theorem_id;
  std::optional<double> alpha;
  std::string passed;
  std::optional<double> lhs, rhs, slack;
};

struct ParsedReport {
  std::vector<ReportRow> rows;
  std::vector<VerificationRow> verification;
};

/// Inverse of write_report_csv. Throws InputError on malformed text.
ParsedReport parse_report_csv(const std::string& text);

/// Re-emit a parsed report in CSV form (byte-identical for well-formed input).
std::string write_parsed_csv(const ParsedReport& report);

}  // namespace smix
