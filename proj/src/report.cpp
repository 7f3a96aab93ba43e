#include "smix/report.hpp"

#include <cstdio>
#include <sstream>

#include "smix/problem.hpp"

namespace smix {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError(where, "not a number: '" + s + "'");
  }
}

std::optional<double> parse_optional(const std::string& s, const std::string& where) {
  if (s.empty()) return std::nullopt;
  return parse_double(s, where);
}

std::string optional_value(const std::optional<double>& x) {
  return x ? format_value(*x) : std::string();
}

void write_verification(std::ostringstream& os, const std::vector<VerificationRow>& rows) {
  os << "\n" << kVerificationHeader << "\n";
  for (const VerificationRow& v : rows)
    os << v.theorem_id << ',' << optional_value(v.alpha) << ',' << v.passed << ','
       << optional_value(v.lhs) << ',' << optional_value(v.rhs) << ','
       << optional_value(v.slack) << "\n";
}

VerificationRow to_row(const VerificationResult& r) {
  VerificationRow v;
  v.theorem_id = r.theorem_id;
  v.alpha = r.alpha;
  v.passed = status_name(r.status);
  if (r.status != VerificationStatus::Skip) {
    v.lhs = r.lhs;
    v.rhs = r.rhs;
    v.slack = r.slack;
  }
  return v;
}

ReportRow to_row(const EntropyReport& r) {
  return {reference_name(r.reference), r.alpha, r.value, method_name(r.method),
          r.decomposition_size, r.converged, r.seed};
}

}  // namespace

std::string format_value(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", x);
  std::string s(buf);
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

std::string write_report_csv(const std::vector<EntropyReport>& rows,
                             const std::vector<VerificationResult>& checks) {
  ParsedReport p;
  for (const EntropyReport& r : rows) p.rows.push_back(to_row(r));
  for (const VerificationResult& c : checks) p.verification.push_back(to_row(c));
  return write_parsed_csv(p);
}

std::string write_parsed_csv(const ParsedReport& report) {
  std::ostringstream os;
  os << kReportHeader << "\n";
  for (const ReportRow& r : report.rows)
    os << r.reference << ',' << format_value(r.alpha) << ',' << format_value(r.value_bits) << ','
       << r.method << ',' << r.decomposition_size << ',' << (r.converged ? "true" : "false") << ','
       << r.seed << "\n";
  write_verification(os, report.verification);
  return os.str();
}

std::string write_report_text(const std::vector<EntropyReport>& rows,
                              const std::vector<VerificationResult>& checks) {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-10s %16s %18s %-12s %5s %-9s %s\n", "reference", "alpha",
                "value_bits", "method", "size", "converged", "seed");
  os << buf;
  for (const EntropyReport& r : rows) {
    std::snprintf(buf, sizeof buf, "%-10s %16s %18s %-12s %5d %-9s %llu\n",
                  reference_name(r.reference), format_value(r.alpha).c_str(),
                  format_value(r.value).c_str(), method_name(r.method), r.decomposition_size,
                  r.converged ? "true" : "false", static_cast<unsigned long long>(r.seed));
    os << buf;
  }
  os << "note: finite: always (every state has a finite extremal decomposition)\n";
  os << "\nverification\n";
  for (const VerificationResult& c : checks) {
    os << "  " << status_name(c.status) << "  " << c.theorem_id;
    if (c.alpha) os << "  alpha=" << format_value(*c.alpha);
    if (c.status != VerificationStatus::Skip)
      os << "  lhs=" << format_value(c.lhs) << "  rhs=" << format_value(c.rhs)
         << "  slack=" << format_value(c.slack);
    if (!c.context.empty()) os << "  (" << c.context << ")";
    os << "\n";
  }
  return os.str();
}

ParsedReport parse_report_csv(const std::string& text) {
  ParsedReport out;
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != kReportHeader)
    throw InputError("report", "missing entropy header");
  int lineno = 1;
  bool in_checks = false;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string where = "report line " + std::to_string(lineno);
    if (!in_checks) {
      if (line.empty()) {
        if (!std::getline(is, line) || line != kVerificationHeader)
          throw InputError(where, "missing verification header");
        ++lineno;
        in_checks = true;
        continue;
      }
      const auto f = split(line, ',');
      if (f.size() != 7) throw InputError(where, "expected 7 fields");
      ReportRow r;
      r.reference = f[0];
      r.alpha = parse_double(f[1], where);
      r.value_bits = parse_double(f[2], where);
      r.method = f[3];
      r.decomposition_size = static_cast<int>(parse_double(f[4], where));
      if (f[5] != "true" && f[5] != "false") throw InputError(where, "converged must be true/false");
      r.converged = f[5] == "true";
      r.seed = std::stoull(f[6]);
      out.rows.push_back(std::move(r));
    } else {
      const auto f = split(line, ',');
      if (f.size() != 6) throw InputError(where, "expected 6 fields");
      out.verification.push_back({f[0], parse_optional(f[1], where), f[2],
                                  parse_optional(f[3], where), parse_optional(f[4], where),
                                  parse_optional(f[5], where)});
    }
  }
  return out;
}

}  // namespace smix
