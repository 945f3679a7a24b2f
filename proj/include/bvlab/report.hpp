#pragma once

#include <string>
#include <vector>

namespace bvlab {

enum class CheckStatus { Pass, Fail, Untrusted };

/// One verified (or reported) inequality: lhs against rhs at a named scale.
struct CheckRow {
  std::string name;
  double scale = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  CheckStatus status = CheckStatus::Pass;
};

std::string status_name(CheckStatus s);

/// Formats a double the same way everywhere ("%.12g"); reports must be
/// byte-identical across runs.
std::string format_number(double v);

struct RunReport {
  std::vector<CheckRow> rows;
  double wall_ms = 0.0;          // never serialized into report.csv
  std::string config_echo;
  std::vector<std::string> artifacts;

  int failed() const;
  void add(CheckRow row) { rows.push_back(std::move(row)); }
  void pass_if(const std::string& name, double scale, double lhs, double rhs, double tol,
               bool ok) {
    rows.push_back({name, scale, lhs, rhs, tol, ok ? CheckStatus::Pass : CheckStatus::Fail});
  }
  /// lhs <= rhs * (1 + tol) + tol_abs
  void check_le(const std::string& name, double scale, double lhs, double rhs, double tol,
                double tol_abs = 0.0);
  /// |lhs - rhs| <= tol * max(|lhs|, |rhs|) + tol_abs
  void check_eq(const std::string& name, double scale, double lhs, double rhs, double tol,
                double tol_abs = 0.0);
  void note(const std::string& name, double scale, double lhs, double rhs) {
    rows.push_back({name, scale, lhs, rhs, 0.0, CheckStatus::Untrusted});
  }
};

/// Writes rows as CSV with the pinned schema:
/// check_name,scale,lhs,rhs,tolerance,status
void write_report_csv(const RunReport& report, const std::string& path);

/// profile CSV: index,radius,value
void write_profile_csv(const std::vector<double>& radii, const std::vector<double>& values,
                       const std::string& path);

}  // namespace bvlab
