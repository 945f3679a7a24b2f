#include "bvlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "bvlab/errors.hpp"

namespace bvlab {

std::string status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Untrusted: return "untrusted";
  }
  return "?";
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

int RunReport::failed() const {
  int n = 0;
  for (const CheckRow& r : rows) {
    if (r.status == CheckStatus::Fail) ++n;
  }
  return n;
}

void RunReport::check_le(const std::string& name, double scale, double lhs, double rhs,
                         double tol, double tol_abs) {
  bool ok = lhs <= rhs * (1.0 + tol) + tol_abs;
  rows.push_back({name, scale, lhs, rhs, tol, ok ? CheckStatus::Pass : CheckStatus::Fail});
}

void RunReport::check_eq(const std::string& name, double scale, double lhs, double rhs,
                         double tol, double tol_abs) {
  double mag = std::max(std::fabs(lhs), std::fabs(rhs));
  bool ok = std::fabs(lhs - rhs) <= tol * mag + tol_abs;
  rows.push_back({name, scale, lhs, rhs, tol, ok ? CheckStatus::Pass : CheckStatus::Fail});
}

void write_report_csv(const RunReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "check_name,scale,lhs,rhs,tolerance,status\n";
  for (const CheckRow& r : report.rows) {
    out << r.name << ',' << format_number(r.scale) << ',' << format_number(r.lhs) << ','
        << format_number(r.rhs) << ',' << format_number(r.tolerance) << ','
        << status_name(r.status) << '\n';
  }
}

void write_profile_csv(const std::vector<double>& radii, const std::vector<double>& values,
                       const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "index,radius,value\n";
  for (std::size_t i = 0; i < radii.size() && i < values.size(); ++i) {
    out << i << ',' << format_number(radii[i]) << ',' << format_number(values[i]) << '\n';
  }
}

}  // namespace bvlab
