#include "cavitycool/csv.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace cavitycool::csv {

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.14e", v);
  return buf;
}

std::string rate_trajectory(const std::vector<rateeq::Sample>& samples) {
  std::ostringstream out;
  out << 't';
  for (auto name : rateeq::kSlotNames) out << ',' << name;
  out << '\n';
  for (const auto& s : samples) {
    out << number(s.t);
    for (int i = 0; i < rateeq::kDim; ++i) out << ',' << number(s.y(i));
    out << '\n';
  }
  return out.str();
}

std::string oracle_trajectory(const std::vector<lindblad::Record>& records) {
  std::ostringstream out;
  const bool coherences = !records.empty() && !records.front().coherences.empty();
  out << "t,m,pop_e,n_cav";
  if (coherences)
    for (int i = 1; i < rateeq::kDim; ++i) out << ',' << rateeq::kSlotNames[i];
  out << '\n';
  for (const auto& r : records) {
    out << number(r.t) << ',' << number(r.m) << ',' << number(r.pop_e) << ',' << number(r.n_cav);
    for (double x : r.coherences) out << ',' << number(x);
    out << '\n';
  }
  return out.str();
}

}  // namespace cavitycool::csv
