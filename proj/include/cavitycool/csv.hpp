#pragma once

#include <string>
#include <vector>

#include "cavitycool/lindblad.hpp"
#include "cavitycool/rateeq.hpp"

namespace cavitycool::csv {

/// 15 significant digits in scientific notation; NaN is spelled "nan".
std::string number(double v);

std::string rate_trajectory(const std::vector<rateeq::Sample>& samples);

std::string oracle_trajectory(const std::vector<lindblad::Record>& records);

}  // namespace cavitycool::csv
