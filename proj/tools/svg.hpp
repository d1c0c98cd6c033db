#pragma once

#include "ricci/experiments.hpp"

#include <string>

namespace ricci::cli {

// Bar chart with a log10 vertical axis; empty bins are left blank.
std::string histogram_svg(const Histogram& h, const std::string& title, const std::string& provenance_line);

}  // namespace ricci::cli
