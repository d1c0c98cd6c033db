#pragma once

#include <vector>

namespace ricci {

double mean(const std::vector<double>& v);
double median(std::vector<double> v);
double max_value(const std::vector<double>& v);
// Least-squares slope of log(y) against log(x); non-positive entries are skipped.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);
// Number of strict increases in a sequence that should be non-increasing.
int count_inversions(const std::vector<double>& v);

}  // namespace ricci
