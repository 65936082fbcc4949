#pragma once

#include <vector>

namespace qlc {

double mean(const std::vector<double>& v);
double sample_std(const std::vector<double>& v);  // n-1 denominator

struct PairedTestResult {
  double mean_diff = 0.0;
  double t_statistic = 0.0;
  double p_value = 1.0;
  long long df = 0;
  bool reject = false;      // at the given alpha
  bool degenerate = false;  // zero-variance differences
};

// Two-sided paired t-test on matched samples.  Zero-variance differences are
// resolved by convention: reject iff the mean difference is nonzero.
PairedTestResult paired_ttest(const std::vector<double>& a, const std::vector<double>& b,
                              double alpha = 0.05);

}  // namespace qlc
