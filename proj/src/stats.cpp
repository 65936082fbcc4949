#include "stats.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>

#include "errors.hpp"

namespace qlc {

double mean(const std::vector<double>& v) {
  require(!v.empty(), ErrorCode::invalid_argument, "mean of empty sample");
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
  require(v.size() >= 2, ErrorCode::invalid_argument, "sample std needs at least 2 values");
  const double m = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

PairedTestResult paired_ttest(const std::vector<double>& a, const std::vector<double>& b,
                              double alpha) {
  require(a.size() == b.size(), ErrorCode::invalid_argument, "paired samples differ in length");
  require(a.size() >= 2, ErrorCode::invalid_argument, "paired t-test needs at least 2 pairs");
  require(alpha > 0.0 && alpha < 1.0, ErrorCode::invalid_argument, "alpha must be in (0, 1)");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];

  PairedTestResult r;
  r.df = static_cast<long long>(a.size()) - 1;
  r.mean_diff = mean(d);
  const double sd = sample_std(d);
  if (sd == 0.0) {
    r.degenerate = true;
    if (r.mean_diff != 0.0) {
      r.t_statistic = r.mean_diff > 0.0 ? std::numeric_limits<double>::infinity()
                                        : -std::numeric_limits<double>::infinity();
      r.p_value = 0.0;
      r.reject = true;
    } else {
      r.t_statistic = 0.0;
      r.p_value = 1.0;
      r.reject = false;
    }
    return r;
  }
  r.t_statistic = r.mean_diff / (sd / std::sqrt(static_cast<double>(a.size())));
  boost::math::students_t dist(static_cast<double>(r.df));
  r.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t_statistic)));
  r.reject = r.p_value < alpha;
  return r;
}

}  // namespace qlc
