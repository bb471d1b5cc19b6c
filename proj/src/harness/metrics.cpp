#include "thzdoa/harness/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace thzdoa::harness {

double rmse(const std::vector<std::vector<double>>& truth,
            const std::vector<std::vector<double>>& estimates) {
  if (truth.empty() || truth.size() != estimates.size())
    throw std::invalid_argument("rmse: need matching, non-empty trial lists");
  double acc = 0.0;
  for (std::size_t t = 0; t < truth.size(); ++t) {
    const auto& x = truth[t];
    const auto& xh = estimates[t];
    if (x.empty() || x.size() != xh.size())
      throw std::invalid_argument("rmse: need matching, non-empty angle vectors");
    double per_trial = 0.0;
    for (std::size_t l = 0; l < x.size(); ++l) per_trial += (x[l] - xh[l]) * (x[l] - xh[l]);
    acc += per_trial / static_cast<double>(x.size());
  }
  return std::sqrt(acc / static_cast<double>(truth.size()));
}

double mean(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double stddev(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(x.size() - 1));
}

double t_statistic(std::span<const double> x) {
  const double sd = stddev(x);
  const double m = mean(x);
  if (sd == 0.0) return m == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), m);
  return m / (sd / std::sqrt(static_cast<double>(x.size())));
}

}  // namespace thzdoa::harness
