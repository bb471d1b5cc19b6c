#include "thzdoa/harness/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace thzdoa::harness {

namespace {

double objective(const CMat& y, int ih, int iv, double mu, double nu) {
  const CVec a = virtual_steering({mu, nu}, ih, iv);
  return (a.adjoint() * y).squaredNorm();
}

}  // namespace

OracleResult grid_oracle(const SnapshotMatrix& y, double resolution, double min_peak_ratio) {
  if (!(resolution > 0.0)) throw std::invalid_argument("grid_oracle: resolution must be positive");
  const int ih = y.virtual_geom.n_h();
  const int iv = y.virtual_geom.n_v();
  const int n = static_cast<int>(std::ceil(2.0 * kPi / resolution));

  OracleResult out;
  double best = -1.0;
  double sum = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const double mu = -kPi + a * resolution;
      const double nu = -kPi + b * resolution;
      const double f = objective(y.data, ih, iv, mu, nu);
      sum += f;
      if (f > best) {
        best = f;
        out.angles = {mu, nu};
      }
    }
  const double avg = sum / (static_cast<double>(n) * n);
  out.peak_to_mean = avg > 0.0 ? best / avg : 0.0;
  out.low_confidence = out.peak_to_mean < min_peak_ratio;

  double step = resolution;
  for (int round = 0; round < 3; ++round) {
    const VirtualAngles centre = out.angles;
    step /= 10.0;
    for (int a = -10; a <= 10; ++a)
      for (int b = -10; b <= 10; ++b) {
        const double mu = centre.mu + a * step;
        const double nu = centre.nu + b * step;
        const double f = objective(y.data, ih, iv, mu, nu);
        if (f > best) {
          best = f;
          out.angles = {mu, nu};
        }
      }
  }
  out.angles = {std::remainder(out.angles.mu, 2.0 * kPi), std::remainder(out.angles.nu, 2.0 * kPi)};
  out.final_resolution = step;
  return out;
}

}  // namespace thzdoa::harness
