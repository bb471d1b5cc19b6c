#include "thzdoa/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace thzdoa {

namespace {

constexpr double kPhysicalTol = 1e-12;

void require_count(int n, const char* what) {
  if (n < 1) throw std::invalid_argument(std::string(what) + ": n must be >= 1");
}

}  // namespace

SubcarrierGrid::SubcarrierGrid(int num_subcarriers, double carrier_hz, double bandwidth_hz,
                               int n_cp, double t_sym)
    : k_(num_subcarriers), f_z_(carrier_hz), f_s_(bandwidth_hz), n_cp_(n_cp) {
  if (k_ < 1) throw std::invalid_argument("SubcarrierGrid: K must be >= 1");
  if (!(f_z_ > 0.0) || !(f_s_ > 0.0))
    throw std::invalid_argument("SubcarrierGrid: carrier and bandwidth must be positive");
  if (n_cp_ < 0) throw std::invalid_argument("SubcarrierGrid: cyclic prefix must be >= 0");
  t_sym_ = t_sym > 0.0 ? t_sym : static_cast<double>(k_ + n_cp_) / f_s_;
}

double SubcarrierGrid::baseband_offset_hz(int k) const {
  if (k < 1 || k > k_)
    throw std::out_of_range("subcarrier index " + std::to_string(k) + " outside [1, " +
                            std::to_string(k_) + "]");
  return (static_cast<double>(k - 1) / k_ - 0.5) * f_s_;
}

double SubcarrierGrid::xi(int k) const { return baseband_offset_hz(k) / f_z_; }

VirtualAngles physical_to_virtual(double theta_deg, double phi_deg) {
  if (!(std::abs(theta_deg) <= 90.0) || !(std::abs(phi_deg) <= 90.0))
    throw std::invalid_argument("physical_to_virtual: angles must lie in [-90, 90] degrees");
  const double th = deg2rad(theta_deg);
  const double ph = deg2rad(phi_deg);
  return {kPi * std::sin(th) * std::cos(ph), kPi * std::sin(ph)};
}

bool is_physical(VirtualAngles v) {
  return std::hypot(v.mu, v.nu) <= kPi * (1.0 + kPhysicalTol);
}

PhysicalAngles virtual_to_physical(VirtualAngles v) {
  if (!std::isfinite(v.mu) || !std::isfinite(v.nu) || !is_physical(v))
    throw NonPhysicalAngles("non-physical angle pair");
  const double s_phi = std::clamp(v.nu / kPi, -1.0, 1.0);
  const double phi = std::asin(s_phi);
  const double c_phi = std::cos(phi);
  double s_theta = 0.0;
  if (c_phi > 0.0) s_theta = std::clamp(v.mu / (kPi * c_phi), -1.0, 1.0);
  return {rad2deg(std::asin(s_theta)), rad2deg(phi)};
}

VirtualAngles clamp_to_physical(VirtualAngles v) {
  const double r = std::hypot(v.mu, v.nu);
  if (r <= kPi) return v;
  const double s = kPi / r;
  return {v.mu * s, v.nu * s};
}

CVec steering_1d(double angle, int n) {
  require_count(n, "steering_1d");
  CVec a(n);
  for (int p = 0; p < n; ++p) a[p] = expj(p * angle);
  return a;
}

CVec squint_1d(double angle, int n, double xi) {
  require_count(n, "squint_1d");
  CVec a(n);
  for (int p = 0; p < n; ++p) a[p] = expj(p * angle * xi);
  return a;
}

CVec kron(const CVec& outer, const CVec& inner) {
  CVec out(outer.size() * inner.size());
  for (Eigen::Index q = 0; q < outer.size(); ++q)
    out.segment(q * inner.size(), inner.size()) = outer[q] * inner;
  return out;
}

CVec KronVector::dense() const { return kron(vertical, horizontal); }

KronVector hadamard(const KronVector& a, const KronVector& b) {
  if (a.vertical.size() != b.vertical.size() || a.horizontal.size() != b.horizontal.size())
    throw std::invalid_argument("hadamard: factor dimensions differ");
  return {a.vertical.cwiseProduct(b.vertical), a.horizontal.cwiseProduct(b.horizontal)};
}

KronVector conjugate(const KronVector& a) { return {a.vertical.conjugate(), a.horizontal.conjugate()}; }

cd dot(const KronVector& a, const KronVector& b) {
  if (a.vertical.size() != b.vertical.size() || a.horizontal.size() != b.horizontal.size())
    throw std::invalid_argument("dot: factor dimensions differ");
  return a.vertical.dot(b.vertical) * a.horizontal.dot(b.horizontal);
}

KronVector steering_upa_factors(VirtualAngles v, const UpaGeometry& g) {
  return {steering_1d(v.nu, g.n_v()), steering_1d(v.mu, g.n_h())};
}

KronVector squint_upa_factors(VirtualAngles v, const UpaGeometry& g, double xi) {
  return {squint_1d(v.nu, g.n_v(), xi), squint_1d(v.mu, g.n_h(), xi)};
}

CVec steering_upa(VirtualAngles v, const UpaGeometry& g) { return steering_upa_factors(v, g).dense(); }

CVec squint_upa(VirtualAngles v, const UpaGeometry& g, double xi) {
  return squint_upa_factors(v, g, xi).dense();
}

}  // namespace thzdoa
