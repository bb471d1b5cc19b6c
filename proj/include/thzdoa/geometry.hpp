#pragma once

#include <stdexcept>

#include "thzdoa/types.hpp"

namespace thzdoa {

/// Rectangular n_h x n_v antenna grid at half-wavelength spacing.
///
/// Element (p, q), both 0-based, lives at linear index q * n_h + p, i.e. the
/// horizontal index runs fastest. Every vector in this library that is indexed
/// by antenna uses this order, so a UPA steering vector is
/// kron(vertical, horizontal).
class UpaGeometry {
 public:
  UpaGeometry(int n_h, int n_v) : n_h_(n_h), n_v_(n_v) {
    if (n_h < 1 || n_v < 1) throw std::invalid_argument("UpaGeometry: dimensions must be >= 1");
  }

  int n_h() const { return n_h_; }
  int n_v() const { return n_v_; }
  int total() const { return n_h_ * n_v_; }
  int index(int p, int q) const { return q * n_h_ + p; }

  bool operator==(const UpaGeometry&) const = default;

 private:
  int n_h_;
  int n_v_;
};

/// (mu, nu) = (pi sin(theta) cos(phi), pi sin(phi)).
struct VirtualAngles {
  double mu = 0.0;
  double nu = 0.0;
};

struct PhysicalAngles {
  double theta_deg = 0.0;
  double phi_deg = 0.0;
};

/// OFDM subcarrier layout. Subcarrier numbers k are 1-based labels in [1, K].
class SubcarrierGrid {
 public:
  /// t_sym <= 0 selects the default (K + n_cp) / f_s.
  SubcarrierGrid(int num_subcarriers, double carrier_hz, double bandwidth_hz, int n_cp = 0,
                 double t_sym = 0.0);

  int num_subcarriers() const { return k_; }
  double carrier_hz() const { return f_z_; }
  double bandwidth_hz() const { return f_s_; }
  int cyclic_prefix() const { return n_cp_; }
  double symbol_duration() const { return t_sym_; }
  double sample_period() const { return 1.0 / f_s_; }

  /// ((k-1)/K - 1/2) * f_s
  double baseband_offset_hz(int k) const;
  /// Fractional frequency offset of subcarrier k relative to the carrier.
  double xi(int k) const;

 private:
  int k_;
  double f_z_;
  double f_s_;
  int n_cp_;
  double t_sym_;
};

class NonPhysicalAngles : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

VirtualAngles physical_to_virtual(double theta_deg, double phi_deg);
inline VirtualAngles physical_to_virtual(PhysicalAngles a) {
  return physical_to_virtual(a.theta_deg, a.phi_deg);
}

/// Throws NonPhysicalAngles when (mu, nu) lies outside the disc of radius pi.
PhysicalAngles virtual_to_physical(VirtualAngles v);

bool is_physical(VirtualAngles v);
/// Radial projection onto the physical disc mu^2 + nu^2 <= pi^2.
VirtualAngles clamp_to_physical(VirtualAngles v);

/// [exp(j p angle)], p = 0..n-1.
CVec steering_1d(double angle, int n);
/// [exp(j p angle xi)], p = 0..n-1.
CVec squint_1d(double angle, int n, double xi);

/// Separable (Kronecker) vector kron(vertical, horizontal). Steering vectors,
/// squint vectors, TTDU compensation and every beamformer in this library
/// factor this way, which keeps per-subcarrier work at O(n_h + n_v).
struct KronVector {
  CVec vertical;
  CVec horizontal;

  Eigen::Index size() const { return vertical.size() * horizontal.size(); }
  double norm() const { return vertical.norm() * horizontal.norm(); }
  CVec dense() const;
};

CVec kron(const CVec& outer, const CVec& inner);
KronVector hadamard(const KronVector& a, const KronVector& b);
KronVector conjugate(const KronVector& a);
/// a^H b
cd dot(const KronVector& a, const KronVector& b);

KronVector steering_upa_factors(VirtualAngles v, const UpaGeometry& g);
KronVector squint_upa_factors(VirtualAngles v, const UpaGeometry& g, double xi);

CVec steering_upa(VirtualAngles v, const UpaGeometry& g);
CVec squint_upa(VirtualAngles v, const UpaGeometry& g, double xi);

inline double xi_of(int k, const SubcarrierGrid& grid) { return grid.xi(k); }

}  // namespace thzdoa
