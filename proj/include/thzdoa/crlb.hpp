#pragma once

#include <stdexcept>

#include "thzdoa/geometry.hpp"

namespace thzdoa {

/// Conditional (deterministic amplitude, known pilot) bound for one source on an
/// i_h x i_v virtual array. Parameter order in `fim` is (mu, nu, Re gamma, Im gamma).
struct CrlbResult {
  double var_mu = 0.0;
  double var_nu = 0.0;
  double var_theta_deg2 = 0.0;
  double var_phi_deg2 = 0.0;
  Eigen::Matrix4d fim = Eigen::Matrix4d::Zero();
};

class UnidentifiableConfiguration : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Throws UnidentifiableConfiguration for a singular FIM and std::invalid_argument
/// for sigma_n2 <= 0, snapshots < 1 or angles within 0.5 degrees of +-90.
CrlbResult crlb_single_source(VirtualAngles v, cd gamma, double sigma_n2, int i_h, int i_v,
                              int snapshots);

/// FIM only; no identifiability or conversion checks.
Eigen::Matrix4d fisher_information(VirtualAngles v, cd gamma, double sigma_n2, int i_h, int i_v,
                                   int snapshots);

}  // namespace thzdoa
