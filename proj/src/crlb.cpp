#include "thzdoa/crlb.hpp"

#include <cmath>

namespace thzdoa {

namespace {

constexpr double kPoleMarginDeg = 0.5;

}  // namespace

Eigen::Matrix4d fisher_information(VirtualAngles v, cd gamma, double sigma_n2, int i_h, int i_v,
                                   int snapshots) {
  const UpaGeometry g(i_h, i_v);
  const CVec a = steering_upa(v, g);
  Eigen::Matrix<cd, Eigen::Dynamic, 4> d(g.total(), 4);
  const cd j(0.0, 1.0);
  for (int q = 0; q < i_v; ++q)
    for (int p = 0; p < i_h; ++p) {
      const int n = g.index(p, q);
      d(n, 0) = j * static_cast<double>(p) * gamma * a[n];
      d(n, 1) = j * static_cast<double>(q) * gamma * a[n];
      d(n, 2) = a[n];
      d(n, 3) = j * a[n];
    }
  // Unit-modulus pilots make every snapshot contribute the same D^H D.
  return (2.0 * snapshots / sigma_n2) * (d.adjoint() * d).real();
}

CrlbResult crlb_single_source(VirtualAngles v, cd gamma, double sigma_n2, int i_h, int i_v,
                              int snapshots) {
  if (!(sigma_n2 > 0.0)) throw std::invalid_argument("crlb: noise variance must be positive");
  if (snapshots < 1) throw std::invalid_argument("crlb: at least one snapshot required");
  if (i_h * i_v < 3) throw UnidentifiableConfiguration("unidentifiable configuration");
  const PhysicalAngles phys = virtual_to_physical(v);
  if (std::abs(phys.phi_deg) > 90.0 - kPoleMarginDeg || std::abs(phys.theta_deg) > 90.0 - kPoleMarginDeg)
    throw std::invalid_argument("crlb: angles too close to +-90 degrees for degree conversion");

  CrlbResult out;
  out.fim = fisher_information(v, gamma, sigma_n2, i_h, i_v, snapshots);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(out.fim);
  const auto& lambda = eig.eigenvalues();
  if (!(lambda[0] > 1e-12 * lambda[3])) throw UnidentifiableConfiguration("unidentifiable configuration");
  const Eigen::Matrix4d inv =
      eig.eigenvectors() * lambda.cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
  const Eigen::Matrix2d cov = inv.topLeftCorner<2, 2>();
  out.var_mu = cov(0, 0);
  out.var_nu = cov(1, 1);

  const double th = deg2rad(phys.theta_deg);
  const double ph = deg2rad(phys.phi_deg);
  Eigen::Matrix2d jac;  // d(theta, phi) / d(mu, nu)
  jac << 1.0 / (kPi * std::cos(th) * std::cos(ph)), std::tan(th) * std::tan(ph) / (kPi * std::cos(ph)),
      0.0, 1.0 / (kPi * std::cos(ph));
  const Eigen::Matrix2d cov_deg = rad2deg(1.0) * rad2deg(1.0) * jac * cov * jac.transpose();
  out.var_theta_deg2 = cov_deg(0, 0);
  out.var_phi_deg2 = cov_deg(1, 1);
  return out;
}

}  // namespace thzdoa
