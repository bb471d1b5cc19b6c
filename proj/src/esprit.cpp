#include "thzdoa/esprit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace thzdoa {

namespace {

// Left-Pi-real unitary matrix: Pi * conj(Q) == Q.
CMat left_pi_real(int n) {
  const int h = n / 2;
  const double s = 1.0 / std::sqrt(2.0);
  const cd j(0.0, 1.0);
  CMat q = CMat::Zero(n, n);
  for (int i = 0; i < h; ++i) {
    q(i, i) = s;
    q(i, n - h + i) = j * s;
    q(n - 1 - i, i) = s;
    q(n - 1 - i, n - h + i) = -j * s;
  }
  if (n % 2 == 1) q(h, h) = 1.0;
  return q;
}

// Rows 2..n of the n x n identity.
RMat select_last(int n) {
  RMat j = RMat::Zero(n - 1, n);
  for (int i = 0; i + 1 < n; ++i) j(i, i + 1) = 1.0;
  return j;
}

RMat rkron(const RMat& a, const RMat& b) {
  RMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

CMat ckron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

struct InvariancePair {
  RMat k1;
  RMat k2;
};

// Real-valued invariance equations tan(angle/2) K1 e = K2 e.
InvariancePair invariance(const CMat& q_sub, const RMat& select, const CMat& q_full) {
  const CMat g = q_sub.adjoint() * select.cast<cd>() * q_full;
  return {g.real(), g.imag()};
}

double solve_half_tangent(const InvariancePair& inv, const RVec& e, const char* axis) {
  const RVec a = inv.k1 * e;
  const RVec b = inv.k2 * e;
  const double denom = a.squaredNorm();
  if (!(denom > 1e-14 * std::max(1.0, b.squaredNorm())) || !std::isfinite(denom))
    throw EspritError(EspritError::Kind::invariance_failed,
                      std::string("invariance solve failed along ") + axis);
  return 2.0 * std::atan(a.dot(b) / denom);
}

}  // namespace

SnapshotMatrix::SnapshotMatrix(CMat d, UpaGeometry g) : data(std::move(d)), virtual_geom(g) {
  if (data.rows() != virtual_geom.total())
    throw std::invalid_argument("snapshot rows must equal i_h * i_v");
  if (data.cols() < 1) throw std::invalid_argument("snapshot matrix needs at least one column");
  if (!data.allFinite()) throw std::invalid_argument("snapshot matrix has non-finite entries");
}

SnapshotMatrix derotate_pilots(const CMat& y, std::span<const cd> pilots, UpaGeometry virtual_geom) {
  if (static_cast<Eigen::Index>(pilots.size()) != y.cols())
    throw std::invalid_argument("derotate_pilots: one pilot per column required");
  CMat out = y;
  for (Eigen::Index k = 0; k < y.cols(); ++k) {
    const cd s = pilots[static_cast<std::size_t>(k)];
    const double mag = std::abs(s);
    if (mag == 0.0) throw std::invalid_argument("derotate_pilots: zero-modulus pilot");
    if (std::abs(mag - 1.0) > 1e-9) throw std::invalid_argument("derotate_pilots: pilot not unit modulus");
    out.col(k) *= std::conj(s);
  }
  return {std::move(out), virtual_geom};
}

CVec virtual_steering(VirtualAngles v, int i_h, int i_v) { return steering_upa(v, UpaGeometry(i_h, i_v)); }

EspritResult tdu_esprit(const SnapshotMatrix& s, const EspritOptions& opts) {
  const int ih = s.virtual_geom.n_h();
  const int iv = s.virtual_geom.n_v();
  if (ih < 2 || iv < 2) throw std::invalid_argument("tdu_esprit: virtual array must be at least 2x2");
  const int m = ih * iv;

  const CMat r = s.data * s.data.adjoint();
  // Forward-backward average: R + Pi conj(R) Pi.
  const CMat r_fb = r + r.conjugate().reverse();
  const CMat q_full = ckron(left_pi_real(iv), left_pi_real(ih));
  const RMat r_real = (q_full.adjoint() * r_fb * q_full).real();

  Eigen::SelfAdjointEigenSolver<RMat> eig(r_real);
  if (eig.info() != Eigen::Success)
    throw EspritError(EspritError::Kind::rank_deficient, "eigendecomposition failed");
  const RVec& lambda = eig.eigenvalues();  // ascending
  const double top = lambda[m - 1];
  const double floor = m > 1 ? lambda.head(m - 1).sum() / (m - 1) : 0.0;
  const double ratio = floor > 0.0 ? top / floor : std::numeric_limits<double>::infinity();
  if (!(top > 0.0) || !std::isfinite(top) || !(top > opts.min_eigen_ratio * floor))
    throw EspritError(EspritError::Kind::rank_deficient, "rank-deficient subspace");
  const RVec e = eig.eigenvectors().col(m - 1);

  const RMat id_h = RMat::Identity(ih, ih);
  const RMat id_v = RMat::Identity(iv, iv);
  const auto inv_mu = invariance(ckron(left_pi_real(iv), left_pi_real(ih - 1)),
                                 rkron(id_v, select_last(ih)), q_full);
  const auto inv_nu = invariance(ckron(left_pi_real(iv - 1), left_pi_real(ih)),
                                 rkron(select_last(iv), id_h), q_full);

  EspritResult out;
  out.angles = {solve_half_tangent(inv_mu, e, "mu"), solve_half_tangent(inv_nu, e, "nu")};
  const CVec a = virtual_steering(out.angles, ih, iv);
  out.gamma = a.dot(s.data.rowwise().sum()) / (static_cast<double>(m) * s.data.cols());
  out.eigen_ratio = ratio;
  return out;
}

}  // namespace thzdoa
