#pragma once

#include <span>
#include <stdexcept>

#include "thzdoa/geometry.hpp"

namespace thzdoa {

/// I x K_l observations of an i_h x i_v virtual array; rows in geometry index
/// order, one column per (pilot de-rotated) subcarrier snapshot.
struct SnapshotMatrix {
  CMat data;
  UpaGeometry virtual_geom;

  SnapshotMatrix(CMat d, UpaGeometry g);
};

class EspritError : public std::runtime_error {
 public:
  enum class Kind { rank_deficient, invariance_failed };
  EspritError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct EspritOptions {
  /// The dominant eigenvalue must exceed this multiple of the mean of the others.
  double min_eigen_ratio = 1.0;
};

struct EspritResult {
  VirtualAngles angles;
  cd gamma;             // least-squares amplitude along the recovered steering vector
  double eigen_ratio;   // dominant / mean(remaining) eigenvalue
};

/// Multiplies column k by conj(pilots[k]). Pilots must be unit modulus.
SnapshotMatrix derotate_pilots(const CMat& y, std::span<const cd> pilots, UpaGeometry virtual_geom);

CVec virtual_steering(VirtualAngles v, int i_h, int i_v);

/// Single-source 2-D unitary ESPRIT with forward-backward averaging.
EspritResult tdu_esprit(const SnapshotMatrix& s, const EspritOptions& opts = {});

}  // namespace thzdoa
