#include "thzdoa/channel.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

namespace thzdoa {

namespace {

void check_arrays(const ArrayPair& arrays, const LinkCompensation& comp) {
  comp.uav.validate(arrays.uav);
  comp.sat.validate(arrays.sat);
}

cd link_coefficient(const LinkState& link, int k, int symbol, const SubcarrierGrid& grid,
                    bool doppler_compensated) {
  if (symbol < 1) throw std::out_of_range("OFDM symbol index must be >= 1");
  const double psi = doppler_compensated ? link.doppler_hz - link.doppler_comp_hz : link.doppler_hz;
  const double doppler_phase = 2.0 * kPi * psi * (symbol - 1) * grid.symbol_duration();
  const double delay_phase = -2.0 * kPi * grid.baseband_offset_hz(k) * link.path_delay_s;
  return std::sqrt(link.large_scale_gain) * link.alpha * expj(doppler_phase + delay_phase);
}

KronVector side_response(VirtualAngles truth, const UpaGeometry& geom,
                         const CompensationPlan& plan, double xi) {
  KronVector v = hadamard(steering_upa_factors(truth, geom), squint_upa_factors(truth, geom, xi));
  return hadamard(v, gttdu_factors(plan, geom, xi));
}

void check_request(const ObservationRequest& req) {
  if (req.subcarriers.size() != req.pilots.size())
    throw std::invalid_argument("one pilot per subcarrier required");
  if (req.beams.combiners.empty()) throw std::invalid_argument("empty combiner schedule");
  if (!(req.noise_sigma >= 0.0) || !(req.tx_power >= 0.0))
    throw std::invalid_argument("noise sigma and transmit power must be non-negative");
}

FactoredChannel link_factors(const LinkState& link, int k, int symbol, const SubcarrierGrid& grid,
                             const ArrayPair& arrays, const LinkCompensation& comp,
                             bool doppler_compensated, LinkDirection dir) {
  check_arrays(arrays, comp);
  const double xi = grid.xi(k);
  KronVector uav = side_response(link.uav_true, arrays.uav, comp.uav, xi);
  KronVector sat = side_response(link.sat_true, arrays.sat, comp.sat, xi);
  const cd coeff = link_coefficient(link, k, symbol, grid, doppler_compensated);
  if (dir == LinkDirection::downlink) return {coeff, std::move(uav), std::move(sat)};
  return {coeff, std::move(sat), std::move(uav)};
}

CMat synthesize(const ObservationRequest& req, std::uint64_t seed, LinkDirection dir) {
  check_request(req);
  const auto rows = static_cast<Eigen::Index>(req.beams.combiners.size());
  const auto cols = static_cast<Eigen::Index>(req.subcarriers.size());
  CMat y(rows, cols);
  const double amp = std::sqrt(req.tx_power);
  for (Eigen::Index c = 0; c < cols; ++c) {
    const int k = req.subcarriers[static_cast<std::size_t>(c)];
    // Array responses do not depend on the symbol index; only the coefficient does.
    const FactoredChannel h = link_factors(req.link, k, 1, req.grid, req.arrays, req.compensation,
                                           req.doppler_compensated, dir);
    const cd tx_gain = dot(h.tx, req.beams.precoder);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const cd coeff = link_coefficient(req.link, k, static_cast<int>(r) + 1, req.grid,
                                        req.doppler_compensated);
      const cd rx_gain = dot(req.beams.combiners[static_cast<std::size_t>(r)], h.rx);
      y(r, c) = amp * coeff * rx_gain * tx_gain * req.pilots[static_cast<std::size_t>(c)];
    }
  }
  if (req.noise_sigma > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, req.noise_sigma / std::sqrt(2.0));
    for (Eigen::Index c = 0; c < cols; ++c)
      for (Eigen::Index r = 0; r < rows; ++r) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        y(r, c) += cd(re, im);
      }
  }
  return y;
}

}  // namespace

CMat FactoredChannel::dense() const {
  return coeff * rx.dense() * tx.dense().adjoint();
}

FactoredChannel dl_channel_factors(const LinkState& link, int k, int m, const SubcarrierGrid& grid,
                                   const ArrayPair& arrays, const LinkCompensation& comp,
                                   bool doppler_compensated) {
  return link_factors(link, k, m, grid, arrays, comp, doppler_compensated, LinkDirection::downlink);
}

FactoredChannel ul_channel_factors(const LinkState& link, int k, int n, const SubcarrierGrid& grid,
                                   const ArrayPair& arrays, const LinkCompensation& comp,
                                   bool doppler_compensated) {
  return link_factors(link, k, n, grid, arrays, comp, doppler_compensated, LinkDirection::uplink);
}

cd apply_beamformers(const KronVector& q, const KronVector& p, const FactoredChannel& h) {
  return h.coeff * dot(q, h.rx) * dot(h.tx, p);
}

cd apply_beamformers(const CVec& q, const CVec& p, const FactoredChannel& h) {
  if (q.size() != h.rx.size() || p.size() != h.tx.size())
    throw std::invalid_argument("apply_beamformers: dimension mismatch");
  return h.coeff * q.dot(h.rx.dense()) * h.tx.dense().dot(p);
}

std::vector<int> allocate_subcarriers(int num_subcarriers, int num_uavs, int l) {
  if (num_uavs < 1 || num_subcarriers < 1)
    throw std::invalid_argument("allocate_subcarriers: K and L must be positive");
  if (num_subcarriers % num_uavs != 0)
    throw std::invalid_argument("allocate_subcarriers: L must divide K");
  if (l < 1 || l > num_uavs) throw std::out_of_range("allocate_subcarriers: UAV index out of range");
  std::vector<int> comb;
  comb.reserve(static_cast<std::size_t>(num_subcarriers / num_uavs));
  for (int k = l; k <= num_subcarriers; k += num_uavs) comb.push_back(k);
  return comb;
}

std::vector<cd> qpsk_pilots(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> quadrant(0, 3);
  std::vector<cd> s(n);
  for (auto& x : s) x = expj(kPi / 4.0 + quadrant(rng) * kPi / 2.0);
  return s;
}

CMat synthesize_dl_observation(const ObservationRequest& req, std::uint64_t seed) {
  return synthesize(req, seed, LinkDirection::downlink);
}

CMat synthesize_ul_observation(const ObservationRequest& req, std::uint64_t seed) {
  return synthesize(req, seed, LinkDirection::uplink);
}

}  // namespace thzdoa
