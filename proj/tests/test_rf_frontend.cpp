#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "thzdoa/rf_frontend.hpp"

using namespace thzdoa;

TEST_CASE("gttdu none, ideal and 1x1 grouping") {
  const UpaGeometry g(6, 4);
  const VirtualAngles rough{0.8, -0.4};
  CHECK((gttdu_vector(CompensationPlan::none(), g, 0.004) - CVec::Ones(24)).norm() == 0.0);
  const CVec ideal = gttdu_vector(CompensationPlan::ideal(rough), g, 0.004);
  CHECK((ideal - squint_upa(rough, g, 0.004).conjugate()).norm() < 1e-15);
  const CVec grouped = gttdu_vector(CompensationPlan::grouped(rough, 1, 1), g, 0.004);
  for (int i = 0; i < 24; ++i) CHECK(std::abs(grouped[i] - ideal[i]) < 1e-15);
}

TEST_CASE("gttdu 2x2 groups referenced to the group centre") {
  const UpaGeometry g(4, 4);
  const CVec c = gttdu_vector(CompensationPlan::grouped({0.8, 0.0}, 2, 2), g, 0.005);
  const cd first = std::polar(1.0, -0.004 * 0.5);
  CHECK(std::abs(c[0] - first) < 1e-15);
  CHECK(std::abs(c[1] - first) < 1e-15);
  CHECK(std::abs(c[2] - std::polar(1.0, -0.004 * 2.5)) < 1e-15);
  CHECK(std::abs(c[g.index(1, 1)] - first) < 1e-15);
}

TEST_CASE("gttdu rejects groups that do not tile") {
  const UpaGeometry g(6, 4);
  CHECK_THROWS_AS(gttdu_vector(CompensationPlan::grouped({}, 4, 2), g, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(gttdu_vector(CompensationPlan::grouped({}, 2, 8), g, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(gttdu_vector(CompensationPlan::grouped({}, 0, 2), g, 0.0), std::invalid_argument);
  CompensationPlan bad = CompensationPlan::ideal({});
  bad.group_h = 2;
  CHECK_THROWS_AS(bad.validate(g), std::invalid_argument);
}

TEST_CASE("property: gttdu residual phase bound") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ang(-2.5, 2.5);
  std::uniform_real_distribution<double> xi(-0.005, 0.005);
  const int groups[] = {1, 2, 3, 6};
  for (int t = 0; t < 100; ++t) {
    const UpaGeometry g(12, 6);
    const int gh = groups[t % 4];
    const int gv = groups[(t / 4) % 3];
    const VirtualAngles rough{ang(rng), ang(rng)};
    const double x = xi(rng);
    const CVec c = gttdu_vector(CompensationPlan::grouped(rough, gh, gv), g, x);
    const CVec r = c.cwiseProduct(squint_upa(rough, g, x));
    const double bound = std::abs(x) * (std::abs(rough.mu) * (gh - 1) / 2.0 + std::abs(rough.nu) * (gv - 1) / 2.0);
    for (int i = 0; i < g.total(); ++i) {
      CHECK(std::abs(std::abs(c[i]) - 1.0) < 1e-12);
      CHECK(std::abs(std::arg(r[i])) <= bound + 1e-12);
    }
  }
}

TEST_CASE("subarray_index_set on the 5x5 example") {
  const SubarrayPattern pat(UpaGeometry(5, 5), 2, 2);
  CHECK(pat.count() == 4);
  CHECK(pat.sub_h() == 4);
  CHECK(pat.sub_total() == 16);
  const auto m1 = subarray_index_set(pat, 1);
  const std::vector<int> expect1 = {1, 2, 3, 4, 6, 7, 8, 9, 11, 12, 13, 14, 16, 17, 18, 19};
  REQUIRE(m1.size() == expect1.size());
  for (std::size_t i = 0; i < m1.size(); ++i) CHECK(m1[i] + 1 == expect1[i]);
  const auto m2 = subarray_index_set(pat, 2);
  for (std::size_t i = 0; i < m1.size(); ++i) CHECK(m2[i] == m1[i] + 1);
  const auto m3 = subarray_index_set(pat, 3);
  for (std::size_t i = 0; i < m1.size(); ++i) CHECK(m3[i] == m1[i] + 5);
  CHECK_THROWS_AS(subarray_index_set(pat, 0), std::out_of_range);
  CHECK_THROWS_AS(subarray_index_set(pat, 5), std::out_of_range);

  const SubarrayPattern full(UpaGeometry(3, 2), 1, 1);
  CHECK(full.count() == 1);
  CHECK(subarray_index_set(full, 1).size() == 6);
  CHECK_THROWS_AS(SubarrayPattern(UpaGeometry(3, 3), 4, 1), std::invalid_argument);
}

TEST_CASE("satellite precoder support and norm") {
  const UpaGeometry sat(8, 16);
  const auto tiles = tile_assignments(sat, UpaGeometry(8, 8));
  REQUIRE(tiles.size() == 2);
  const VirtualAngles rough{0.3, -0.6};
  std::set<int> seen;
  for (const auto& tile : tiles) {
    const CVec p = build_sat_precoder(rough, sat, tile).dense();
    CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-14));
    const CVec a = steering_upa(rough, sat);
    for (int q = 0; q < sat.n_v(); ++q)
      for (int h = 0; h < sat.n_h(); ++h) {
        const int n = sat.index(h, q);
        const bool inside = q >= tile.v0 && q < tile.v0 + tile.size_v;
        if (inside) {
          CHECK(std::abs(p[n] - a[n] / 8.0) < 1e-14);
          CHECK(seen.insert(n).second);
        } else {
          CHECK(p[n] == cd(0, 0));
        }
      }
  }
  CHECK(static_cast<int>(seen.size()) == sat.total());
  const CVec broad = build_sat_precoder({0, 0}, sat, {0, 0, 8, 16}).dense();
  CHECK((broad - CVec::Constant(128, 1.0 / std::sqrt(128.0))).norm() < 1e-14);
  CHECK_THROWS_AS(validate_assignments({{0, 0, 4, 4}, {2, 2, 4, 4}}, sat), std::invalid_argument);
  CHECK_THROWS_AS(validate_assignments({{6, 0, 4, 4}}, sat), std::invalid_argument);
}

TEST_CASE("property: combiner shift-phase identity") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  const UpaGeometry parent(9, 7);
  const SubarrayPattern pat(parent, 3, 4);
  for (int t = 0; t < 50; ++t) {
    const VirtualAngles rough{ang(rng), ang(rng)};
    const VirtualAngles v{ang(rng), ang(rng)};
    const auto q = build_uav_combiners(rough, pat);
    REQUIRE(static_cast<int>(q.size()) == pat.count());
    const CVec a = steering_upa(v, parent);
    const cd base = q[0].dense().dot(a);
    for (int m = 1; m <= pat.count(); ++m) {
      const CVec qm = q[static_cast<std::size_t>(m - 1)].dense();
      CHECK(qm.norm() == doctest::Approx(1.0).epsilon(1e-12));
      const auto [dh, dv] = pat.shift(m);
      CHECK(std::abs(qm.dot(a) - base * std::polar(1.0, dh * v.mu + dv * v.nu)) < 1e-12);
      const auto idx = subarray_index_set(pat, m);
      int nonzero = 0;
      for (int i = 0; i < parent.total(); ++i) nonzero += qm[i] != cd(0, 0);
      CHECK(nonzero == static_cast<int>(idx.size()));
      for (int i : idx) CHECK(qm[i] != cd(0, 0));
    }
  }
}

TEST_CASE("matched combiner and satellite combiners inside a tile") {
  const UpaGeometry parent(6, 6);
  const SubarrayPattern pat(parent, 2, 3);
  const VirtualAngles v{0.4, 1.1};
  const auto q = build_uav_combiners(v, pat);
  CHECK(std::abs(q[0].dense().dot(steering_upa(v, parent)) - std::sqrt(double(pat.sub_total()))) < 1e-12);

  const UpaGeometry sat(6, 12);
  const ArrayBlock tile{0, 6, 6, 6};
  const SubarrayPattern spat(sat, tile, 2, 2);
  const auto sq = build_sat_combiners(v, spat);
  for (int m = 1; m <= spat.count(); ++m)
    for (int i : subarray_index_set(spat, m)) CHECK(i >= 36);
  const cd base = sq[0].dense().dot(steering_upa(v, sat));
  CHECK(std::abs(base) == doctest::Approx(std::sqrt(25.0)).epsilon(1e-12));
}

TEST_CASE("UL precoder") {
  const UpaGeometry g(8, 8);
  const VirtualAngles v{0.5, -0.2};
  const CVec f = build_uav_ul_precoder(v, g).dense();
  CHECK(f.norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(f.dot(steering_upa(v, g))) == doctest::Approx(8.0).epsilon(1e-13));
  const CVec b = build_uav_ul_precoder({0, 0}, g).dense();
  CHECK((b - CVec::Constant(64, 1.0 / 8.0)).norm() < 1e-14);
  // One degree of azimuth error: gain equals the inner product with the true steering vector.
  const VirtualAngles truth = physical_to_virtual(20.0, 5.0);
  const VirtualAngles off = physical_to_virtual(21.0, 5.0);
  const CVec fo = build_uav_ul_precoder(off, g).dense();
  const CVec at = steering_upa(truth, g);
  cd direct = 0;
  for (int i = 0; i < 64; ++i) direct += std::conj(fo[i]) * at[i];
  CHECK(std::abs(fo.dot(at) - direct) < 1e-12);
  CHECK(std::abs(direct) < 8.0);
}
