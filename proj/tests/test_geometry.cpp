#include <cmath>
#include <random>

#include "doctest.h"
#include "thzdoa/geometry.hpp"

using namespace thzdoa;

namespace {

cd element(double mu, double nu, int p, int q) { return std::polar(1.0, mu * p + nu * q); }

}  // namespace

TEST_CASE("UpaGeometry index map and validation") {
  const UpaGeometry g(4, 3);
  CHECK(g.total() == 12);
  CHECK(g.index(0, 0) == 0);
  CHECK(g.index(3, 0) == 3);
  CHECK(g.index(0, 1) == 4);
  CHECK(g.index(2, 2) == 10);
  CHECK_THROWS_AS(UpaGeometry(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(UpaGeometry(2, -1), std::invalid_argument);
}

TEST_CASE("physical_to_virtual examples") {
  auto v = physical_to_virtual(0.0, 0.0);
  CHECK(v.mu == 0.0);
  CHECK(v.nu == 0.0);
  v = physical_to_virtual(30.0, 0.0);
  CHECK(v.mu == doctest::Approx(kPi / 2).epsilon(1e-15));
  v = physical_to_virtual(60.0, 60.0);
  CHECK(v.mu == doctest::Approx(kPi * std::sqrt(3.0) / 4.0).epsilon(1e-14));
  CHECK(v.nu == doctest::Approx(kPi * std::sqrt(3.0) / 2.0).epsilon(1e-14));
  CHECK_THROWS_AS(physical_to_virtual(91.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(physical_to_virtual(0.0, -90.5), std::invalid_argument);
}

TEST_CASE("virtual_to_physical examples and errors") {
  auto p = virtual_to_physical({0.0, 0.0});
  CHECK(p.theta_deg == 0.0);
  CHECK(p.phi_deg == 0.0);
  p = virtual_to_physical({kPi / 2, 0.0});
  CHECK(p.theta_deg == doctest::Approx(30.0).epsilon(1e-13));
  const double c10 = std::cos(deg2rad(10.0));
  p = virtual_to_physical({kPi * c10 * std::sin(deg2rad(45.0)), kPi * std::sin(deg2rad(10.0))});
  CHECK(p.theta_deg == doctest::Approx(45.0).epsilon(1e-12));
  CHECK(p.phi_deg == doctest::Approx(10.0).epsilon(1e-12));
  CHECK_THROWS_AS(virtual_to_physical({3.0, 1.5}), NonPhysicalAngles);
  CHECK_THROWS_AS(virtual_to_physical({0.0, 3.2}), NonPhysicalAngles);
}

TEST_CASE("round trip on the [-60, 60] degree range") {
  for (double th = -60.0; th <= 60.0; th += 7.5)
    for (double ph = -60.0; ph <= 60.0; ph += 7.5) {
      const auto back = virtual_to_physical(physical_to_virtual(th, ph));
      CHECK(std::abs(back.theta_deg - th) < 1e-12);
      CHECK(std::abs(back.phi_deg - ph) < 1e-12);
    }
}

TEST_CASE("clamp_to_physical projects radially") {
  const VirtualAngles inside{1.0, -2.0};
  const auto same = clamp_to_physical(inside);
  CHECK(same.mu == inside.mu);
  CHECK(same.nu == inside.nu);
  const auto c = clamp_to_physical({3.0, 4.0});
  CHECK(std::hypot(c.mu, c.nu) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(c.mu / c.nu == doctest::Approx(0.75));
  CHECK(is_physical(c));
  CHECK_NOTHROW(virtual_to_physical(c));
}

TEST_CASE("steering_1d examples") {
  const CVec a = steering_1d(0.0, 4);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(a[i] - cd(1, 0)) < 1e-15);
  const CVec b = steering_1d(kPi, 2);
  CHECK(std::abs(b[1] - cd(-1, 0)) < 1e-15);
  const CVec c = steering_1d(kPi / 2, 3);
  CHECK(std::abs(c[1] - cd(0, 1)) < 1e-15);
  CHECK(std::abs(c[2] - cd(-1, 0)) < 1e-15);
  CHECK_THROWS(steering_1d(0.1, 0));
}

TEST_CASE("steering_upa matches per-element evaluation") {
  const CVec ones = steering_upa({0, 0}, UpaGeometry(3, 3));
  CHECK(ones.size() == 9);
  CHECK((ones - CVec::Ones(9)).norm() < 1e-15);
  const CVec alt = steering_upa({kPi, 0}, UpaGeometry(2, 2));
  const cd expect[] = {1, -1, 1, -1};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(alt[i] - expect[i]) < 1e-15);
  const UpaGeometry g(4, 5);
  const CVec a = steering_upa({0.7, -0.3}, g);
  for (int q = 0; q < 5; ++q)
    for (int p = 0; p < 4; ++p) CHECK(std::abs(a[g.index(p, q)] - element(0.7, -0.3, p, q)) < 1e-14);
}

TEST_CASE("squint vectors") {
  CHECK((squint_1d(1.3, 7, 0.0) - CVec::Ones(7)).norm() == 0.0);
  const CVec s = squint_1d(kPi, 2, 0.005);
  CHECK(std::abs(s[1] - std::polar(1.0, 0.005 * kPi)) < 1e-15);
  const CVec t = squint_1d(0.9, 8, -0.005);
  for (int p = 0; p < 8; ++p) CHECK(std::abs(t[p] - std::polar(1.0, -0.0045 * p)) < 1e-15);

  const CVec u = squint_upa({0.7, -0.3}, UpaGeometry(2, 2), 0.01);
  const cd expect[] = {1, std::polar(1.0, 0.007), std::polar(1.0, -0.003), std::polar(1.0, 0.004)};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(u[i] - expect[i]) < 1e-15);
  CHECK((squint_upa({0, 0}, UpaGeometry(5, 3), 0.004) - CVec::Ones(15)).norm() == 0.0);
  CHECK((squint_upa({2.0, 1.0}, UpaGeometry(5, 3), 0.0) - CVec::Ones(15)).norm() == 0.0);
}

TEST_CASE("xi_of examples and grid invariants") {
  const SubcarrierGrid table(2048, 0.1e12, 1e9, 128);
  CHECK(xi_of(1, table) == doctest::Approx(-0.005).epsilon(1e-15));
  CHECK(xi_of(2048, table) == doctest::Approx(0.0049951171875).epsilon(1e-14));
  CHECK(xi_of(1025, table) == 0.0);
  CHECK_THROWS_AS(xi_of(0, table), std::out_of_range);
  CHECK_THROWS_AS(xi_of(2049, table), std::out_of_range);
  CHECK(table.symbol_duration() == doctest::Approx(2176e-9));
  double prev = -1.0;
  for (int k = 1; k <= 2048; ++k) {
    const double xi = table.xi(k);
    CHECK(xi > prev);
    CHECK(std::abs(xi) < 1e9 / (2 * 0.1e12) + 1e-18);
    prev = xi;
  }
}

TEST_CASE("property: Kronecker consistency, unit modulus, conjugate symmetry") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  std::uniform_int_distribution<int> dim(1, 9);
  std::uniform_real_distribution<double> xi(-0.005, 0.005);
  for (int trial = 0; trial < 200; ++trial) {
    const VirtualAngles v{ang(rng), ang(rng)};
    const UpaGeometry g(dim(rng), dim(rng));
    const CVec a = steering_upa(v, g);
    const CVec ah = steering_1d(v.mu, g.n_h());
    const CVec av = steering_1d(v.nu, g.n_v());
    const double x = xi(rng);
    const CVec s = squint_upa(v, g, x);
    for (int q = 0; q < g.n_v(); ++q)
      for (int p = 0; p < g.n_h(); ++p) {
        const int n = g.index(p, q);
        CHECK(std::abs(a[n] - av[q] * ah[p]) < 1e-12);
        CHECK(std::abs(std::abs(a[n]) - 1.0) < 1e-12);
        CHECK(std::abs(std::abs(s[n]) - 1.0) < 1e-12);
      }
    CHECK((steering_1d(-v.mu, g.n_h()) - ah.conjugate()).norm() < 1e-12);
    CHECK((squint_1d(-v.mu, g.n_h(), x) - squint_1d(v.mu, g.n_h(), x).conjugate()).norm() < 1e-12);
    CHECK((squint_1d(v.mu, g.n_h(), -x) - squint_1d(v.mu, g.n_h(), x).conjugate()).norm() < 1e-12);
    const KronVector f = steering_upa_factors(v, g);
    CHECK((f.dense() - a).norm() < 1e-12);
    CHECK(f.norm() == doctest::Approx(std::sqrt(static_cast<double>(g.total()))));
  }
}

TEST_CASE("KronVector dot equals dense inner product") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  auto rnd = [&](int len) {
    CVec v(len);
    for (auto& x : v) x = cd(n(rng), n(rng));
    return v;
  };
  const KronVector a{rnd(3), rnd(4)};
  const KronVector b{rnd(3), rnd(4)};
  CHECK(std::abs(dot(a, b) - a.dense().dot(b.dense())) < 1e-12);
  CHECK((hadamard(a, b).dense() - a.dense().cwiseProduct(b.dense())).norm() < 1e-12);
  CHECK((conjugate(a).dense() - a.dense().conjugate()).norm() < 1e-12);
  CHECK((kron(a.vertical, a.horizontal) - a.dense()).norm() < 1e-12);
}
