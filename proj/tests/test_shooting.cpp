#include <doctest.h>

#include <centrifugal/errors.hpp>
#include <centrifugal/resonance.hpp>
#include <centrifugal/shooting.hpp>

#include <cmath>

#include "oracle.hpp"

using namespace centrifugal;
using cd = std::complex<double>;

TEST_CASE("grid construction and validation") {
  const ShootingGrid g = ShootingGrid::for_problem(10.0, 10.0);
  CHECK(g.z_min <= -(10.0 + 3.0 * std::sqrt(10.0)));
  CHECK(g.z_max >= 15.0);
  CHECK(g.step <= 1e-3);
  CHECK_NOTHROW(g.validate(10.0, 9.5));

  ShootingGrid coarse = g;
  coarse.step = 2e-3;
  CHECK_THROWS_AS(coarse.validate(10.0, 2.0), ValidationError);
  CHECK_THROWS_AS(shoot_mismatch(cd(2.0, 0.0), 10.0, coarse), ValidationError);

  ShootingGrid shallow = g;
  shallow.z_min = -3.0;
  CHECK_THROWS_AS(shallow.validate(10.0, 2.0), ValidationError);

  ShootingGrid short_out = g;
  short_out.z_max = 12.0;
  CHECK_THROWS_AS(short_out.validate(10.0, 2.0), ValidationError);
}

TEST_CASE("mismatch at and between resonances") {
  const double z0 = 10.0;
  const auto roots = solve_lambdas(z0, 8);
  const ShootingGrid g = ShootingGrid::for_problem(z0, z0);
  for (const cd& r : roots) CHECK(std::abs(shoot_mismatch(r, z0, g)) < 1e-4);
  CHECK(std::abs(shoot_mismatch(0.5 * (roots[0] + roots[1]), z0, g)) >= 0.1);
}

TEST_CASE("deep interior cut stays finite") {
  ShootingGrid g = ShootingGrid::for_problem(10.0, 10.0);
  g.z_min = -400.0;
  const ShootingResult r = shoot(cd(2.0, -1e-6), 10.0, g);
  CHECK(std::isfinite(std::abs(r.mismatch)));
  CHECK(std::isfinite(std::abs(r.interior_value)));
  CHECK(std::abs(r.mismatch) <= 1.0 + 1e-12);
}

TEST_CASE("oracle roots agree with the Airy solver") {
  for (double z0 : {4.0, 7.0, 10.0, 15.0}) {
    const OracleCheck c = compare_with_oracle(z0);
    CHECK_MESSAGE(c.passed, "z0 = " << z0);
    CHECK(c.solver_count == c.oracle_count);
    CHECK(c.worst_real_rel < 1e-4);
    CHECK(c.worst_imag_rel < 1e-2);
  }
  CHECK(compare_with_oracle(4.0).oracle_count == 2);
}

TEST_CASE("halving the grid step leaves the roots in place") {
  for (double z0 : {4.0, 10.0}) {
    const auto a = oracle_resonances(z0, 2, ShootingGrid::for_problem(z0, z0, 1e-3));
    const auto b = oracle_resonances(z0, 2, ShootingGrid::for_problem(z0, z0, 5e-4));
    REQUIRE(a.size() == 2);
    REQUIRE(b.size() == 2);
    for (int i = 0; i < 2; ++i) {
      CHECK(std::abs(a[i].lambda - b[i].lambda) < 1e-6);
      // Fourth-order steps: at this resolution the change is at rounding level.
      CHECK(std::abs(a[i].lambda - b[i].lambda) < 1e-10 * std::abs(a[i].lambda));
    }
  }
}

TEST_CASE("oracle approaches the Airy zero as the barrier grows") {
  const double a1 = oracle::ai_zero(2.0, 2.6);
  OracleOptions opt;
  opt.scan_step = 0.1;
  double prev = INFINITY;
  for (double z0 : {30.0, 100.0}) {
    const auto roots = oracle_resonances(z0, 1, ShootingGrid::for_problem(z0, z0), opt);
    REQUIRE(roots.size() == 1);
    REQUIRE(roots[0].converged);
    const double err = std::abs(roots[0].lambda.real() - a1);
    CHECK(err < prev);
    CHECK(err < 1.2 / std::sqrt(z0));
    prev = err;
  }
}

TEST_CASE("non-convergence is reported per index") {
  OracleOptions opt;
  opt.max_iterations = 1;
  opt.tolerance = 1e-30;
  const auto roots = oracle_resonances(10.0, 3, ShootingGrid::for_problem(10.0, 10.0), opt);
  REQUIRE(!roots.empty());
  for (const OracleRoot& r : roots) {
    CHECK_FALSE(r.converged);
    CHECK(r.error.find("n=" + std::to_string(r.index_n)) != std::string::npos);
  }
}
