#include <doctest.h>

#include <centrifugal/airy.hpp>
#include <centrifugal/errors.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oracle.hpp"

using namespace centrifugal;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

// Error of f measured against the local size of the function, so that
// points near a zero are judged on |f'| instead.
double rel_err(cd got, cd want, cd want_prime, cd z) {
  const double size = std::abs(want) + std::abs(want_prime) / std::sqrt(1.0 + std::abs(z));
  return std::abs(got - want) / size;
}

double rel_err_prime(cd got, cd want, cd want_value, cd z) {
  const double size = std::abs(want) + std::abs(want_value) * std::sqrt(1.0 + std::abs(z));
  return std::abs(got - want) / size;
}

std::vector<cd> polar_grid(const std::vector<double>& radii, int angles) {
  std::vector<cd> pts;
  for (double r : radii) {
    for (int k = 0; k < angles; ++k) pts.push_back(std::polar(r, 2 * kPi * k / angles));
    pts.push_back(cd(-r, 0.0));
    pts.push_back(cd(r, 0.0));
  }
  return pts;
}

}  // namespace

TEST_CASE("values at the origin match the extended-precision series") {
  const AiryQuad<double> q = airy_eval(cd(0, 0));
  const oracle::Airy o = oracle::series(cd(0, 0));
  CHECK(std::abs(q.ai - oracle::to_double(o.ai)) < 1e-12);
  CHECK(std::abs(q.bi - oracle::to_double(o.bi)) < 1e-12);
  CHECK(std::abs(q.ai_prime - oracle::to_double(o.ai_prime)) < 1e-12);
  CHECK(std::abs(q.bi_prime - oracle::to_double(o.bi_prime)) < 1e-12);

  // Frozen oracle output.
  CHECK(q.ai.real() == doctest::Approx(0.355028053887817).epsilon(1e-14));
  CHECK(q.ai_prime.real() == doctest::Approx(-0.258819403792807).epsilon(1e-14));
  CHECK(q.bi.real() == doctest::Approx(0.614926627446001).epsilon(1e-14));
  CHECK(q.bi_prime.real() == doctest::Approx(0.448288357353826).epsilon(1e-14));

  // Closed forms through the gamma function.
  CHECK(q.ai.real() == doctest::Approx(std::pow(3.0, -2.0 / 3) / std::tgamma(2.0 / 3)).epsilon(1e-14));
  CHECK(q.bi.real() == doctest::Approx(std::pow(3.0, -1.0 / 6) / std::tgamma(2.0 / 3)).epsilon(1e-14));
}

TEST_CASE("agrees with the series oracle in every evaluation regime") {
  const auto pts = polar_grid({0.5, 2.0, 3.2, 3.3, 4.0, 5.5, 7.0, 8.4, 8.6, 9.0, 12.0, 18.0}, 24);
  double worst = 0.0;
  for (const cd z : pts) {
    const AiryQuad<double> q = airy_eval(z);
    const oracle::Airy o = oracle::series(z);
    const cd ai = oracle::to_double(o.ai), aip = oracle::to_double(o.ai_prime);
    const cd bi = oracle::to_double(o.bi), bip = oracle::to_double(o.bi_prime);
    const double e = std::max({rel_err(q.ai, ai, aip, z), rel_err_prime(q.ai_prime, aip, ai, z),
                               rel_err(q.bi, bi, bip, z), rel_err_prime(q.bi_prime, bip, bi, z)});
    worst = std::max(worst, e);
    CHECK_MESSAGE(e < 1e-12, "z = " << z);
  }
  MESSAGE("worst relative error " << worst);
}

TEST_CASE("window between the series and asymptotic radii agrees with the oracle to 1e-9") {
  for (double r = 4.0; r <= 9.0; r += 0.25) {
    for (int k = 0; k < 16; ++k) {
      const cd z = std::polar(r, 2 * kPi * k / 16 + 0.1);
      const AiryQuad<double> q = airy_eval(z);
      const oracle::Airy o = oracle::series(z);
      const cd ai = oracle::to_double(o.ai), bi = oracle::to_double(o.bi);
      CHECK(std::abs(q.ai - ai) <= 1e-9 * std::abs(ai));
      CHECK(std::abs(q.bi - bi) <= 1e-9 * std::abs(bi));
    }
  }
}

TEST_CASE("Wronskian on 1000 random points of the disc of radius 20") {
  std::mt19937_64 gen(20240611);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const cd z = std::polar(20.0 * std::sqrt(u(gen)), 2 * kPi * u(gen));
    const AiryQuad<double> q = airy_eval(z);
    const cd lhs = q.ai * q.bi_prime;
    const cd rhs = q.ai_prime * q.bi;
    // In the sectors where Ai and Bi both grow the two products are large
    // and cancel; the error is judged against their size.
    const double size = std::max(1.0 / kPi, std::abs(lhs) + std::abs(rhs));
    const double e = std::abs(lhs - rhs - 1.0 / kPi) / size;
    worst = std::max(worst, e);
    CHECK_MESSAGE(e < 1e-10, "z = " << z);
  }
  MESSAGE("worst Wronskian error " << worst);
}

TEST_CASE("Wronskian equals 1/pi outright where one solution is recessive") {
  for (double r : {1.0, 5.0, 10.0, 20.0, 25.0}) {
    for (double arg : {0.0, 0.5, -0.9, kPi}) {
      const AiryQuad<double> q = airy_eval(std::polar(r, arg));
      CHECK(std::abs(q.ai * q.bi_prime - q.ai_prime * q.bi - 1.0 / kPi) < 1e-10 / kPi);
    }
  }
}

TEST_CASE("second difference reproduces the Airy equation") {
  const double h = 1e-4;
  for (const cd z : {cd(0.7, 0.0), cd(-3.1, 0.0), cd(2.0, 1.5), cd(-1.0, -2.5), cd(4.5, 0.2)}) {
    const cd ai = airy_eval(z).ai;
    const cd d2 = (airy_eval(z + h).ai - 2.0 * ai + airy_eval(z - h).ai) / (h * h);
    CHECK(std::abs(d2 - z * ai) < 1e-6 * (std::abs(z * ai) + std::abs(airy_eval(z).ai_prime)));
  }
}

TEST_CASE("rotation identity Ai(z) + w Ai(wz) + w^2 Ai(w^2 z) = 0") {
  const cd w = std::polar(1.0, 2 * kPi / 3);
  for (const cd z : polar_grid({0.3, 1.0, 3.0, 5.0, 7.5, 10.0}, 12)) {
    const cd a0 = airy_eval(z).ai;
    const cd a1 = w * airy_eval(w * z).ai;
    const cd a2 = w * w * airy_eval(w * w * z).ai;
    CHECK(std::abs(a0 + a1 + a2) <= 1e-9 * (std::abs(a0) + std::abs(a1) + std::abs(a2)));
  }
}

TEST_CASE("first zero of Ai") {
  const double z1 = oracle::ai_zero(2.0, 2.6);
  CHECK(z1 == doctest::Approx(2.33810741046).epsilon(1e-10));
  const AiryQuad<double> q = airy_eval(cd(-z1, 0.0));
  CHECK(std::abs(q.ai) < 1e-13 * std::abs(q.ai_prime));
}

TEST_CASE("scaled form") {
  SUBCASE("exponent of Bi at 100 is the leading asymptotic one") {
    const ScaledAiryQuad<double> s = airy_eval_scaled(cd(100.0, 0.0));
    CHECK(s.bi_exponent == doctest::Approx(2.0 / 3.0 * 1000.0).epsilon(1e-3));
    CHECK(std::isfinite(std::abs(s.bi)));
  }
  SUBCASE("no scaling at the origin") {
    const ScaledAiryQuad<double> s = airy_eval_scaled(cd(0.0, 0.0));
    const AiryQuad<double> q = airy_eval(cd(0.0, 0.0));
    CHECK(s.ai_exponent == 0.0);
    CHECK(s.bi_exponent == 0.0);
    CHECK(s.ai == q.ai);
    CHECK(s.bi == q.bi);
  }
  SUBCASE("Ai(30) Bi(30) from the scaled parts") {
    const ScaledAiryQuad<double> s = airy_eval_scaled(cd(30.0, 0.0));
    const double product = (s.ai * s.bi).real() * std::exp(s.ai_exponent + s.bi_exponent);
    const oracle::Airy o = oracle::series(cd(30.0, 0.0));
    CHECK(product == doctest::Approx(static_cast<double>((o.ai * o.bi).real())).epsilon(1e-12));
    CHECK(product == doctest::Approx(1.0 / (2 * kPi * std::sqrt(30.0))).epsilon(1e-3));
  }
  SUBCASE("unscaling reproduces the plain values") {
    for (const cd z : polar_grid({0.5, 4.0, 9.0, 20.0, 60.0}, 8)) {
      const AiryQuad<double> u = airy_eval_scaled(z).unscaled();
      const AiryQuad<double> q = airy_eval(z);
      CHECK(std::abs(u.ai - q.ai) <= 1e-12 * std::abs(q.ai));
      CHECK(std::abs(u.ai_prime - q.ai_prime) <= 1e-12 * std::abs(q.ai_prime));
      CHECK(std::abs(u.bi - q.bi) <= 1e-12 * std::abs(q.bi));
      CHECK(std::abs(u.bi_prime - q.bi_prime) <= 1e-12 * std::abs(q.bi_prime));
    }
  }
  SUBCASE("finite far outside the unscaled range") {
    const ScaledAiryQuad<double> s = airy_eval_scaled(cd(-3e5, 2e5));
    CHECK(std::isfinite(std::abs(s.ai)));
    CHECK(std::isfinite(s.bi_exponent));
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(airy_eval(cd(1.0e4 + 1.0, 0.0)), DomainError);
  CHECK_THROWS_AS(airy_eval(cd(0.0, -2.0e4)), DomainError);
  CHECK_THROWS_AS(airy_eval_scaled(cd(std::nan(""), 0.0)), DomainError);
  CHECK_THROWS_AS(airy_eval_scaled(cd(INFINITY, 0.0)), DomainError);
}

TEST_CASE("other scalar types") {
  for (const cd z : {cd(1.5, 0.3), cd(-6.0, 1.0), cd(11.0, -2.0)}) {
    const oracle::Airy o = oracle::series(z);
    const auto ql = airy_eval(std::complex<long double>(z.real(), z.imag()));
    const std::complex<long double> ai(static_cast<long double>(o.ai.real()),
                                       static_cast<long double>(o.ai.imag()));
    CHECK(std::abs(ql.ai - ai) <= 1e-15L * std::abs(ai));

    const auto qf = airy_eval(std::complex<float>(static_cast<float>(z.real()), static_cast<float>(z.imag())));
    CHECK(std::abs(std::complex<double>(qf.ai) - oracle::to_double(o.ai)) <= 1e-4 * std::abs(oracle::to_double(o.ai)));
  }
}
