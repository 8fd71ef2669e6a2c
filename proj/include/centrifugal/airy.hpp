#pragma once

// Airy functions Ai, Bi and their derivatives for complex argument.
//
// Three regimes, chosen by |z|:
//   |z| <= kSeriesRadius   Maclaurin series.
//   |z| >= kAsymptoticRadius
//                          Asymptotic expansions for Ai (exponential form for
//                          |arg z| <= 2pi/3, oscillatory form beyond); Bi from
//                          Bi(z) = e^{i pi/6} Ai(w z) + e^{-i pi/6} Ai(w^2 z).
//   in between             Taylor continuation of the Airy equation y'' = z y
//                          along the ray through z, started from whichever end
//                          is stable for the function in question: Ai is
//                          recessive for |arg z| < pi/3 and is continued inward
//                          from the asymptotic circle; everything else is
//                          continued outward from the series circle.
//
// The scaled form keeps Ai = mantissa * exp(ai_exponent) with
// ai_exponent = -Re(zeta), and Bi = mantissa * exp(bi_exponent) with
// bi_exponent = |Re(zeta)|, zeta = (2/3) z^{3/2}. Exponents are real, so the
// ratio Ai/Bi is exp(ai_exponent - bi_exponent) times a mantissa ratio.

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "centrifugal/errors.hpp"

namespace centrifugal {

template <typename Real>
struct AiryQuad {
  std::complex<Real> ai;
  std::complex<Real> ai_prime;
  std::complex<Real> bi;
  std::complex<Real> bi_prime;
  std::complex<Real> at;
};

template <typename Real>
struct ScaledAiryQuad {
  std::complex<Real> ai;  // mantissas
  std::complex<Real> ai_prime;
  std::complex<Real> bi;
  std::complex<Real> bi_prime;
  Real ai_exponent = 0;
  Real bi_exponent = 0;
  std::complex<Real> at;

  AiryQuad<Real> unscaled() const {
    const Real fa = std::exp(ai_exponent);
    const Real fb = std::exp(bi_exponent);
    return {ai * fa, ai_prime * fa, bi * fb, bi_prime * fb, at};
  }
};

namespace airy_detail {

inline constexpr double kSeriesRadius = 3.25;
inline constexpr double kAsymptoticRadius = 8.5;
inline constexpr double kTaylorStep = 0.5;
inline constexpr double kUnscaledLimit = 1e4;

template <typename Real>
constexpr Real ai0() {
  return static_cast<Real>(0.355028053887817239260063186004183176L);
}
template <typename Real>
constexpr Real ai0_prime_neg() {
  return static_cast<Real>(0.258819403792806798405183560189203963L);
}

template <typename Real>
using Complex = std::complex<Real>;

// Maclaurin series: Ai = c1 f - c2 g, Bi = sqrt(3) (c1 f + c2 g).
template <typename Real>
AiryQuad<Real> series(Complex<Real> z) {
  const Real eps = std::numeric_limits<Real>::epsilon();
  const Complex<Real> z2 = z * z;
  const Complex<Real> z3 = z2 * z;

  Complex<Real> f = 1, fp = 0, g = z, gp = 1;
  Complex<Real> tf = 1;  // z^{3k}/... term of f
  Complex<Real> tg = z;  // term of g
  for (int k = 1; k < 400; ++k) {
    const Real kk = static_cast<Real>(k);
    const Complex<Real> dfp = tf * z2 / (3 * kk - 1);
    const Complex<Real> dgp = tg * z2 / (3 * kk);
    tf *= z3 / ((3 * kk - 1) * (3 * kk));
    tg *= z3 / ((3 * kk) * (3 * kk + 1));
    f += tf;
    g += tg;
    fp += dfp;
    gp += dgp;
    const Real scale = std::abs(f) + std::abs(g) + std::abs(fp) + std::abs(gp);
    if (std::abs(tf) + std::abs(tg) + std::abs(dfp) + std::abs(dgp) <= eps * scale * Real(0.25)) {
      break;
    }
  }
  const Real c1 = ai0<Real>();
  const Real c2 = ai0_prime_neg<Real>();
  const Real sqrt3 = std::numbers::sqrt3_v<Real>;
  return {c1 * f - c2 * g, c1 * fp - c2 * gp, sqrt3 * (c1 * f + c2 * g),
          sqrt3 * (c1 * fp + c2 * gp), z};
}

// Coefficients u_k, v_k of the large-argument expansions.
template <typename Real>
struct AsymptoticCoefficients {
  static constexpr int kTerms = 48;
  std::array<Real, kTerms> u{};
  std::array<Real, kTerms> v{};

  AsymptoticCoefficients() {
    u[0] = 1;
    v[0] = 1;
    for (int k = 1; k < kTerms; ++k) {
      const Real kk = static_cast<Real>(k);
      u[k] = u[k - 1] * (6 * kk - 5) * (6 * kk - 3) * (6 * kk - 1) / ((2 * kk - 1) * 216 * kk);
      v[k] = -(6 * kk + 1) / (6 * kk - 1) * u[k];
    }
  }

  static const AsymptoticCoefficients& get() {
    static const AsymptoticCoefficients table;
    return table;
  }
};

template <typename Real>
Real principal_arg(Complex<Real> z) {
  return std::arg(z);
}

template <typename Real>
Complex<Real> zeta_of(Complex<Real> z) {
  return Real(2) / Real(3) * z * std::sqrt(z);
}

template <typename Real>
struct ScaledAi {
  Complex<Real> ai;
  Complex<Real> ai_prime;
  Real exponent;
};

// Sum of sign * c_k / x^k for k = start, start + stride, ...; stops at the
// smallest term of the asymptotic series.
template <typename Real>
Complex<Real> asymptotic_sum(const std::array<Real, AsymptoticCoefficients<Real>::kTerms>& c,
                             Complex<Real> inv_x, int start, int stride, bool alternate) {
  const Real eps = std::numeric_limits<Real>::epsilon();
  Complex<Real> power = std::pow(inv_x, start);
  const Complex<Real> step_power = std::pow(inv_x, stride);
  Complex<Real> sum = 0;
  Real last = std::numeric_limits<Real>::infinity();
  Real sign = 1;
  for (int k = start; k < AsymptoticCoefficients<Real>::kTerms; k += stride) {
    const Complex<Real> term = sign * c[k] * power;
    const Real mag = std::abs(term);
    if (mag > last) break;
    sum += term;
    if (mag <= eps * std::abs(sum) * Real(0.1)) break;
    last = mag;
    power *= step_power;
    if (alternate) sign = -sign;
  }
  return sum;
}

// Ai and Ai' for |z| >= kAsymptoticRadius in scaled form.
template <typename Real>
ScaledAi<Real> asymptotic_ai(Complex<Real> z) {
  const auto& coef = AsymptoticCoefficients<Real>::get();
  const Real pi = std::numbers::pi_v<Real>;
  const Real sqrt_pi = std::sqrt(pi);
  const Complex<Real> zeta = zeta_of(z);
  const Real exponent = -zeta.real();
  const Real phase = principal_arg(z);

  if (std::abs(phase) <= 2 * pi / 3) {
    const Complex<Real> root4 = std::sqrt(std::sqrt(z));
    const Complex<Real> inv = Real(1) / zeta;
    // Ai ~ e^{-zeta} / (2 sqrt(pi) z^{1/4}) sum (-1)^k u_k zeta^{-k}
    const Complex<Real> su = asymptotic_sum(coef.u, inv, 0, 1, true);
    const Complex<Real> sv = asymptotic_sum(coef.v, inv, 0, 1, true);
    const Complex<Real> rot = std::exp(Complex<Real>(0, -zeta.imag()));
    return {rot * su / (2 * sqrt_pi * root4), -rot * root4 * sv / (2 * sqrt_pi), exponent};
  }

  // Oscillatory form in w = -z, |arg w| < pi/3.
  const Complex<Real> w = -z;
  const Complex<Real> xi = zeta_of(w);
  const Complex<Real> theta = xi - pi / 4;
  const Complex<Real> root4 = std::sqrt(std::sqrt(w));
  const Complex<Real> inv = Real(1) / xi;
  const Complex<Real> pu = asymptotic_sum(coef.u, inv, 0, 2, true);
  const Complex<Real> qu = asymptotic_sum(coef.u, inv, 1, 2, true);
  const Complex<Real> pv = asymptotic_sum(coef.v, inv, 0, 2, true);
  const Complex<Real> qv = asymptotic_sum(coef.v, inv, 1, 2, true);

  // cos/sin of theta multiplied by exp(-exponent) without overflow.
  const Complex<Real> i(0, 1);
  const Complex<Real> ep = std::exp(i * theta - exponent);
  const Complex<Real> em = std::exp(-i * theta - exponent);
  const Complex<Real> cos_s = (ep + em) / Real(2);
  const Complex<Real> sin_s = (ep - em) / (Real(2) * i);
  return {(cos_s * pu + sin_s * qu) / (sqrt_pi * root4),
          root4 * (sin_s * pv - cos_s * qv) / sqrt_pi, exponent};
}

// Scaled Bi, Bi' for |z| >= kAsymptoticRadius via the connection formula.
// Deep inside |arg z| < pi/3 the recessive part of Bi is below rounding and
// the dominant expansion is used directly; the connection formula would
// cancel away the imaginary part of Bi just off the real axis.
template <typename Real>
void asymptotic_bi(Complex<Real> z, Complex<Real>& bi, Complex<Real>& bi_prime, Real& exponent) {
  const Real pi = std::numbers::pi_v<Real>;
  const Complex<Real> zeta = zeta_of(z);
  const Real recessive_cut = -std::log(std::numeric_limits<Real>::epsilon()) / 2 + 1;
  if (std::abs(principal_arg(z)) < pi / 3 && zeta.real() >= recessive_cut) {
    const auto& coef = AsymptoticCoefficients<Real>::get();
    const Real sqrt_pi = std::sqrt(pi);
    const Complex<Real> root4 = std::sqrt(std::sqrt(z));
    const Complex<Real> inv = Real(1) / zeta;
    const Complex<Real> su = asymptotic_sum(coef.u, inv, 0, 1, false);
    const Complex<Real> sv = asymptotic_sum(coef.v, inv, 0, 1, false);
    const Complex<Real> rot = std::exp(Complex<Real>(0, zeta.imag()));
    exponent = zeta.real();
    bi = rot * su / (sqrt_pi * root4);
    bi_prime = rot * root4 * sv / sqrt_pi;
    return;
  }

  const Complex<Real> omega = std::polar(Real(1), 2 * pi / 3);
  const Complex<Real> c_plus = std::polar(Real(1), pi / 6);
  const Complex<Real> c_minus = std::conj(c_plus);
  const ScaledAi<Real> a = asymptotic_ai(omega * z);
  const ScaledAi<Real> b = asymptotic_ai(std::conj(omega) * z);
  exponent = std::max(a.exponent, b.exponent);
  const Real fa = std::exp(a.exponent - exponent);
  const Real fb = std::exp(b.exponent - exponent);
  bi = c_plus * a.ai * fa + c_minus * b.ai * fb;
  bi_prime = c_plus * omega * a.ai_prime * fa + c_minus * std::conj(omega) * b.ai_prime * fb;
}

// Advance a solution (y, y') of y'' = z y from `from` to `from + h` by its
// Taylor expansion about `from`.
template <typename Real>
void taylor_step(Complex<Real> from, Complex<Real> h, Complex<Real>& y, Complex<Real>& yp) {
  const Real eps = std::numeric_limits<Real>::epsilon();
  // a_{k+2} = (from a_k + a_{k-1}) / ((k+2)(k+1))
  Complex<Real> a_km1 = y;               // a_0
  Complex<Real> a_k = yp;                // a_1
  Complex<Real> a_kp1 = from * y / Real(2);  // a_2
  Complex<Real> hp = h;                  // h^1
  Complex<Real> sum = y + yp * h;
  Complex<Real> dsum = yp;
  int quiet = 0;
  for (int k = 2; k < 120; ++k) {
    // a_kp1 holds a_k here
    const Complex<Real> coeff = a_kp1;
    const Complex<Real> dterm = static_cast<Real>(k) * coeff * hp;  // k a_k h^{k-1}
    hp *= h;
    const Complex<Real> term = coeff * hp;
    sum += term;
    dsum += dterm;
    const Complex<Real> next = (from * a_k + a_km1) / static_cast<Real>((k + 1) * k);
    a_km1 = a_k;
    a_k = coeff;
    a_kp1 = next;
    if (std::abs(term) <= eps * std::abs(sum) * Real(0.1) &&
        std::abs(dterm) <= eps * std::abs(dsum) * Real(0.1)) {
      if (++quiet >= 3) break;
    } else {
      quiet = 0;
    }
  }
  y = sum;
  yp = dsum;
}

template <typename Real>
void continue_along_ray(Complex<Real> start, Complex<Real> end, Complex<Real>* y, Complex<Real>* yp,
                        int count) {
  const Complex<Real> delta = end - start;
  const int steps =
      std::max(1, static_cast<int>(std::ceil(std::abs(delta) / Real(kTaylorStep))));
  const Complex<Real> h = delta / static_cast<Real>(steps);
  Complex<Real> at = start;
  for (int s = 0; s < steps; ++s) {
    for (int i = 0; i < count; ++i) taylor_step(at, h, y[i], yp[i]);
    at = start + static_cast<Real>(s + 1) * h;
  }
}

template <typename Real>
ScaledAiryQuad<Real> scale(const AiryQuad<Real>& q) {
  const Real re_zeta = zeta_of(q.at).real();
  ScaledAiryQuad<Real> out;
  out.at = q.at;
  out.ai_exponent = -re_zeta;
  out.bi_exponent = std::abs(re_zeta);
  const Real fa = std::exp(re_zeta);
  const Real fb = std::exp(-std::abs(re_zeta));
  out.ai = q.ai * fa;
  out.ai_prime = q.ai_prime * fa;
  out.bi = q.bi * fb;
  out.bi_prime = q.bi_prime * fb;
  return out;
}

}  // namespace airy_detail

/// Ai, Ai', Bi, Bi' in mantissa/exponent form; finite for any finite z.
template <typename Real>
ScaledAiryQuad<Real> airy_eval_scaled(std::complex<Real> z) {
  using namespace airy_detail;
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError("airy_eval_scaled: non-finite argument");
  }
  const Real r = std::abs(z);
  if (r <= Real(kSeriesRadius)) return scale(series(z));

  if (r >= Real(kAsymptoticRadius)) {
    const ScaledAi<Real> a = asymptotic_ai(z);
    ScaledAiryQuad<Real> out;
    out.at = z;
    out.ai = a.ai;
    out.ai_prime = a.ai_prime;
    out.ai_exponent = a.exponent;
    asymptotic_bi(z, out.bi, out.bi_prime, out.bi_exponent);
    return out;
  }

  // Annulus: Taylor continuation along the ray.
  const Complex<Real> unit = z / r;
  const Complex<Real> inner = unit * Real(kSeriesRadius);
  const AiryQuad<Real> s = series(inner);
  const bool ai_recessive = std::abs(std::arg(z)) < std::numbers::pi_v<Real> / 3;

  AiryQuad<Real> q;
  q.at = z;
  if (ai_recessive) {
    Complex<Real> y[1] = {s.bi};
    Complex<Real> yp[1] = {s.bi_prime};
    continue_along_ray(inner, z, y, yp, 1);
    q.bi = y[0];
    q.bi_prime = yp[0];

    const Complex<Real> outer = unit * Real(kAsymptoticRadius);
    const ScaledAi<Real> a = asymptotic_ai(outer);
    const Real f = std::exp(a.exponent);
    Complex<Real> ya[1] = {a.ai * f};
    Complex<Real> yap[1] = {a.ai_prime * f};
    continue_along_ray(outer, z, ya, yap, 1);
    q.ai = ya[0];
    q.ai_prime = yap[0];
  } else {
    Complex<Real> y[2] = {s.ai, s.bi};
    Complex<Real> yp[2] = {s.ai_prime, s.bi_prime};
    continue_along_ray(inner, z, y, yp, 2);
    q.ai = y[0];
    q.ai_prime = yp[0];
    q.bi = y[1];
    q.bi_prime = yp[1];
  }
  return scale(q);
}

/// Ai, Ai', Bi, Bi' for |z| <= 1e4. Values that exceed the floating-point
/// range come back as infinities; use airy_eval_scaled for those.
template <typename Real>
AiryQuad<Real> airy_eval(std::complex<Real> z) {
  if (!(std::abs(z) <= Real(airy_detail::kUnscaledLimit))) {
    throw DomainError("airy_eval: |z| exceeds 1e4; use airy_eval_scaled");
  }
  return airy_eval_scaled(z).unscaled();
}

/// Real-argument convenience overloads.
template <typename Real>
AiryQuad<Real> airy_eval(Real x) {
  return airy_eval(std::complex<Real>(x, 0));
}

template <typename Real>
ScaledAiryQuad<Real> airy_eval_scaled(Real x) {
  return airy_eval_scaled(std::complex<Real>(x, 0));
}

}  // namespace centrifugal
