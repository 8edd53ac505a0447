#pragma once

// Radical formulas for polynomials of degree at most four.
//
// The quartic goes through the depressed form u^4 + p u^2 + q u + r, a root
// lambda of the resolvent cubic
//     lambda^3 + 2p lambda^2 + (p^2 - 4r) lambda - q^2 = 0
// and the two quadratics obtained from the completed square
//     (v + (p + lambda)/2)^2 - lambda (u - q/(2 lambda))^2 = 0,   v = u^2,
// namely u^2 -/+ sqrt(lambda) u + (p + lambda)/2 +/- q/(2 sqrt(lambda)) = 0.
// The sign of sqrt(lambda) in the linear term and the sign in front of
// q/(2 sqrt(lambda)) are opposite, i.e. the +sqrt(lambda) root family is
//     u = (sqrt(lambda) +/- sqrt(lambda - 2(p + lambda + q/sqrt(lambda)))) / 2.

#include <qpencil/error.hpp>
#include <qpencil/poly_core.hpp>

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace qpencil {

/// Monic quartic x^4 + a x^3 + b x^2 + c x + d.
struct QuarticCoeffs {
  Complex a, b, c, d;

  Poly1 polynomial() const { return Poly1{d, c, b, a, Complex(1.0)}; }
};

/// u^4 + p u^2 + q u + r, with x = u + shift.
struct DepressedQuartic {
  Complex p, q, r;
  Complex shift;

  Poly1 polynomial() const { return Poly1{r, q, p, Complex(0.0), Complex(1.0)}; }
};

struct LambdaChoice {
  Complex lambda;
  Complex sqrt_lambda;
  RootSet all_resolvent_roots;
};

namespace detail {

// One Newton refinement pass against the source polynomial, accepted only
// while the residual decreases. Kept local to this header so the solvers
// stay independent of the iterative oracle.
inline Complex newton_polish(const Poly1& p, const Poly1& dp, Complex z) {
  double best = std::abs(p(z));
  for (int k = 0; k < 6 && best > 0.0; ++k) {
    const Complex d = dp(z);
    if (d == Complex(0.0)) break;
    const Complex next = z - p(z) / d;
    if (!is_finite(next)) break;
    const double r = std::abs(p(next));
    if (!(r < best)) break;
    z = next;
    best = r;
  }
  return z;
}

template <std::size_t N>
RootSet polished_roots(const Poly1& source, std::array<Complex, N> values) {
  const Poly1 dp = derivative(source);
  for (auto& z : values) z = newton_polish(source, dp, z);
  return RootSet::cluster(values, source);
}

inline Complex principal_cbrt(Complex z) {
  if (z == Complex(0.0)) return z;
  return std::polar(std::cbrt(std::abs(z)), std::arg(z) / 3.0);
}

inline std::array<Complex, 2> quadratic_values(Complex a, Complex b, Complex c) {
  if (a == Complex(0.0)) throw DomainError("leading coefficient is zero; use a linear solve");
  const Complex s = std::sqrt(b * b - 4.0 * a * c);
  // Add the square root with the sign that avoids cancellation against b.
  const Complex big = (std::real(std::conj(b) * s) >= 0.0) ? b + s : b - s;
  const Complex q = -0.5 * big;
  if (q == Complex(0.0)) return {Complex(0.0), Complex(0.0)};
  return {q / a, c / q};
}

inline const Complex kOmega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);

// Roots of x^3 + a x^2 + b x + c.
inline std::array<Complex, 3> cubic_values(Complex a, Complex b, Complex c) {
  const Complex p = (3.0 * b - a * a) / 3.0;
  const Complex q = (2.0 * a * a * a - 9.0 * a * b + 27.0 * c) / 27.0;
  const Complex s = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
  // Take the larger of -q/2 +/- s for the first cube root.
  const Complex c_plus = -q / 2.0 + s;
  const Complex c_minus = -q / 2.0 - s;
  const Complex cube = std::abs(c_plus) >= std::abs(c_minus) ? c_plus : c_minus;
  const Complex shift = -a / 3.0;
  const Complex m = principal_cbrt(cube);
  if (m == Complex(0.0)) return {shift, shift, shift};
  // The second cube root is tied to the first by m * n = -p/3.
  const Complex n = -p / (3.0 * m);
  const Complex w2 = std::conj(kOmega);
  return {m + n + shift, kOmega * m + w2 * n + shift, w2 * m + kOmega * n + shift};
}

inline double depressed_scale(const DepressedQuartic& dq) {
  return std::max({std::pow(std::abs(dq.p), 1.5), std::pow(std::abs(dq.r), 0.75)});
}

// Roots of the depressed quartic for a given resolvent root and branch.
inline std::array<Complex, 4> depressed_values(const DepressedQuartic& dq, Complex lambda, Complex sqrt_lambda) {
  const Complex half = (dq.p + lambda) / 2.0;
  const Complex t = dq.q / (2.0 * sqrt_lambda);
  const auto plus = quadratic_values(Complex(1.0), -sqrt_lambda, half + t);
  const auto minus = quadratic_values(Complex(1.0), sqrt_lambda, half - t);
  return {plus[0], plus[1], minus[0], minus[1]};
}

inline std::array<Complex, 4> biquadratic_values(const DepressedQuartic& dq) {
  const auto w = quadratic_values(Complex(1.0), dq.p, dq.r);
  const Complex s0 = std::sqrt(w[0]);
  const Complex s1 = std::sqrt(w[1]);
  return {s0, -s0, s1, -s1};
}

} // namespace detail

/// Both roots of a x^2 + b x + c. The larger-magnitude root is computed
/// first and the other one from the product c/a.
inline RootSet solve_quadratic(Complex a, Complex b, Complex c) {
  return detail::polished_roots(Poly1{c, b, a}, detail::quadratic_values(a, b, c));
}

/// Cardano's formula for x^3 + a x^2 + b x + c. The two cube roots are
/// paired so their product is -p/3; the other two roots rotate them by the
/// cube roots of unity in opposite directions.
inline RootSet solve_cubic(Complex a, Complex b, Complex c) {
  return detail::polished_roots(Poly1{c, b, a, Complex(1.0)}, detail::cubic_values(a, b, c));
}

/// Roots of 4u^3 - 3u - k: cos((arccos k + 2 pi j) / 3), j = 0, 1, 2, with
/// arccos continued to complex values when |k| > 1.
inline RootSet solve_cubic_trig(double k) {
  const Complex theta = std::acos(Complex(k, 0.0));
  std::array<Complex, 3> u{};
  for (int j = 0; j < 3; ++j) u[j] = std::cos((theta + 2.0 * std::numbers::pi * j) / 3.0);
  return detail::polished_roots(Poly1{Complex(-k), Complex(-3.0), Complex(0.0), Complex(4.0)}, u);
}

/// Substitute x = u - a/4.
inline DepressedQuartic depress_quartic(const QuarticCoeffs& qc) {
  const Complex a = qc.a, b = qc.b, c = qc.c, d = qc.d;
  const Complex a2 = a * a;
  DepressedQuartic dq;
  dq.p = b - 3.0 * a2 / 8.0;
  dq.q = c - a * b / 2.0 + a2 * a / 8.0;
  dq.r = d - a * c / 4.0 + a2 * b / 16.0 - 3.0 * a2 * a2 / 256.0;
  dq.shift = -a / 4.0;
  return dq;
}

/// lambda^3 + 2p lambda^2 + (p^2 - 4r) lambda - q^2.
inline Poly1 resolvent_cubic(const DepressedQuartic& dq) {
  return Poly1{-dq.q * dq.q, dq.p * dq.p - 4.0 * dq.r, 2.0 * dq.p, Complex(1.0)};
}

/// Largest-modulus nonzero resolvent root; modulus ties go to the larger
/// real part, then the larger imaginary part.
inline LambdaChoice select_lambda(const RootSet& resolvent_roots, Complex q) {
  constexpr double kZero = 1e-12;
  const Root* best = nullptr;
  for (const auto& r : resolvent_roots) {
    const double m = std::abs(r.value);
    if (m < kZero) continue;
    if (best == nullptr) {
      best = &r;
      continue;
    }
    const double bm = std::abs(best->value);
    if (std::abs(m - bm) <= 1e-12 * std::max(m, bm)) {
      if (r.value.real() > best->value.real() ||
          (r.value.real() == best->value.real() && r.value.imag() > best->value.imag()))
        best = &r;
    } else if (m > bm) {
      best = &r;
    }
  }
  if (best == nullptr) {
    if (q != Complex(0.0))
      throw NumericalError("internal inconsistency: every resolvent root vanishes while q is nonzero");
    throw DomainError("no nonzero resolvent root; the biquadratic path applies");
  }
  return {best->value, std::sqrt(best->value), resolvent_roots};
}

/// True when q is negligible and the quartic is solved as a quadratic in u^2.
inline bool is_biquadratic(const DepressedQuartic& dq) {
  return std::abs(dq.q) <= 1e-12 * detail::depressed_scale(dq);
}

/// Roots in u for an explicit resolvent root and square-root branch.
inline RootSet solve_depressed_quartic_with(const DepressedQuartic& dq, Complex lambda, Complex sqrt_lambda) {
  if (sqrt_lambda == Complex(0.0)) throw DomainError("lambda must be nonzero");
  return detail::polished_roots(dq.polynomial(), detail::depressed_values(dq, lambda, sqrt_lambda));
}

inline RootSet solve_depressed_quartic(const DepressedQuartic& dq) {
  if (is_biquadratic(dq)) return detail::polished_roots(dq.polynomial(), detail::biquadratic_values(dq));
  const Poly1 res = resolvent_cubic(dq);
  const RootSet lambdas = solve_cubic(res[2], res[1], res[0]);
  const LambdaChoice pick = select_lambda(lambdas, dq.q);
  return solve_depressed_quartic_with(dq, pick.lambda, pick.sqrt_lambda);
}

/// Depressed roots translated back by -a/4; residuals refer to the quartic.
inline RootSet solve_quartic(const QuarticCoeffs& qc) {
  const DepressedQuartic dq = depress_quartic(qc);
  const Poly1 p = qc.polynomial();
  std::vector<Root> shifted;
  for (const auto& r : solve_depressed_quartic(dq)) {
    const Complex x = r.value + dq.shift;
    shifted.push_back({x, r.multiplicity, std::abs(p(x))});
  }
  return RootSet(std::move(shifted));
}

/// Degree dispatch for 1 <= degree <= 4 after dividing by the leading
/// coefficient. Roots are polished against `poly` itself.
inline RootSet solve_any(const Poly1& poly) {
  if (poly.is_zero()) throw DomainError("the zero polynomial has no finite root set");
  const int n = poly.degree();
  if (n < 1 || n > 4) throw DomainError("degree unsupported: " + std::to_string(n) + " (closed forms cover 1 to 4)");
  const Complex lead = poly.leading();
  auto m = [&](int i) { return poly[i] / lead; };
  std::vector<Complex> values;
  switch (n) {
  case 1: values = {-m(0)}; break;
  case 2: {
    const auto v = detail::quadratic_values(Complex(1.0), m(1), m(0));
    values.assign(v.begin(), v.end());
    break;
  }
  case 3: {
    const auto v = detail::cubic_values(m(2), m(1), m(0));
    values.assign(v.begin(), v.end());
    break;
  }
  default:
    for (const auto& r : solve_quartic({m(3), m(2), m(1), m(0)}))
      values.insert(values.end(), static_cast<std::size_t>(r.multiplicity), r.value);
  }
  const Poly1 dp = derivative(poly);
  for (auto& z : values) z = detail::newton_polish(poly, dp, z);
  return RootSet::cluster(values, poly);
}

} // namespace qpencil
