#pragma once

// Pencils of plane cubics mu f1 + lambda f2 and the map
//     lambda(x, y) = -f1(x, y, 1) / f2(x, y, 1)
// whose critical points are the singular points of singular members.
// The default pencil spans
//     f1 = z y^2 - 2 x^2 (x + 8z),    f2 = z x^2 - (y + z)^2 (y + 9z).

#include <qpencil/closed_form.hpp>
#include <qpencil/conic_pencil.hpp>
#include <qpencil/error.hpp>
#include <qpencil/poly_core.hpp>
#include <qpencil/root_oracle.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <limits>
#include <optional>
#include <random>
#include <thread>
#include <utility>
#include <vector>

namespace qpencil {

class CubicPencil {
public:
  CubicPencil(HomogPoly3 f1, HomogPoly3 f2) : f1_(std::move(f1)), f2_(std::move(f2)) {
    if (f1_.degree() != 3 || f2_.degree() != 3) throw DomainError("cubic pencil members must have degree 3");
    if (f1_.is_zero() || f2_.is_zero()) throw DomainError("cubic pencil member is zero");
    // Linear independence: f2 is not a multiple of f1.
    const auto& [e0, c0] = *f1_.terms().begin();
    const Complex ratio = f2_.coeff(e0) / c0;
    const HomogPoly3 diff = f2_ - ratio * f1_;
    double big = 0.0, rest = 0.0;
    for (const auto& [e, c] : f2_.terms()) big = std::max(big, std::abs(c));
    for (const auto& [e, c] : diff.terms()) rest = std::max(rest, std::abs(c));
    if (rest <= 1e-12 * big) throw DomainError("cubic pencil members are linearly dependent");
  }

  const HomogPoly3& f1() const { return f1_; }
  const HomogPoly3& f2() const { return f2_; }

private:
  HomogPoly3 f1_, f2_;
};

inline CubicPencil default_cubic_pencil() {
  // indices: x = 0, y = 1, z = 2
  HomogPoly3 f1(3);
  f1.add_term({0, 2, 1}, 1.0);   // z y^2
  f1.add_term({3, 0, 0}, -2.0);  // -2 x^3
  f1.add_term({2, 0, 1}, -16.0); // -16 x^2 z
  HomogPoly3 f2(3);
  f2.add_term({2, 0, 1}, 1.0);   // z x^2
  f2.add_term({0, 3, 0}, -1.0);  // -(y^3 + 11 y^2 z + 19 y z^2 + 9 z^3)
  f2.add_term({0, 2, 1}, -11.0);
  f2.add_term({0, 1, 2}, -19.0);
  f2.add_term({0, 0, 3}, -9.0);
  return {f1, f2};
}

inline HomogPoly3 pencil_member_cubic(const CubicPencil& cp, Complex mu, Complex lambda) {
  return mu * cp.f1() + lambda * cp.f2();
}

inline HomogPoly3 pencil_member_cubic(const CubicPencil& cp, const PencilParam& t) {
  return pencil_member_cubic(cp, t[0], t[1]);
}

// ---------------------------------------------------------------------------
// The lambda map on the chart z = 1, mu = 1

/// Thrown when lambda is evaluated at a common zero of f1 and f2.
class BasePointError : public DomainError {
public:
  using DomainError::DomainError;
};

/// Complex value or the point at infinity [0 : 1].
struct ExtendedComplex {
  std::optional<Complex> value;
  bool is_infinite() const { return !value.has_value(); }
};

/// f1, f2 on z = 1 with first and second partials, prepared once.
class AffinePencilMap {
public:
  explicit AffinePencilMap(const CubicPencil& cp)
      : f1_(dehomogenize(cp.f1(), 2)), f2_(dehomogenize(cp.f2(), 2)), f1x_(f1_.partial(0)), f1y_(f1_.partial(1)),
        f2x_(f2_.partial(0)), f2y_(f2_.partial(1)), f1xx_(f1x_.partial(0)), f1xy_(f1x_.partial(1)),
        f1yy_(f1y_.partial(1)), f2xx_(f2x_.partial(0)), f2xy_(f2x_.partial(1)), f2yy_(f2y_.partial(1)) {}

  const Poly2& f1() const { return f1_; }
  const Poly2& f2() const { return f2_; }
  const Poly2& f1x() const { return f1x_; }
  const Poly2& f1y() const { return f1y_; }
  const Poly2& f2x() const { return f2x_; }
  const Poly2& f2y() const { return f2y_; }

  static constexpr double kVanish = 1e-12;

  bool f1_vanishes(Complex x, Complex y) const {
    return std::abs(f1_(x, y)) <= kVanish * std::max(1.0, f1_.magnitude_at(x, y));
  }
  bool f2_vanishes(Complex x, Complex y) const {
    return std::abs(f2_(x, y)) <= kVanish * std::max(1.0, f2_.magnitude_at(x, y));
  }

  ExtendedComplex lambda(Complex x, Complex y) const {
    const bool n0 = f1_vanishes(x, y), d0 = f2_vanishes(x, y);
    if (n0 && d0) throw BasePointError("lambda is undefined at a base point of the pencil");
    if (d0) return {std::nullopt};
    return {-f1_(x, y) / f2_(x, y)};
  }

  /// Exact partials of -f1/f2 by the quotient rule.
  std::array<Complex, 2> gradient(Complex x, Complex y) const {
    if (f2_vanishes(x, y)) throw DomainError("gradient of lambda requested on its pole");
    const Complex a = f1_(x, y), b = f2_(x, y);
    const Complex b2 = b * b;
    return {-(f1x_(x, y) * b - a * f2x_(x, y)) / b2, -(f1y_(x, y) * b - a * f2y_(x, y)) / b2};
  }

  /// Numerators of the gradient: H = (f1x f2 - f1 f2x, f1y f2 - f1 f2y).
  std::array<Complex, 2> numerator(Complex x, Complex y) const {
    const Complex a = f1_(x, y), b = f2_(x, y);
    return {f1x_(x, y) * b - a * f2x_(x, y), f1y_(x, y) * b - a * f2y_(x, y)};
  }

  /// Newton step for H(x, y) = 0; empty when the Jacobian is singular.
  std::optional<std::array<Complex, 2>> numerator_step(Complex x, Complex y) const {
    const Complex a = f1_(x, y), b = f2_(x, y);
    const Complex ax = f1x_(x, y), ay = f1y_(x, y), bx = f2x_(x, y), by = f2y_(x, y);
    const Complex axx = f1xx_(x, y), axy = f1xy_(x, y), ayy = f1yy_(x, y);
    const Complex bxx = f2xx_(x, y), bxy = f2xy_(x, y), byy = f2yy_(x, y);
    const Complex h1 = ax * b - a * bx, h2 = ay * b - a * by;
    const Complex j11 = axx * b - a * bxx;
    const Complex j12 = axy * b + ax * by - ay * bx - a * bxy;
    const Complex j21 = axy * b + ay * bx - ax * by - a * bxy;
    const Complex j22 = ayy * b - a * byy;
    const Complex det = j11 * j22 - j12 * j21;
    if (det == Complex(0.0) || !is_finite(det)) return std::nullopt;
    return std::array<Complex, 2>{(h1 * j22 - h2 * j12) / det, (j11 * h2 - j21 * h1) / det};
  }

  /// Newton step for grad lambda = -H / f2^2 = 0 itself. With b = f2 the
  /// Jacobian is -(J_H b - 2 H grad(b)^T) / b^3, so the step d solves
  /// (J_H b - 2 H grad(b)^T) d = H b.
  std::optional<std::array<Complex, 2>> gradient_step(Complex x, Complex y) const {
    const Complex a = f1_(x, y), b = f2_(x, y);
    const Complex ax = f1x_(x, y), ay = f1y_(x, y), bx = f2x_(x, y), by = f2y_(x, y);
    const Complex axx = f1xx_(x, y), axy = f1xy_(x, y), ayy = f1yy_(x, y);
    const Complex bxx = f2xx_(x, y), bxy = f2xy_(x, y), byy = f2yy_(x, y);
    const Complex h1 = ax * b - a * bx, h2 = ay * b - a * by;
    const Complex j11 = (axx * b - a * bxx) * b - 2.0 * h1 * bx;
    const Complex j12 = (axy * b + ax * by - ay * bx - a * bxy) * b - 2.0 * h1 * by;
    const Complex j21 = (axy * b + ay * bx - ax * by - a * bxy) * b - 2.0 * h2 * bx;
    const Complex j22 = (ayy * b - a * byy) * b - 2.0 * h2 * by;
    const Complex r1 = h1 * b, r2 = h2 * b;
    const Complex det = j11 * j22 - j12 * j21;
    if (det == Complex(0.0) || !is_finite(det)) return std::nullopt;
    return std::array<Complex, 2>{(r1 * j22 - r2 * j12) / det, (j11 * r2 - j21 * r1) / det};
  }

private:
  Poly2 f1_, f2_, f1x_, f1y_, f2x_, f2y_, f1xx_, f1xy_, f1yy_, f2xx_, f2xy_, f2yy_;
};

inline ExtendedComplex lambda_of_point(const CubicPencil& cp, Complex x, Complex y) {
  return AffinePencilMap(cp).lambda(x, y);
}

inline std::array<Complex, 2> gradient_lambda(const CubicPencil& cp, Complex x, Complex y) {
  return AffinePencilMap(cp).gradient(x, y);
}

// ---------------------------------------------------------------------------
// Resultants

namespace detail {

// Leibniz determinant of a polynomial matrix by dynamic programming over the
// set of used columns; exact up to floating-point products, no divisions.
inline Poly1 polynomial_determinant(const std::vector<std::vector<Poly1>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return Poly1{Complex(1.0)};
  if (n > 16) throw DomainError("Sylvester matrix too large");
  std::vector<Poly1> dp(std::size_t{1} << n);
  std::vector<char> reached(dp.size(), 0);
  dp[0] = Poly1{Complex(1.0)};
  reached[0] = 1;
  for (std::uint32_t mask = 0; mask < dp.size(); ++mask) {
    if (!reached[mask] || dp[mask].is_zero()) continue;
    const std::size_t row = static_cast<std::size_t>(std::popcount(mask));
    if (row == n) continue;
    for (std::size_t col = 0; col < n; ++col) {
      if (mask & (1u << col) || m[row][col].is_zero()) continue;
      const int above = std::popcount(mask >> (col + 1));
      const Poly1 term = m[row][col] * dp[mask];
      const std::uint32_t next = mask | (1u << col);
      dp[next] = (above % 2 == 0) ? dp[next] + term : dp[next] - term;
      reached[next] = 1;
    }
  }
  return dp.back();
}

inline Poly1 trim_relative(const Poly1& p, double rel) {
  if (p.is_zero()) return p;
  const double big = p.max_abs_coeff();
  std::vector<Complex> c = p.coeffs();
  while (!c.empty() && std::abs(c.back()) <= rel * big) c.pop_back();
  return Poly1(std::move(c));
}

} // namespace detail

/// Sylvester resultant of a and b with respect to variable `eliminated`
/// (0 or 1); a polynomial in the other variable.
inline Poly1 resultant(const Poly2& a, const Poly2& b, int eliminated) {
  if (eliminated != 0 && eliminated != 1) throw DomainError("eliminated variable must be 0 or 1");
  if (a.is_zero() || b.is_zero()) throw DomainError("resultant of the zero polynomial");
  const auto ca = a.coefficients_in(eliminated);
  const auto cb = b.coefficients_in(eliminated);
  const int m = static_cast<int>(ca.size()) - 1;
  const int n = static_cast<int>(cb.size()) - 1;
  const int size = m + n;
  std::vector<std::vector<Poly1>> s(size, std::vector<Poly1>(size));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k <= m; ++k) s[i][i + k] = ca[m - k];
  for (int i = 0; i < m; ++i)
    for (int k = 0; k <= n; ++k) s[n + i][i + k] = cb[n - k];
  return detail::trim_relative(detail::polynomial_determinant(s), 1e-14);
}

// ---------------------------------------------------------------------------
// Base points

struct CubicBasePoint {
  PlanePoint point;
  int multiplicity = 1;
  double residual_f1 = 0.0;
  double residual_f2 = 0.0;
};

struct CubicBasePoints {
  std::vector<CubicBasePoint> points;
  /// res_y(f1, f2) on z = 1.
  Poly1 resultant;

  int total_multiplicity() const {
    int m = 0;
    for (const auto& p : points) m += p.multiplicity;
    return m;
  }
};

namespace detail {

// Joint Newton iteration on (f, g) = 0 in two variables.
inline std::array<Complex, 2> polish_pair(const Poly2& f, const Poly2& g, std::array<Complex, 2> v, int steps = 30) {
  const Poly2 fx = f.partial(0), fy = f.partial(1), gx = g.partial(0), gy = g.partial(1);
  auto size = [&](const std::array<Complex, 2>& w) { return std::abs(f(w[0], w[1])) + std::abs(g(w[0], w[1])); };
  double best = size(v);
  for (int k = 0; k < steps && best > 0.0; ++k) {
    const Complex a = fx(v[0], v[1]), b = fy(v[0], v[1]), c = gx(v[0], v[1]), d = gy(v[0], v[1]);
    const Complex det = a * d - b * c;
    if (det == Complex(0.0)) break;
    const Complex r1 = f(v[0], v[1]), r2 = g(v[0], v[1]);
    const std::array<Complex, 2> next{v[0] - (r1 * d - r2 * b) / det, v[1] - (a * r2 - c * r1) / det};
    if (!is_finite(next[0]) || !is_finite(next[1])) break;
    const double s = size(next);
    if (!(s < best)) break;
    v = next;
    best = s;
  }
  return v;
}

inline RootSet univariate_roots(const Poly1& p) {
  if (p.degree() <= 4) return solve_any(p);
  return find_roots_iterative(p);
}

// Common zeros of two binary forms restricted to the line z = 0, as points
// [x : y : 0]. Both forms are given as polynomials in t for [1 : t : 0]; the
// point [0 : 1 : 0] is tested directly.
inline std::vector<PlanePoint> common_zeros_at_infinity(const std::vector<HomogPoly3>& forms, double tol) {
  std::vector<PlanePoint> out;
  auto restrict = [](const HomogPoly3& F) { return dehomogenize(F, 0).substitute(1, Complex(0.0)); };
  auto all_vanish = [&](const std::array<Complex, 3>& p) {
    for (const auto& F : forms)
      if (std::abs(F(p)) > tol * std::max(1.0, F.magnitude_at(p))) return false;
    return true;
  };
  const Poly1* pick = nullptr;
  std::vector<Poly1> restricted;
  for (const auto& F : forms) restricted.push_back(restrict(F));
  for (const auto& r : restricted)
    if (!r.is_zero() && r.degree() >= 1 && (pick == nullptr || r.degree() < pick->degree())) pick = &r;
  bool some_nonzero_constant = false;
  for (const auto& r : restricted)
    if (!r.is_zero() && r.degree() == 0) some_nonzero_constant = true;
  if (pick != nullptr && !some_nonzero_constant) {
    for (const auto& r : univariate_roots(*pick)) {
      const std::array<Complex, 3> p{Complex(1.0), r.value, Complex(0.0)};
      if (all_vanish(p)) out.emplace_back(p);
    }
  }
  const std::array<Complex, 3> top{Complex(0.0), Complex(1.0), Complex(0.0)};
  if (all_vanish(top)) out.emplace_back(top);
  return out;
}

} // namespace detail

/// The common zeros of f1 and f2, counted with multiplicity.
///
/// Affine points: roots x* of res_y(f1, f2), then the roots y of f1(x*, y)
/// ordered by |f2|, polished jointly. Points on z = 0 are checked directly.
inline CubicBasePoints base_points_cubic(const CubicPencil& cp) {
  const Poly2 F1 = dehomogenize(cp.f1(), 2), F2 = dehomogenize(cp.f2(), 2);
  CubicBasePoints out;
  out.resultant = resultant(F1, F2, 1);
  if (out.resultant.is_zero()) throw DomainError("pencil is not generic: f1 and f2 share a component");

  constexpr double kAccept = 1e-8;
  if (out.resultant.degree() >= 1) {
    for (const auto& group : find_roots_iterative(out.resultant)) {
      const Complex xs = group.value;
      Poly1 along = F1.substitute(0, xs);
      if (along.is_zero() || along.degree() < 1) along = F2.substitute(0, xs);
      if (along.is_zero() || along.degree() < 1) throw NumericalError("cannot back-substitute resultant root");

      std::vector<Complex> ys = detail::univariate_roots(along).expanded();
      std::sort(ys.begin(), ys.end(), [&](Complex a, Complex b) { return std::abs(F2(xs, a)) < std::abs(F2(xs, b)); });
      std::vector<CubicBasePoint> found;
      for (Complex y : ys) {
        const auto v = detail::polish_pair(F1, F2, {xs, y});
        const double r1 = std::abs(F1(v[0], v[1])), r2 = std::abs(F2(v[0], v[1]));
        if (r1 > kAccept * std::max(1.0, F1.magnitude_at(v[0], v[1])) ||
            r2 > kAccept * std::max(1.0, F2.magnitude_at(v[0], v[1])))
          continue;
        const PlanePoint p(std::array<Complex, 3>{v[0], v[1], Complex(1.0)});
        bool dup = false;
        for (const auto& q : found) dup = dup || approx_equal(q.point, p, 1e-7);
        if (!dup) found.push_back({p, 1, r1, r2});
        if (static_cast<int>(found.size()) == group.multiplicity) break;
      }
      if (found.empty()) throw NumericalError("resultant root does not lift to a common zero");
      found.front().multiplicity += group.multiplicity - static_cast<int>(found.size());
      out.points.insert(out.points.end(), found.begin(), found.end());
    }
  }
  for (const auto& p : detail::common_zeros_at_infinity({cp.f1(), cp.f2()}, 1e-10))
    out.points.push_back({p, 1, std::abs(cp.f1()(p.coords())), std::abs(cp.f2()(p.coords()))});
  // Affine points by (x, y), then points at infinity.
  std::stable_sort(out.points.begin(), out.points.end(), [](const CubicBasePoint& a, const CubicBasePoint& b) {
    if (a.point.at_infinity() != b.point.at_infinity()) return b.point.at_infinity();
    if (a.point.at_infinity()) return false;
    const auto pa = a.point.affine(), pb = b.point.affine();
    if (pa[0] != pb[0]) return complex_less(pa[0], pb[0]);
    return complex_less(pa[1], pb[1]);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Critical points

struct SearchConfig {
  int seed_count = 2000;
  /// Seeds for x are drawn in this complex disk...
  double x_radius = 20.0;
  /// ...and for y in this one.
  double y_radius = 150.0;
  int newton_max_iters = 60;
  /// Length scale of the repulsion around deflated points.
  double deflation_radius = 1.0;
  /// Upper bound on seed batches; two batches in a row that find nothing
  /// new end the search early.
  int rounds = 8;
  double dedupe_tol = 1e-6;
  double gradient_tol = 1e-9;
  std::uint64_t rng_seed = 0x5eed'e1'2002ULL;
  int threads = 4;

  /// Below this many seeds the search is flagged as likely incomplete.
  static constexpr int kCoverageFloor = 500;

  void validate() const {
    if (seed_count < 1 || newton_max_iters < 1 || rounds < 1 || threads < 1) throw DomainError("search counts must be positive");
    if (!(x_radius > 0.0) || !(y_radius > 0.0) || !(dedupe_tol > 0.0) || !(gradient_tol > 0.0) ||
        !(deflation_radius > 0.0))
      throw DomainError("search radii and tolerances must be positive");
  }
};

enum class Stratum {
  Affine,         ///< z = 1, mu = 1: a zero of the gradient of lambda
  MemberAtInfinity, ///< mu = 0: a singular point of f2 = 0
  LineAtInfinity, ///< z = 0
};

inline const char* to_string(Stratum s) {
  switch (s) {
  case Stratum::Affine: return "affine";
  case Stratum::MemberAtInfinity: return "mu=0";
  case Stratum::LineAtInfinity: return "z=0";
  }
  return "?";
}

struct CriticalPointRecord {
  Complex x, y, z{1.0};
  /// Affine lambda; empty means the member [mu : lambda] = [0 : 1].
  std::optional<Complex> lambda;
  /// Gradient norm at the point (of lambda, or of f2 on the mu = 0 stratum).
  double residual = 0.0;
  Stratum stratum = Stratum::Affine;
};

struct CriticalPointReport {
  /// Affine critical points, sorted by (Re lambda, Im lambda).
  std::vector<CriticalPointRecord> affine;
  /// Critical points found by the mu = 0 and z = 0 checks.
  std::vector<CriticalPointRecord> strata;
  int converged_starts = 0;
  bool incomplete_coverage_likely = false;

  std::vector<CriticalPointRecord> all() const {
    std::vector<CriticalPointRecord> v(affine);
    v.insert(v.end(), strata.begin(), strata.end());
    return v;
  }
};

namespace detail {

inline double norm2(const std::array<Complex, 2>& v) { return std::hypot(std::abs(v[0]), std::abs(v[1])); }

// Newton on the gradient numerator from one start; empty unless it lands on
// a genuine critical point of lambda (not a base point or a pole).
inline std::optional<CriticalPointRecord> critical_from_start(const AffinePencilMap& map, Complex x, Complex y,
                                                              const SearchConfig& cfg,
                                                              const std::vector<std::array<Complex, 2>>& deflated = {}) {
  // H also vanishes at the base points and at singular points of f2. Those
  // zeros are deflated with m(v) = prod (rho^2/|v - b|^2 + 1): Newton on m H
  // moves along the plain Newton direction d, scaled by 1 / (1 + D_d log m).
  const double rho2 = cfg.deflation_radius * cfg.deflation_radius;
  auto weight = [&](Complex a, Complex b) {
    double m = 1.0;
    for (const auto& p : deflated) {
      const double e2 = std::norm(a - p[0]) + std::norm(b - p[1]);
      m *= rho2 / e2 + 1.0;
    }
    return m;
  };
  auto merit = [&](Complex a, Complex b) { return weight(a, b) * norm2(map.numerator(a, b)); };
  bool converged = false;
  double current = merit(x, y);
  if (!std::isfinite(current)) return std::nullopt;
  for (int it = 0; it < cfg.newton_max_iters; ++it) {
    auto step = map.numerator_step(x, y);
    if (!step) return std::nullopt;
    double dlog = 0.0;
    for (const auto& p : deflated) {
      const Complex ex = x - p[0], ey = y - p[1];
      const double e2 = std::norm(ex) + std::norm(ey);
      dlog -= 2.0 * (std::conj(ex) * (*step)[0] + std::conj(ey) * (*step)[1]).real() * rho2 / (e2 * (rho2 + e2));
    }
    if (std::abs(1.0 + dlog) > 1e-12) {
      (*step)[0] /= (1.0 + dlog);
      (*step)[1] /= (1.0 + dlog);
    }
    // Backtrack while the full step increases the merit; far from a root
    // the undamped iteration tends to run off to infinity.
    double t = 1.0;
    Complex nx = x - (*step)[0], ny = y - (*step)[1];
    double next = merit(nx, ny);
    for (int k = 0; k < 12 && !(next < current); ++k) {
      t *= 0.5;
      nx = x - t * (*step)[0];
      ny = y - t * (*step)[1];
      next = merit(nx, ny);
    }
    x = nx;
    y = ny;
    current = next;
    if (!is_finite(x) || !is_finite(y) || std::abs(x) > 1e8 || std::abs(y) > 1e8) return std::nullopt;
    if (t * norm2(*step) <= 1e-14 * (1.0 + std::abs(x) + std::abs(y))) {
      converged = true;
      break;
    }
  }
  if (!converged) return std::nullopt;
  // Two more steps settle the last bits.
  for (int k = 0; k < 2; ++k)
    if (const auto step = map.numerator_step(x, y)) {
      x -= (*step)[0];
      y -= (*step)[1];
    }
  constexpr double kPole = 1e-9;
  if (std::abs(map.f2()(x, y)) <= kPole * std::max(1.0, map.f2().magnitude_at(x, y))) return std::nullopt;
  const auto grad = map.gradient(x, y);
  const double res = norm2(grad);
  if (!(res <= cfg.gradient_tol)) return std::nullopt;
  return CriticalPointRecord{x, y, Complex(1.0), -map.f1()(x, y) / map.f2()(x, y), res, Stratum::Affine};
}

inline bool lambda_less(const CriticalPointRecord& a, const CriticalPointRecord& b) {
  const Complex la = a.lambda.value_or(Complex(INFINITY)), lb = b.lambda.value_or(Complex(INFINITY));
  if (la != lb) return complex_less(la, lb);
  if (a.x != b.x) return complex_less(a.x, b.x);
  return complex_less(a.y, b.y);
}

// Singular points of f2 on z = 1 that are not base points.
inline std::vector<CriticalPointRecord> member_at_infinity_points(const CubicPencil& cp) {
  const Poly2 F = dehomogenize(cp.f2(), 2), G = dehomogenize(cp.f1(), 2);
  const Poly2 Fx = F.partial(0), Fy = F.partial(1);
  std::vector<CriticalPointRecord> out;
  if (Fx.is_zero() && Fy.is_zero()) return out;
  std::vector<std::array<Complex, 2>> candidates;
  if (Fx.is_zero() || Fy.is_zero()) {
    throw NumericalError("f2 has a vanishing partial derivative on z = 1; singular locus is not isolated");
  }
  const Poly1 r = resultant(Fx, Fy, 1);
  if (r.is_zero()) throw NumericalError("f2 is not reduced; singular locus is not isolated");
  if (r.degree() < 1) return out;
  for (const auto& xr : find_roots_iterative(r)) {
    const Poly1 along = F.substitute(0, xr.value);
    if (along.is_zero() || along.degree() < 1) continue;
    for (const auto& yr : univariate_roots(along)) {
      const auto v = polish_pair(Fx, Fy, {xr.value, yr.value});
      const double scale = std::max(1.0, F.magnitude_at(v[0], v[1]));
      if (std::abs(F(v[0], v[1])) > 1e-9 * scale) continue;
      const double g = std::hypot(std::abs(Fx(v[0], v[1])), std::abs(Fy(v[0], v[1])));
      if (g > 1e-9 * scale) continue;
      if (std::abs(G(v[0], v[1])) <= 1e-9 * std::max(1.0, G.magnitude_at(v[0], v[1]))) continue;
      bool dup = false;
      for (const auto& c : candidates) dup = dup || std::abs(c[0] - v[0]) + std::abs(c[1] - v[1]) <= 1e-7;
      if (dup) continue;
      candidates.push_back(v);
      out.push_back({v[0], v[1], Complex(1.0), std::nullopt, g, Stratum::MemberAtInfinity});
    }
  }
  return out;
}

// Points [x : y : 0] where grad f1 and grad f2 are parallel, excluding base points.
inline std::vector<CriticalPointRecord> line_at_infinity_points(const CubicPencil& cp) {
  std::array<HomogPoly3, 3> g{cp.f1().partial(0), cp.f1().partial(1), cp.f1().partial(2)};
  std::array<HomogPoly3, 3> h{cp.f2().partial(0), cp.f2().partial(1), cp.f2().partial(2)};
  std::vector<HomogPoly3> minors;
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) minors.push_back(g[a] * h[b] - g[b] * h[a]);
  std::vector<CriticalPointRecord> out;
  for (const auto& p : common_zeros_at_infinity(minors, 1e-9)) {
    const auto& c = p.coords();
    const double s1 = std::max(1.0, cp.f1().magnitude_at(c)), s2 = std::max(1.0, cp.f2().magnitude_at(c));
    if (std::abs(cp.f1()(c)) <= 1e-9 * s1 && std::abs(cp.f2()(c)) <= 1e-9 * s2) continue;
    // mu grad f1 + lambda grad f2 = 0, read off the largest component.
    int k = 0;
    auto size = [&](int i) { return std::max(std::abs(g[i](c)), std::abs(h[i](c))); };
    for (int i = 1; i < 3; ++i)
      if (size(i) > size(k)) k = i;
    const PencilParam param{h[k](c), -g[k](c)};
    CriticalPointRecord rec{c[0], c[1], Complex(0.0), std::nullopt, 0.0, Stratum::LineAtInfinity};
    if (std::abs(param[0]) > 1e-12) rec.lambda = param[1] / param[0];
    double res = 0.0;
    for (int i = 0; i < 3; ++i) res = std::max(res, std::abs(param[0] * g[i](c) + param[1] * h[i](c)));
    rec.residual = res;
    out.push_back(rec);
  }
  return out;
}

} // namespace detail

/// Critical points of the pencil's lambda map.
///
/// Affine points come from multi-start Newton on the gradient numerator with
/// deterministic complex seeds (x in a disk of radius x_radius, y in one of
/// radius y_radius), deduplicated and sorted by lambda. Starts run on
/// cfg.threads workers; each writes its own slot, so the merged result does
/// not depend on scheduling. The mu = 0 and z = 0 strata are handled by
/// direct algebraic checks and reported separately.
inline CriticalPointReport find_critical_points(const CubicPencil& cp, const SearchConfig& cfg = {}) {
  cfg.validate();
  const AffinePencilMap map(cp);

  CriticalPointReport report;
  report.strata = detail::member_at_infinity_points(cp);
  for (const auto& r : detail::line_at_infinity_points(cp)) report.strata.push_back(r);
  std::vector<std::array<Complex, 2>> deflated;
  for (const auto& r : report.strata)
    if (r.stratum == Stratum::MemberAtInfinity) deflated.push_back({r.x, r.y});
  for (const auto& b : base_points_cubic(cp).points)
    if (!b.point.at_infinity()) {
      const auto v = b.point.affine();
      deflated.push_back({v[0], v[1]});
    }

  std::mt19937_64 gen(cfg.rng_seed);
  auto unit = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  std::vector<std::array<Complex, 2>> seeds(static_cast<std::size_t>(cfg.seed_count));
  std::vector<std::optional<CriticalPointRecord>> hits(seeds.size());
  // Each round deflates everything found so far, so later rounds are pushed
  // toward critical points with small basins.
  int idle = 0;
  for (int round = 0; round < cfg.rounds; ++round) {
    // Odd seeds are real: Newton keeps real starts real when the pencil has
    // real coefficients, so real critical points get a two-dimensional
    // rather than a four-dimensional search.
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      if (i % 2 == 1) {
        seeds[i] = {Complex(cfg.x_radius * (2.0 * unit() - 1.0)), Complex(cfg.y_radius * (2.0 * unit() - 1.0))};
        continue;
      }
      const double rx = cfg.x_radius * std::sqrt(unit()), ax = 2.0 * std::numbers::pi * unit();
      const double ry = cfg.y_radius * std::sqrt(unit()), ay = 2.0 * std::numbers::pi * unit();
      seeds[i] = {std::polar(rx, ax), std::polar(ry, ay)};
    }
    auto work = [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i)
        hits[i] = detail::critical_from_start(map, seeds[i][0], seeds[i][1], cfg, deflated);
    };
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.threads), seeds.size());
    if (workers <= 1) {
      work(0, seeds.size());
    } else {
      std::vector<std::jthread> pool;
      const std::size_t chunk = (seeds.size() + workers - 1) / workers;
      for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t b = w * chunk, e = std::min(seeds.size(), b + chunk);
        if (b < e) pool.emplace_back(work, b, e);
      }
    }

    bool found_new = false;
    auto record = [&](const std::optional<CriticalPointRecord>& h) {
      if (!h) return false;
      for (const auto& r : report.affine)
        if (std::hypot(std::abs(r.x - h->x), std::abs(r.y - h->y)) <= cfg.dedupe_tol) return false;
      report.affine.push_back(*h);
      deflated.push_back({h->x, h->y});
      found_new = true;
      return true;
    };
    std::vector<CriticalPointRecord> fresh;
    for (const auto& h : hits) {
      if (!h) continue;
      ++report.converged_starts;
      if (record(h)) fresh.push_back(*h);
    }
    // Conjugates of new points are critical too when the pencil is real.
    for (const auto& h : fresh)
      if (h.x.imag() != 0.0 || h.y.imag() != 0.0)
        record(detail::critical_from_start(map, std::conj(h.x), std::conj(h.y), cfg, deflated));
    idle = found_new ? 0 : idle + 1;
    if (idle == 2) break;
  }
  std::sort(report.affine.begin(), report.affine.end(), detail::lambda_less);
  report.incomplete_coverage_likely = cfg.seed_count < SearchConfig::kCoverageFloor;
  return report;
}

/// One Newton step on the gradient numerator from a reported point; its
/// length certifies the point as a fixed point.
inline double certification_step(const CubicPencil& cp, const CriticalPointRecord& rec) {
  const auto step = AffinePencilMap(cp).numerator_step(rec.x, rec.y);
  if (!step) return INFINITY;
  return detail::norm2(*step);
}

// ---------------------------------------------------------------------------
// Real curve sampling

struct Window {
  double x_min, x_max, y_min, y_max;

  void validate() const {
    for (double v : {x_min, x_max, y_min, y_max})
      if (!std::isfinite(v)) throw DomainError("window bounds must be finite");
    if (!(x_min < x_max) || !(y_min < y_max)) throw DomainError("window must have min < max on both axes");
  }
};

struct RealPoint {
  double x, y;
};

/// Real points of F(x, y, 1) = 0 in the window: for each of grid_n evenly
/// spaced x values, the real roots in y of the restricted polynomial, found
/// with the closed-form solvers (the oracle past degree four).
inline std::vector<RealPoint> sample_curve(const HomogPoly3& F, const Window& window, int grid_n) {
  window.validate();
  if (grid_n < 2) throw DomainError("grid needs at least two columns");
  const Poly2 f = dehomogenize(F, 2);
  std::vector<RealPoint> out;
  if (f.is_zero()) return out;
  for (int k = 0; k < grid_n; ++k) {
    const double x = window.x_min + (window.x_max - window.x_min) * k / (grid_n - 1);
    const Poly1 along = f.substitute(0, Complex(x));
    if (along.is_zero() || along.degree() < 1) continue;
    std::vector<double> ys;
    for (const auto& r : detail::univariate_roots(along)) {
      const double y = r.value.real();
      if (std::abs(r.value.imag()) > 1e-7 * (1.0 + std::abs(y))) continue;
      if (y < window.y_min || y > window.y_max) continue;
      if (std::abs(f(x, y)) > 1e-9 * std::max(1.0, f.magnitude_at(x, y))) continue;
      ys.push_back(y);
    }
    std::sort(ys.begin(), ys.end());
    for (double y : ys) out.push_back({x, y});
  }
  return out;
}

} // namespace qpencil
