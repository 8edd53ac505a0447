#pragma once

// A quartic u^4 + p u^2 + q u + r as the base locus of a pencil of conics
// on [u : v : w]:
//     c1 = v^2 + p v w + q u w + r w^2,     c2 = v w - u^2.
// The affine member c1 + lambda c2 is v^2 + (p + lambda) v - lambda u^2 + q u + r,
// and 4 det(c1 + lambda c2) is exactly the resolvent cubic, so every
// resolvent root names a member that splits into two lines.

#include <qpencil/closed_form.hpp>
#include <qpencil/error.hpp>
#include <qpencil/poly_core.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

namespace qpencil {

using Mat3 = std::array<std::array<Complex, 3>, 3>;

inline Complex det3(const Mat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

inline Mat3 adjugate3(const Mat3& m) {
  Mat3 a{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      a[i][j] = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    }
  return a;
}

inline double max_abs(const Mat3& m) {
  double s = 0.0;
  for (const auto& row : m)
    for (Complex x : row) s = std::max(s, std::abs(x));
  return s;
}

/// Symmetric form on the projective plane, stored as its upper triangle
/// [m00, m01, m02, m11, m12, m22].
class Conic {
public:
  Conic() = default;
  explicit Conic(const std::array<Complex, 6>& upper) : u_(upper) {}

  /// From a degree-2 homogeneous polynomial; cross terms are halved.
  static Conic from_poly(const HomogPoly3& f) {
    if (f.degree() != 2) throw DomainError("a conic needs a degree-2 form");
    std::array<Complex, 6> u{};
    u[0] = f.coeff({2, 0, 0});
    u[1] = f.coeff({1, 1, 0}) / 2.0;
    u[2] = f.coeff({1, 0, 1}) / 2.0;
    u[3] = f.coeff({0, 2, 0});
    u[4] = f.coeff({0, 1, 1}) / 2.0;
    u[5] = f.coeff({0, 0, 2});
    return Conic(u);
  }

  static Conic from_matrix(const Mat3& m) {
    return Conic({m[0][0], (m[0][1] + m[1][0]) / 2.0, (m[0][2] + m[2][0]) / 2.0, m[1][1],
                  (m[1][2] + m[2][1]) / 2.0, m[2][2]});
  }

  const std::array<Complex, 6>& upper() const { return u_; }

  Complex operator()(int i, int j) const {
    static constexpr int idx[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
    return u_[idx[i][j]];
  }

  Mat3 matrix() const {
    Mat3 m{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] = (*this)(i, j);
    return m;
  }

  HomogPoly3 to_poly() const {
    HomogPoly3 f(2);
    f.add_term({2, 0, 0}, u_[0]);
    f.add_term({1, 1, 0}, 2.0 * u_[1]);
    f.add_term({1, 0, 1}, 2.0 * u_[2]);
    f.add_term({0, 2, 0}, u_[3]);
    f.add_term({0, 1, 1}, 2.0 * u_[4]);
    f.add_term({0, 0, 2}, u_[5]);
    return f;
  }

  /// Bilinear form P^T M Q.
  Complex bilinear(const std::array<Complex, 3>& p, const std::array<Complex, 3>& q) const {
    Complex s(0.0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s += p[i] * (*this)(i, j) * q[j];
    return s;
  }

  Complex operator()(const std::array<Complex, 3>& p) const { return bilinear(p, p); }
  Complex operator()(const PlanePoint& p) const { return bilinear(p.coords(), p.coords()); }

  Complex det() const { return det3(matrix()); }

  double norm() const {
    double s = 0.0;
    for (Complex x : u_) s = std::max(s, std::abs(x));
    return s;
  }

  /// Numerical rank: det and adjugate compared against powers of the
  /// largest entry at relative threshold `tol`.
  int rank(double tol = 1e-9) const {
    const double n = norm();
    if (n == 0.0) return 0;
    const Mat3 m = matrix();
    if (std::abs(det3(m)) > tol * n * n * n) return 3;
    if (max_abs(adjugate3(m)) > tol * n * n) return 2;
    return 1;
  }

  friend Conic operator+(const Conic& a, const Conic& b) {
    std::array<Complex, 6> u{};
    for (int i = 0; i < 6; ++i) u[i] = a.u_[i] + b.u_[i];
    return Conic(u);
  }
  friend Conic operator*(Complex s, const Conic& a) {
    std::array<Complex, 6> u{};
    for (int i = 0; i < 6; ++i) u[i] = s * a.u_[i];
    return Conic(u);
  }

private:
  std::array<Complex, 6> u_{};
};

/// Line l . P = 0, canonicalized like a projective point.
class Line {
public:
  explicit Line(const std::array<Complex, 3>& l) : l_(l) {}
  Line(Complex a, Complex b, Complex c) : l_(std::array<Complex, 3>{a, b, c}) {}

  const std::array<Complex, 3>& coeffs() const { return l_.coords(); }
  Complex operator[](std::size_t i) const { return l_[i]; }
  Complex operator()(const std::array<Complex, 3>& p) const {
    return l_[0] * p[0] + l_[1] * p[1] + l_[2] * p[2];
  }
  const PlanePoint& as_point() const { return l_; }

private:
  PlanePoint l_;
};

inline bool approx_equal(const Line& a, const Line& b, double tol = kPointTolerance) {
  return approx_equal(a.as_point(), b.as_point(), tol);
}

struct PencilOfConics {
  Conic c1;
  Conic c2;
};

struct PlanePointWithMultiplicity {
  PlanePoint point;
  int multiplicity = 1;
};

inline PencilOfConics quartic_to_pencil(const DepressedQuartic& dq) {
  // c1 = v^2 + p v w + q u w + r w^2
  const Conic c1({Complex(0.0), Complex(0.0), dq.q / 2.0, Complex(1.0), dq.p / 2.0, dq.r});
  // c2 = v w - u^2
  const Conic c2({Complex(-1.0), Complex(0.0), Complex(0.0), Complex(0.0), Complex(0.5), Complex(0.0)});
  return {c1, c2};
}

inline Conic pencil_member(const PencilOfConics& pc, Complex mu, Complex lambda) {
  return mu * pc.c1 + lambda * pc.c2;
}

inline Conic pencil_member(const PencilOfConics& pc, const PencilParam& t) {
  return pencil_member(pc, t[0], t[1]);
}

/// det(mu A + lambda B) = sum_k coeffs[k] mu^(3-k) lambda^k.
inline std::array<Complex, 4> determinant_binary_cubic(const PencilOfConics& pc) {
  const Mat3 a = pc.c1.matrix(), b = pc.c2.matrix();
  const Mat3 adj_a = adjugate3(a), adj_b = adjugate3(b);
  Complex tr_ab(0.0), tr_ba(0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      tr_ab += adj_a[i][j] * b[j][i];
      tr_ba += a[i][j] * adj_b[j][i];
    }
  return {det3(a), tr_ab, tr_ba, det3(b)};
}

struct SingularMember {
  PencilParam param;
  /// Affine lambda (mu = 1); empty for the member at [0 : 1].
  std::optional<Complex> lambda;
  Conic conic;
  int multiplicity = 1;
};

struct SingularMembers {
  std::array<Complex, 4> binary_cubic;
  /// Affine determinant cubic det(c1 + lambda c2), ascending in lambda.
  Poly1 affine_cubic;
  std::vector<SingularMember> members;
};

/// Members of rank <= 2: the roots [mu : lambda] of det(mu c1 + lambda c2).
inline SingularMembers singular_members(const PencilOfConics& pc) {
  SingularMembers out;
  out.binary_cubic = determinant_binary_cubic(pc);
  const auto& k = out.binary_cubic;
  out.affine_cubic = Poly1{k[0], k[1], k[2], k[3]};
  double big = 0.0;
  for (Complex x : k) big = std::max(big, std::abs(x));
  if (big <= 1e-14 * std::pow(std::max(pc.c1.norm(), pc.c2.norm()), 3.0) || big == 0.0)
    throw DomainError("every member of the pencil is singular");

  // Drop negligible leading coefficients; each dropped degree is a root at [0 : 1].
  int deg = 3;
  while (deg > 0 && std::abs(k[deg]) <= 1e-14 * big) --deg;
  if (deg > 0) {
    std::vector<Complex> c(k.begin(), k.begin() + deg + 1);
    for (const auto& r : solve_any(Poly1(std::move(c)))) {
      SingularMember m{PencilParam{Complex(1.0), r.value}, r.value, Conic{}, r.multiplicity};
      m.conic = pencil_member(pc, Complex(1.0), r.value);
      out.members.push_back(m);
    }
  }
  if (deg < 3) out.members.push_back({PencilParam{Complex(0.0), Complex(1.0)}, std::nullopt, pc.c2, 3 - deg});
  return out;
}

/// Splits a rank <= 2 conic into the two lines whose symmetrized product it is.
///
/// Rank 2: the adjugate equals -(l x m)(l x m)^T for M = l m^T + m l^T, which
/// yields the singular point P = l x m; M - [P]_x = 2 l m^T has rank 1 and
/// its rows and columns give the lines. Rank 1: M is a multiple of l l^T.
inline std::pair<Line, Line> split_degenerate_conic(const Conic& c, double tol = 1e-9) {
  const int rk = c.rank(tol);
  if (rk == 3) throw NumericalError("conic has full rank and does not split into lines");
  if (rk == 0) throw DomainError("zero conic");
  const Mat3 m = c.matrix();
  if (rk == 1) {
    int k = 0;
    for (int i = 1; i < 3; ++i)
      if (std::abs(m[i][i]) > std::abs(m[k][k])) k = i;
    const Line l(m[k]);
    return {l, l};
  }
  const Mat3 adj = adjugate3(m);
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(adj[i][i]) > std::abs(adj[k][k])) k = i;
  const Complex beta = std::sqrt(-adj[k][k]);
  std::array<Complex, 3> p{};
  for (int i = 0; i < 3; ++i) p[i] = adj[i][k] / beta;
  // [P]_x x = P x x
  const Mat3 cross{{{Complex(0.0), -p[2], p[1]}, {p[2], Complex(0.0), -p[0]}, {-p[1], p[0], Complex(0.0)}}};
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = m[i][j] - cross[i][j];
  int bi = 0, bj = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (std::abs(r[i][j]) > std::abs(r[bi][bj])) {
        bi = i;
        bj = j;
      }
  const std::array<Complex, 3> row = r[bi];
  const std::array<Complex, 3> col{r[0][bj], r[1][bj], r[2][bj]};
  return {Line(col), Line(row)};
}

/// The one or two points where a line meets a conic, with multiplicity.
/// The line is parametrized by two points spanning it and the restricted
/// binary quadratic is solved with the quadratic formula.
inline std::vector<PlanePointWithMultiplicity> intersect_line_conic(const Line& l, const Conic& c) {
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(l[i]) > std::abs(l[k])) k = i;
  std::array<std::array<Complex, 3>, 2> basis{};
  int slot = 0;
  for (int i = 0; i < 3; ++i) {
    if (i == k) continue;
    std::array<Complex, 3> e{};
    e[i] = 1.0;
    e[k] = -l[i] / l[k];
    basis[slot++] = e;
  }
  const auto& p0 = basis[0];
  const auto& p1 = basis[1];
  // Q(s p0 + t p1) = A s^2 + B s t + C t^2
  const Complex A = c(p0), B = 2.0 * c.bilinear(p0, p1), C = c(p1);
  const double scale = std::max({std::abs(A), std::abs(B), std::abs(C)});
  if (scale <= 1e-12 * std::max(c.norm(), 1e-300))
    throw DomainError("line is contained in the conic; infinitely many intersections");

  auto combine = [](Complex s, const std::array<Complex, 3>& a, Complex t, const std::array<Complex, 3>& b) {
    return PlanePoint(std::array<Complex, 3>{s * a[0] + t * b[0], s * a[1] + t * b[1], s * a[2] + t * b[2]});
  };
  std::vector<PlanePointWithMultiplicity> out;
  const double tiny = 1e-14 * scale;
  if (std::abs(A) <= tiny && std::abs(C) <= tiny) {
    out.push_back({PlanePoint(p0), 1});
    out.push_back({PlanePoint(p1), 1});
    return out;
  }
  // Solve in whichever affine ratio has the larger leading coefficient.
  const bool in_s = std::abs(A) >= std::abs(C);
  const RootSet ratios = in_s ? solve_quadratic(A, B, C) : solve_quadratic(C, B, A);
  for (const auto& r : ratios) {
    const PlanePoint pt = in_s ? combine(r.value, p0, Complex(1.0), p1) : combine(Complex(1.0), p0, r.value, p1);
    out.push_back({pt, r.multiplicity});
  }
  return out;
}

namespace detail {

inline void add_point(std::vector<PlanePointWithMultiplicity>& pts, const PlanePoint& p, int mult, double tol) {
  for (auto& q : pts)
    if (approx_equal(q.point, p, tol)) {
      q.multiplicity += mult;
      return;
    }
  pts.push_back({p, mult});
}

// The singular member used for base points: largest-modulus nonzero finite
// lambda, then lambda = 0, then the member at infinity.
inline const SingularMember& preferred_member(const SingularMembers& sm) {
  const SingularMember* best = nullptr;
  for (const auto& m : sm.members) {
    if (!m.lambda) continue;
    if (best == nullptr) {
      best = &m;
      continue;
    }
    const double a = std::abs(*m.lambda), b = std::abs(*best->lambda);
    if (a > b * (1.0 + 1e-12) ||
        (std::abs(a - b) <= 1e-12 * std::max(a, b) &&
         (m.lambda->real() > best->lambda->real() ||
          (m.lambda->real() == best->lambda->real() && m.lambda->imag() > best->lambda->imag()))))
      best = &m;
  }
  return best != nullptr ? *best : sm.members.front();
}

} // namespace detail

/// Intersections of a singular member's line pair with the other spanning conic.
inline std::vector<PlanePointWithMultiplicity> base_points_from_member(const PencilOfConics& pc,
                                                                        const SingularMember& member,
                                                                        double tol = 1e-7) {
  const auto [l1, l2] = split_degenerate_conic(member.conic);
  const Conic& other = member.lambda ? pc.c2 : pc.c1;
  std::vector<PlanePointWithMultiplicity> pts;
  for (const Line* l : {&l1, &l2})
    for (const auto& p : intersect_line_conic(*l, other)) detail::add_point(pts, p.point, p.multiplicity, tol);
  return pts;
}

/// The four common points of the pencil, with multiplicity.
inline std::vector<PlanePointWithMultiplicity> base_points(const PencilOfConics& pc) {
  const SingularMembers sm = singular_members(pc);
  if (sm.members.empty()) throw NumericalError("pencil has no singular member");
  return base_points_from_member(pc, detail::preferred_member(sm));
}

/// Roots of u^4 + p u^2 + q u + r read off the pencil's base points on w = 1.
inline RootSet solve_quartic_via_pencil(const DepressedQuartic& dq) {
  const auto pts = base_points(quartic_to_pencil(dq));
  const Poly1 poly = dq.polynomial();
  const Poly1 dpoly = derivative(poly);
  std::vector<Complex> values;
  for (const auto& bp : pts) {
    // c2's only point at infinity, [0:1:0], is not on c1 = v^2 + ...
    if (bp.point.at_infinity()) throw NumericalError("quartic pencil produced a base point at infinity");
    const Complex u = bp.point.affine()[0];
    values.insert(values.end(), static_cast<std::size_t>(bp.multiplicity), detail::newton_polish(poly, dpoly, u));
  }
  if (values.size() != 4) throw NumericalError("pencil produced " + std::to_string(values.size()) + " base points");
  return RootSet::cluster(values, poly);
}

} // namespace qpencil
