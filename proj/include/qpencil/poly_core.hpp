#pragma once

// Scalars, polynomials and projective points shared by every solver.

#include <qpencil/error.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qpencil {

using Complex = std::complex<double>;

/// z^n by repeated squaring; z^0 = 1 even for z = 0.
inline Complex ipow(Complex z, int n) {
  Complex r(1.0);
  while (n > 0) {
    if (n & 1) r *= z;
    z *= z;
    n >>= 1;
  }
  return r;
}

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Lexicographic (Re, Im) ordering used for all deterministic output.
inline bool complex_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

// ---------------------------------------------------------------------------
// Poly1

/// Dense univariate polynomial, coefficients ascending by degree.
/// The zero polynomial has no coefficients; asking for its degree throws.
class Poly1 {
public:
  Poly1() = default;
  explicit Poly1(std::vector<Complex> coeffs) : c_(std::move(coeffs)) { trim(); }
  Poly1(std::initializer_list<Complex> coeffs) : c_(coeffs) { trim(); }

  /// Monic polynomial with the given roots.
  static Poly1 from_roots(std::span<const Complex> roots) {
    std::vector<Complex> c{Complex(1.0)};
    for (Complex r : roots) {
      std::vector<Complex> next(c.size() + 1, Complex(0.0));
      for (std::size_t i = 0; i < c.size(); ++i) {
        next[i + 1] += c[i];
        next[i] -= r * c[i];
      }
      c = std::move(next);
    }
    return Poly1(std::move(c));
  }

  bool is_zero() const { return c_.empty(); }

  int degree() const {
    if (c_.empty()) throw DomainError("degree of the zero polynomial is undefined");
    return static_cast<int>(c_.size()) - 1;
  }

  const std::vector<Complex>& coeffs() const { return c_; }
  std::size_t size() const { return c_.size(); }

  /// Coefficient of x^i; zero past the end.
  Complex operator[](std::size_t i) const { return i < c_.size() ? c_[i] : Complex(0.0); }

  Complex leading() const {
    if (c_.empty()) throw DomainError("leading coefficient of the zero polynomial");
    return c_.back();
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (Complex a : c_) m = std::max(m, std::abs(a));
    return m;
  }

  Complex operator()(Complex z) const {
    Complex acc(0.0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  /// Sum of |a_i| |z|^i; the natural scale for residuals at z.
  double magnitude_at(Complex z) const {
    const double az = std::abs(z);
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * az + std::abs(*it);
    return acc;
  }

  friend Poly1 operator+(const Poly1& a, const Poly1& b) {
    std::vector<Complex> c(std::max(a.size(), b.size()), Complex(0.0));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] + b[i];
    return Poly1(std::move(c));
  }
  friend Poly1 operator-(const Poly1& a, const Poly1& b) {
    std::vector<Complex> c(std::max(a.size(), b.size()), Complex(0.0));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] - b[i];
    return Poly1(std::move(c));
  }
  friend Poly1 operator*(const Poly1& a, const Poly1& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Complex> c(a.size() + b.size() - 1, Complex(0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Poly1(std::move(c));
  }
  friend Poly1 operator*(Complex s, const Poly1& a) {
    std::vector<Complex> c(a.c_);
    for (auto& x : c) x *= s;
    return Poly1(std::move(c));
  }

  friend bool operator==(const Poly1&, const Poly1&) = default;

private:
  void trim() {
    while (!c_.empty() && c_.back() == Complex(0.0)) c_.pop_back();
  }

  std::vector<Complex> c_;
};

inline Complex eval_poly(const Poly1& p, Complex z) { return p(z); }

inline Poly1 derivative(const Poly1& p) {
  if (p.size() <= 1) return {};
  std::vector<Complex> d(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = static_cast<double>(i) * p[i];
  return Poly1(std::move(d));
}

// ---------------------------------------------------------------------------
// Poly2: affine polynomial in two variables (v0, v1)

class Poly2 {
public:
  using Exponent = std::pair<int, int>;

  Poly2() = default;

  static Poly2 constant(Complex c) { return monomial(c, 0, 0); }

  static Poly2 monomial(Complex c, int i, int j) {
    Poly2 p;
    p.add_term(i, j, c);
    return p;
  }

  void add_term(int i, int j, Complex c) {
    if (i < 0 || j < 0) throw DomainError("negative exponent");
    auto& slot = t_[{i, j}];
    slot += c;
    if (slot == Complex(0.0)) t_.erase({i, j});
  }

  const std::map<Exponent, Complex>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }

  Complex coeff(int i, int j) const {
    auto it = t_.find({i, j});
    return it == t_.end() ? Complex(0.0) : it->second;
  }

  int total_degree() const {
    if (t_.empty()) throw DomainError("degree of the zero polynomial is undefined");
    int d = 0;
    for (const auto& [e, c] : t_) d = std::max(d, e.first + e.second);
    return d;
  }

  /// Highest power of variable `var` (0 or 1); -1 for the zero polynomial.
  int degree_in(int var) const {
    int d = -1;
    for (const auto& [e, c] : t_) d = std::max(d, var == 0 ? e.first : e.second);
    return d;
  }

  Complex operator()(Complex a, Complex b) const {
    Complex acc(0.0);
    for (const auto& [e, c] : t_) acc += c * ipow(a, e.first) * ipow(b, e.second);
    return acc;
  }

  double magnitude_at(Complex a, Complex b) const {
    double acc = 0.0;
    for (const auto& [e, c] : t_)
      acc += std::abs(c) * std::pow(std::abs(a), e.first) * std::pow(std::abs(b), e.second);
    return acc;
  }

  Poly2 partial(int var) const {
    Poly2 d;
    for (const auto& [e, c] : t_) {
      if (var == 0 && e.first > 0) d.add_term(e.first - 1, e.second, c * double(e.first));
      if (var == 1 && e.second > 0) d.add_term(e.first, e.second - 1, c * double(e.second));
    }
    return d;
  }

  /// Fix variable `var` to `value`; the result is a polynomial in the other one.
  Poly1 substitute(int var, Complex value) const {
    std::vector<Complex> c;
    for (const auto& [e, k] : t_) {
      const int keep = var == 0 ? e.second : e.first;
      const int gone = var == 0 ? e.first : e.second;
      if (static_cast<int>(c.size()) <= keep) c.resize(keep + 1, Complex(0.0));
      c[keep] += k * ipow(value, gone);
    }
    return Poly1(std::move(c));
  }

  /// Coefficients as polynomials in the other variable, indexed by the power of `var`.
  std::vector<Poly1> coefficients_in(int var) const {
    std::vector<std::vector<Complex>> rows(std::max(degree_in(var) + 1, 0));
    for (const auto& [e, k] : t_) {
      const int pw = var == 0 ? e.first : e.second;
      const int other = var == 0 ? e.second : e.first;
      auto& row = rows[pw];
      if (static_cast<int>(row.size()) <= other) row.resize(other + 1, Complex(0.0));
      row[other] += k;
    }
    std::vector<Poly1> out;
    out.reserve(rows.size());
    for (auto& r : rows) out.emplace_back(std::move(r));
    return out;
  }

  friend Poly2 operator+(Poly2 a, const Poly2& b) {
    for (const auto& [e, c] : b.t_) a.add_term(e.first, e.second, c);
    return a;
  }
  friend Poly2 operator-(Poly2 a, const Poly2& b) {
    for (const auto& [e, c] : b.t_) a.add_term(e.first, e.second, -c);
    return a;
  }
  friend Poly2 operator*(const Poly2& a, const Poly2& b) {
    Poly2 r;
    for (const auto& [ea, ca] : a.t_)
      for (const auto& [eb, cb] : b.t_) r.add_term(ea.first + eb.first, ea.second + eb.second, ca * cb);
    return r;
  }
  friend Poly2 operator*(Complex s, const Poly2& a) {
    Poly2 r;
    for (const auto& [e, c] : a.t_) r.add_term(e.first, e.second, s * c);
    return r;
  }

  friend bool operator==(const Poly2&, const Poly2&) = default;

private:
  std::map<Exponent, Complex> t_;
};

// ---------------------------------------------------------------------------
// HomogPoly3

/// Homogeneous polynomial of fixed degree in three variables.
/// Every stored exponent triple sums to the degree.
class HomogPoly3 {
public:
  using Exponent = std::array<int, 3>;

  explicit HomogPoly3(int degree = 0) : d_(degree) {
    if (degree < 0) throw DomainError("negative degree");
  }

  int degree() const { return d_; }
  const std::map<Exponent, Complex>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }

  void add_term(Exponent e, Complex c) {
    if (e[0] < 0 || e[1] < 0 || e[2] < 0 || e[0] + e[1] + e[2] != d_)
      throw DomainError("exponent triple does not match degree " + std::to_string(d_));
    auto& slot = t_[e];
    slot += c;
    if (slot == Complex(0.0)) t_.erase(e);
  }

  Complex coeff(Exponent e) const {
    auto it = t_.find(e);
    return it == t_.end() ? Complex(0.0) : it->second;
  }

  Complex operator()(const std::array<Complex, 3>& p) const {
    Complex acc(0.0);
    for (const auto& [e, c] : t_)
      acc += c * ipow(p[0], e[0]) * ipow(p[1], e[1]) * ipow(p[2], e[2]);
    return acc;
  }

  double magnitude_at(const std::array<Complex, 3>& p) const {
    double acc = 0.0;
    for (const auto& [e, c] : t_)
      acc += std::abs(c) * std::pow(std::abs(p[0]), e[0]) * std::pow(std::abs(p[1]), e[1]) *
             std::pow(std::abs(p[2]), e[2]);
    return acc;
  }

  HomogPoly3 partial(int var) const {
    HomogPoly3 r(d_ > 0 ? d_ - 1 : 0);
    for (const auto& [e, c] : t_) {
      if (e[var] == 0) continue;
      Exponent lowered = e;
      --lowered[var];
      r.add_term(lowered, c * static_cast<double>(e[var]));
    }
    return r;
  }

  friend HomogPoly3 operator+(HomogPoly3 a, const HomogPoly3& b) {
    if (a.d_ != b.d_) throw DomainError("adding homogeneous polynomials of different degree");
    for (const auto& [e, c] : b.t_) a.add_term(e, c);
    return a;
  }
  friend HomogPoly3 operator-(const HomogPoly3& a, const HomogPoly3& b) { return a + Complex(-1.0) * b; }
  friend HomogPoly3 operator*(Complex s, const HomogPoly3& a) {
    HomogPoly3 r(a.d_);
    for (const auto& [e, c] : a.t_) r.add_term(e, s * c);
    return r;
  }
  friend HomogPoly3 operator*(const HomogPoly3& a, const HomogPoly3& b) {
    HomogPoly3 r(a.d_ + b.d_);
    for (const auto& [ea, ca] : a.t_)
      for (const auto& [eb, cb] : b.t_) r.add_term({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}, ca * cb);
    return r;
  }

  friend bool operator==(const HomogPoly3&, const HomogPoly3&) = default;

private:
  int d_;
  std::map<Exponent, Complex> t_;
};

/// z0^d f(z1/z0, z2/z0) with the new variable placed at `new_var_index`;
/// the two affine variables keep their order in the remaining slots.
inline HomogPoly3 homogenize(const Poly2& f, int d, int new_var_index) {
  if (new_var_index < 0 || new_var_index > 2) throw DomainError("homogenizing variable index must be 0, 1 or 2");
  if (!f.is_zero() && d < f.total_degree())
    throw DomainError("target degree " + std::to_string(d) + " is below the polynomial's degree " +
                      std::to_string(f.total_degree()));
  HomogPoly3 F(d);
  for (const auto& [e, c] : f.terms()) {
    HomogPoly3::Exponent ex{};
    int slot = 0;
    for (int k = 0; k < 3; ++k) {
      if (k == new_var_index) {
        ex[k] = d - e.first - e.second;
      } else {
        ex[k] = slot == 0 ? e.first : e.second;
        ++slot;
      }
    }
    F.add_term(ex, c);
  }
  return F;
}

/// Set coordinate `chart` to 1; the remaining two variables keep their order.
inline Poly2 dehomogenize(const HomogPoly3& F, int chart) {
  if (chart < 0 || chart > 2) throw DomainError("chart index must be 0, 1 or 2");
  Poly2 f;
  for (const auto& [e, c] : F.terms()) {
    int rest[2];
    int slot = 0;
    for (int k = 0; k < 3; ++k)
      if (k != chart) rest[slot++] = e[k];
    f.add_term(rest[0], rest[1], c);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Projective points

inline constexpr double kPointTolerance = 1e-9;

/// Point of P^{N-1}, stored as its canonical representative: the
/// largest-modulus coordinate (lowest index on ties) is exactly 1+0i.
template <std::size_t N>
class ProjPoint {
public:
  static_assert(N == 2 || N == 3);

  ProjPoint(std::initializer_list<Complex> raw) {
    if (raw.size() != N) throw DomainError("wrong number of projective coordinates");
    std::array<Complex, N> a{};
    std::copy(raw.begin(), raw.end(), a.begin());
    *this = ProjPoint(a);
  }

  explicit ProjPoint(const std::array<Complex, N>& raw) {
    std::size_t pivot = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < N; ++i) {
      if (!is_finite(raw[i])) throw DomainError("non-finite projective coordinate");
      const double m = std::abs(raw[i]);
      if (m > best) {
        best = m;
        pivot = i;
      }
    }
    if (best == 0.0) throw DomainError("all projective coordinates are zero");
    const Complex s = raw[pivot];
    for (std::size_t i = 0; i < N; ++i) c_[i] = raw[i] / s;
    c_[pivot] = Complex(1.0, 0.0);
    pivot_ = pivot;
  }

  const std::array<Complex, N>& coords() const { return c_; }
  Complex operator[](std::size_t i) const { return c_[i]; }
  std::size_t pivot() const { return pivot_; }

  /// Affine coordinates in the chart where the last coordinate is 1.
  /// Throws if the point lies at infinity of that chart.
  std::array<Complex, N - 1> affine(double tol = kPointTolerance) const {
    if (std::abs(c_[N - 1]) <= tol) throw DomainError("point at infinity has no affine coordinates");
    std::array<Complex, N - 1> a{};
    for (std::size_t i = 0; i + 1 < N; ++i) a[i] = c_[i] / c_[N - 1];
    return a;
  }

  bool at_infinity(double tol = kPointTolerance) const { return std::abs(c_[N - 1]) <= tol; }

private:
  std::array<Complex, N> c_{};
  std::size_t pivot_ = 0;
};

using PlanePoint = ProjPoint<3>;
/// [mu : lambda] on the projective line.
using PencilParam = ProjPoint<2>;

template <std::size_t N>
ProjPoint<N> normalize_proj(const std::array<Complex, N>& raw) {
  return ProjPoint<N>(raw);
}

/// Equality of canonical representatives within `tol`. Near pivot ties the
/// second point is rescaled onto the first one's pivot before comparing.
template <std::size_t N>
bool approx_equal(const ProjPoint<N>& a, const ProjPoint<N>& b, double tol = kPointTolerance) {
  const Complex s = b[a.pivot()];
  if (std::abs(s) < 0.5) return false;
  for (std::size_t i = 0; i < N; ++i)
    if (std::abs(a[i] - b[i] / s) > tol) return false;
  return true;
}

inline Complex eval_homog(const HomogPoly3& F, const PlanePoint& P) { return F(P.coords()); }

// ---------------------------------------------------------------------------
// RootSet

struct Root {
  Complex value;
  int multiplicity = 1;
  double residual = 0.0;
};

inline constexpr double kClusterTolerance = 1e-6;

/// Multiset of roots; entries sorted by (Re, Im) of their value.
class RootSet {
public:
  RootSet() = default;

  explicit RootSet(std::vector<Root> roots) : r_(std::move(roots)) { sort(); }

  /// Merge values closer than cluster_tol * max(1, |z|) into single entries
  /// (single linkage, merged value is the mean) and record |p(root)|.
  static RootSet cluster(std::span<const Complex> values, const Poly1& source,
                         double cluster_tol = kClusterTolerance) {
    const std::size_t n = values.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
      while (parent[i] != i) i = parent[i] = parent[parent[i]];
      return i;
    };
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double scale = std::max({1.0, std::abs(values[i]), std::abs(values[j])});
        if (std::abs(values[i] - values[j]) <= cluster_tol * scale) parent[find(i)] = find(j);
      }
    std::map<std::size_t, std::vector<Complex>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(values[i]);
    std::vector<Root> out;
    out.reserve(groups.size());
    for (auto& [rep, members] : groups) {
      std::sort(members.begin(), members.end(), complex_less);
      Complex mean(0.0);
      for (Complex z : members) mean += z;
      mean /= static_cast<double>(members.size());
      out.push_back({mean, static_cast<int>(members.size()), std::abs(source(mean))});
    }
    return RootSet(std::move(out));
  }

  const std::vector<Root>& roots() const { return r_; }
  std::size_t size() const { return r_.size(); }
  bool empty() const { return r_.empty(); }
  auto begin() const { return r_.begin(); }
  auto end() const { return r_.end(); }
  const Root& operator[](std::size_t i) const { return r_[i]; }

  int total_multiplicity() const {
    int m = 0;
    for (const auto& r : r_) m += r.multiplicity;
    return m;
  }

  /// Values repeated according to multiplicity.
  std::vector<Complex> expanded() const {
    std::vector<Complex> v;
    for (const auto& r : r_) v.insert(v.end(), static_cast<std::size_t>(r.multiplicity), r.value);
    return v;
  }

  double max_residual() const {
    double m = 0.0;
    for (const auto& r : r_) m = std::max(m, r.residual);
    return m;
  }

private:
  void sort() {
    std::stable_sort(r_.begin(), r_.end(), [](const Root& a, const Root& b) { return complex_less(a.value, b.value); });
  }

  std::vector<Root> r_;
};

} // namespace qpencil
