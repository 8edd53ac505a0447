#pragma once

// Iterative reference root finder. Used as the arbiter for the closed-form
// solvers, so it deliberately shares nothing with them beyond poly_core.

#include <qpencil/error.hpp>
#include <qpencil/poly_core.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace qpencil {

struct OracleConfig {
  int max_iterations = 500;
  double convergence_tol = 1e-12;
  double cluster_tol = kClusterTolerance;
  std::uint64_t seed = 0;

  void validate() const {
    if (max_iterations < 1) throw DomainError("max_iterations must be at least 1");
    if (!(convergence_tol > 0.0) || !(cluster_tol > 0.0)) throw DomainError("oracle tolerances must be positive");
  }
};

/// Thrown when the simultaneous iteration does not settle; carries the best
/// iterate so callers can still inspect it.
class OracleNonConvergence : public NumericalError {
public:
  OracleNonConvergence(const std::string& what, RootSet best) : NumericalError(what), best_(std::move(best)) {}
  const RootSet& best_iterate() const { return best_; }

private:
  RootSet best_;
};

namespace detail {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

// Horner rounding-error bound for p(z); below it the residual is noise.
inline double horner_noise(const Poly1& p, Complex z) { return 8.0 * kEps * p.magnitude_at(z); }

inline double seeded_phase(std::uint64_t seed, int n) {
  std::mt19937_64 gen(seed);
  const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  return 0.25 + u * 2.0 * std::numbers::pi / n;
}

} // namespace detail

/// All roots of p by Aberth-Ehrlich simultaneous iteration.
///
/// Starting points lie equally spaced on the circle of radius
/// 1 + max|a_i / a_d|, rotated by a seed-dependent phase. Converged values
/// are clustered into multiplicities at cfg.cluster_tol. Output order is
/// by (Re, Im) and depends only on p and cfg.
inline RootSet find_roots_iterative(const Poly1& p, const OracleConfig& cfg = {}) {
  cfg.validate();
  if (p.is_zero()) throw DomainError("cannot find roots of the zero polynomial");
  const int n = p.degree();
  if (n < 1) throw DomainError("cannot find roots of a constant polynomial");
  if (n > 64) throw DomainError("oracle supports degree at most 64");

  const Poly1 dp = derivative(p);
  const Complex lead = p.leading();
  double ratio = 0.0;
  for (int i = 0; i < n; ++i) ratio = std::max(ratio, std::abs(p[i] / lead));
  const double radius = 1.0 + ratio;
  const double phase = detail::seeded_phase(cfg.seed, n);

  std::vector<Complex> z(n);
  for (int k = 0; k < n; ++k) z[k] = std::polar(radius, phase + 2.0 * std::numbers::pi * k / n);

  std::vector<char> done(n, 0);
  bool converged = false;
  for (int it = 0; it < cfg.max_iterations && !converged; ++it) {
    converged = true;
    for (int i = 0; i < n; ++i) {
      if (done[i]) continue;
      const Complex pz = p(z[i]);
      if (std::abs(pz) <= detail::horner_noise(p, z[i])) {
        done[i] = 1;
        continue;
      }
      const Complex newton = pz / dp(z[i]);
      Complex repulsion(0.0);
      for (int j = 0; j < n; ++j)
        if (j != i) repulsion += 1.0 / (z[i] - z[j]);
      Complex step = newton / (1.0 - newton * repulsion);
      if (!is_finite(step)) step = newton;
      if (!is_finite(step)) step = Complex(cfg.convergence_tol * (1.0 + std::abs(z[i])), 0.0);
      z[i] -= step;
      if (std::abs(step) <= cfg.convergence_tol * (1.0 + std::abs(z[i]))) done[i] = 1;
      else converged = false;
    }
  }

  RootSet result = RootSet::cluster(z, p, cfg.cluster_tol);
  if (!converged) throw OracleNonConvergence("root oracle did not converge", std::move(result));
  return result;
}

struct PolishResult {
  Complex value;
  bool derivative_underflow = false;
};

/// Newton refinement of a single root. Never returns a point with a larger
/// residual than the input; stops when the residual stops decreasing.
inline PolishResult polish_root(const Poly1& p, Complex z0, int max_steps = 8) {
  const Poly1 dp = derivative(p);
  Complex z = z0;
  double best = std::abs(p(z));
  for (int k = 0; k < max_steps && best > 0.0; ++k) {
    const Complex d = dp(z);
    if (std::abs(d) <= detail::kEps * dp.magnitude_at(z)) return {z, k == 0};
    const Complex next = z - p(z) / d;
    const double r = std::abs(p(next));
    if (!(r < best)) break;
    z = next;
    best = r;
  }
  return {z, false};
}

namespace detail {

// Kuhn's augmenting paths on the bipartite graph allowed[i][j].
inline bool perfect_matching(const std::vector<std::vector<char>>& allowed) {
  const std::size_t n = allowed.size();
  std::vector<int> match(n, -1);
  std::vector<char> seen;
  auto augment = [&](auto&& self, std::size_t i) -> bool {
    for (std::size_t j = 0; j < n; ++j) {
      if (!allowed[i][j] || seen[j]) continue;
      seen[j] = 1;
      if (match[j] < 0 || self(self, static_cast<std::size_t>(match[j]))) {
        match[j] = static_cast<int>(i);
        return true;
      }
    }
    return false;
  };
  for (std::size_t i = 0; i < n; ++i) {
    seen.assign(n, 0);
    if (!augment(augment, i)) return false;
  }
  return true;
}

} // namespace detail

/// Smallest t such that the expanded multisets can be paired with every
/// pair closer than t (bottleneck assignment). Infinity on size mismatch.
inline double max_root_deviation(const RootSet& a, const RootSet& b) {
  const auto va = a.expanded();
  const auto vb = b.expanded();
  if (va.size() != vb.size()) return std::numeric_limits<double>::infinity();
  const std::size_t n = va.size();
  if (n == 0) return 0.0;
  std::vector<double> dist(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = std::abs(va[i] - vb[j]);
  std::vector<double> levels(dist);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  auto feasible = [&](double t) {
    std::vector<std::vector<char>> allowed(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) allowed[i][j] = dist[i * n + j] <= t;
    return detail::perfect_matching(allowed);
  };
  std::size_t lo = 0, hi = levels.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (feasible(levels[mid])) hi = mid;
    else lo = mid + 1;
  }
  return levels[lo];
}

/// True iff the multiplicity-expanded root lists admit a bijection pairing
/// every value with one within `tol`.
inline bool roots_match(const RootSet& a, const RootSet& b, double tol) {
  const auto va = a.expanded();
  const auto vb = b.expanded();
  if (va.size() != vb.size()) return false;
  const std::size_t n = va.size();
  std::vector<std::vector<char>> allowed(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) allowed[i][j] = std::abs(va[i] - vb[j]) <= tol;
  return detail::perfect_matching(allowed);
}

} // namespace qpencil
