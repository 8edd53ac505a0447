#pragma once

// Published critical points of the default cubic pencil, stored at their
// printed precision (two significant digits), and the rule used to compare
// computed points against them.

#include <qpencil/cubic_pencil.hpp>
#include <qpencil/poly_core.hpp>

#include <cmath>
#include <optional>
#include <vector>

namespace qpencil {

struct ReferenceRow {
  int row;
  Complex x, y;
  /// Affine lambda for mu = 1; empty for the row with [mu : lambda] = [0 : 1].
  std::optional<Complex> lambda;
};

inline const std::vector<ReferenceRow>& reference_critical_points() {
  using C = Complex;
  static const std::vector<ReferenceRow> rows{
      {1, C(0), C(0), C(0)},
      {2, C(0), C(4.8), C(0.05)},
      {3, C(0), C(-3.8), C(0.35)},
      {4, C(-8.2), C(-6.2), C(7.8)},
      {5, C(1.0), C(-1.0), C(17)},
      {6, C(4.1, 11), C(-6.3, -0.016), C(20, 11)},
      {7, C(4.1, -11), C(-6.3, 0.016), C(20, -11)},
      {8, C(-0.5, -0.87), C(-1, -0.00046), C(15, -0.87)},
      {9, C(-0.5, 0.87), C(-1, 0.00046), C(15, 0.87)},
      {10, C(-16, 0.011), C(3.6, -110), C(0.0014, 0.011)},
      {11, C(-16, -0.011), C(3.6, 110), C(0.0014, -0.011)},
      {12, C(0), C(-1), std::nullopt},
  };
  return rows;
}

/// v rounded to `digits` significant digits.
inline double round_significant(double v, int digits) {
  if (v == 0.0 || !std::isfinite(v)) return v;
  const double e = std::floor(std::log10(std::abs(v))) - (digits - 1);
  const double unit = std::pow(10.0, e);
  return std::round(v / unit) * unit;
}

/// Real and imaginary parts each agree with the printed value after rounding
/// to `digits` significant digits. A printed zero part accepts values that
/// are negligible next to the whole number.
inline bool matches_printed(Complex computed, Complex printed, int digits = 2) {
  const double whole = std::max(1.0, std::abs(computed));
  auto part = [&](double c, double p) {
    if (p == 0.0) return std::abs(c) <= 1e-8 * whole;
    return std::abs(round_significant(c, digits) - p) <= 1e-9 * std::abs(p);
  };
  return part(computed.real(), printed.real()) && part(computed.imag(), printed.imag());
}

struct RowCheck {
  int row = 0;
  bool matched = false;
  std::optional<CriticalPointRecord> record;
};

/// Matches every reference row against the report: finite rows against
/// the affine search results, the [0 : 1] row against the mu = 0 stratum.
inline std::vector<RowCheck> check_reference_table(const CriticalPointReport& report) {
  std::vector<RowCheck> out;
  for (const auto& row : reference_critical_points()) {
    RowCheck rc{row.row, false, std::nullopt};
    const auto& pool = row.lambda ? report.affine : report.strata;
    for (const auto& rec : pool) {
      if (!matches_printed(rec.x, row.x) || !matches_printed(rec.y, row.y)) continue;
      if (row.lambda) {
        if (!rec.lambda || !matches_printed(*rec.lambda, *row.lambda)) continue;
      } else if (rec.lambda || rec.stratum != Stratum::MemberAtInfinity) {
        continue;
      }
      rc.matched = true;
      rc.record = rec;
      break;
    }
    out.push_back(rc);
  }
  return out;
}

} // namespace qpencil
