#include <qpencil/poly_core.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace qpencil;

namespace {

Complex random_disk(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    Complex z(u(gen), u(gen));
    if (std::abs(z) <= 1.0) return z;
  }
}

HomogPoly3 random_homog(std::mt19937_64& gen, int d) {
  HomogPoly3 F(d);
  for (int i = 0; i <= d; ++i)
    for (int j = 0; i + j <= d; ++j) F.add_term({i, j, d - i - j}, random_disk(gen));
  return F;
}

Poly2 random_poly2(std::mt19937_64& gen, int d) {
  Poly2 f;
  for (int i = 0; i <= d; ++i)
    for (int j = 0; i + j <= d; ++j) f.add_term(i, j, random_disk(gen));
  return f;
}

} // namespace

TEST(Poly1, HornerEvaluation) {
  const Poly1 p{Complex(-1), Complex(0), Complex(1)};
  EXPECT_EQ(eval_poly(p, Complex(2)), Complex(3));
  EXPECT_EQ(eval_poly(Poly1{}, Complex(5, 1)), Complex(0));
  const Poly1 worked{Complex(0), Complex(6), Complex(-7), Complex(0), Complex(1)};
  EXPECT_EQ(eval_poly(worked, Complex(-3)), Complex(0));
}

TEST(Poly1, TrailingZerosAreTrimmed) {
  const Poly1 p{Complex(1), Complex(2), Complex(0), Complex(0)};
  EXPECT_EQ(p.degree(), 1);
  EXPECT_TRUE(Poly1({Complex(0), Complex(0)}).is_zero());
  EXPECT_THROW(Poly1{}.degree(), DomainError);
}

TEST(Poly1, Derivative) {
  EXPECT_EQ(derivative(Poly1{Complex(0), Complex(0), Complex(0), Complex(1)}),
            (Poly1{Complex(0), Complex(0), Complex(3)}));
  EXPECT_TRUE(derivative(Poly1{Complex(7)}).is_zero());
  EXPECT_EQ(derivative(Poly1{Complex(0), Complex(6), Complex(-7), Complex(0), Complex(1)}),
            (Poly1{Complex(6), Complex(-14), Complex(0), Complex(4)}));
}

TEST(Poly1, ArithmeticAndFromRoots) {
  const std::vector<Complex> roots{Complex(1), Complex(-2), Complex(0, 1)};
  const Poly1 p = Poly1::from_roots(roots);
  EXPECT_EQ(p.degree(), 3);
  for (Complex r : roots) EXPECT_LT(std::abs(p(r)), 1e-14);
  const Poly1 a{Complex(1), Complex(1)}, b{Complex(-1), Complex(1)};
  EXPECT_EQ(a * b, (Poly1{Complex(-1), Complex(0), Complex(1)}));
  EXPECT_TRUE((a - a).is_zero());
}

TEST(Homogenize, CubicInNewFirstVariable) {
  // y^2 - x^3 + x in (x, y), new variable w first: w y^2 - x^3 + w^2 x.
  Poly2 f;
  f.add_term(0, 2, Complex(1));
  f.add_term(3, 0, Complex(-1));
  f.add_term(1, 0, Complex(1));
  const HomogPoly3 F = homogenize(f, 3, 0);
  HomogPoly3 expect(3);
  expect.add_term({1, 0, 2}, Complex(1));
  expect.add_term({0, 3, 0}, Complex(-1));
  expect.add_term({2, 1, 0}, Complex(1));
  EXPECT_EQ(F, expect);
  EXPECT_EQ(dehomogenize(F, 0), f);
}

TEST(Homogenize, ConstantAndParabola) {
  const HomogPoly3 w2 = homogenize(Poly2::constant(Complex(1)), 2, 2);
  EXPECT_EQ(w2.coeff({0, 0, 2}), Complex(1));
  EXPECT_EQ(w2.terms().size(), 1u);

  Poly2 f;
  f.add_term(0, 1, Complex(1));
  f.add_term(2, 0, Complex(-1));
  const HomogPoly3 F = homogenize(f, 2, 2);
  EXPECT_EQ(F.coeff({0, 1, 1}), Complex(1));
  EXPECT_EQ(F.coeff({2, 0, 0}), Complex(-1));
  EXPECT_EQ(dehomogenize(F, 2), f);
}

TEST(Homogenize, RejectsDegreeBelowPolynomial) {
  Poly2 f;
  f.add_term(3, 0, Complex(1));
  EXPECT_THROW(homogenize(f, 2, 2), DomainError);
}

TEST(Dehomogenize, ChartAtFirstVariable) {
  HomogPoly3 F(3);
  F.add_term({3, 0, 0}, Complex(1));
  EXPECT_EQ(dehomogenize(F, 0), Poly2::constant(Complex(1)));
}

TEST(HomogPoly3, RejectsWrongExponentSum) {
  HomogPoly3 F(3);
  EXPECT_THROW(F.add_term({1, 1, 0}, Complex(1)), DomainError);
}

TEST(HomogPoly3, PointsAtInfinityOfParabola) {
  HomogPoly3 F(2);
  F.add_term({0, 1, 1}, Complex(1));
  F.add_term({2, 0, 0}, Complex(-1));
  EXPECT_EQ(eval_homog(F, PlanePoint{Complex(1), Complex(1), Complex(1)}), Complex(0));
  EXPECT_EQ(eval_homog(F, PlanePoint{Complex(0), Complex(1), Complex(0)}), Complex(0));
}

TEST(HomogPoly3, PartialDerivativesMatchDifferences) {
  std::mt19937_64 gen(11);
  const HomogPoly3 F = random_homog(gen, 3);
  const std::array<Complex, 3> p{random_disk(gen), random_disk(gen), random_disk(gen)};
  const double h = 1e-6;
  for (int v = 0; v < 3; ++v) {
    auto plus = p, minus = p;
    plus[v] += h;
    minus[v] -= h;
    const Complex fd = (F(plus) - F(minus)) / (2.0 * h);
    EXPECT_LT(std::abs(fd - F.partial(v)(p)), 1e-8);
  }
}

TEST(Properties, HomogenizeRoundTrip) {
  std::mt19937_64 gen(1);
  for (int trial = 0; trial < 200; ++trial) {
    const int deg = 1 + trial % 4;
    const Poly2 f = random_poly2(gen, deg);
    for (int extra = 0; extra < 2; ++extra)
      for (int idx = 0; idx < 3; ++idx) EXPECT_EQ(dehomogenize(homogenize(f, deg + extra, idx), idx), f);
  }
}

TEST(Properties, Homogeneity) {
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 1 + trial % 5;
    const HomogPoly3 F = random_homog(gen, d);
    const std::array<Complex, 3> p{random_disk(gen), random_disk(gen), random_disk(gen)};
    const Complex s = 3.0 * random_disk(gen) + Complex(0.1);
    const std::array<Complex, 3> sp{s * p[0], s * p[1], s * p[2]};
    const Complex expect = ipow(s, d) * F(p);
    const double scale = std::max(std::abs(expect), F.magnitude_at(sp));
    EXPECT_LE(std::abs(F(sp) - expect), 1e-10 * std::max(scale, 1e-300));
  }
}

TEST(ProjPoint, CanonicalRepresentative) {
  const auto a = normalize_proj<3>({Complex(0), Complex(0), Complex(5)});
  EXPECT_EQ(a.coords(), (std::array<Complex, 3>{Complex(0), Complex(0), Complex(1)}));
  const auto b = normalize_proj<3>({Complex(0, 2), Complex(0), Complex(0)});
  EXPECT_EQ(b.coords(), (std::array<Complex, 3>{Complex(1), Complex(0), Complex(0)}));
  const auto c = normalize_proj<3>({Complex(3), Complex(4), Complex(0)});
  EXPECT_EQ(c.coords(), (std::array<Complex, 3>{Complex(0.75), Complex(1), Complex(0)}));
  EXPECT_TRUE(c.at_infinity());
  EXPECT_THROW(c.affine(), DomainError);
}

TEST(ProjPoint, TiesGoToLowestIndex) {
  const auto p = normalize_proj<2>({Complex(0, 1), Complex(1)});
  EXPECT_EQ(p.pivot(), 0u);
  EXPECT_EQ(p[0], Complex(1));
}

TEST(ProjPoint, RejectsZeroAndNonFinite) {
  EXPECT_THROW(normalize_proj<3>({Complex(0), Complex(0), Complex(0)}), DomainError);
  EXPECT_THROW(normalize_proj<2>({Complex(INFINITY), Complex(1)}), DomainError);
}

TEST(Properties, NormalizeIdempotentAndScaleInvariant) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::array<Complex, 3> raw{random_disk(gen), random_disk(gen), random_disk(gen)};
    const PlanePoint p(raw);
    EXPECT_EQ(PlanePoint(p.coords()).coords(), p.coords());
    Complex s = 10.0 * random_disk(gen);
    if (std::abs(s) < 1e-3) s = Complex(1);
    const PlanePoint q(std::array<Complex, 3>{s * raw[0], s * raw[1], s * raw[2]});
    EXPECT_TRUE(approx_equal(p, q));
  }
}

TEST(RootSet, ClusteringMergesNearbyValues) {
  const Poly1 p = Poly1::from_roots(std::vector<Complex>{Complex(1), Complex(1), Complex(2)});
  const std::vector<Complex> values{Complex(1 + 1e-9), Complex(1 - 1e-9), Complex(2)};
  const RootSet rs = RootSet::cluster(values, p);
  ASSERT_EQ(rs.size(), 2u);
  EXPECT_EQ(rs[0].multiplicity, 2);
  EXPECT_EQ(rs.total_multiplicity(), 3);
  EXPECT_EQ(rs.expanded().size(), 3u);
  EXPECT_LT(std::abs(rs[0].value - Complex(1)), 1e-12);
}
