#include <qpencil/closed_form.hpp>
#include <qpencil/conic_pencil.hpp>
#include <qpencil/root_oracle.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace qpencil;

namespace {

RootSet exact(std::vector<Complex> values) {
  std::vector<Root> r;
  for (Complex z : values) r.push_back({z, 1, 0.0});
  return RootSet(std::move(r));
}

Complex random_disk(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    Complex z(u(gen), u(gen));
    if (std::abs(z) <= 1.0) return z;
  }
}

const DepressedQuartic kWorked{Complex(-7), Complex(6), Complex(0), Complex(0)};

bool contains_affine(const std::vector<PlanePointWithMultiplicity>& pts, Complex u, Complex v) {
  const PlanePoint target{u, v, Complex(1)};
  for (const auto& p : pts)
    if (approx_equal(p.point, target, 1e-9)) return true;
  return false;
}

// Symmetrized product (l m^T + m l^T) / 2.
Mat3 line_product(const Line& l, const Line& m) {
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = 0.5 * (l[i] * m[j] + m[i] * l[j]);
  return out;
}

bool proportional(const Mat3& a, const Mat3& b, double tol) {
  int bi = 0, bj = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (std::abs(a[i][j]) > std::abs(a[bi][bj])) {
        bi = i;
        bj = j;
      }
  if (b[bi][bj] == Complex(0.0)) return false;
  const Complex s = a[bi][bj] / b[bi][bj];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (std::abs(a[i][j] - s * b[i][j]) > tol * std::abs(a[bi][bj])) return false;
  return true;
}

} // namespace

TEST(QuarticToPencil, WorkedExampleIsPencilOne) {
  const PencilOfConics pc = quartic_to_pencil(kWorked);
  // y^2 - 7yz + 6xz with (u, v, w) = (x, y, z)
  HomogPoly3 c1(2);
  c1.add_term({0, 2, 0}, Complex(1));
  c1.add_term({0, 1, 1}, Complex(-7));
  c1.add_term({1, 0, 1}, Complex(6));
  HomogPoly3 c2(2);
  c2.add_term({0, 1, 1}, Complex(1));
  c2.add_term({2, 0, 0}, Complex(-1));
  EXPECT_EQ(pc.c1.to_poly(), c1);
  EXPECT_EQ(pc.c2.to_poly(), c2);
}

TEST(QuarticToPencil, ZeroQuartic) {
  const PencilOfConics pc = quartic_to_pencil({Complex(0), Complex(0), Complex(0), Complex(0)});
  HomogPoly3 v2(2);
  v2.add_term({0, 2, 0}, Complex(1));
  EXPECT_EQ(pc.c1.to_poly(), v2);
}

TEST(QuarticToPencil, AffineMemberMatchesSystem) {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 100; ++trial) {
    const DepressedQuartic dq{random_disk(gen), random_disk(gen), random_disk(gen), Complex(0)};
    const PencilOfConics pc = quartic_to_pencil(dq);
    const Complex lambda = random_disk(gen), u = random_disk(gen), v = random_disk(gen);
    const Complex expect = v * v + (dq.p + lambda) * v - lambda * u * u + dq.q * u + dq.r;
    EXPECT_LT(std::abs(pencil_member(pc, Complex(1), lambda)(std::array<Complex, 3>{u, v, Complex(1)}) - expect), 1e-14);
    EXPECT_EQ(pencil_member(pc, Complex(1), Complex(0)).upper(), pc.c1.upper());
  }
}

TEST(PencilMember, Endpoints) {
  const PencilOfConics pc = quartic_to_pencil(kWorked);
  EXPECT_EQ(pencil_member(pc, PencilParam{Complex(1), Complex(0)}).upper(), pc.c1.upper());
  EXPECT_EQ(pencil_member(pc, PencilParam{Complex(0), Complex(1)}).upper(), pc.c2.upper());
}

TEST(PencilMember, WorkedExampleAtLambdaOne) {
  const Conic m = pencil_member(quartic_to_pencil(kWorked), PencilParam{Complex(1), Complex(1)});
  HomogPoly3 expect(2);
  expect.add_term({0, 2, 0}, Complex(1));
  expect.add_term({0, 1, 1}, Complex(-6));
  expect.add_term({1, 0, 1}, Complex(6));
  expect.add_term({2, 0, 0}, Complex(-1));
  EXPECT_EQ(m.to_poly(), expect);
  EXPECT_EQ(m.rank(), 2);
}

TEST(SingularMembers, WorkedExampleLambdas) {
  const SingularMembers sm = singular_members(quartic_to_pencil(kWorked));
  std::vector<Complex> lambdas;
  for (const auto& m : sm.members) {
    ASSERT_TRUE(m.lambda.has_value());
    lambdas.push_back(*m.lambda);
    EXPECT_LE(m.conic.rank(), 2);
  }
  EXPECT_TRUE(roots_match(exact(lambdas), exact({Complex(1), Complex(4), Complex(9)}), 1e-12));
}

TEST(SingularMembers, FirstSpanningConicSingular) {
  // c1 = u^2 - v^2 has rank 2; c2 = identity is generic.
  const Conic c1({Complex(1), Complex(0), Complex(0), Complex(-1), Complex(0), Complex(0)});
  const Conic c2({Complex(1), Complex(0), Complex(0), Complex(1), Complex(0), Complex(1)});
  const SingularMembers sm = singular_members({c1, c2});
  bool found = false;
  for (const auto& m : sm.members)
    if (m.lambda && std::abs(*m.lambda) < 1e-12) found = true;
  EXPECT_TRUE(found);
}

TEST(SingularMembers, ZeroQuarticTripleRoot) {
  const SingularMembers sm = singular_members(quartic_to_pencil({Complex(0), Complex(0), Complex(0), Complex(0)}));
  ASSERT_EQ(sm.members.size(), 1u);
  EXPECT_EQ(sm.members[0].multiplicity, 3);
  EXPECT_LT(std::abs(*sm.members[0].lambda), 1e-12);
  EXPECT_EQ(sm.binary_cubic[3], Complex(0.25));
}

TEST(SingularMembers, MemberAtInfinity) {
  // c2 = u^2 - v^2 is singular, so [0 : 1] is a root of the determinant cubic.
  const Conic c1({Complex(1), Complex(0), Complex(0), Complex(1), Complex(0), Complex(1)});
  const Conic c2({Complex(1), Complex(0), Complex(0), Complex(-1), Complex(0), Complex(0)});
  const SingularMembers sm = singular_members({c1, c2});
  bool at_infinity = false;
  for (const auto& m : sm.members)
    if (!m.lambda) at_infinity = true;
  EXPECT_TRUE(at_infinity);
}

TEST(SingularMembers, RejectsIdenticallySingularPencil) {
  const Conic c1({Complex(1), Complex(0), Complex(0), Complex(0), Complex(0), Complex(0)});
  const Conic c2({Complex(0), Complex(0), Complex(0), Complex(1), Complex(0), Complex(0)});
  EXPECT_THROW(singular_members({c1, c2}), DomainError);
}

TEST(SplitConic, DifferenceOfSquares) {
  const Conic c({Complex(1), Complex(0), Complex(0), Complex(-1), Complex(0), Complex(0)});
  const auto [a, b] = split_degenerate_conic(c);
  const Line uv(Complex(1), Complex(-1), Complex(0)), upv(Complex(1), Complex(1), Complex(0));
  EXPECT_TRUE((approx_equal(a, uv) && approx_equal(b, upv)) || (approx_equal(a, upv) && approx_equal(b, uv)));
}

TEST(SplitConic, WorkedExampleLines) {
  const Conic m = pencil_member(quartic_to_pencil(kWorked), Complex(1), Complex(1));
  const auto [a, b] = split_degenerate_conic(m);
  // (y - 3) + (x - 3) and (y - 3) - (x - 3) on z = 1.
  const Line plus(Complex(1), Complex(1), Complex(-6)), minus(Complex(-1), Complex(1), Complex(0));
  EXPECT_TRUE((approx_equal(a, plus) && approx_equal(b, minus)) || (approx_equal(a, minus) && approx_equal(b, plus)));
}

TEST(SplitConic, DoubleLine) {
  const Conic c({Complex(0), Complex(0), Complex(0), Complex(1), Complex(0), Complex(0)});
  EXPECT_EQ(c.rank(), 1);
  const auto [a, b] = split_degenerate_conic(c);
  EXPECT_TRUE(approx_equal(a, Line(Complex(0), Complex(1), Complex(0))));
  EXPECT_TRUE(approx_equal(a, b));
}

TEST(SplitConic, RejectsFullRank) {
  const Conic c({Complex(1), Complex(0), Complex(0), Complex(1), Complex(0), Complex(1)});
  EXPECT_THROW(split_degenerate_conic(c), NumericalError);
}

TEST(Properties, LinePairReconstruction) {
  std::mt19937_64 gen(32);
  for (int trial = 0; trial < 500; ++trial) {
    const Line l(random_disk(gen), random_disk(gen), random_disk(gen));
    const Line m(random_disk(gen), random_disk(gen), random_disk(gen));
    const Conic c = Conic::from_matrix(line_product(l, m));
    const auto [a, b] = split_degenerate_conic(c);
    EXPECT_TRUE(proportional(c.matrix(), line_product(a, b), 1e-9)) << "trial " << trial;
  }
}

TEST(IntersectLineConic, DiagonalWithParabola) {
  const Conic parabola = quartic_to_pencil(kWorked).c2;
  const auto pts = intersect_line_conic(Line(Complex(-1), Complex(1), Complex(0)), parabola);
  EXPECT_TRUE(contains_affine(pts, Complex(0), Complex(0)));
  EXPECT_TRUE(contains_affine(pts, Complex(1), Complex(1)));
}

TEST(IntersectLineConic, WorkedExampleLines) {
  const Conic parabola = quartic_to_pencil(kWorked).c2;
  const auto plus = intersect_line_conic(Line(Complex(1), Complex(1), Complex(-6)), parabola);
  EXPECT_TRUE(contains_affine(plus, Complex(2), Complex(4)));
  EXPECT_TRUE(contains_affine(plus, Complex(-3), Complex(9)));
  const auto minus = intersect_line_conic(Line(Complex(-1), Complex(1), Complex(0)), parabola);
  EXPECT_TRUE(contains_affine(minus, Complex(0), Complex(0)));
  EXPECT_TRUE(contains_affine(minus, Complex(1), Complex(1)));
}

TEST(IntersectLineConic, TangentLineHasMultiplicityTwo) {
  const Conic parabola = quartic_to_pencil(kWorked).c2;
  // y = 2x - 1 touches y = x^2 at (1, 1).
  const auto pts = intersect_line_conic(Line(Complex(2), Complex(-1), Complex(-1)), parabola);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0].multiplicity, 2);
}

TEST(IntersectLineConic, RejectsContainedLine) {
  const Conic c({Complex(1), Complex(0), Complex(0), Complex(-1), Complex(0), Complex(0)});
  EXPECT_THROW(intersect_line_conic(Line(Complex(1), Complex(-1), Complex(0)), c), DomainError);
}

TEST(BasePoints, WorkedExample) {
  const auto pts = base_points(quartic_to_pencil(kWorked));
  ASSERT_EQ(pts.size(), 4u);
  for (auto [u, v] : {std::pair{0.0, 0.0}, {1.0, 1.0}, {2.0, 4.0}, {-3.0, 9.0}})
    EXPECT_TRUE(contains_affine(pts, Complex(u), Complex(v)));
}

TEST(BasePoints, Biquadratic) {
  const auto pts = base_points(quartic_to_pencil({Complex(-5), Complex(0), Complex(4), Complex(0)}));
  ASSERT_EQ(pts.size(), 4u);
  for (auto [u, v] : {std::pair{1.0, 1.0}, {-1.0, 1.0}, {2.0, 4.0}, {-2.0, 4.0}})
    EXPECT_TRUE(contains_affine(pts, Complex(u), Complex(v)));
}

TEST(BasePoints, EverySingularMemberGivesSameSet) {
  const PencilOfConics pc = quartic_to_pencil(kWorked);
  const auto reference = base_points(pc);
  for (const auto& m : singular_members(pc).members) {
    const auto pts = base_points_from_member(pc, m);
    ASSERT_EQ(pts.size(), reference.size());
    for (const auto& p : pts) {
      const auto a = p.point.affine();
      EXPECT_TRUE(contains_affine(reference, a[0], a[1]));
    }
  }
}

TEST(Properties, BasePointMembership) {
  std::mt19937_64 gen(33);
  for (int trial = 0; trial < 200; ++trial) {
    const DepressedQuartic dq{random_disk(gen), random_disk(gen), random_disk(gen), Complex(0)};
    const PencilOfConics pc = quartic_to_pencil(dq);
    const auto pts = base_points(pc);
    int total = 0;
    for (const auto& p : pts) total += p.multiplicity;
    EXPECT_EQ(total, 4);
    for (int k = 0; k < 10; ++k) {
      const Conic m = pencil_member(pc, random_disk(gen), random_disk(gen));
      for (const auto& p : pts) EXPECT_LE(std::abs(m(p.point)), 1e-8 * std::max(1.0, m.norm()));
    }
  }
}

TEST(Properties, DeterminantResolventIdentity) {
  std::mt19937_64 gen(34);
  for (int trial = 0; trial < 300; ++trial) {
    const DepressedQuartic dq{random_disk(gen), random_disk(gen), random_disk(gen), Complex(0)};
    const auto k = determinant_binary_cubic(quartic_to_pencil(dq));
    const Poly1 res = resolvent_cubic(dq);
    for (int i = 0; i < 4; ++i)
      EXPECT_LE(std::abs(4.0 * k[i] - res[i]), 1e-12 * std::max(1.0, std::abs(res[i])));
  }
}

TEST(Properties, ThreeSingularMembersForDistinctResolventRoots) {
  std::mt19937_64 gen(35);
  for (int trial = 0; trial < 200; ++trial) {
    const DepressedQuartic dq{random_disk(gen), random_disk(gen), random_disk(gen), Complex(0)};
    EXPECT_EQ(singular_members(quartic_to_pencil(dq)).members.size(), 3u);
  }
}

TEST(ViaPencil, WorkedExample) {
  EXPECT_TRUE(roots_match(solve_quartic_via_pencil(kWorked), exact({Complex(0), Complex(1), Complex(2), Complex(-3)}),
                          1e-12));
}

TEST(ViaPencil, AllRootsEqual) {
  // (x - 1)^4 depresses to u^4.
  const DepressedQuartic dq = depress_quartic({Complex(-4), Complex(6), Complex(-4), Complex(1)});
  const RootSet rs = solve_quartic_via_pencil(dq);
  EXPECT_EQ(rs.total_multiplicity(), 4);
  EXPECT_TRUE(roots_match(rs, exact({Complex(0), Complex(0), Complex(0), Complex(0)}), 1e-12));
}

TEST(Properties, PipelineEquivalence) {
  std::mt19937_64 gen(36);
  for (int trial = 0; trial < 1000; ++trial) {
    const DepressedQuartic dq{random_disk(gen), random_disk(gen), random_disk(gen), Complex(0)};
    const RootSet pencil = solve_quartic_via_pencil(dq);
    const RootSet formula = solve_depressed_quartic(dq);
    const RootSet oracle = find_roots_iterative(dq.polynomial());
    EXPECT_TRUE(roots_match(pencil, formula, 1e-8)) << "trial " << trial;
    EXPECT_TRUE(roots_match(pencil, oracle, 1e-8)) << "trial " << trial;
  }
}
