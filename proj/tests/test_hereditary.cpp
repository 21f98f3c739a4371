#include <gtest/gtest.h>

#include <numbers>

#include "cartan/hereditary.hpp"
#include "support.hpp"

namespace cartan {
namespace {

using HP = HereditaryPolynomial;
using testing::diagonal_tuple;
using testing::lu_determinant;

DomainDescriptor D(std::string_view s) { return DomainDescriptor::parse(s); }

HP one_minus_zw(std::size_t n, std::size_t i) { return HP::constant(n, 1.0) - HP::z(n, i) * HP::w(n, i); }

TEST(Polynomial, NoZeroCoefficientsStored) {
  HP p = HP::z(2, 0) - HP::z(2, 0);
  EXPECT_TRUE(p.is_zero());
  p = HP::z(2, 0) * 0.0;
  EXPECT_TRUE(p.is_zero());
  EXPECT_EQ((HP::z(2, 0) + HP::w(2, 1)).terms().size(), 2u);
}

TEST(Polynomial, ArityChecks) {
  EXPECT_THROW(HP::z(2, 0) + HP::z(3, 0), Error);
  EXPECT_THROW(HP::monomial({1}, {0, 1}, 1.0), Error);
}

TEST(Polynomial, Printing) {
  EXPECT_EQ(one_minus_zw(1, 0).to_string({"1"}), "1 - z1w1");
  EXPECT_EQ(HP(2).to_string(), "0");
  EXPECT_EQ((HP::z(2, 1) * HP::w(2, 0) * 2.0).to_string({"a", "b"}), "2*zbwa");
}

TEST(Evaluate, UnitaryIsometryDefectVanishes) {
  const auto u = haar_unitary(4, 11);
  const std::vector<ComplexMatrix> t{u};
  EXPECT_LT(evaluate(one_minus_zw(1, 0), t).max_abs(), 1e-13);
}

TEST(Evaluate, StarsOnTheLeft) {
  const std::vector<ComplexMatrix> t{testing::jordan_block2()};
  const auto s = t[0];
  EXPECT_EQ(evaluate(HP::z(1, 0) * HP::w(1, 0), t), s.adjoint() * s);
  EXPECT_NE(evaluate(HP::z(1, 0) * HP::w(1, 0), t), s * s.adjoint());
}

TEST(Evaluate, JordanBlockSquareDefect) {
  const std::vector<ComplexMatrix> t{testing::jordan_block2()};
  const auto p = one_minus_zw(1, 0) * one_minus_zw(1, 0);
  const auto v = evaluate(p, t);
  EXPECT_EQ(v, (ComplexMatrix{{-1.0, 0.0}, {0.0, 1.0}}));
  EXPECT_FALSE(is_psd(v, 1e-12));
}

TEST(Evaluate, SphericalOnDiagonalShilovTuple) {
  const auto d = D("IV(3)");
  const auto set = identity_set(d);
  const auto t = diagonal_tuple(sample_shilov(d, 6, 3));
  for (const auto& c : set.constraints) {
    auto v = evaluate(c.poly, t);
    v -= ComplexMatrix::identity(6) * c.target;
    EXPECT_LT(v.max_abs(), 1e-13) << c.label;
  }
}

TEST(Evaluate, Errors) {
  Rng rng(4);
  const std::vector<ComplexMatrix> t{testing::random_matrix(3, 3, rng), testing::random_matrix(3, 3, rng)};
  EXPECT_THROW(evaluate(HP::z(2, 0), t), Error);
  try {
    evaluate(HP::z(2, 0), t);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotCommuting);
  }
  const std::vector<ComplexMatrix> one{ComplexMatrix::identity(2)};
  try {
    evaluate(HP::z(2, 0), one);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ArityMismatch);
  }
  try {
    evaluate(HP::monomial({40}, {30}, 1.0), one);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CapExceeded);
  }
}

TEST(Evaluate, Linearity) {
  Rng rng(8);
  const auto t = diagonal_tuple(sample_shilov(D("I(1,3)"), 4, 2));
  // conjugate by a unitary so the tuple is not diagonal
  const auto u = haar_unitary(4, rng);
  std::vector<ComplexMatrix> c;
  for (const auto& m : t) c.push_back(u * m * u.adjoint());
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = testing::random_hereditary(3, 6, 2, rng);
    const auto q = testing::random_hereditary(3, 6, 2, rng);
    const Complex a = complex_normal(rng), b = complex_normal(rng);
    auto lhs = evaluate(p * a + q * b, c);
    lhs -= evaluate(p, c) * a + evaluate(q, c) * b;
    EXPECT_LT(lhs.max_abs(), 1e-12);
  }
}

TEST(Evaluate, DiagonalConsistency) {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<FlatPoint> pts;
    for (int j = 0; j < 5; ++j) {
      FlatPoint z(3);
      for (auto& x : z) x = complex_normal(rng) * 0.7;
      pts.push_back(z);
    }
    const auto t = diagonal_tuple(pts);
    const auto p = testing::random_hereditary(3, 8, 3, rng);
    const auto v = evaluate(p, t);
    for (std::size_t j = 0; j < pts.size(); ++j) {
      EXPECT_LT(std::abs(v(j, j) - scalar_eval(p, pts[j])), 1e-11);
      for (std::size_t k = 0; k < pts.size(); ++k)
        if (k != j) {
          EXPECT_EQ(v(j, k), Complex{});
        }
    }
  }
}

TEST(ScalarEval, Examples) {
  const double th = 0.7;
  const FlatPoint z1{std::polar(1.0, th)};
  EXPECT_LT(std::abs(scalar_eval(one_minus_zw(1, 0), z1)), 1e-15);
  const auto p = HP::z(2, 1) * HP::w(2, 0) - HP::z(2, 0) * HP::w(2, 1);
  const FlatPoint x{std::polar(0.3, th), std::polar(-0.8, th)};
  EXPECT_LT(std::abs(scalar_eval(p, x)), 1e-15);
  EXPECT_THROW(scalar_eval(p, z1), Error);
}

TEST(ScalarEval, AgreesWithOneByOneTuple) {
  Rng rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = testing::random_hereditary(3, 10, 3, rng);
    FlatPoint z(3);
    for (auto& x : z) x = complex_normal(rng);
    std::vector<ComplexMatrix> t;
    for (auto x : z) t.push_back(ComplexMatrix(1, 1, x));
    const Complex a = scalar_eval(p, z);
    EXPECT_LT(std::abs(evaluate(p, t)(0, 0) - a), 1e-10 * std::max(1.0, std::abs(a)));
  }
}

TEST(IdentitySet, SmallFactors) {
  const auto iv1 = identity_set(D("IV(1)"));
  ASSERT_EQ(iv1.constraints.size(), 1u);
  EXPECT_EQ(iv1.constraints[0].poly, one_minus_zw(1, 0));

  const auto i13 = identity_set(D("I(1,3)"));
  ASSERT_EQ(i13.constraints.size(), 1u);
  HP sph = HP::constant(3, 1.0);
  for (std::size_t i = 0; i < 3; ++i) sph -= HP::z(3, i) * HP::w(3, i);
  EXPECT_EQ(i13.constraints[0].poly, sph);
  EXPECT_EQ(i13.constraints[0].target, Complex{});

  EXPECT_EQ(identity_set(D("IV(4)")).constraints.size(), 1u + 6u);
  EXPECT_EQ(identity_set(D("I(2,3)")).constraints.size(), 3u);
  EXPECT_EQ(identity_set(D("II(3)")).constraints.size(), 6u);
  EXPECT_EQ(identity_set(D("III(4)")).constraints.size(), 10u);
  EXPECT_EQ(identity_set(D("III(5)")).constraints.size(), 6u);
  EXPECT_EQ(identity_set(D("I(2,2)xIV(3)")).constraints.size(), 3u + 4u);
  EXPECT_EQ(identity_set(D("I(2,2)xIV(3)")).nvars, 7u);
}

TEST(IdentitySet, TypeIIIOddTargets) {
  const auto set = identity_set(D("III(3)"));
  const std::vector<double> expected{0, 1, -2, 1};
  ASSERT_EQ(set.constraints.size(), 4u);
  for (std::size_t m = 0; m < 4; ++m) EXPECT_EQ(set.constraints[m].target, Complex(expected[m]));
  // q_2 = -2 sum_{i<j} z_ij w_ij, forcing sum S_ij* S_ij = p I with p = 1
  HP tr(3);
  for (std::size_t i = 0; i < 3; ++i) tr -= HP::z(3, i) * HP::w(3, i) * 2.0;
  EXPECT_EQ(set.constraints[2].poly, tr);

  const auto five = identity_set(D("III(5)"));
  const std::vector<double> t5{0, 1, -4, 6, -4, 1};
  for (std::size_t m = 0; m < 6; ++m) EXPECT_EQ(five.constraints[m].target, Complex(t5[m]));
}

TEST(IdentitySet, TypeIIHasSymmetricSubstitution) {
  // II(2): variables z11, z12, z22; row (1,2) constraint is -(z11 w12 + z12 w22)
  const auto set = identity_set(D("II(2)"));
  ASSERT_EQ(set.constraints.size(), 3u);
  const HP expected = (HP::z(3, 0) * HP::w(3, 1) + HP::z(3, 1) * HP::w(3, 2)) * -1.0;
  EXPECT_EQ(set.constraints[1].poly, expected);
}

TEST(IdentitySet, TypeIIIEvenSkipsDiagonal) {
  // III(2): single variable z12; Z Z* = |z12|^2 I
  const auto set = identity_set(D("III(2)"));
  ASSERT_EQ(set.constraints.size(), 3u);
  EXPECT_EQ(set.constraints[0].poly, one_minus_zw(1, 0));
  EXPECT_TRUE(set.constraints[1].poly.is_zero());
  EXPECT_EQ(set.constraints[2].poly, one_minus_zw(1, 0));
}

// The identity set cuts out exactly the Shilov boundary among scalar points.
TEST(IdentitySet, ScalarCompleteness) {
  const char* descs[] = {"IV(1)",  "IV(2)",  "IV(3)",  "IV(5)",  "I(1,1)", "I(1,3)", "I(2,2)", "I(2,3)",
                         "I(3,3)", "II(1)",  "II(2)",  "II(3)",  "III(2)", "III(3)", "III(4)", "III(5)",
                         "III(6)", "III(7)", "I(1,2)xIV(2)"};
  for (const char* s : descs) {
    const auto d = D(s);
    const auto set = identity_set(d);
    const int count = d.dimension() > 15 ? 3 : 300;
    const auto pts = sample_shilov(d, static_cast<std::size_t>(count), 77);
    for (const auto& z : pts) {
      ASSERT_TRUE(on_shilov(d, z, 1e-9)) << s;
      ASSERT_LT(scalar_identity_residual(set, z), 1e-9) << s;
      const auto off = perturb_off_shilov(d, z, 0.9, 1e-9);
      ASSERT_FALSE(on_shilov(d, off, 1e-9)) << s;
      ASSERT_GT(scalar_identity_residual(set, off), 1e-3) << s;
    }
  }
}

TEST(Charpoly, CapAndShape) {
  EXPECT_THROW(charpoly_coeffs(4), Error);
  EXPECT_THROW(charpoly_coeffs(0), Error);
  const auto q = charpoly_coeffs(1);
  ASSERT_EQ(q.size(), 4u);
  EXPECT_EQ(q[3], HP::constant(3, 1.0));
  EXPECT_EQ(q[0].nvars(), 3u);
  EXPECT_EQ(charpoly_coeffs(2).front().nvars(), 10u);
}

TEST(Charpoly, StandardFormGivesLambdaTimesSquare) {
  const auto q = charpoly_coeffs(1);
  const auto k = flatten(Factor::type_iii(3), standard_antisymmetric(3));
  const std::vector<double> expected{0, 1, -2, 1};
  for (std::size_t m = 0; m < 4; ++m) EXPECT_LT(std::abs(scalar_eval(q[m], k) - expected[m]), 1e-14);
}

class CharpolyOracle : public ::testing::TestWithParam<int> {};

TEST_P(CharpolyOracle, MatchesNumericDeterminant) {
  const int p = GetParam();
  const std::size_t n = static_cast<std::size_t>(2 * p + 1);
  const auto q = charpoly_coeffs(p);
  Rng rng(100 + static_cast<unsigned>(p));
  const auto f = Factor::type_iii(static_cast<int>(n));
  for (int trial = 0; trial < 5; ++trial) {
    const auto z = testing::random_antisymmetric(n, rng);
    const auto zz = z.adjoint() * z;
    const auto flat = flatten(f, z);
    std::vector<Complex> coeffs;
    for (const auto& qm : q) {
      coeffs.push_back(scalar_eval(qm, flat));
      EXPECT_LT(std::abs(coeffs.back().imag()), 1e-9 * std::max(1.0, std::abs(coeffs.back())));
    }
    for (double lambda : {-1.3, -0.2, 0.5, 1.7, 3.1}) {
      Complex poly{};
      for (std::size_t m = coeffs.size(); m-- > 0;) poly = poly * lambda + coeffs[m];
      auto a = ComplexMatrix::identity(n) * Complex(lambda);
      a -= zz;
      const Complex det = lu_determinant(a);
      EXPECT_LT(std::abs(poly - det), 1e-9 * std::max(1.0, std::abs(det))) << "lambda " << lambda;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Small, CharpolyOracle, ::testing::Values(1, 2, 3));

TEST(Charpoly, ScaledTupleIsSpherical) {
  for (int p : {1, 2}) {
    const auto d = D("III(" + std::to_string(2 * p + 1) + ")");
    const auto set = identity_set(d);
    const auto t = diagonal_tuple(sample_shilov(d, 5, 12));
    for (const auto& c : set.constraints) {
      auto v = evaluate(c.poly, t);
      v -= ComplexMatrix::identity(5) * c.target;
      ASSERT_LT(v.max_abs() / std::max(1.0, std::abs(c.target)), 1e-9) << c.label;
    }
    std::vector<ComplexMatrix> scaled;
    for (const auto& m : t) scaled.push_back(m * Complex(1.0 / std::sqrt(p)));
    HP sph = HP::constant(d.dimension(), 1.0);
    for (std::size_t i = 0; i < d.dimension(); ++i) sph -= HP::z(d.dimension(), i) * HP::w(d.dimension(), i);
    EXPECT_LT(evaluate(sph, scaled).max_abs(), 1e-12);
  }
}

TEST(Positivity, UnitaryPasses) {
  const std::vector<ComplexMatrix> t{haar_unitary(3, 1), ComplexMatrix::identity(3)};
  const auto r = positivity_certificate(t, 3);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.entries.size(), 16u);
}

TEST(Positivity, JordanBlockFailsAtTwo) {
  const std::vector<ComplexMatrix> t{testing::jordan_block2()};
  const auto r = positivity_certificate(t, 2);
  EXPECT_FALSE(r.pass);
  ASSERT_EQ(r.entries.size(), 3u);
  EXPECT_TRUE(r.entries[0].psd);
  EXPECT_TRUE(r.entries[1].psd);
  EXPECT_FALSE(r.entries[2].psd);
  EXPECT_NEAR(r.entries[2].min_eigenvalue, -1.0, 1e-14);
}

TEST(Positivity, CompressionOfNormalPasses) {
  const auto d = D("I(2,2)");
  const auto t = diagonal_tuple(sample_shilov(d, 6, 5));
  // invariant subspace of a diagonal tuple: span of coordinate vectors e0, e2, e5
  ComplexMatrix b(6, 3);
  b(0, 0) = b(2, 1) = b(5, 2) = 1.0;
  const auto u = haar_unitary(6, 6);
  std::vector<ComplexMatrix> comp;
  for (const auto& m : t) {
    const auto n = u * m * u.adjoint();
    const auto bb = u * b;
    comp.push_back(bb.adjoint() * n * bb);
  }
  const auto r = positivity_certificate(comp, 3);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.entries.size(), 256u);
}

TEST(Positivity, Errors) {
  const std::vector<ComplexMatrix> big{ComplexMatrix::identity(2) * Complex(1.5)};
  try {
    positivity_certificate(big, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotContraction);
  }
  Rng rng(3);
  auto a = testing::random_matrix(3, 3, rng);
  auto b = testing::random_matrix(3, 3, rng);
  a *= Complex(0.1);
  b *= Complex(0.1);
  const std::vector<ComplexMatrix> nc{a, b};
  try {
    positivity_certificate(nc, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotCommuting);
  }
}

}  // namespace
}  // namespace cartan
