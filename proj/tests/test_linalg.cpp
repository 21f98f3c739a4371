#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>

#include "cartan/linalg.hpp"
#include "support.hpp"

namespace cartan {
namespace {

using testing::lu_determinant;
using testing::random_antisymmetric;
using testing::random_hermitian;
using testing::random_matrix;
using testing::unitarity_defect;

ComplexMatrix reconstruct(const HermitianEig& e) {
  ComplexVector d(e.values.begin(), e.values.end());
  return e.vectors * diag(d) * e.vectors.adjoint();
}

TEST(HermitianEig, IdentityHasUnitEigenvalues) {
  const auto e = hermitian_eig(ComplexMatrix::identity(3));
  for (double v : e.values) EXPECT_DOUBLE_EQ(v, 1.0);
  EXPECT_LT(unitarity_defect(e.vectors), 1e-14);
}

TEST(HermitianEig, TwoByTwoSwap) {
  const auto e = hermitian_eig(ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}});
  EXPECT_NEAR(e.values[0], -1.0, 1e-15);
  EXPECT_NEAR(e.values[1], 1.0, 1e-15);
}

TEST(HermitianEig, RandomReconstruction) {
  Rng rng(11);
  for (std::size_t n : {1u, 2u, 5u, 8u, 17u, 40u}) {
    const auto a = random_hermitian(n, rng);
    const auto e = hermitian_eig(a);
    EXPECT_LT((a - reconstruct(e)).frobenius_norm() / a.frobenius_norm(), 1e-12) << n;
    EXPECT_LT(unitarity_defect(e.vectors), 1e-12);
    EXPECT_TRUE(std::is_sorted(e.values.begin(), e.values.end()));
  }
}

TEST(HermitianEig, RejectsNonHermitian) {
  try {
    hermitian_eig(ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotHermitian);
  }
}

TEST(Svd, ZeroAndDiagonal) {
  const auto z = svd(ComplexMatrix(3, 2));
  for (double s : z.sigmas) EXPECT_EQ(s, 0.0);
  const auto d = svd(ComplexMatrix{{3.0, 0.0}, {0.0, 4.0}});
  EXPECT_NEAR(d.sigmas[0], 4.0, 1e-15);
  EXPECT_NEAR(d.sigmas[1], 3.0, 1e-15);
}

TEST(Svd, RandomReconstructionAllShapes) {
  Rng rng(3);
  for (auto [m, n] : {std::pair{5u, 7u}, {7u, 5u}, {6u, 6u}, {1u, 4u}, {4u, 1u}}) {
    const auto a = random_matrix(m, n, rng);
    const auto s = svd(a);
    ComplexMatrix sigma(m, n);
    for (std::size_t k = 0; k < s.sigmas.size(); ++k) sigma(k, k) = s.sigmas[k];
    EXPECT_LT((a - s.u * sigma * s.v.adjoint()).frobenius_norm(), 1e-12 * a.frobenius_norm());
    EXPECT_LT(unitarity_defect(s.u), 1e-12);
    EXPECT_LT(unitarity_defect(s.v), 1e-12);
    EXPECT_TRUE(std::is_sorted(s.sigmas.rbegin(), s.sigmas.rend()));
  }
}

TEST(Svd, RankDeficient) {
  Rng rng(5);
  const auto b = random_matrix(6, 2, rng);
  const auto a = b * b.adjoint();  // rank 2
  const auto s = svd(a);
  ComplexMatrix sigma(6, 6);
  for (std::size_t k = 0; k < 6; ++k) sigma(k, k) = s.sigmas[k];
  EXPECT_LT((a - s.u * sigma * s.v.adjoint()).frobenius_norm(), 1e-12 * a.frobenius_norm());
  EXPECT_LT(s.sigmas[2], 1e-13 * s.sigmas[0]);
  EXPECT_EQ(numerical_rank(a, 1e-10), 2u);
}

TEST(OperatorNorm, ClosedForms) {
  EXPECT_NEAR(operator_norm(ComplexMatrix::identity(4)), 1.0, 1e-15);
  EXPECT_NEAR(operator_norm(ComplexMatrix{{0.5, 0.0}, {0.0, -2.0}}), 2.0, 1e-15);
}

TEST(OperatorNorm, RandomVectorLowerBound) {
  // The random-vector bound is never above the norm. It is within 1e-3 of it
  // only when random directions can get close to the top singular vector,
  // i.e. in two complex dimensions with 1000 draws.
  Rng rng(8);
  for (int t = 0; t < 10; ++t) {
    const auto a = random_matrix(2, 2, rng);
    const double norm = operator_norm(a);
    const double bound = testing::random_vector_norm_bound(a, 1000, rng);
    EXPECT_LE(bound, norm * (1 + 1e-12));
    EXPECT_GT(bound, norm - 1e-3 * std::max(1.0, norm));
  }
  const auto big = random_matrix(6, 4, rng);
  EXPECT_LE(testing::random_vector_norm_bound(big, 1000, rng), operator_norm(big) * (1 + 1e-12));
}

TEST(OperatorNorm, Submultiplicative) {
  Rng rng(9);
  for (int t = 0; t < 50; ++t) {
    const auto a = random_matrix(5, 5, rng);
    const auto b = random_matrix(5, 5, rng);
    EXPECT_LE(operator_norm(a * b), operator_norm(a) * operator_norm(b) * (1 + 1e-12));
  }
}

TEST(IsPsd, Examples) {
  EXPECT_TRUE(is_psd(ComplexMatrix::identity(2)));
  EXPECT_FALSE(is_psd(ComplexMatrix{{1.0, 0.0}, {0.0, -0.1}}, 1e-10));
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const auto b = random_matrix(5, 3, rng);
    EXPECT_TRUE(is_psd(b.adjoint() * b));
    EXPECT_TRUE(is_psd(b * b.adjoint()));  // singular Gram matrix
  }
}

TEST(Youla, AlreadyCanonical) {
  const auto f = youla_canonical(ComplexMatrix{{0.0, 0.6}, {-0.6, 0.0}});
  ASSERT_EQ(f.sigmas.size(), 1u);
  EXPECT_NEAR(f.sigmas[0], 0.6, 1e-14);
  EXPECT_LT(f.residual, 1e-13);
}

TEST(Youla, OddBlockMatrixK) {
  const ComplexMatrix k{{0.0, 1.0, 0.0}, {-1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
  const auto f = youla_canonical(k);
  ASSERT_EQ(f.sigmas.size(), 1u);
  EXPECT_NEAR(f.sigmas[0], 1.0, 1e-14);
  EXPECT_LT(f.residual, 1e-13);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(f.canonical(2, i), Complex{});
}

TEST(Youla, ZeroMatrix) {
  const auto f = youla_canonical(ComplexMatrix(4, 4));
  ASSERT_EQ(f.sigmas.size(), 2u);
  EXPECT_EQ(f.sigmas[0], 0.0);
  EXPECT_EQ(f.residual, 0.0);
}

TEST(Youla, RandomAgreesWithSvd) {
  Rng rng(21);
  for (std::size_t n = 2; n <= 8; ++n) {
    for (int t = 0; t < 10; ++t) {
      const auto z = random_antisymmetric(n, rng);
      const auto f = youla_canonical(z);
      EXPECT_LT(f.residual, 1e-10);
      EXPECT_LT(unitarity_defect(f.u), 1e-12);
      const auto sv = singular_values(z);
      for (std::size_t j = 0; j < f.sigmas.size(); ++j) {
        EXPECT_NEAR(f.sigmas[j], sv[2 * j], 1e-9);
        EXPECT_NEAR(f.sigmas[j], sv[2 * j + 1], 1e-9);
      }
      if (n % 2 == 1) {
        EXPECT_LT(sv.back(), 1e-12);
      }
    }
  }
}

TEST(Youla, DegenerateSingularValues) {
  Rng rng(2);
  // U (J + J) U^t has a fourfold singular value 1.
  const auto u = haar_unitary(5, rng);
  const double s[] = {1.0, 1.0};
  const auto z = u * youla_block_form(s, 5) * u.transpose();
  const auto f = youla_canonical(z);
  EXPECT_LT(f.residual, 1e-10);
  EXPECT_NEAR(f.sigmas[0], 1.0, 1e-12);
  EXPECT_NEAR(f.sigmas[1], 1.0, 1e-12);
}

TEST(Youla, RejectsSymmetric) {
  try {
    youla_canonical(ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAntisymmetric);
  }
}

TEST(JointDiagonalize, AlreadyDiagonal) {
  const ComplexVector d1{1.0, 2.0}, d2{3.0, 4.0};
  const std::vector t{diag(d1), diag(d2)};
  const auto j = joint_diagonalize(t);
  ASSERT_EQ(j.spectrum.points.size(), 2u);
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : j.spectrum.points) pts.emplace_back(p[0].real(), p[1].real());
  std::sort(pts.begin(), pts.end());
  EXPECT_NEAR(pts[0].first, 1.0, 1e-14);
  EXPECT_NEAR(pts[0].second, 3.0, 1e-14);
  EXPECT_NEAR(pts[1].first, 2.0, 1e-14);
  EXPECT_NEAR(pts[1].second, 4.0, 1e-14);
}

TEST(JointDiagonalize, RecoversConjugatedDiagonals) {
  Rng rng(17);
  for (int t = 0; t < 20; ++t) {
    const std::size_t k = 6;
    const auto u0 = haar_unitary(k, rng);
    ComplexVector d1(k), d2(k);
    for (std::size_t i = 0; i < k; ++i) {
      // Degenerate first coordinate forces cluster refinement.
      d1[i] = i < 3 ? Complex(0.5, 0.5) : complex_normal(rng);
      d2[i] = complex_normal(rng);
    }
    const std::vector tuple{u0 * diag(d1) * u0.adjoint(), u0 * diag(d2) * u0.adjoint()};
    const auto j = joint_diagonalize(tuple);
    EXPECT_EQ(j.spectrum.total_multiplicity(), k);
    for (std::size_t i = 0; i < k; ++i) {
      bool found = false;
      for (const auto& p : j.spectrum.points)
        found |= std::abs(p[0] - d1[i]) < 1e-10 && std::abs(p[1] - d2[i]) < 1e-10;
      EXPECT_TRUE(found);
    }
    // Reassembly reproduces the inputs.
    for (std::size_t c = 0; c < 2; ++c) {
      ComplexVector d(k);
      for (std::size_t i = 0; i < k; ++i) d[i] = j.column_points[i][c];
      EXPECT_LT((j.u * diag(d) * j.u.adjoint() - tuple[c]).frobenius_norm(), 1e-9);
    }
  }
}

TEST(JointDiagonalize, MultiplicitiesMerge) {
  const ComplexVector d{1.0, 1.0, Complex(0, 1)};
  const std::vector t{diag(d)};
  const auto j = joint_diagonalize(t);
  ASSERT_EQ(j.spectrum.points.size(), 2u);
  EXPECT_EQ(j.spectrum.total_multiplicity(), 3u);
}

TEST(JointDiagonalize, SingleNormalMatrixEigenvaluesAreCharpolyRoots) {
  Rng rng(23);
  const auto u0 = haar_unitary(5, rng);
  ComplexVector d(5);
  for (auto& x : d) x = complex_normal(rng);
  const auto a = u0 * diag(d) * u0.adjoint();
  const std::vector t{a};
  const auto j = joint_diagonalize(t);
  for (const auto& p : j.spectrum.points) {
    const auto shifted = ComplexMatrix::identity(5) * p[0] - a;
    EXPECT_LT(std::abs(lu_determinant(shifted)), 1e-10);
  }
}

TEST(JointDiagonalize, Errors) {
  const auto s = testing::shift3();
  const std::vector nonnormal{s};
  EXPECT_THROW(joint_diagonalize(nonnormal), Error);
  const ComplexMatrix x{{0.0, 1.0}, {1.0, 0.0}};
  const ComplexMatrix z{{1.0, 0.0}, {0.0, -1.0}};
  const std::vector noncommuting{x, z};
  try {
    joint_diagonalize(noncommuting);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotCommuting);
  }
}

TEST(Haar, ScalarIsUnimodular) {
  const auto u = haar_unitary(1, 99);
  EXPECT_NEAR(std::abs(u(0, 0)), 1.0, 1e-15);
}

TEST(Haar, Deterministic) { EXPECT_EQ(haar_unitary(4, 1234), haar_unitary(4, 1234)); }

TEST(Haar, UnitarityUpTo64) {
  Rng rng(1);
  for (std::size_t n : {2u, 8u, 31u, 64u}) EXPECT_LT(unitarity_defect(haar_unitary(n, rng)), 1e-12);
}

TEST(Haar, SecondMomentIsOneOverN) {
  // E|U_ij|^2 = 1/n for Haar measure.
  Rng rng(2024);
  double sum = 0;
  const int samples = 2000;
  for (int s = 0; s < samples; ++s) sum += abs2(haar_unitary(4, rng)(0, 0));
  EXPECT_NEAR(sum / samples, 0.25, 0.02);
}

TEST(Haar, PhaseOfDiagonalIsUniform) {
  // Without phase correction the diagonal would concentrate near the positive
  // real axis; Haar measure makes E[U_11] = 0.
  Rng rng(77);
  Complex mean{};
  const int samples = 4000;
  for (int s = 0; s < samples; ++s) mean += haar_unitary(3, rng)(0, 0);
  EXPECT_LT(std::abs(mean / double(samples)), 0.03);
}

TEST(OrthonormalClosure, InvariantStartIsKept) {
  const ComplexMatrix start{{1.0}, {0.0}, {0.0}};
  const ComplexVector d{2.0, 3.0, 4.0};
  const std::vector app{diag(d)};
  const auto b = orthonormal_closure(start, app);
  EXPECT_EQ(b.cols(), 1u);
}

TEST(OrthonormalClosure, ShiftOrbitFillsSpace) {
  const ComplexMatrix start{{1.0}, {0.0}, {0.0}};
  const std::vector app{testing::shift3()};
  const auto b = orthonormal_closure(start, app);
  EXPECT_EQ(b.cols(), 3u);
  EXPECT_LT(unitarity_defect(b), 1e-14);
}

TEST(OrthonormalClosure, ReducingSpanRestrictionIsNormal) {
  Rng rng(12);
  const std::size_t k = 8;
  const auto u0 = haar_unitary(k, rng);
  ComplexVector d(k);
  for (std::size_t i = 0; i < k; ++i) d[i] = i % 3 == 0 ? Complex(0.3, 0.1) : complex_normal(rng);
  const auto n = u0 * diag(d) * u0.adjoint();
  const std::vector app{n, n.adjoint()};
  ComplexMatrix start(k, 1);
  start(0, 0) = 1.0;
  start(3, 0) = Complex(0.2, 0.4);
  const auto b = orthonormal_closure(start, app);
  EXPECT_LT(unitarity_defect(b), 1e-12);
  const auto r = b.adjoint() * n * b;
  EXPECT_LT(commutator_norm(r, r.adjoint()), 1e-10);
  // Invariance.
  for (const auto& a : app) {
    const auto img = a * b;
    EXPECT_LT((img - b * (b.adjoint() * img)).frobenius_norm(), 1e-10);
  }
}

}  // namespace
}  // namespace cartan
