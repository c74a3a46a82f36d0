#include "qu8it/su3_algebra.hpp"

#include <gtest/gtest.h>

using namespace qu8it;

TEST(Su3Algebra, GeneratorsAreHermitianAndTraceless) {
  for (const auto& t : gell_mann().T) {
    EXPECT_LT(hermiticity_residual(t), 1e-15);
    EXPECT_LT(std::abs(t.trace()), 1e-15);
  }
}

TEST(Su3Algebra, StructureConstantsFromCommutators) {
  const auto& s = gell_mann();
  EXPECT_NEAR(s.structure(1, 2, 3), 1.0, 1e-14);
  EXPECT_NEAR(s.structure(1, 4, 7), 0.5, 1e-14);
  EXPECT_NEAR(s.structure(1, 5, 6), -0.5, 1e-14);
  EXPECT_NEAR(s.structure(6, 7, 8), std::sqrt(3.0) / 2, 1e-14);
  EXPECT_NEAR(s.structure(1, 1, 3), 0.0, 1e-15);
  EXPECT_LE(closure_residual(s, false), 1e-13);
  EXPECT_LE(closure_residual(s, true), 1e-13);
}

TEST(Su3Algebra, AntiFundamentalIsMinusConjugate) {
  const auto& s = gell_mann();
  for (std::size_t a = 0; a < 8; ++a) EXPECT_LT(max_abs(s.Tbar[a] + s.T[a].conjugate()), 1e-16);
  // T^2 is imaginary, so Tbar^2 = T^2; T^1 is real, so Tbar^1 = -T^1.
  EXPECT_LT(max_abs(s.Tbar[1] - s.T[1]), 1e-16);
  EXPECT_LT(max_abs(s.Tbar[0] + s.T[0]), 1e-16);
}

TEST(Su3Algebra, Casimirs) {
  EXPECT_LT(max_abs(casimir_fundamental() - Mat3::Identity() * (4.0 / 3)), 1e-14);
  EXPECT_LT(max_abs(casimir_antifundamental() - Mat3::Identity() * (4.0 / 3)), 1e-14);
}
