#include "qu8it/reference_forms.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace qu8it;

namespace {
MatX random_hermitian(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  MatX m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(nd(rng), nd(rng));
  return 0.5 * (m + m.adjoint());
}
}  // namespace

TEST(GivensWalsh, BasisConventions) {
  const auto& b = build_basis();
  EXPECT_EQ(b.pairs.size(), 28u);
  const Mat8 x = b.x(2, 5);
  EXPECT_EQ(x(1, 4), cplx(1.0));
  EXPECT_EQ(x(4, 1), cplx(1.0));
  const Mat8 y = b.y(2, 5);
  EXPECT_EQ(y(1, 4), cplx(0.0, -1.0));
  EXPECT_EQ(y(4, 1), cplx(0.0, 1.0));
  for (const auto& z : b.Z) EXPECT_NEAR((z * z).trace().real(), 2.0, 1e-14);
  for (const auto& w : b.w) EXPECT_NEAR((w * w).trace().real(), 1.0, 1e-14);
  EXPECT_LT(max_abs(b.w[0] - Mat8::Identity() / std::sqrt(8.0)), 1e-16);
}

TEST(GivensWalsh, DecompositionRoundTrip) {
  const MatX h = random_hermitian(8, 3);
  const auto terms = decompose(h);
  EXPECT_LE(max_abs(terms.to_matrix(1) - h), 1e-13);
  EXPECT_LE(terms.size(), 64u);
  const MatX h2 = random_hermitian(64, 4);
  EXPECT_LE(max_abs(decompose_two_site(h2).to_matrix(2) - h2), 1e-13);
}

TEST(GivensWalsh, NonHermitianRejected) {
  MatX h = MatX::Zero(8, 8);
  h(2, 3) = 1.0;
  try {
    decompose(h);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonHermitianInput);
  }
}

TEST(GivensWalsh, WalshTransformRoundTrip) {
  const std::array<double, 8> d{0.5, -1.0, 2.0, 0.0, 3.25, -0.75, 1.0, 4.0};
  const auto back = walsh_to_diag(diag_to_walsh(d));
  for (std::size_t k = 0; k < 8; ++k) EXPECT_NEAR(back[k], d[k], 1e-14);
  const auto ops = build_qu8it_operators();
  EXPECT_LT(max_abs(forms::baryon_walsh().to_matrix(1) - MatX(ops.B)), 1e-15);
  const auto terms = decompose(ops.B);
  for (const auto& t : terms.terms()) EXPECT_EQ(t.factors[0].gen.kind, Generator::Kind::W);
}

TEST(GivensWalsh, GroupedOperatorsFromAnnihilators) {
  const auto ops = build_qu8it_operators();
  const auto& g = grouped_operators();
  for (std::size_t c = 0; c < 3; ++c) {
    EXPECT_LT(hermiticity_residual(g.A[0][c]), 1e-15);
    EXPECT_LT(hermiticity_residual(g.B[1][c]), 1e-15);
  }
  EXPECT_LT(max_abs(forms::hopping_link_grouped(g) - forms::hopping_link(ops)), 1e-14);
}

TEST(GivensWalsh, UngroupedCounts) {
  const auto ops = build_qu8it_operators();
  EXPECT_EQ(ungrouped_rotation_count(forms::hopping_link(ops)), 96);
  EXPECT_EQ(ungrouped_rotation_count(forms::total_charge_squared(ops)), 26);
  EXPECT_EQ(forms::hopping_link_expanded().canonical().size(), 96u);
}
