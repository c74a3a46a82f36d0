#include "qu8it/qu8it_mapping.hpp"

#include <gtest/gtest.h>

using namespace qu8it;

TEST(Qu8itMapping, LabelIndexBoundary) {
  EXPECT_EQ(index_from_label(1), 0);
  EXPECT_EQ(label_from_index(7), 8);
  EXPECT_EQ(Qu8itBasis::states[5], "-|q_r q_b>");
}

TEST(Qu8itMapping, MatricesMatchFockOracle) {
  const auto ops = build_qu8it_operators();
  const auto fo = fock_oracle();
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(max_abs(ops.c[k] - fo.c[k]), 0.0);
  EXPECT_EQ(max_abs(ops.P - fo.P), 0.0);
  EXPECT_LT(max_abs(ops.B - fo.B), 1e-16);
  for (std::size_t a = 0; a < 8; ++a) {
    EXPECT_LT(max_abs(ops.Q[a] - fo.Q[a]), 1e-16);
    EXPECT_LT(max_abs(ops.Qbar[a] - fo.Qbar[a]), 1e-16);
  }
}

TEST(Qu8itMapping, CreationActsAsOnFockStates) {
  const auto ops = build_qu8it_operators();
  const auto fo = fock_oracle();
  for (Color c : kColors)
    for (int label = 1; label <= 8; ++label) {
      const Eigen::Matrix<cplx, 8, 1> direct = ops.create(c).col(index_from_label(label));
      EXPECT_LT(max_abs(direct - fock_create(fo, c, label)), 1e-16);
    }
  // c_r^dag |q_b> = -|6>, the state carrying the minus sign.
  EXPECT_EQ(ops.create(Color::r)(index_from_label(6), index_from_label(4)), cplx(-1.0));
}

TEST(Qu8itMapping, WrongSignOfStateSixBreaksOracle) {
  const auto ops = build_qu8it_operators();
  const auto fo = fock_oracle(gell_mann(), +1);
  EXPECT_GT(max_abs(ops.c[0] - fo.c[0]), 0.5);
}

TEST(Qu8itMapping, Anticommutators) {
  const auto ops = build_qu8it_operators();
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) {
      Mat8 ac = ops.c[a] * ops.c_dag[b] + ops.c_dag[b] * ops.c[a];
      if (a == b) ac -= Mat8::Identity();
      EXPECT_EQ(max_abs(ac), 0.0);
      EXPECT_EQ(max_abs(Mat8(ops.c[a] * ops.c[b] + ops.c[b] * ops.c[a])), 0.0);
    }
}

TEST(Qu8itMapping, ChargeBlocksAndBaryonNumber) {
  const auto ops = build_qu8it_operators();
  const auto& s = gell_mann();
  for (std::size_t a = 0; a < 8; ++a) {
    EXPECT_LT(max_abs(ops.Q[a].block<3, 3>(1, 1) - s.T[a]), 1e-16);
    EXPECT_LT(max_abs(ops.Q[a].block<3, 3>(4, 4) - s.Tbar[a]), 1e-16);
    EXPECT_LT(max_abs(ops.Qbar[a].block<3, 3>(1, 1) - s.Tbar[a]), 1e-16);
  }
  for (int k = 0; k < 8; ++k)
    EXPECT_DOUBLE_EQ(ops.B(k, k).real(), Qu8itBasis::occupation[static_cast<std::size_t>(k)] / 3.0);
}

TEST(Qu8itMapping, ConnectivityDegrees) {
  const auto g = transition_graph(build_qu8it_operators());
  EXPECT_EQ(g.degree(0), 3);
  EXPECT_EQ(g.degree(7), 3);
  for (int k = 1; k <= 6; ++k) EXPECT_EQ(g.degree(k), 5);
}
