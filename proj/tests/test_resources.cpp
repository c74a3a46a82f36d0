#include "qu8it/resources.hpp"

#include <gtest/gtest.h>

using namespace qu8it;

TEST(Resources, EnumeratedMatchClosedForm) {
  for (int nf = 1; nf <= 3; ++nf)
    for (int L = 1; L <= 3; ++L) {
      LatticeParams p{.L = L, .nf = nf};
      const auto e = enumerate_circuit_counts(p, false);
      const int M = nf * (2 * L - 1);
      EXPECT_EQ(e.qudit_count, 2 * nf * L);
      EXPECT_EQ(e.kinetic_entangling, 6 * M);
      EXPECT_EQ(e.electric_entangling, 4 * M * (M - 1));
      EXPECT_EQ(e.h_entangling, 0);
    }
}

TEST(Resources, QubitClosedForm) {
  const auto r = closed_form_counts(LatticeParams{.L = 2, .nf = 2}, Mapping::qubit);
  EXPECT_EQ(r.qudit_count, 24);
  EXPECT_EQ(r.kinetic_entangling, 12 * 13 - 4);
  EXPECT_EQ(r.electric_entangling, 6 * (23 * 6 - 17));
}

TEST(Resources, RatiosApproachLimits) {
  const auto r = reduction_ratios(LatticeParams{.L = 200});
  EXPECT_DOUBLE_EQ(r[0], 3.0);
  EXPECT_NEAR(r[1], 4.0, 0.04);
  EXPECT_NEAR(r[2], 5.75, 0.0575);
  EXPECT_TRUE(std::isinf(reduction_ratios(LatticeParams{})[2]));
}

TEST(Resources, LoweredSingleLinkWithPenalty) {
  const auto r = enumerate_circuit_counts(LatticeParams{}, true);
  EXPECT_EQ(r.kinetic_entangling, 6);
  EXPECT_EQ(r.h_entangling, 8);
  EXPECT_EQ(r.ungrouped_two_qudit, 96 + 26);
  EXPECT_EQ(r.controlled_gate_count, 732);
  EXPECT_EQ(r.single_rotation_count, 249);
}

TEST(Resources, CsvRowShape) {
  const LatticeParams p;
  const auto row = resource_csv_row("closed_form", p, closed_form_counts(p, Mapping::qubit));
  const auto header = resource_csv_header();
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), std::count(header.begin(), header.end(), ','));
  EXPECT_EQ(row.rfind("closed_form,qubit,1,1,6,", 0), 0u);
}
