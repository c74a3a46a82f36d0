#include "qu8it/spectrum.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace qu8it;

namespace {
std::vector<double> spectrum_of(const LatticeOperator& H) {
  return block_diagonalize(H.matrix, sector_keys(H), std::size_t{1} << 13).sorted_values();
}

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return 1e300;
  double r = 0;
  for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

// Number of register states with a given 3 x (net baryon number), counted from
// occupation multiplicities 1, 3, 3, 1.
std::map<int, int> baryon_multiplicities(int quark_slots, int anti_slots) {
  std::map<int, int> m{{0, 1}};
  const int mult[4] = {1, 3, 3, 1};
  for (int s = 0; s < quark_slots + anti_slots; ++s) {
    std::map<int, int> next;
    for (auto [b, n] : m)
      for (int occ = 0; occ < 4; ++occ) next[b + (s < quark_slots ? occ : -occ)] += n * mult[occ];
    m = next;
  }
  return m;
}
}  // namespace

TEST(Lattice, ParamsValidation) {
  LatticeParams p;
  p.L = 0;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.nf = 2;
  p.masses = {1.0, 2.0, 3.0};
  EXPECT_THROW(p.validate(), Error);
  p.masses = {1.0, 2.0};
  EXPECT_NO_THROW(p.validate());
  EXPECT_EQ(p.qudits(), 4);
  EXPECT_EQ(p.qubits(), 12);
}

TEST(Lattice, SlotLayout) {
  LatticeParams p{.L = 2, .nf = 2};
  const SiteIndexing idx(p);
  EXPECT_EQ(idx.slots(), 8);
  EXPECT_EQ(idx.slot(1, 1), 3);
  EXPECT_FALSE(idx.anti(1));
  EXPECT_TRUE(idx.anti(2));
  EXPECT_TRUE(idx.anti(3));
  EXPECT_FALSE(idx.anti(4));
}

TEST(Lattice, HamiltoniansAreHermitian) {
  LatticeParams p{.L = 2, .masses = {0.7}, .g = 1.3, .h = 0.5, .include_h = true};
  EXPECT_LT(hermiticity_residual(build_qu8it_hamiltonian(p).matrix), 1e-12);
  EXPECT_LT(hermiticity_residual(build_qubit_hamiltonian(p).matrix), 1e-12);
}

TEST(Lattice, DualSpectraAgree) {
  for (LatticeParams p : {LatticeParams{.masses = {0.7}, .g = 1.3, .h = 0.9, .include_h = true},
                          LatticeParams{.L = 2, .masses = {1.1}, .g = 0.8},
                          LatticeParams{.nf = 2, .masses = {0.7, 1.1}, .g = 1.3}}) {
    const auto a = spectrum_of(build_qu8it_hamiltonian(p));
    const auto b = spectrum_of(build_qubit_hamiltonian(p));
    EXPECT_EQ(a.size(), static_cast<std::size_t>(1) << p.qubits());
    EXPECT_LT(distance(a, b), 1e-9) << "L=" << p.L << " N_f=" << p.nf;
  }
}

TEST(Lattice, MassTermDiagonal) {
  // g = 0: the diagonal is m times the occupation summed over slots.
  LatticeParams p{.masses = {2.0}, .g = 0.0};
  const auto H = build_qu8it_hamiltonian(p);
  const auto d = MatX(H.matrix).diagonal();
  EXPECT_NEAR(d(0).real(), 0.0, 1e-14);
  EXPECT_NEAR(d(index_from_label(5)).real(), 2.0 * 2.0, 1e-14);
  EXPECT_NEAR(d(8 * index_from_label(2)).real(), 2.0, 1e-14);
}

TEST(Lattice, SectorDimensionsFromCounting) {
  for (LatticeParams p : {LatticeParams{}, LatticeParams{.L = 2}, LatticeParams{.nf = 2}}) {
    const auto H = build_qu8it_hamiltonian(p);
    const auto keys = sector_keys(H);
    const int half = p.qudits() / 2;
    for (auto [b3, n] : baryon_multiplicities(half, half)) {
      const auto count = std::count_if(keys.begin(), keys.end(), [&](const SectorKey& k) { return k[0] == b3; });
      EXPECT_EQ(count, n);
    }
  }
  EXPECT_EQ(sector_project(build_qu8it_hamiltonian({}), 0.0).basis.size(), 20u);
}

TEST(Lattice, BlocksDoNotLeak) {
  LatticeParams p{.L = 2, .h = 1.0, .include_h = true};
  const auto H = build_qu8it_hamiltonian(p);
  EXPECT_EQ(off_block_residual(H.matrix, sector_keys(H)), 0.0);
  const auto Hq = build_qubit_hamiltonian(LatticeParams{});
  EXPECT_EQ(off_block_residual(Hq.matrix, sector_keys(Hq)), 0.0);
}

TEST(Lattice, CasimirCommutesWithHamiltonian) {
  LatticeParams p{.L = 2};
  const auto H = build_qu8it_hamiltonian(p);
  const auto cc = conserved_charges(H);
  const SparseOp comm = H.matrix * cc.casimir_total - cc.casimir_total * H.matrix;
  EXPECT_LT(max_abs(MatX(comm)), 1e-11);
}

TEST(Lattice, EmbeddedAnnihilatorsAnticommute) {
  LatticeParams p{.L = 1, .nf = 2};
  const auto reg = qu8it_registry(p);
  const RegisterShape shape(reg.slots, reg.local_dim, std::size_t{1} << 20);
  std::vector<SparseOp> c;
  for (int s = 0; s < reg.slots; ++s)
    for (Color col : kColors) c.push_back(embedded_annihilator(reg, shape, s, col));
  for (std::size_t a = 0; a < c.size(); ++a)
    for (std::size_t b = 0; b < c.size(); ++b) {
      SparseOp ac = c[a] * SparseOp(c[b].adjoint()) + SparseOp(c[b].adjoint()) * c[a];
      if (a == b) {
        SparseOp id(ac.rows(), ac.cols());
        id.setIdentity();
        ac -= id;
      }
      ASSERT_EQ(MatX(ac).cwiseAbs().maxCoeff(), 0.0) << a << "," << b;
    }
}

TEST(Lattice, DimensionCapIsEnforced) {
  LatticeParams p{.L = 3, .nf = 2};
  try {
    build_qu8it_hamiltonian(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionCapExceeded);
  }
}

TEST(Lattice, HighPenaltySinglets) {
  LatticeParams p{.h = 20.0, .include_h = true};
  const auto H = build_qu8it_hamiltonian(p);
  const auto sp = block_diagonalize(H.matrix, sector_keys(H), 4096, baryon_filter(0.0));
  const auto lv = levels_with_casimir(sp, conserved_charges(H).casimir_total);
  ASSERT_EQ(lv.size(), 20u);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_LT(std::abs(lv[k].casimir), 1e-6);
  EXPECT_GT(lv[4].energy - lv[3].energy, 100.0);
}
