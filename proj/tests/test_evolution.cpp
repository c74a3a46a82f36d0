#include "qu8it/evolution.hpp"

#include <gtest/gtest.h>

using namespace qu8it;

namespace {
MatX dense_expm(const MatX& H, double t) {
  Eigen::SelfAdjointEigenSolver<MatX> es(H);
  const VecX ph = (-kI * t * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}
}  // namespace

TEST(Evolution, ExactMatchesDenseExponential) {
  LatticeParams p{.masses = {0.6}, .g = 1.4};
  const auto H = build_qu8it_hamiltonian(p);
  const auto psi = StateVector::basis(H.dim(), 9);
  const VecX want = dense_expm(MatX(H.matrix), 0.8) * psi.amp;
  EXPECT_LT((exact_evolve(H, psi, 0.8).amp - want).norm(), 1e-12);
  ExactOptions kr;
  kr.method = ExactMethod::krylov;
  EXPECT_LT((exact_evolve(H, psi, 0.8, kr).amp - want).norm(), 1e-11);
}

TEST(Evolution, DimensionMismatch) {
  const auto H = build_qu8it_hamiltonian({});
  const auto psi = StateVector::basis(8, 0);
  try {
    exact_evolve(H, psi, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(Evolution, OneStepEqualsProductOfGroupExponentials) {
  LatticeParams p{.masses = {0.9}, .g = 1.1};
  const auto H = build_qu8it_hamiltonian(p);
  const auto plan = build_trotter_plan(H, 1);
  const double dt = 0.3;
  // Rebuild each group on the full register and multiply exponentials.
  MatX U = MatX::Identity(static_cast<Eigen::Index>(H.dim()), static_cast<Eigen::Index>(H.dim()));
  for (const auto& [gi, frac] : plan.sequence) {
    const auto& g = plan.groups[gi];
    std::vector<LocalTerm> terms = g.terms;
    if (!g.diagonal) terms = {LocalTerm{1.0, g.slots, std::make_shared<const MatX>(g.generator), g.string, g.id}};
    const MatX G(terms_to_sparse(terms, H.shape, plan.parity));
    U = dense_expm(G, frac * dt) * U;
  }
  const auto psi = StateVector::basis(H.dim(), 3);
  StateVector got = psi;
  TrotterPropagator(plan, H.shape, dt).step(got.amp);
  EXPECT_LT((got.amp - U * psi.amp).norm(), 1e-12);
}

TEST(Evolution, TrotterPreservesNormAndBaryonNumber) {
  LatticeParams p{.L = 2};
  const auto H = build_qu8it_hamiltonian(p);
  const auto plan = build_trotter_plan(H, 2);
  const auto obs = default_observables(H);
  const auto tr = trotter_evolve(plan, H, StateVector::basis(H.dim(), 0), 1.0, 10, obs);
  const auto b = tr.column("B_total");
  for (const auto& r : tr.rows) {
    EXPECT_NEAR(r.norm, 1.0, 1e-12);
    EXPECT_NEAR(r.values[b], 0.0, 1e-12);
  }
}

TEST(Evolution, GroupsCommuteInternally) {
  LatticeParams p{.L = 2, .h = 1.0, .include_h = true};
  const auto plan = build_trotter_plan(build_qu8it_hamiltonian(p), 1);
  EXPECT_LT(plan.max_commutator_residual(), 1e-13);
}

TEST(Evolution, FidelityErrorOrder) {
  const auto H = build_qu8it_hamiltonian({});
  const ExactPropagator ex(H);
  const auto obs = default_observables(H);
  const auto psi = StateVector::basis(H.dim(), 0);
  for (int order : {1, 2}) {
    const auto plan = build_trotter_plan(H, order);
    std::vector<double> dt, err;
    for (int steps : {8, 16, 32}) {
      const auto tr = trotter_evolve(plan, H, psi, 1.0, steps, obs, &ex);
      dt.push_back(1.0 / steps);
      err.push_back(std::sqrt(std::max(0.0, 1.0 - tr.rows.back().fidelity)));
    }
    EXPECT_NEAR(fitted_order(dt, err), order, 0.3);
  }
}

TEST(Evolution, FittedOrderOfPowerLaw) {
  EXPECT_NEAR(fitted_order({0.1, 0.05, 0.025}, {3e-2, 7.5e-3, 1.875e-3}), 2.0, 1e-12);
}
