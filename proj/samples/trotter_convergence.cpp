// Step-doubling study on two spatial sites: Trotter error against exact
// evolution, and the color-charge leak of the product formula.

#include "qu8it.hpp"

#include <cstdio>

int main() {
  using namespace qu8it;
  LatticeParams p;
  p.L = 2;

  const auto H = build_qu8it_hamiltonian(p);
  const ExactPropagator exact(H);
  const auto obs = default_observables(H);
  const auto psi0 = StateVector::basis(H.dim(), 0);

  for (int order : {1, 2}) {
    const auto plan = build_trotter_plan(H, order);
    std::printf("order %d (%zu groups)\n", order, plan.groups.size());
    for (int steps : {5, 10, 20, 40}) {
      const auto tr = trotter_evolve(plan, H, psi0, 1.0, steps, obs, &exact);
      const auto& last = tr.rows.back();
      std::printf("  steps %3d  1-F %.3e  casimir %.3e\n", steps, 1.0 - last.fidelity,
                  last.values[tr.column("casimir")]);
    }
  }
  return 0;
}
