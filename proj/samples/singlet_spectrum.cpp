// Baryon-number-zero spectrum of one spatial site with a strong penalty
// coupling: four color singlets stay low, the rest move up by ~h^2.

#include "qu8it.hpp"

#include <cstdio>

int main() {
  using namespace qu8it;
  LatticeParams p;
  p.h = 20.0;
  p.include_h = true;

  const auto H = build_qu8it_hamiltonian(p);
  const auto spec = block_diagonalize(H.matrix, sector_keys(H), 4096, baryon_filter(0.0));
  const auto cc = conserved_charges(H);

  std::printf("%4s %14s %12s\n", "k", "energy", "casimir");
  int k = 0;
  for (const auto& l : levels_with_casimir(spec, cc.casimir_total))
    std::printf("%4d %14.6f %12.3e\n", k++, l.energy, l.casimir);
  return 0;
}
