#pragma once

// Exact spectra by block diagonalization over conserved sector labels.

#include "qu8it/lattice.hpp"

#include <Eigen/Eigenvalues>

#include <functional>
#include <map>
#include <optional>

namespace qu8it {

struct EigenBlock {
  SectorKey key;
  std::vector<Eigen::Index> basis;  ///< register indices spanning the block
  Eigen::VectorXd values;
  MatX vectors;  ///< columns are eigenvectors in the block basis
};

struct BlockSpectrum {
  std::size_t dim = 0;
  std::vector<EigenBlock> blocks;
  double off_block_residual = 0.0;

  std::vector<double> sorted_values() const {
    std::vector<double> v;
    for (const auto& b : blocks) v.insert(v.end(), b.values.data(), b.values.data() + b.values.size());
    std::sort(v.begin(), v.end());
    return v;
  }

  std::size_t covered() const {
    std::size_t n = 0;
    for (const auto& b : blocks) n += b.basis.size();
    return n;
  }

  /// e^{-iHt} psi for states supported on the covered blocks.
  VecX evolve(const VecX& psi, double t) const {
    if (static_cast<std::size_t>(psi.size()) != dim) throw Error(ErrorKind::DimensionMismatch, "state size");
    VecX out = VecX::Zero(psi.size());
    for (const auto& b : blocks) {
      VecX local(static_cast<Eigen::Index>(b.basis.size()));
      for (std::size_t k = 0; k < b.basis.size(); ++k) local(static_cast<Eigen::Index>(k)) = psi(b.basis[k]);
      VecX c = b.vectors.adjoint() * local;
      for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::exp(-kI * b.values(k) * t);
      local = b.vectors * c;
      for (std::size_t k = 0; k < b.basis.size(); ++k) out(b.basis[k]) = local(static_cast<Eigen::Index>(k));
    }
    return out;
  }

  /// Full-register eigenvector of block `b`, column `k`.
  VecX eigenvector(std::size_t b, Eigen::Index k) const {
    VecX v = VecX::Zero(static_cast<Eigen::Index>(dim));
    const auto& blk = blocks[b];
    for (std::size_t i = 0; i < blk.basis.size(); ++i) v(blk.basis[i]) = blk.vectors(static_cast<Eigen::Index>(i), k);
    return v;
  }
};

/// Largest |H_ij| between different label classes.
inline double off_block_residual(const SparseOp& H, const std::vector<SectorKey>& keys) {
  double worst = 0.0;
  for (Eigen::Index r = 0; r < H.outerSize(); ++r)
    for (SparseOp::InnerIterator it(H, r); it; ++it)
      if (keys[static_cast<std::size_t>(it.row())] != keys[static_cast<std::size_t>(it.col())])
        worst = std::max(worst, std::abs(it.value()));
  return worst;
}

inline MatX dense_restriction(const SparseOp& H, const std::vector<Eigen::Index>& basis) {
  std::vector<Eigen::Index> pos(static_cast<std::size_t>(H.rows()), -1);
  for (std::size_t k = 0; k < basis.size(); ++k) pos[static_cast<std::size_t>(basis[k])] = static_cast<Eigen::Index>(k);
  MatX m = MatX::Zero(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k)
    for (SparseOp::InnerIterator it(H, basis[k]); it; ++it) {
      const Eigen::Index c = pos[static_cast<std::size_t>(it.col())];
      if (c >= 0) m(static_cast<Eigen::Index>(k), c) = it.value();
    }
  return m;
}

using SectorFilter = std::function<bool(const SectorKey&)>;

/// Diagonalizes H block by block. `dense_cap` bounds the number of covered
/// basis states; a filter restricts the blocks that are kept.
inline BlockSpectrum block_diagonalize(const SparseOp& H, const std::vector<SectorKey>& keys,
                                       std::size_t dense_cap = 4096, const SectorFilter& keep = {}) {
  if (static_cast<std::size_t>(H.rows()) != keys.size()) throw Error(ErrorKind::DimensionMismatch, "labels vs matrix");
  std::map<SectorKey, std::vector<Eigen::Index>> classes;
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (!keep || keep(keys[i])) classes[keys[i]].push_back(static_cast<Eigen::Index>(i));
  std::size_t covered = 0;
  for (const auto& [k, v] : classes) covered += v.size();
  if (covered > dense_cap)
    throw Error(ErrorKind::DimensionCapExceeded,
                "exact diagonalization of " + std::to_string(covered) + " states exceeds the dense cap of " +
                    std::to_string(dense_cap) + "; restrict to a baryon-number sector");
  if (covered == 0) throw Error(ErrorKind::EmptySector, "no basis states match the requested sector");

  BlockSpectrum out;
  out.dim = keys.size();
  out.off_block_residual = off_block_residual(H, keys);
  for (auto& [key, basis] : classes) {
    EigenBlock b;
    b.key = key;
    b.basis = std::move(basis);
    const MatX m = dense_restriction(H, b.basis);
    Eigen::SelfAdjointEigenSolver<MatX> es(m);
    b.values = es.eigenvalues();
    b.vectors = es.eigenvectors();
    out.blocks.push_back(std::move(b));
  }
  return out;
}

/// Baryon-number sector as a filter; B is in baryon units (multiples of 1/3).
inline SectorFilter baryon_filter(double B) {
  const double three_b = 3.0 * B;
  const long k = std::lround(three_b);
  if (std::abs(three_b - static_cast<double>(k)) > 1e-9)
    throw Error(ErrorKind::EmptySector, "B must be a multiple of 1/3");
  return [k](const SectorKey& key) { return key[0] == k; };
}

struct ProjectedOperator {
  MatX matrix;
  std::vector<Eigen::Index> basis;
  double off_block_residual = 0.0;
};

/// Restriction of an operator to the B eigenspace.
inline ProjectedOperator sector_project(const SparseOp& op, const std::vector<SectorKey>& keys, double B,
                                        std::size_t dense_cap = 4096) {
  const auto keep = baryon_filter(B);
  ProjectedOperator out;
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (keep(keys[i])) out.basis.push_back(static_cast<Eigen::Index>(i));
  if (out.basis.empty()) throw Error(ErrorKind::EmptySector, "B = " + std::to_string(B) + " has no states");
  if (out.basis.size() > dense_cap) throw Error(ErrorKind::DimensionCapExceeded, "sector exceeds the dense cap");
  std::vector<char> in(keys.size(), 0);
  for (auto i : out.basis) in[static_cast<std::size_t>(i)] = 1;
  for (Eigen::Index r = 0; r < op.outerSize(); ++r)
    for (SparseOp::InnerIterator it(op, r); it; ++it)
      if (in[static_cast<std::size_t>(it.row())] != in[static_cast<std::size_t>(it.col())])
        out.off_block_residual = std::max(out.off_block_residual, std::abs(it.value()));
  out.matrix = dense_restriction(op, out.basis);
  return out;
}

inline ProjectedOperator sector_project(const LatticeOperator& H, double B, std::size_t dense_cap = 4096) {
  return sector_project(H.matrix, sector_keys(H), B, dense_cap);
}

/// One eigenpair with its expectation values for a set of observables.
struct Level {
  double energy;
  SectorKey key;
  double casimir;
};

/// Sorted levels with total-Casimir expectations.
inline std::vector<Level> levels_with_casimir(const BlockSpectrum& spec, const SparseOp& casimir) {
  std::vector<Level> out;
  for (const auto& b : spec.blocks) {
    const MatX c = dense_restriction(casimir, b.basis);
    for (Eigen::Index k = 0; k < b.values.size(); ++k) {
      const VecX v = b.vectors.col(k);
      out.push_back({b.values(k), b.key, (v.adjoint() * c * v)(0, 0).real()});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Level& a, const Level& b) { return a.energy < b.energy; });
  return out;
}

}  // namespace qu8it
