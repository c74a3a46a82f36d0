#pragma once

// Single-qu8it operators for one flavor of quark (or anti-quark) at one
// staggered site.
//
// Basis ordering, one-based in documentation and zero-based in code
// (index = label - 1). This is the only place the two conventions meet:
//
//   label  state                 irrep   quarks
//   1      |Omega>               1       0
//   2      |q_r>                 3       1
//   3      |q_g>                 3       1
//   4      |q_b>                 3       1
//   5      |q_g q_b>             3bar    2
//   6      -|q_r q_b>            3bar    2
//   7      |q_r q_g>             3bar    2
//   8      |q_r q_g q_b>         1       3
//
// Anti-qu8its use the same basis with r,g,b replaced by their anti-colors;
// their irreps are conjugated and their creation/annihilation matrices are
// identical to the quark ones. Only the charge matrices differ.

#include "qu8it/core.hpp"
#include "qu8it/su3_algebra.hpp"

#include <array>
#include <bit>
#include <set>
#include <string_view>

namespace qu8it {

enum class Color : int { r = 0, g = 1, b = 2 };
inline constexpr std::array<Color, 3> kColors{Color::r, Color::g, Color::b};

inline constexpr int index_from_label(int label) { return label - 1; }
inline constexpr int label_from_index(int index) { return index + 1; }

enum class Irrep { singlet, triplet, antitriplet };

struct Qu8itBasis {
  static constexpr std::array<std::string_view, 8> states{
      "|Omega>", "|q_r>", "|q_g>", "|q_b>", "|q_g q_b>", "-|q_r q_b>", "|q_r q_g>", "|q_r q_g q_b>"};
  static constexpr std::array<Irrep, 8> irrep{Irrep::singlet,     Irrep::triplet,     Irrep::triplet,
                                              Irrep::triplet,     Irrep::antitriplet, Irrep::antitriplet,
                                              Irrep::antitriplet, Irrep::singlet};
  static constexpr std::array<int, 8> occupation{0, 1, 1, 1, 2, 2, 2, 3};
  /// Sign of the defining product of creation operators on |Omega>.
  static constexpr std::array<int, 8> sign{1, 1, 1, 1, 1, -1, 1, 1};
  /// Occupation bitmask (bit 0 = r, bit 1 = g, bit 2 = b).
  static constexpr std::array<unsigned, 8> modes{0b000, 0b001, 0b010, 0b100, 0b110, 0b101, 0b011, 0b111};
};

struct Qu8itOperators {
  std::array<Mat8, 3> c;      ///< annihilation, indexed by Color
  std::array<Mat8, 3> c_dag;  ///< transposes of c
  Mat8 P;                     ///< fermionic phase (parity) matrix
  std::array<Mat8, 8> Q;      ///< charges on qu8its
  std::array<Mat8, 8> Qbar;   ///< charges on anti-qu8its
  Mat8 B;                     ///< baryon number
  Mat8 I;

  const Mat8& annihilate(Color col) const { return c[static_cast<std::size_t>(col)]; }
  const Mat8& create(Color col) const { return c_dag[static_cast<std::size_t>(col)]; }
  /// Charge matrices for a site of the given parity (anti = odd staggered site).
  const std::array<Mat8, 8>& charges(bool anti) const { return anti ? Qbar : Q; }
};

namespace detail {

inline Mat8 unit(int row_label, int col_label) {
  Mat8 m = Mat8::Zero();
  m(index_from_label(row_label), index_from_label(col_label)) = 1.0;
  return m;
}

inline Mat8 block_charge(const Mat3& triplet_block, const Mat3& antitriplet_block) {
  Mat8 m = Mat8::Zero();
  m.block<3, 3>(1, 1) = triplet_block;
  m.block<3, 3>(4, 4) = antitriplet_block;
  return m;
}

}  // namespace detail

/// Annihilation matrices as printed, with labels one-based.
inline std::array<Mat8, 3> annihilation_matrices() {
  using detail::unit;
  return {
      unit(1, 2) + unit(3, 7) - unit(4, 6) + unit(5, 8),
      unit(1, 3) - unit(2, 7) + unit(4, 5) + unit(6, 8),
      unit(1, 4) + unit(2, 6) - unit(3, 5) + unit(7, 8),
  };
}

inline Qu8itOperators build_qu8it_operators(const GellMannSet& algebra = gell_mann()) {
  Qu8itOperators ops;
  ops.c = annihilation_matrices();
  for (std::size_t k = 0; k < 3; ++k) ops.c_dag[k] = ops.c[k].transpose();
  ops.P = diag8({1, -1, -1, -1, 1, 1, 1, -1});
  for (std::size_t a = 0; a < 8; ++a) {
    ops.Q[a] = detail::block_charge(algebra.T[a], algebra.Tbar[a]);
    ops.Qbar[a] = detail::block_charge(algebra.Tbar[a], algebra.T[a]);
  }
  ops.B = diag8({0, 1.0 / 3, 1.0 / 3, 1.0 / 3, 2.0 / 3, 2.0 / 3, 2.0 / 3, 1.0});
  ops.I = Mat8::Identity();
  return ops;
}

/// Independent construction from a 3-mode fermionic Fock space.
struct FockOracle {
  /// Columns: qu8it basis states expressed in the Fock occupation basis
  /// (Fock index = occupation bitmask, bit 0 = r).
  Mat8 embedding;
  std::array<Mat8, 3> fock_c;  ///< annihilators in the Fock basis
  std::array<Mat8, 3> c;       ///< annihilators in the qu8it basis
  std::array<Mat8, 3> c_dag;
  Mat8 P;
  std::array<Mat8, 8> Q;
  std::array<Mat8, 8> Qbar;
  Mat8 B;
};

/// Builds mode-ordered (r,g,b) creation operators with Jordan-Wigner sign
/// strings, expresses the eight qu8it states as products of creators on the
/// vacuum, and pulls every operator back into the qu8it basis.
/// `state6_sign` is the sign in front of c_r^dag c_b^dag |Omega> for |6>;
/// it is exposed so tests can perturb it.
inline FockOracle fock_oracle(const GellMannSet& algebra = gell_mann(), int state6_sign = -1) {
  FockOracle o;
  for (std::size_t mode = 0; mode < 3; ++mode) {
    Mat8 a = Mat8::Zero();
    for (unsigned occ = 0; occ < 8; ++occ) {
      if (!(occ & (1u << mode))) continue;
      int parity = 0;
      for (std::size_t m = 0; m < mode; ++m) parity += (occ >> m) & 1u;
      a(static_cast<int>(occ & ~(1u << mode)), static_cast<int>(occ)) = (parity % 2) ? -1.0 : 1.0;
    }
    o.fock_c[mode] = a;
  }
  const auto cr_dag = o.fock_c[0].adjoint().eval();
  const auto cg_dag = o.fock_c[1].adjoint().eval();
  const auto cb_dag = o.fock_c[2].adjoint().eval();
  Eigen::Matrix<cplx, 8, 1> vac = Eigen::Matrix<cplx, 8, 1>::Zero();
  vac(0) = 1.0;

  o.embedding.col(0) = vac;
  o.embedding.col(1) = cr_dag * vac;
  o.embedding.col(2) = cg_dag * vac;
  o.embedding.col(3) = cb_dag * vac;
  o.embedding.col(4) = cg_dag * cb_dag * vac;
  o.embedding.col(5) = static_cast<double>(state6_sign) * (cr_dag * cb_dag * vac);
  o.embedding.col(6) = cr_dag * cg_dag * vac;
  o.embedding.col(7) = cr_dag * cg_dag * cb_dag * vac;

  const Mat8 V = o.embedding;
  const Mat8 Vd = V.adjoint();
  for (std::size_t k = 0; k < 3; ++k) {
    o.c[k] = Vd * o.fock_c[k] * V;
    o.c_dag[k] = o.c[k].adjoint();
  }

  Mat8 number = Mat8::Zero();
  for (std::size_t k = 0; k < 3; ++k) number += o.fock_c[k].adjoint() * o.fock_c[k];
  Mat8 parity = Mat8::Zero();
  for (int occ = 0; occ < 8; ++occ) parity(occ, occ) = (std::popcount(static_cast<unsigned>(occ)) % 2) ? -1.0 : 1.0;
  o.P = Vd * parity * V;
  o.B = Vd * (number / 3.0) * V;

  for (std::size_t a = 0; a < 8; ++a) {
    Mat8 q = Mat8::Zero();
    Mat8 qb = Mat8::Zero();
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        const Mat8 bil = o.fock_c[i].adjoint() * o.fock_c[j];
        q += algebra.T[a](static_cast<int>(i), static_cast<int>(j)) * bil;
        qb += algebra.Tbar[a](static_cast<int>(i), static_cast<int>(j)) * bil;
      }
    o.Q[a] = Vd * q * V;
    o.Qbar[a] = Vd * qb * V;
  }
  return o;
}

/// Apply a Fock-space creator to a qu8it state and express the result back in
/// the qu8it basis (zero vector for Pauli-blocked transitions).
inline Eigen::Matrix<cplx, 8, 1> fock_create(const FockOracle& o, Color col, int label) {
  const Eigen::Matrix<cplx, 8, 1> in = o.embedding.col(index_from_label(label));
  const Eigen::Matrix<cplx, 8, 1> out = o.fock_c[static_cast<std::size_t>(col)].adjoint() * in;
  return o.embedding.adjoint() * out;
}

struct TransitionGraph {
  std::array<std::set<int>, 8> kinetic;  ///< zero-based neighbours via c or c^dag
  std::array<std::set<int>, 8> charge;   ///< zero-based neighbours via off-diagonal Q^a
  int degree(int index) const {
    std::set<int> all = kinetic[static_cast<std::size_t>(index)];
    all.insert(charge[static_cast<std::size_t>(index)].begin(), charge[static_cast<std::size_t>(index)].end());
    return static_cast<int>(all.size());
  }
};

inline TransitionGraph transition_graph(const Qu8itOperators& ops, double tol = 1e-14) {
  TransitionGraph g;
  auto add = [&](const Mat8& m, std::array<std::set<int>, 8>& edges) {
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j)
        if (i != j && std::abs(m(i, j)) > tol) {
          edges[static_cast<std::size_t>(i)].insert(j);
          edges[static_cast<std::size_t>(j)].insert(i);
        }
  };
  for (const auto& c : ops.c) add(c, g.kinetic);
  for (const auto& q : ops.Q) add(q, g.charge);
  return g;
}

}  // namespace qu8it
