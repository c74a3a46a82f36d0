#pragma once

// SU(8) Givens generators X_(ij), Y_(ij), the diagonal Z_i, the Walsh-Hadamard
// diagonal basis w_i, and exact decompositions of Hermitian operators on one
// or two qu8its into tensor products of these generators.

#include "qu8it/core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace qu8it {

/// Generator label. Indices are one-based, as printed (X_(13) has i=1, j=3).
/// Canonical ordering by class: X < Y < w < diag literal < Z.
struct Generator {
  enum class Kind : int { X = 0, Y = 1, W = 2, Diag = 3, Z = 4 };
  Kind kind = Kind::W;
  int i = 1;
  int j = 0;
  /// Explicit diagonal entries, only for Kind::Diag.
  std::array<double, 8> diag{};

  static Generator X(int i, int j) { return {Kind::X, std::min(i, j), std::max(i, j), {}}; }
  static Generator Y(int i, int j) {
    // Y_(ji) = -Y_(ij); callers that need the swapped pair negate the coefficient.
    return {Kind::Y, i, j, {}};
  }
  static Generator W(int i) { return {Kind::W, i, 0, {}}; }
  static Generator Z(int i) { return {Kind::Z, i, 0, {}}; }
  static Generator Diag(const std::array<double, 8>& d) { return {Kind::Diag, 0, 0, d}; }

  std::string str() const {
    std::ostringstream os;
    switch (kind) {
      case Kind::X: os << "X(" << i << j << ")"; break;
      case Kind::Y: os << "Y(" << i << j << ")"; break;
      case Kind::W: os << "w" << i; break;
      case Kind::Z: os << "Z" << i; break;
      case Kind::Diag: {
        os << "diag(";
        for (std::size_t k = 0; k < 8; ++k) os << (k ? "," : "") << diag[k];
        os << ")";
        break;
      }
    }
    return os.str();
  }

  auto key() const { return std::tuple(static_cast<int>(kind), i, j, diag); }
  bool operator<(const Generator& o) const { return key() < o.key(); }
  bool operator==(const Generator& o) const { return key() == o.key(); }
};

struct GeneratorBasis {
  std::vector<std::pair<int, int>> pairs;  ///< 28 one-based (i<j) pairs, lexicographic
  std::vector<Mat8> X;                     ///< aligned with pairs
  std::vector<Mat8> Y;
  std::array<Mat8, 7> Z;
  std::array<Mat8, 8> w;
  std::array<std::array<int, 8>, 8> walsh_signs{};

  int pair_index(int i, int j) const {
    const auto it = std::find(pairs.begin(), pairs.end(), std::pair{std::min(i, j), std::max(i, j)});
    if (it == pairs.end()) throw Error(ErrorKind::InvalidParams, "bad Givens pair");
    return static_cast<int>(it - pairs.begin());
  }
  /// Y_(ij) for any ordered pair; Y_(ji) = -Y_(ij).
  Mat8 y(int i, int j) const {
    const Mat8& m = Y[static_cast<std::size_t>(pair_index(i, j))];
    return i < j ? m : Mat8(-m);
  }
  const Mat8& x(int i, int j) const { return X[static_cast<std::size_t>(pair_index(i, j))]; }

  /// Full 64-element Hermitian basis in canonical order: X(28), Y(28), w(8).
  std::vector<Generator> hermitian_labels() const {
    std::vector<Generator> out;
    for (auto [i, j] : pairs) out.push_back(Generator::X(i, j));
    for (auto [i, j] : pairs) out.push_back(Generator::Y(i, j));
    for (int k = 1; k <= 8; ++k) out.push_back(Generator::W(k));
    return out;
  }

  Mat8 matrix(const Generator& g) const {
    switch (g.kind) {
      case Generator::Kind::X: return x(g.i, g.j);
      case Generator::Kind::Y: return y(g.i, g.j);
      case Generator::Kind::W: return w[static_cast<std::size_t>(g.i - 1)];
      case Generator::Kind::Z: return Z[static_cast<std::size_t>(g.i - 1)];
      case Generator::Kind::Diag: return diag8(g.diag);
    }
    throw Error(ErrorKind::InvalidParams, "unknown generator: " + g.str());
  }
};

namespace detail {

inline GeneratorBasis make_basis() {
  GeneratorBasis b;
  for (int i = 1; i <= 8; ++i)
    for (int j = i + 1; j <= 8; ++j) {
      b.pairs.emplace_back(i, j);
      Mat8 x = Mat8::Zero();
      x(i - 1, j - 1) = 1.0;
      x(j - 1, i - 1) = 1.0;
      Mat8 y = Mat8::Zero();
      y(i - 1, j - 1) = -kI;
      y(j - 1, i - 1) = kI;
      b.X.push_back(x);
      b.Y.push_back(y);
    }
  for (int k = 1; k <= 7; ++k) {
    std::array<double, 8> d{};
    const double norm = 1.0 / std::sqrt(static_cast<double>(k * (k + 1)) / 2.0);
    for (int n = 0; n < k; ++n) d[static_cast<std::size_t>(n)] = norm;
    d[static_cast<std::size_t>(k)] = -k * norm;
    b.Z[static_cast<std::size_t>(k - 1)] = diag8(d);
  }
  // Sign patterns in the order produced by HadamardMatrix[8] (sequency order).
  b.walsh_signs = {{
      {1, 1, 1, 1, 1, 1, 1, 1},
      {1, 1, 1, 1, -1, -1, -1, -1},
      {1, 1, -1, -1, -1, -1, 1, 1},
      {1, 1, -1, -1, 1, 1, -1, -1},
      {1, -1, -1, 1, 1, -1, -1, 1},
      {1, -1, -1, 1, -1, 1, 1, -1},
      {1, -1, 1, -1, -1, 1, -1, 1},
      {1, -1, 1, -1, 1, -1, 1, -1},
  }};
  const double s = 1.0 / std::sqrt(8.0);
  for (std::size_t k = 0; k < 8; ++k) {
    std::array<double, 8> d{};
    for (std::size_t n = 0; n < 8; ++n) d[n] = s * b.walsh_signs[k][n];
    b.w[k] = diag8(d);
  }
  return b;
}

}  // namespace detail

inline const GeneratorBasis& build_basis() {
  static const GeneratorBasis basis = detail::make_basis();
  return basis;
}

/// Walsh coefficients of a diagonal literal: d = sum_k coeff[k] w_{k+1}.
inline std::array<double, 8> diag_to_walsh(const std::array<double, 8>& d) {
  const auto& b = build_basis();
  std::array<double, 8> out{};
  const double s = 1.0 / std::sqrt(8.0);
  for (std::size_t k = 0; k < 8; ++k) {
    double acc = 0.0;
    for (std::size_t n = 0; n < 8; ++n) acc += s * b.walsh_signs[k][n] * d[n];
    out[k] = acc;
  }
  return out;
}

inline std::array<double, 8> walsh_to_diag(const std::array<double, 8>& coeff) {
  const auto& b = build_basis();
  std::array<double, 8> out{};
  const double s = 1.0 / std::sqrt(8.0);
  for (std::size_t k = 0; k < 8; ++k)
    for (std::size_t n = 0; n < 8; ++n) out[n] += coeff[k] * s * b.walsh_signs[k][n];
  return out;
}

/// One factor of a tensor-product term: a generator on a named qudit slot.
struct Factor {
  int slot = 0;
  Generator gen;
  bool operator<(const Factor& o) const { return std::tie(slot, gen) < std::tie(o.slot, o.gen); }
  bool operator==(const Factor& o) const { return slot == o.slot && gen == o.gen; }
};

struct GivensTerm {
  double coeff = 0.0;
  std::vector<Factor> factors;  ///< sorted by slot; slots absent act as identity
};

/// Sum of coefficient-weighted tensor products of generators on qudit slots.
class GivensTermList {
 public:
  GivensTermList() = default;

  void add(double coeff, std::vector<Factor> factors) {
    std::sort(factors.begin(), factors.end());
    terms_.push_back({coeff, std::move(factors)});
  }
  void add(const GivensTermList& other, double scale = 1.0) {
    for (const auto& t : other.terms_) terms_.push_back({scale * t.coeff, t.factors});
  }

  /// Canonical form: factors sorted per term, identical signatures merged,
  /// terms sorted by signature, near-zero coefficients dropped.
  GivensTermList canonical(double drop_below = 0.0) const {
    std::map<std::vector<Factor>, double> merged;
    for (const auto& t : terms_) {
      auto f = t.factors;
      std::sort(f.begin(), f.end());
      merged[f] += t.coeff;
    }
    GivensTermList out;
    for (auto& [f, c] : merged)
      if (std::abs(c) > drop_below) out.terms_.push_back({c, f});
    return out;
  }

  const std::vector<GivensTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  /// Dense operator on `slots` qu8its (slot 0 is the leftmost tensor factor).
  MatX to_matrix(int slots, const GeneratorBasis& basis = build_basis()) const {
    std::size_t dim = 1;
    for (int s = 0; s < slots; ++s) dim *= 8;
    MatX out = MatX::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (const auto& t : terms_) {
      std::vector<Mat8> per_slot(static_cast<std::size_t>(slots), Mat8::Identity());
      for (const auto& f : t.factors) {
        if (f.slot < 0 || f.slot >= slots) throw Error(ErrorKind::DimensionMismatch, "factor slot out of range");
        per_slot[static_cast<std::size_t>(f.slot)] = per_slot[static_cast<std::size_t>(f.slot)] * basis.matrix(f.gen);
      }
      MatX prod = per_slot[0];
      for (int s = 1; s < slots; ++s) prod = kron(prod, per_slot[static_cast<std::size_t>(s)]);
      out += t.coeff * prod;
    }
    return out;
  }

  std::string str() const {
    std::ostringstream os;
    os.precision(6);
    for (const auto& t : terms_) {
      os << (t.coeff >= 0 ? " + " : " - ") << std::abs(t.coeff);
      for (const auto& f : t.factors) os << " " << f.gen.str() << "@" << f.slot;
      os << "\n";
    }
    return os.str();
  }

 private:
  std::vector<GivensTerm> terms_;
};

namespace detail {

inline void require_hermitian(const MatX& H, double tol) {
  if (H.rows() != H.cols()) throw Error(ErrorKind::DimensionMismatch, "operator is not square");
  const double r = hermiticity_residual(H);
  if (r > tol) {
    std::ostringstream os;
    os << "hermiticity residual " << r << " exceeds " << tol;
    throw Error(ErrorKind::NonHermitianInput, os.str());
  }
}

inline double gram(const Generator& g) { return g.kind == Generator::Kind::W ? 1.0 : 2.0; }

}  // namespace detail

/// Projects an 8x8 Hermitian matrix onto {X, Y, w} via trace inner products.
inline GivensTermList decompose(const MatX& H, double hermitian_tol = 1e-12, double drop_below = 1e-15) {
  if (H.rows() != 8) throw Error(ErrorKind::DimensionMismatch, "decompose expects an 8x8 matrix");
  detail::require_hermitian(H, hermitian_tol);
  const auto& basis = build_basis();
  GivensTermList out;
  for (const auto& g : basis.hermitian_labels()) {
    const double c = (basis.matrix(g) * H).trace().real() / detail::gram(g);
    if (std::abs(c) > drop_below) out.add(c, {Factor{0, g}});
  }
  return out;
}

/// Coefficients of a 64x64 Hermitian matrix over the 4096-element product
/// basis {X,Y,w} (x) {X,Y,w}; entry [a][b] multiplies G_a (x) G_b.
inline MatX two_site_coefficients(const MatX& H, double hermitian_tol = 1e-12) {
  if (H.rows() != 64) throw Error(ErrorKind::DimensionMismatch, "decompose_two_site expects a 64x64 matrix");
  detail::require_hermitian(H, hermitian_tol);
  const auto& basis = build_basis();
  const auto labels = basis.hermitian_labels();
  std::vector<Mat8> mats;
  for (const auto& g : labels) mats.push_back(basis.matrix(g));
  MatX coeff = MatX::Zero(64, 64);
  for (std::size_t a = 0; a < labels.size(); ++a) {
    // R = sum_{ij} (G_a)_{ji} H_block(i,j); coefficient = Tr[G_b R] / norms.
    Mat8 R = Mat8::Zero();
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        const cplx ga = mats[a](j, i);
        if (ga != cplx{}) R += ga * H.block<8, 8>(8 * i, 8 * j);
      }
    for (std::size_t b = 0; b < labels.size(); ++b) {
      const double c = (mats[b] * R).trace().real() / (detail::gram(labels[a]) * detail::gram(labels[b]));
      coeff(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = c;
    }
  }
  return coeff;
}

inline GivensTermList decompose_two_site(const MatX& H, double hermitian_tol = 1e-12, double drop_below = 1e-15) {
  const MatX coeff = two_site_coefficients(H, hermitian_tol);
  const auto labels = build_basis().hermitian_labels();
  GivensTermList out;
  for (std::size_t a = 0; a < labels.size(); ++a)
    for (std::size_t b = 0; b < labels.size(); ++b) {
      const double c = coeff(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)).real();
      if (std::abs(c) > drop_below) out.add(c, {Factor{0, labels[a]}, Factor{1, labels[b]}});
    }
  return out;
}

/// Counts the individual two-qudit rotations a 64x64 term needs when applied
/// without grouping: every off-diagonal product coefficient is one Givens
/// product; the traceless diagonal part costs its rank as a sum of products.
inline int ungrouped_rotation_count(const MatX& H, double tol = 1e-12) {
  const MatX coeff = two_site_coefficients(H);
  const auto labels = build_basis().hermitian_labels();
  int off_diagonal = 0;
  Eigen::MatrixXd diag_block = Eigen::MatrixXd::Zero(7, 7);
  for (std::size_t a = 0; a < labels.size(); ++a)
    for (std::size_t b = 0; b < labels.size(); ++b) {
      const double c = coeff(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)).real();
      if (std::abs(c) <= tol) continue;
      const bool wa = labels[a].kind == Generator::Kind::W;
      const bool wb = labels[b].kind == Generator::Kind::W;
      if (!wa || !wb) {
        // Terms with an identity factor act on one qudit only.
        const bool identity_a = wa && labels[a].i == 1;
        const bool identity_b = wb && labels[b].i == 1;
        if (!identity_a && !identity_b) ++off_diagonal;
      } else if (labels[a].i > 1 && labels[b].i > 1) {
        diag_block(labels[a].i - 2, labels[b].i - 2) = c;
      }
    }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(diag_block);
  lu.setThreshold(1e-10);
  return off_diagonal + static_cast<int>(lu.rank());
}

/// Color-grouped hopping combinations and charge-pair combinations.
struct GroupedOperators {
  /// A[parity][color], B[parity][color]; parity 0 = left factor, 1 = right factor.
  std::array<std::array<Mat8, 3>, 2> A;
  std::array<std::array<Mat8, 3>, 2> B;
  /// C[pair], D[pair] for pair labels (12), (45), (67), in that order.
  std::array<Mat8, 3> C;
  std::array<Mat8, 3> D;
  std::array<GivensTermList, 3> C_terms;
  std::array<GivensTermList, 3> D_terms;
  std::array<std::array<GivensTermList, 3>, 2> A_terms;
  std::array<std::array<GivensTermList, 3>, 2> B_terms;
};

inline constexpr std::array<const char*, 3> kChargePairLabels{"(12)", "(45)", "(67)"};

namespace detail {

struct SignedPair {
  int sign;
  int i;
  int j;
};

inline GivensTermList combo(Generator::Kind kind, const std::vector<SignedPair>& parts) {
  GivensTermList t;
  for (const auto& p : parts)
    t.add(p.sign, {Factor{0, kind == Generator::Kind::X ? Generator::X(p.i, p.j) : Generator::Y(p.i, p.j)}});
  return t;
}

}  // namespace detail

inline GroupedOperators build_grouped_operators() {
  using K = Generator::Kind;
  using detail::combo;
  GroupedOperators g;
  const std::array<std::array<std::vector<detail::SignedPair>, 3>, 2> hop = {{
      {{{{1, 1, 2}, {-1, 3, 7}, {1, 4, 6}, {1, 5, 8}},
        {{1, 1, 3}, {1, 2, 7}, {-1, 4, 5}, {1, 6, 8}},
        {{1, 1, 4}, {-1, 2, 6}, {1, 3, 5}, {1, 7, 8}}}},
      {{{{1, 1, 2}, {1, 3, 7}, {-1, 4, 6}, {1, 5, 8}},
        {{1, 1, 3}, {-1, 2, 7}, {1, 4, 5}, {1, 6, 8}},
        {{1, 1, 4}, {1, 2, 6}, {-1, 3, 5}, {1, 7, 8}}}},
  }};
  for (std::size_t p = 0; p < 2; ++p)
    for (std::size_t c = 0; c < 3; ++c) {
      g.A_terms[p][c] = combo(K::X, hop[p][c]);
      g.B_terms[p][c] = combo(K::Y, hop[p][c]);
      g.A[p][c] = g.A_terms[p][c].to_matrix(1);
      g.B[p][c] = g.B_terms[p][c].to_matrix(1);
    }
  g.C_terms = {combo(K::X, {{1, 2, 3}, {-1, 5, 6}}), combo(K::X, {{1, 2, 4}, {-1, 5, 7}}),
               combo(K::X, {{1, 3, 4}, {-1, 6, 7}})};
  g.D_terms = {combo(K::Y, {{1, 2, 3}, {1, 5, 6}}), combo(K::Y, {{1, 2, 4}, {1, 5, 7}}),
               combo(K::Y, {{1, 3, 4}, {1, 6, 7}})};
  for (std::size_t k = 0; k < 3; ++k) {
    g.C[k] = g.C_terms[k].to_matrix(1);
    g.D[k] = g.D_terms[k].to_matrix(1);
  }
  return g;
}

inline const GroupedOperators& grouped_operators() {
  static const GroupedOperators g = build_grouped_operators();
  return g;
}

}  // namespace qu8it
