#pragma once

// Closed-form Givens/Walsh expansions of the single-link operators (one qu8it
// and one anti-qu8it), written term by term, next to the same operators built
// directly from the creation/annihilation and charge matrices. The identity
// suite compares the two routes.

#include "qu8it/givens_walsh.hpp"
#include "qu8it/qu8it_mapping.hpp"

#include <array>
#include <utility>
#include <vector>

namespace qu8it::forms {

using Pair = std::pair<int, int>;

/// A pair label with an attached sign: {-1, {2,6}} stands for "-(26)".
struct SignedLabel {
  int sign;
  Pair pair;
};

inline std::array<double, 8> casimir_complement_diag() {
  const double t = -1.0 / 3.0;
  return {1, t, t, t, t, t, t, 1};
}

// ---------------------------------------------------------------------------
// Direct constructions from the single-qu8it operator algebra.

inline MatX hopping_link(const Qu8itOperators& ops) {
  MatX h = MatX::Zero(64, 64);
  for (std::size_t a = 0; a < 3; ++a)
    h += 0.5 * (kron(ops.c_dag[a] * ops.P, ops.c_dag[a]) - kron(ops.c[a] * ops.P, ops.c[a]));
  return h;
}

/// sum_a (Q^a (x) I)^2 on a qu8it/anti-qu8it pair.
inline MatX casimir_left(const Qu8itOperators& ops) {
  MatX h = MatX::Zero(64, 64);
  for (const auto& q : ops.Q) {
    const MatX e = kron(q, ops.I);
    h += e * e;
  }
  return h;
}

inline MatX casimir_right(const Qu8itOperators& ops) {
  MatX h = MatX::Zero(64, 64);
  for (const auto& q : ops.Qbar) {
    const MatX e = kron(ops.I, q);
    h += e * e;
  }
  return h;
}

/// sum_a (Q^a (x) I + I (x) Qbar^a)^2: the squared total charge of the link.
inline MatX total_charge_squared(const Qu8itOperators& ops) {
  MatX h = MatX::Zero(64, 64);
  for (std::size_t a = 0; a < 8; ++a) {
    const MatX e = kron(ops.Q[a], ops.I) + kron(ops.I, ops.Qbar[a]);
    h += e * e;
  }
  return h;
}

/// sum_a G^a (x) H^a with G, H chosen by site parity (anti = Qbar).
inline MatX charge_contraction(const Qu8itOperators& ops, bool left_anti, bool right_anti) {
  MatX h = MatX::Zero(64, 64);
  const auto& l = ops.charges(left_anti);
  const auto& r = ops.charges(right_anti);
  for (std::size_t a = 0; a < 8; ++a) h += kron(l[a], r[a]);
  return h;
}

// ---------------------------------------------------------------------------
// Term-by-term expansions.

/// B = (6w1 - 3w2 - w4 - w6 - w8) / (3 sqrt 2).
inline GivensTermList baryon_walsh() {
  GivensTermList t;
  const double s = 1.0 / (3.0 * std::sqrt(2.0));
  t.add(6 * s, {{0, Generator::W(1)}});
  t.add(-3 * s, {{0, Generator::W(2)}});
  t.add(-s, {{0, Generator::W(4)}});
  t.add(-s, {{0, Generator::W(6)}});
  t.add(-s, {{0, Generator::W(8)}});
  return t;
}

/// 3m(B (x) I + I (x) B) in Walsh form, for unit mass.
inline GivensTermList mass_link_walsh() {
  GivensTermList t;
  const auto b = baryon_walsh();
  for (const auto& term : b.terms()) {
    t.add(3 * term.coeff, {{0, term.factors[0].gen}});
    t.add(3 * term.coeff, {{1, term.factors[0].gen}});
  }
  return t;
}

/// The three printed forms of sum_a (Q^a (x) I)^2.
inline GivensTermList casimir_left_block_form() {
  GivensTermList t;
  t.add(4.0 / 3.0, {{0, Generator::Diag({0, 1, 1, 1, 1, 1, 1, 0})}});
  return t;
}

inline GivensTermList casimir_left_walsh_form() {
  GivensTermList t;
  t.add(8.0, {{0, Generator::W(1)}, {1, Generator::W(1)}});
  for (int k : {3, 5, 7}) t.add(-8.0 / 3.0, {{0, Generator::W(k)}, {1, Generator::W(1)}});
  return t;
}

inline GivensTermList casimir_left_literal_form() {
  GivensTermList t;
  t.add(1.0, {});
  t.add(-1.0, {{0, Generator::Diag(casimir_complement_diag())}});
  return t;
}

inline GivensTermList casimir_right_walsh_form() {
  GivensTermList t;
  t.add(8.0, {{0, Generator::W(1)}, {1, Generator::W(1)}});
  for (int k : {3, 5, 7}) t.add(-8.0 / 3.0, {{0, Generator::W(1)}, {1, Generator::W(k)}});
  return t;
}

inline GivensTermList casimir_right_literal_form() {
  GivensTermList t;
  t.add(1.0, {});
  t.add(-1.0, {{1, Generator::Diag(casimir_complement_diag())}});
  return t;
}

namespace detail {

inline void add_xx(GivensTermList& t, double c, Pair r, Pair s) {
  t.add(c, {{0, Generator::X(r.first, r.second)}, {1, Generator::X(s.first, s.second)}});
}
inline void add_yy(GivensTermList& t, double c, Pair r, Pair s) {
  t.add(c, {{0, Generator::Y(r.first, r.second)}, {1, Generator::Y(s.first, s.second)}});
}

/// sum over `coeffs` of c * (w_i (x) w_j) where coeffs hold (c, i, j).
inline void add_walsh_outer(GivensTermList& t, double scale, const std::vector<std::pair<double, int>>& left,
                            const std::vector<std::pair<double, int>>& right) {
  for (auto [cl, i] : left)
    for (auto [cr, j] : right) t.add(scale * cl * cr, {{0, Generator::W(i)}, {1, Generator::W(j)}});
}

inline const std::vector<std::pair<double, int>> kW3minusW5{{1.0, 3}, {-1.0, 5}};
inline const std::vector<std::pair<double, int>> kW4W6W8{{1.0, 4}, {1.0, 6}, {-2.0, 8}};
inline const std::vector<Pair> kChargePairs{{2, 3}, {2, 4}, {3, 4}, {5, 6}, {5, 7}, {6, 7}};
inline const std::vector<std::pair<Pair, Pair>> kChargeCross{{{2, 3}, {5, 6}}, {{2, 4}, {5, 7}}, {{3, 4}, {6, 7}}};

}  // namespace detail

/// The hopping term of one link expanded into 96 Givens products.
inline GivensTermList hopping_link_expanded() {
  using detail::add_xx;
  using detail::add_yy;
  GivensTermList t;
  const std::vector<SignedLabel> diagonal{
      {1, {1, 2}},  {1, {1, 3}},  {1, {1, 4}},  {1, {5, 8}},  {1, {6, 8}},  {1, {7, 8}},
      {-1, {2, 6}}, {-1, {2, 7}}, {-1, {3, 5}}, {-1, {3, 7}}, {-1, {4, 5}}, {-1, {4, 6}},
  };
  for (const auto& [sign, r] : diagonal) {
    add_xx(t, 0.25 * sign, r, r);
    add_yy(t, -0.25 * sign, r, r);
  }
  const std::vector<std::pair<Pair, Pair>> symmetric{
      {{1, 2}, {5, 8}}, {{1, 3}, {6, 8}}, {{1, 4}, {7, 8}}, {{2, 6}, {3, 5}}, {{2, 7}, {4, 5}}, {{3, 7}, {4, 6}},
  };
  for (const auto& [r, s] : symmetric) {
    add_xx(t, 0.25, r, s);
    add_xx(t, 0.25, s, r);
    add_yy(t, -0.25, r, s);
    add_yy(t, -0.25, s, r);
  }
  const std::vector<std::pair<Pair, Pair>> antisymmetric{
      {{1, 2}, {3, 7}}, {{4, 6}, {1, 2}}, {{2, 7}, {1, 3}}, {{1, 3}, {4, 5}}, {{1, 4}, {2, 6}}, {{3, 5}, {1, 4}},
      {{7, 8}, {2, 6}}, {{2, 7}, {6, 8}}, {{3, 5}, {7, 8}}, {{5, 8}, {3, 7}}, {{6, 8}, {4, 5}}, {{4, 6}, {5, 8}},
  };
  for (const auto& [r, s] : antisymmetric) {
    add_xx(t, 0.25, r, s);
    add_xx(t, -0.25, s, r);
    add_yy(t, -0.25, r, s);
    add_yy(t, 0.25, s, r);
  }
  return t;
}

/// sum_alpha (1/4)(A_0 (x) A_1 - B_0 (x) B_1), as a dense 64x64 matrix.
inline MatX hopping_link_grouped(const GroupedOperators& g = grouped_operators()) {
  MatX h = MatX::Zero(64, 64);
  for (std::size_t c = 0; c < 3; ++c) h += 0.25 * (kron(g.A[0][c], g.A[1][c]) - kron(g.B[0][c], g.B[1][c]));
  return h;
}

/// Expansion of sum_a Q^a (x) Q^a (= sum_a Qbar^a (x) Qbar^a).
inline GivensTermList charge_same_parity_expanded() {
  using namespace detail;
  GivensTermList t;
  add_walsh_outer(t, 0.5, kW3minusW5, kW3minusW5);
  add_walsh_outer(t, 1.0 / 6.0, kW4W6W8, kW4W6W8);
  for (const auto& r : kChargePairs) {
    add_yy(t, 0.25, r, r);
    add_xx(t, 0.25, r, r);
  }
  for (const auto& [r, s] : kChargeCross) {
    add_yy(t, 0.25, r, s);
    add_xx(t, -0.25, r, s);
    add_yy(t, 0.25, s, r);
    add_xx(t, -0.25, s, r);
  }
  return t;
}

/// Expansion of sum_a Q^a (x) Qbar^a (= sum_a Qbar^a (x) Q^a).
inline GivensTermList charge_mixed_parity_expanded() {
  using namespace detail;
  GivensTermList t;
  add_walsh_outer(t, -0.5, kW3minusW5, kW3minusW5);
  add_walsh_outer(t, -1.0 / 6.0, kW4W6W8, kW4W6W8);
  for (const auto& r : kChargePairs) {
    add_yy(t, 0.25, r, r);
    add_xx(t, -0.25, r, r);
  }
  for (const auto& [r, s] : kChargeCross) {
    add_xx(t, 0.25, r, s);
    add_yy(t, 0.25, r, s);
    add_xx(t, 0.25, s, r);
    add_yy(t, 0.25, s, r);
  }
  return t;
}

/// Commuting-set form: 1/4 sum_p (D_p (x) D_p +/- C_p (x) C_p) + Q3 (x) Q3' + Q8 (x) Q8'.
inline MatX charge_contraction_grouped(const Qu8itOperators& ops, bool left_anti, bool right_anti,
                                       const GroupedOperators& g = grouped_operators()) {
  const double cc_sign = (left_anti == right_anti) ? 1.0 : -1.0;
  MatX h = MatX::Zero(64, 64);
  for (std::size_t p = 0; p < 3; ++p) h += 0.25 * (kron(g.D[p], g.D[p]) + cc_sign * kron(g.C[p], g.C[p]));
  const auto& l = ops.charges(left_anti);
  const auto& r = ops.charges(right_anti);
  h += kron(l[2], r[2]) + kron(l[7], r[7]);
  return h;
}

/// sum_a (Q^a (x) I + I (x) Qbar^a)^2 expanded into Walsh and Givens products.
inline GivensTermList total_charge_squared_expanded() {
  using namespace detail;
  GivensTermList t;
  t.add(16.0, {{0, Generator::W(1)}, {1, Generator::W(1)}});
  for (int k : {3, 5, 7}) {
    t.add(-8.0 / 3.0, {{0, Generator::W(1)}, {1, Generator::W(k)}});
    t.add(-8.0 / 3.0, {{0, Generator::W(k)}, {1, Generator::W(1)}});
  }
  add_walsh_outer(t, -1.0, kW3minusW5, kW3minusW5);
  add_walsh_outer(t, -1.0 / 3.0, kW4W6W8, kW4W6W8);
  for (const auto& r : kChargePairs) {
    add_yy(t, 0.5, r, r);
    add_xx(t, -0.5, r, r);
  }
  for (const auto& [r, s] : kChargeCross) {
    add_xx(t, 0.5, r, s);
    add_yy(t, 0.5, r, s);
    add_xx(t, 0.5, s, r);
    add_yy(t, 0.5, s, r);
  }
  return t;
}

/// Same operator in commuting-set form.
inline MatX total_charge_squared_grouped(const Qu8itOperators& ops, const GroupedOperators& g = grouped_operators()) {
  MatX h = MatX::Zero(64, 64);
  for (std::size_t p = 0; p < 3; ++p) h += 0.5 * (kron(g.D[p], g.D[p]) - kron(g.C[p], g.C[p]));
  h += 2.0 * kron(ops.Q[2], ops.Qbar[2]) + 2.0 * kron(ops.Q[7], ops.Qbar[7]);
  const Mat8 comp = diag8(casimir_complement_diag());
  h += 2.0 * kron(ops.I, ops.I) - kron(comp, ops.I) - kron(ops.I, comp);
  return h;
}

}  // namespace qu8it::forms
