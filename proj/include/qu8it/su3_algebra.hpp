#pragma once

// SU(3) generators in Gell-Mann's convention, the anti-fundamental partners
// Tbar^a = (-T^a)^*, and the structure constants f^{abc}.

#include "qu8it/core.hpp"

#include <array>
#include <cmath>

namespace qu8it {

struct GellMannSet {
  std::array<Mat3, 8> lambda;
  std::array<Mat3, 8> T;
  std::array<Mat3, 8> Tbar;
  /// f[a][b][c], zero-based adjoint indices.
  std::array<std::array<std::array<double, 8>, 8>, 8> f{};

  /// f^{abc} with one-based indices, as usually written.
  double structure(int a, int b, int c) const {
    return f[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b - 1)]
            [static_cast<std::size_t>(c - 1)];
  }
};

namespace detail {

inline GellMannSet make_gell_mann() {
  GellMannSet s;
  for (auto& m : s.lambda) m.setZero();
  const double inv_sqrt3 = 1.0 / std::sqrt(3.0);

  s.lambda[0](0, 1) = 1.0;
  s.lambda[0](1, 0) = 1.0;

  s.lambda[1](0, 1) = -kI;
  s.lambda[1](1, 0) = kI;

  s.lambda[2](0, 0) = 1.0;
  s.lambda[2](1, 1) = -1.0;

  s.lambda[3](0, 2) = 1.0;
  s.lambda[3](2, 0) = 1.0;

  s.lambda[4](0, 2) = -kI;
  s.lambda[4](2, 0) = kI;

  s.lambda[5](1, 2) = 1.0;
  s.lambda[5](2, 1) = 1.0;

  s.lambda[6](1, 2) = -kI;
  s.lambda[6](2, 1) = kI;

  s.lambda[7](0, 0) = inv_sqrt3;
  s.lambda[7](1, 1) = inv_sqrt3;
  s.lambda[7](2, 2) = -2.0 * inv_sqrt3;

  for (std::size_t a = 0; a < 8; ++a) {
    s.T[a] = 0.5 * s.lambda[a];
    s.Tbar[a] = (-s.T[a]).conjugate();
  }

  // f^{abc} = -2i Tr([T^a, T^b] T^c)
  for (std::size_t a = 0; a < 8; ++a)
    for (std::size_t b = 0; b < 8; ++b) {
      const Mat3 comm = s.T[a] * s.T[b] - s.T[b] * s.T[a];
      for (std::size_t c = 0; c < 8; ++c) {
        const cplx v = -2.0 * kI * (comm * s.T[c]).trace();
        s.f[a][b][c] = v.real();
      }
    }
  return s;
}

}  // namespace detail

/// The cached generator set. Immutable; safe to share between threads.
inline const GellMannSet& gell_mann() {
  static const GellMannSet set = detail::make_gell_mann();
  return set;
}

/// Sum_a T^a T^a; equals (4/3) I_3.
inline Mat3 casimir_fundamental(const GellMannSet& s = gell_mann()) {
  Mat3 c = Mat3::Zero();
  for (const auto& t : s.T) c += t * t;
  return c;
}

inline Mat3 casimir_antifundamental(const GellMannSet& s = gell_mann()) {
  Mat3 c = Mat3::Zero();
  for (const auto& t : s.Tbar) c += t * t;
  return c;
}

/// max_{a,b} || [G^a, G^b] - i f^{abc} G^c ||_max for G = T or Tbar.
inline double closure_residual(const GellMannSet& s, bool anti) {
  const auto& g = anti ? s.Tbar : s.T;
  double worst = 0.0;
  for (std::size_t a = 0; a < 8; ++a)
    for (std::size_t b = 0; b < 8; ++b) {
      Mat3 rhs = Mat3::Zero();
      for (std::size_t c = 0; c < 8; ++c) rhs += kI * s.f[a][b][c] * g[c];
      const Mat3 lhs = g[a] * g[b] - g[b] * g[a];
      worst = std::max(worst, max_abs(lhs - rhs));
    }
  return worst;
}

}  // namespace qu8it
