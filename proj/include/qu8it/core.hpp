#pragma once

// Shared numeric types, error types and small dense helpers.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace qu8it {

using cplx = std::complex<double>;
using Mat3 = Eigen::Matrix<cplx, 3, 3>;
using Mat8 = Eigen::Matrix<cplx, 8, 8>;
using MatX = Eigen::MatrixXcd;
using VecX = Eigen::VectorXcd;
using SparseOp = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<cplx>;

inline constexpr cplx kI{0.0, 1.0};

/// Default tolerances: construction identities, Hermiticity, eigenvalue comparisons.
struct Tolerances {
  double identity = 1e-13;
  double hermitian = 1e-12;
  double eigenvalue = 1e-9;

  bool operator==(const Tolerances&) const = default;
};

enum class ErrorKind {
  NonHermitianInput,
  DimensionCapExceeded,
  InvalidParams,
  EmptySector,
  DimensionMismatch,
  BadStateSpec,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonHermitianInput: return "NonHermitianInput";
    case ErrorKind::DimensionCapExceeded: return "DimensionCapExceeded";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::EmptySector: return "EmptySector";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::BadStateSpec: return "BadStateSpec";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Largest absolute entry; 0 for empty matrices.
template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

inline double max_abs(const SparseOp& m) {
  double best = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseOp::InnerIterator it(m, k); it; ++it) best = std::max(best, std::abs(it.value()));
  return best;
}

template <class A, class B>
MatX kron(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  MatX out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

template <class A, class B>
MatX commutator(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return a * b - b * a;
}

template <class A, class B>
MatX anticommutator(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return a * b + b * a;
}

template <class Derived>
double hermiticity_residual(const Eigen::MatrixBase<Derived>& m) {
  return max_abs(m - m.adjoint());
}

inline double hermiticity_residual(const SparseOp& m) {
  SparseOp adj = m.adjoint();
  return max_abs(SparseOp(m - adj));
}

inline Mat8 diag8(const std::array<double, 8>& d) {
  Mat8 m = Mat8::Zero();
  for (int i = 0; i < 8; ++i) m(i, i) = d[static_cast<std::size_t>(i)];
  return m;
}

}  // namespace qu8it
