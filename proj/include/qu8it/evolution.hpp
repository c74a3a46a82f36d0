#pragma once

// Exact and Trotterized time evolution on a qu8it register.

#include "qu8it/spectrum.hpp"

#include <limits>
#include <map>
#include <unordered_map>

namespace qu8it {

struct StateVector {
  VecX amp;

  std::size_t dim() const { return static_cast<std::size_t>(amp.size()); }
  double norm() const { return amp.norm(); }

  static StateVector basis(std::size_t dim, std::size_t index) {
    StateVector s;
    s.amp = VecX::Zero(static_cast<Eigen::Index>(dim));
    s.amp(static_cast<Eigen::Index>(index)) = 1.0;
    return s;
  }
};

inline double fidelity(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "fidelity of states of different size");
  return std::norm(a.amp.dot(b.amp));
}

/// <psi|O|psi> for each operator; the imaginary part is discarded after the check.
inline std::vector<double> observables(const StateVector& psi, const std::vector<SparseOp>& ops,
                                       double imag_tol = 1e-12) {
  std::vector<double> out;
  out.reserve(ops.size());
  for (const auto& o : ops) {
    if (static_cast<std::size_t>(o.rows()) != psi.dim() || static_cast<std::size_t>(o.cols()) != psi.dim())
      throw Error(ErrorKind::DimensionMismatch, "observable of size " + std::to_string(o.rows()) + " vs state of size " +
                                                    std::to_string(psi.dim()));
    const VecX v = o * psi.amp;
    const cplx e = psi.amp.dot(v);
    if (std::abs(e.imag()) > imag_tol * std::max(1.0, std::abs(e.real())))
      throw Error(ErrorKind::NonHermitianInput, "expectation value has an imaginary part");
    out.push_back(e.real());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact propagation.

enum class ExactMethod { automatic, dense, krylov };

struct ExactOptions {
  ExactMethod method = ExactMethod::automatic;
  std::size_t dense_cap = 4096;
  int krylov_dim = 30;
  double krylov_tol = 1e-13;
};

/// e^{-iHt} psi by Lanczos with full reorthogonalization and adaptive substeps.
inline VecX krylov_expm(const SparseOp& H, const VecX& psi, double t, int m = 30, double tol = 1e-13) {
  VecX v = psi;
  double remaining = t;
  double tau = t;
  const double scale = std::max(1.0, max_abs(H));
  while (std::abs(remaining) > 0.0) {
    if (std::abs(tau) > std::abs(remaining)) tau = remaining;
    const double beta0 = v.norm();
    if (beta0 == 0.0) return v;
    const int mm = static_cast<int>(std::min<Eigen::Index>(m, v.size()));
    MatX V(v.size(), mm + 1);
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(mm, mm);
    V.col(0) = v / beta0;
    int k = 0;
    double beta = 0.0;
    for (; k < mm; ++k) {
      VecX w = H * V.col(k);
      for (int j = 0; j <= k; ++j) {
        const cplx c = V.col(j).dot(w);
        w -= c * V.col(j);
        if (j == k) T(k, k) = c.real();
      }
      for (int j = 0; j <= k; ++j) w -= V.col(j).dot(w) * V.col(j);
      beta = w.norm();
      if (k + 1 < mm) {
        T(k + 1, k) = beta;
        T(k, k + 1) = beta;
      }
      if (beta < 1e-14 * scale) {
        ++k;
        break;
      }
      V.col(k + 1) = w / beta;
    }
    const int dim = k;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T.topLeftCorner(dim, dim));
    for (;;) {
      VecX c(dim);
      for (int i = 0; i < dim; ++i) c(i) = es.eigenvectors()(0, i) * std::exp(-kI * es.eigenvalues()(i) * tau);
      const VecX y = es.eigenvectors().cast<cplx>() * c;
      const double err = beta * std::abs(y(dim - 1));
      if (err <= tol || beta < 1e-14 * scale) {
        v = beta0 * (V.leftCols(dim) * y);
        remaining -= tau;
        break;
      }
      tau *= 0.5;
    }
    tau *= 2.0;
  }
  return v;
}

class ExactPropagator {
 public:
  ExactPropagator(const LatticeOperator& H, const ExactOptions& opt = {}) : H_(&H), opt_(opt) {
    const bool dense_ok = H.dim() <= opt.dense_cap;
    if (opt.method == ExactMethod::dense && !dense_ok)
      throw Error(ErrorKind::DimensionCapExceeded,
                  "dense propagation of dimension " + std::to_string(H.dim()) + " exceeds the cap; use Krylov");
    dense_ = opt.method == ExactMethod::dense || (opt.method == ExactMethod::automatic && dense_ok);
    if (dense_) spectrum_ = block_diagonalize(H.matrix, sector_keys(H), opt.dense_cap);
  }

  bool dense() const { return dense_; }
  const BlockSpectrum& spectrum() const { return spectrum_; }

  StateVector evolve(const StateVector& psi, double t) const {
    if (psi.dim() != H_->dim()) throw Error(ErrorKind::DimensionMismatch, "state does not match the Hamiltonian");
    if (t == 0.0) return psi;
    StateVector out;
    out.amp = dense_ ? spectrum_.evolve(psi.amp, t) : krylov_expm(H_->matrix, psi.amp, t, opt_.krylov_dim, opt_.krylov_tol);
    return out;
  }

 private:
  const LatticeOperator* H_;
  ExactOptions opt_;
  bool dense_ = false;
  BlockSpectrum spectrum_;
};

inline StateVector exact_evolve(const LatticeOperator& H, const StateVector& psi0, double t, const ExactOptions& opt = {}) {
  return ExactPropagator(H, opt).evolve(psi0, t);
}

// ---------------------------------------------------------------------------
// Trotter plans.

struct TrotterGroup {
  BlockTag tag;
  std::string id;
  bool diagonal = false;           ///< full-register phase step built from single-slot terms
  std::vector<int> slots;          ///< for two-qudit groups
  std::vector<int> string;         ///< parity-string slots
  MatX generator;                  ///< sum of the group's local operators (with coefficients)
  std::vector<LocalTerm> terms;    ///< for diagonal groups
  std::vector<BlockTag> term_tags; ///< block of each diagonal term
  std::size_t product_terms = 0;   ///< Givens/Walsh products inside a two-qudit group
  double commutator_residual = 0;  ///< max pairwise commutator among those products
};

struct TrotterPlan {
  int order = 1;
  int slots = 0;
  int local_dim = 8;
  std::vector<double> parity;
  std::vector<TrotterGroup> groups;
  /// (group index, fraction of dt), applied left to right.
  std::vector<std::pair<std::size_t, double>> sequence;

  double max_commutator_residual() const {
    double r = 0;
    for (const auto& g : groups) r = std::max(r, g.commutator_residual);
    return r;
  }

  std::size_t two_qudit_groups(BlockTag tag) const {
    std::size_t n = 0;
    for (const auto& g : groups)
      if (g.tag == tag && !g.diagonal) ++n;
    return n;
  }

  std::size_t diagonal_groups() const {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.diagonal ? 1 : 0;
    return n;
  }
};

namespace detail {

/// Number of products in the two-site expansion of `op` and the largest
/// pairwise commutator among them.
inline std::pair<std::size_t, double> internal_commutation(const MatX& op) {
  const auto terms = decompose_two_site(op).canonical(1e-14);
  std::vector<MatX> mats;
  for (const auto& t : terms.terms()) {
    GivensTermList one;
    one.add(t.coeff, t.factors);
    mats.push_back(one.to_matrix(2));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < mats.size(); ++i)
    for (std::size_t j = i + 1; j < mats.size(); ++j) worst = std::max(worst, max_abs(commutator(mats[i], mats[j])));
  return {mats.size(), worst};
}

}  // namespace detail

/// Orders the registry into exponentiable groups: kinetic groups, one diagonal
/// step for mass plus same-site electric terms, cross-site electric groups,
/// then the h-term (its diagonal step, then its cross-site groups).
inline TrotterPlan build_trotter_plan(const TermRegistry& reg, int order = 1, bool check_commutation = true) {
  if (order != 1 && order != 2) throw Error(ErrorKind::InvalidParams, "Trotter order must be 1 or 2");
  if (reg.mapping != Mapping::qu8it) throw Error(ErrorKind::InvalidParams, "Trotter plans are built for the qu8it register");
  TrotterPlan plan;
  plan.order = order;
  plan.slots = reg.slots;
  plan.local_dim = reg.local_dim;
  plan.parity = reg.parity;

  std::map<std::string, std::size_t> by_id;
  std::unordered_map<const MatX*, std::pair<std::size_t, double>> cache;
  auto group_for = [&](BlockTag tag, const std::string& id, bool diagonal) -> TrotterGroup& {
    auto it = by_id.find(id);
    if (it != by_id.end()) return plan.groups[it->second];
    by_id[id] = plan.groups.size();
    TrotterGroup g;
    g.tag = tag;
    g.id = id;
    g.diagonal = diagonal;
    plan.groups.push_back(std::move(g));
    return plan.groups.back();
  };

  auto place = [&](const Block& b, const LocalTerm& t, const std::string& diag_id) {
    if (t.slots.size() <= 1 && t.string.empty() && t.op->isDiagonal()) {
      TrotterGroup& g = group_for(b.tag, diag_id, true);
      g.terms.push_back(t);
      g.term_tags.push_back(b.tag);
      return;
    }
    TrotterGroup& g = group_for(b.tag, t.group, false);
    if (g.slots.empty()) {
      g.slots = t.slots;
      g.string = t.string;
      g.generator = MatX::Zero(t.op->rows(), t.op->cols());
    } else if (g.slots != t.slots || g.string != t.string) {
      throw Error(ErrorKind::InvalidParams, "group " + t.group + " mixes slot sets");
    }
    g.generator += t.coeff * (*t.op);
    if (check_commutation && t.slots.size() == 2) {
      auto it = cache.find(t.op.get());
      if (it == cache.end()) it = cache.emplace(t.op.get(), detail::internal_commutation(*t.op)).first;
      g.product_terms += it->second.first;
      g.commutator_residual = std::max(g.commutator_residual, std::abs(t.coeff) * it->second.second);
    }
  };

  if (const Block* b = reg.find(BlockTag::kinetic))
    for (const auto& t : b->terms) place(*b, t, "diag:main");
  // mass and same-site electric share one diagonal step, created even if empty
  group_for(BlockTag::mass, "diag:main", true);
  for (BlockTag tag : {BlockTag::mass, BlockTag::electric})
    if (const Block* b = reg.find(tag))
      for (const auto& t : b->terms)
        if (t.slots.size() <= 1) place(*b, t, "diag:main");
  if (const Block* b = reg.find(BlockTag::electric))
    for (const auto& t : b->terms)
      if (t.slots.size() > 1) place(*b, t, "diag:main");
  if (const Block* b = reg.find(BlockTag::h)) {
    for (const auto& t : b->terms)
      if (t.slots.size() <= 1) place(*b, t, "diag:h");
    for (const auto& t : b->terms)
      if (t.slots.size() > 1) place(*b, t, "diag:h");
  }

  const std::size_t n = plan.groups.size();
  if (order == 1) {
    for (std::size_t i = 0; i < n; ++i) plan.sequence.emplace_back(i, 1.0);
  } else {
    for (std::size_t i = 0; i < n; ++i) plan.sequence.emplace_back(i, 0.5);
    for (std::size_t i = n; i-- > 0;) plan.sequence.emplace_back(i, 0.5);
  }
  return plan;
}

inline TrotterPlan build_trotter_plan(const LatticeOperator& H, int order = 1) {
  return build_trotter_plan(H.registry, order);
}

/// The plan's unitaries for one step of size dt, precomputed on a register.
class TrotterPropagator {
 public:
  TrotterPropagator(const TrotterPlan& plan, const RegisterShape& shape, double dt) : shape_(shape) {
    std::map<std::pair<std::size_t, double>, std::size_t> made;
    for (const auto& [gi, frac] : plan.sequence) {
      const auto key = std::make_pair(gi, frac);
      auto it = made.find(key);
      if (it == made.end()) {
        it = made.emplace(key, ops_.size()).first;
        ops_.push_back(make(plan, plan.groups[gi], frac * dt));
      }
      order_.push_back(it->second);
    }
  }

  void step(VecX& psi) const {
    for (std::size_t k : order_) apply(ops_[k], psi);
  }

 private:
  struct Op {
    bool diagonal = false;
    VecX phase;
    std::vector<std::size_t> offset;  ///< sub-index -> register offset
    std::vector<std::size_t> bases;   ///< register indices with zero digits on the group slots
    std::vector<double> sign;         ///< string sign per base
    MatX U_plus, U_minus;
  };

  Op make(const TrotterPlan& plan, const TrotterGroup& g, double dt) const {
    Op op;
    if (g.diagonal) {
      op.diagonal = true;
      Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(shape_.dim));
      for (const auto& t : g.terms) {
        const EmbeddedTerm et(t, shape_, plan.parity);
        for (std::size_t c = 0; c < shape_.dim; ++c)
          et.for_column(c, 1.0, [&](std::size_t r, cplx v) {
            if (r == c) e(static_cast<Eigen::Index>(c)) += v.real();
          });
      }
      op.phase = (-kI * dt * e.cast<cplx>()).array().exp();
      return op;
    }
    Eigen::SelfAdjointEigenSolver<MatX> es(g.generator);
    const VecX ph_p = (-kI * dt * es.eigenvalues().cast<cplx>()).array().exp();
    const VecX ph_m = (kI * dt * es.eigenvalues().cast<cplx>()).array().exp();
    op.U_plus = es.eigenvectors() * ph_p.asDiagonal() * es.eigenvectors().adjoint();
    op.U_minus = es.eigenvectors() * ph_m.asDiagonal() * es.eigenvectors().adjoint();
    const std::size_t sub = static_cast<std::size_t>(g.generator.rows());
    op.offset.assign(sub, 0);
    for (std::size_t a = 0; a < sub; ++a) {
      std::size_t rem = a, off = 0;
      for (std::size_t i = g.slots.size(); i-- > 0;) {
        off += (rem % static_cast<std::size_t>(shape_.d)) * shape_.stride[static_cast<std::size_t>(g.slots[i])];
        rem /= static_cast<std::size_t>(shape_.d);
      }
      op.offset[a] = off;
    }
    for (std::size_t i = 0; i < shape_.dim; ++i) {
      bool zero = true;
      for (int s : g.slots) zero = zero && shape_.digit(i, s) == 0;
      if (!zero) continue;
      double sgn = 1.0;
      for (int s : g.string) sgn *= plan.parity[static_cast<std::size_t>(shape_.digit(i, s))];
      op.bases.push_back(i);
      op.sign.push_back(sgn);
    }
    return op;
  }

  static void apply(const Op& op, VecX& psi) {
    if (op.diagonal) {
      psi.array() *= op.phase.array();
      return;
    }
    const std::size_t sub = op.offset.size();
    VecX local(static_cast<Eigen::Index>(sub));
    for (std::size_t b = 0; b < op.bases.size(); ++b) {
      const std::size_t base = op.bases[b];
      for (std::size_t a = 0; a < sub; ++a) local(static_cast<Eigen::Index>(a)) = psi(static_cast<Eigen::Index>(base + op.offset[a]));
      const VecX out = (op.sign[b] > 0 ? op.U_plus : op.U_minus) * local;
      for (std::size_t a = 0; a < sub; ++a) psi(static_cast<Eigen::Index>(base + op.offset[a])) = out(static_cast<Eigen::Index>(a));
    }
  }

  RegisterShape shape_;
  std::vector<Op> ops_;
  std::vector<std::size_t> order_;
};

// ---------------------------------------------------------------------------
// Trajectories.

struct ObservableSet {
  std::vector<std::string> names;
  std::vector<SparseOp> ops;
};

/// Signed baryon number per staggered site, electric energy, total Casimir,
/// total baryon number and energy.
inline ObservableSet default_observables(const LatticeOperator& H) {
  ObservableSet set;
  const auto& reg = H.registry;
  const auto& p = reg.params;
  const auto& shape = H.shape;
  std::vector<std::vector<double>> site_b(static_cast<std::size_t>(p.sites()), std::vector<double>(shape.dim, 0.0));
  if (reg.mapping == Mapping::qu8it) {
    const SiteIndexing idx(p);
    for (std::size_t i = 0; i < shape.dim; ++i)
      for (int s = 0; s < reg.slots; ++s) {
        const int occ = Qu8itBasis::occupation[static_cast<std::size_t>(shape.digit(i, s))];
        site_b[static_cast<std::size_t>(idx.site(s))][i] += (idx.anti(s) ? -occ : occ) / 3.0;
      }
  } else {
    const QubitIndexing qi(p);
    for (std::size_t i = 0; i < shape.dim; ++i)
      for (int n = 0; n < p.sites(); ++n)
        for (int f = 0; f < p.nf; ++f)
          for (Color c : kColors) {
            const int occ = shape.digit(i, qi.qubit(n, f, c)) == 0 ? 1 : 0;
            site_b[static_cast<std::size_t>(n)][i] += (n % 2 == 0 ? occ : occ - 1) / 3.0;
          }
  }
  for (int n = 0; n < p.sites(); ++n) {
    set.names.push_back("B_" + std::to_string(n));
    set.ops.push_back(diagonal_operator(site_b[static_cast<std::size_t>(n)]));
  }
  SparseOp el(static_cast<Eigen::Index>(shape.dim), static_cast<Eigen::Index>(shape.dim));
  for (std::size_t k = 0; k < reg.blocks.size(); ++k)
    if (reg.blocks[k].tag == BlockTag::electric) el = H.block_matrices[k];
  set.names.push_back("E_el");
  set.ops.push_back(el);
  const auto cc = conserved_charges(H);
  set.names.push_back("casimir");
  set.ops.push_back(cc.casimir_total);
  set.names.push_back("B_total");
  set.ops.push_back(cc.B_total);
  set.names.push_back("energy");
  set.ops.push_back(H.matrix);
  return set;
}

struct TrajectoryRow {
  int step = 0;
  double t = 0.0;
  double norm = 1.0;
  double fidelity = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> values;
};

struct Trajectory {
  std::vector<std::string> columns;
  std::vector<TrajectoryRow> rows;
  StateVector final_state;

  std::size_t column(const std::string& name) const {
    for (std::size_t k = 0; k < columns.size(); ++k)
      if (columns[k] == name) return k;
    throw Error(ErrorKind::InvalidParams, "no observable named " + name);
  }
};

namespace detail {

inline TrajectoryRow record(int step, double t, const StateVector& psi, const ObservableSet& obs,
                            const StateVector* exact) {
  TrajectoryRow r;
  r.step = step;
  r.t = t;
  r.norm = psi.norm();
  r.values = observables(psi, obs.ops);
  if (exact) r.fidelity = fidelity(*exact, psi);
  return r;
}

}  // namespace detail

/// Applies `steps` Trotter steps of size t/steps, recording observables after
/// each one (row 0 is the initial state).
inline Trajectory trotter_evolve(const TrotterPlan& plan, const LatticeOperator& H, const StateVector& psi0, double t,
                                 int steps, const ObservableSet& obs, const ExactPropagator* exact = nullptr) {
  if (steps < 1) throw Error(ErrorKind::InvalidParams, "steps must be >= 1");
  if (psi0.dim() != H.dim()) throw Error(ErrorKind::DimensionMismatch, "state does not match the Hamiltonian");
  const double dt = t / steps;
  const TrotterPropagator prop(plan, H.shape, dt);
  Trajectory tr;
  tr.columns = obs.names;
  StateVector psi = psi0;
  StateVector ref = psi0;
  tr.rows.push_back(detail::record(0, 0.0, psi, obs, exact ? &ref : nullptr));
  for (int k = 1; k <= steps; ++k) {
    prop.step(psi.amp);
    if (exact) ref = exact->dense() ? exact->evolve(psi0, k * dt) : exact->evolve(ref, dt);
    tr.rows.push_back(detail::record(k, k * dt, psi, obs, exact ? &ref : nullptr));
  }
  tr.final_state = psi;
  return tr;
}

inline Trajectory exact_trajectory(const ExactPropagator& exact, const StateVector& psi0, double t, int steps,
                                   const ObservableSet& obs) {
  if (steps < 1) throw Error(ErrorKind::InvalidParams, "steps must be >= 1");
  const double dt = t / steps;
  Trajectory tr;
  tr.columns = obs.names;
  StateVector psi = psi0;
  tr.rows.push_back(detail::record(0, 0.0, psi, obs, nullptr));
  for (int k = 1; k <= steps; ++k) {
    psi = exact.dense() ? exact.evolve(psi0, k * dt) : exact.evolve(psi, dt);
    tr.rows.push_back(detail::record(k, k * dt, psi, obs, nullptr));
  }
  tr.final_state = psi;
  return tr;
}

/// Least-squares slope of log(err) against log(dt).
inline double fitted_order(const std::vector<double>& dt, const std::vector<double>& err) {
  const std::size_t n = dt.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(dt[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace qu8it
