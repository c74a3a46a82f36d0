#pragma once

// Register Hamiltonians for N_f flavors on 2L staggered sites, in the qu8it
// encoding (two qu8its per flavor per spatial site) and in the Jordan-Wigner
// qubit encoding used as an independent oracle.
//
// A Hamiltonian is first built as a TermRegistry: tagged blocks of local
// terms, each a small dense operator on a few register slots, optionally
// multiplied by a parity string on other slots. The registry carries no
// register-sized data, so it is cheap for any (N_f, L); assemble() turns it
// into a sparse matrix when the register is small enough.

#include "qu8it/core.hpp"
#include "qu8it/givens_walsh.hpp"
#include "qu8it/qu8it_mapping.hpp"
#include "qu8it/reference_forms.hpp"

#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

namespace qu8it {

struct LatticeParams {
  int L = 1;
  int nf = 1;
  std::vector<double> masses{1.0};  ///< one entry, or one per flavor
  double g = 1.0;
  double h = 0.0;
  bool include_h = false;

  double mass(int f) const { return masses.size() == 1 ? masses[0] : masses[static_cast<std::size_t>(f)]; }
  int sites() const { return 2 * L; }
  int qudits() const { return 2 * nf * L; }
  int qubits() const { return 6 * nf * L; }

  bool operator==(const LatticeParams&) const = default;

  void validate() const {
    if (L < 1) throw Error(ErrorKind::InvalidParams, "L must be >= 1");
    if (nf < 1) throw Error(ErrorKind::InvalidParams, "N_f must be >= 1");
    if (masses.empty() || (masses.size() != 1 && masses.size() != static_cast<std::size_t>(nf)))
      throw Error(ErrorKind::InvalidParams, "need one mass or one mass per flavor");
    for (double m : masses)
      if (!std::isfinite(m)) throw Error(ErrorKind::InvalidParams, "mass must be finite");
    if (!std::isfinite(g) || g < 0) throw Error(ErrorKind::InvalidParams, "g must be finite and >= 0");
    if (!std::isfinite(h) || h < 0) throw Error(ErrorKind::InvalidParams, "h must be finite and >= 0");
  }
};

/// Site-major, flavor-minor slot layout. Odd staggered sites hold anti-quarks.
struct SiteIndexing {
  int L = 1;
  int nf = 1;

  explicit SiteIndexing(const LatticeParams& p) : L(p.L), nf(p.nf) {}
  int slots() const { return 2 * L * nf; }
  int slot(int n, int f) const { return n * nf + f; }
  int site(int slot) const { return slot / nf; }
  int flavor(int slot) const { return slot % nf; }
  bool anti(int slot) const { return site(slot) % 2 == 1; }
};

enum class Mapping { qu8it, qubit };
enum class BlockTag { kinetic, mass, electric, h, observable };

inline const char* to_string(Mapping m) { return m == Mapping::qu8it ? "qu8it" : "qubit"; }

inline const char* to_string(BlockTag t) {
  switch (t) {
    case BlockTag::kinetic: return "kinetic";
    case BlockTag::mass: return "mass";
    case BlockTag::electric: return "electric";
    case BlockTag::h: return "h";
    case BlockTag::observable: return "observable";
  }
  return "unknown";
}

/// coeff * op(slots) * prod_{s in string} parity(s). `op` acts on `slots` in
/// the listed order (first slot = most significant); an empty slot list with a
/// 1x1 op is a multiple of the identity.
struct LocalTerm {
  double coeff = 0.0;
  std::vector<int> slots;
  std::shared_ptr<const MatX> op;
  std::vector<int> string;
  std::string group;

  bool is_identity() const { return slots.empty(); }
};

struct Block {
  BlockTag tag;
  std::vector<LocalTerm> terms;
};

struct TermRegistry {
  LatticeParams params;
  Mapping mapping = Mapping::qu8it;
  int slots = 0;
  int local_dim = 8;
  std::vector<double> parity;  ///< diagonal of the string operator (P or sigma_z)
  std::vector<Block> blocks;

  const Block* find(BlockTag t) const {
    for (const auto& b : blocks)
      if (b.tag == t) return &b;
    return nullptr;
  }
};

// ---------------------------------------------------------------------------
// Register geometry and embedding.

struct RegisterShape {
  int slots = 0;
  int d = 8;
  std::size_t dim = 1;
  std::vector<std::size_t> stride;  ///< slot 0 is the most significant digit

  RegisterShape() = default;
  RegisterShape(int n, int local_dim, std::size_t cap) : slots(n), d(local_dim) {
    const double bits = n * std::log2(static_cast<double>(local_dim));
    if (bits > 40.0 || std::pow(2.0, bits) > static_cast<double>(cap) + 0.5)
      throw Error(ErrorKind::DimensionCapExceeded,
                  "register of " + std::to_string(n) + " slots (d=" + std::to_string(local_dim) +
                      ") exceeds the assembly cap of " + std::to_string(cap));
    stride.assign(static_cast<std::size_t>(n), 1);
    for (int s = n - 1; s >= 0; --s) {
      stride[static_cast<std::size_t>(s)] = dim;
      dim *= static_cast<std::size_t>(d);
    }
  }

  int digit(std::size_t index, int s) const {
    return static_cast<int>((index / stride[static_cast<std::size_t>(s)]) % static_cast<std::size_t>(d));
  }
};

/// Precomputed column structure of one local term on a register.
class EmbeddedTerm {
 public:
  EmbeddedTerm(const LocalTerm& t, const RegisterShape& shape, const std::vector<double>& parity)
      : term_(&t), shape_(&shape), parity_(&parity) {
    const std::size_t k = t.slots.size();
    std::size_t sub = 1;
    for (std::size_t i = 0; i < k; ++i) sub *= static_cast<std::size_t>(shape.d);
    if (static_cast<std::size_t>(t.op->rows()) != sub)
      throw Error(ErrorKind::DimensionMismatch, "local operator does not match its slot count");
    offset_.assign(sub, 0);
    for (std::size_t a = 0; a < sub; ++a) {
      std::size_t rem = a;
      std::size_t off = 0;
      for (std::size_t i = k; i-- > 0;) {
        off += (rem % static_cast<std::size_t>(shape.d)) * shape.stride[static_cast<std::size_t>(t.slots[i])];
        rem /= static_cast<std::size_t>(shape.d);
      }
      offset_[a] = off;
    }
    column_.resize(sub);
    for (std::size_t c = 0; c < sub; ++c)
      for (std::size_t r = 0; r < sub; ++r) {
        const cplx v = (*t.op)(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        if (v != cplx(0.0)) column_[c].push_back({r, v});
      }
  }

  std::size_t sub_index(std::size_t index) const {
    std::size_t a = 0;
    for (int s : term_->slots) a = a * static_cast<std::size_t>(shape_->d) + static_cast<std::size_t>(shape_->digit(index, s));
    return a;
  }

  double string_sign(std::size_t index) const {
    double sgn = 1.0;
    for (int s : term_->string) sgn *= (*parity_)[static_cast<std::size_t>(shape_->digit(index, s))];
    return sgn;
  }

  /// Calls f(row, value) for every nonzero of column `col` of the embedded term.
  template <class F>
  void for_column(std::size_t col, double scale, F&& f) const {
    const std::size_t a = sub_index(col);
    const std::size_t base = col - offset_[a];
    const double c = scale * term_->coeff * string_sign(col);
    for (const auto& [r, v] : column_[a]) f(base + offset_[r], c * v);
  }

 private:
  struct Entry {
    std::size_t row;
    cplx value;
  };
  const LocalTerm* term_;
  const RegisterShape* shape_;
  const std::vector<double>* parity_;
  std::vector<std::size_t> offset_;
  std::vector<std::vector<Entry>> column_;
};

inline void append_triplets(const LocalTerm& t, const RegisterShape& shape, const std::vector<double>& parity,
                            std::vector<Triplet>& out, double scale = 1.0) {
  const EmbeddedTerm e(t, shape, parity);
  for (std::size_t col = 0; col < shape.dim; ++col)
    e.for_column(col, scale, [&](std::size_t row, cplx v) {
      out.emplace_back(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col), v);
    });
}

inline SparseOp terms_to_sparse(const std::vector<LocalTerm>& terms, const RegisterShape& shape,
                                const std::vector<double>& parity) {
  std::vector<Triplet> trip;
  for (const auto& t : terms) append_triplets(t, shape, parity, trip);
  SparseOp m(static_cast<Eigen::Index>(shape.dim), static_cast<Eigen::Index>(shape.dim));
  m.setFromTriplets(trip.begin(), trip.end());
  m.prune(cplx(0.0), 0.0);
  return m;
}

struct OffsetEntry {
  BlockTag tag;
  double identity_component;  ///< Tr(block) / dim
};

struct LatticeOperator {
  TermRegistry registry;
  RegisterShape shape;
  SparseOp matrix;
  std::vector<SparseOp> block_matrices;  ///< parallel to registry.blocks
  std::vector<OffsetEntry> offsets;

  std::size_t dim() const { return shape.dim; }
};

struct BuildOptions {
  std::size_t sparse_cap = std::size_t{1} << 18;
};

inline LatticeOperator assemble(TermRegistry reg, const BuildOptions& opt = {}) {
  LatticeOperator op;
  op.shape = RegisterShape(reg.slots, reg.local_dim, opt.sparse_cap);
  op.matrix.resize(static_cast<Eigen::Index>(op.shape.dim), static_cast<Eigen::Index>(op.shape.dim));
  for (const auto& b : reg.blocks) {
    SparseOp m = terms_to_sparse(b.terms, op.shape, reg.parity);
    double tr = 0.0;
    for (Eigen::Index k = 0; k < m.outerSize(); ++k)
      for (SparseOp::InnerIterator it(m, k); it; ++it)
        if (it.row() == it.col()) tr += it.value().real();
    op.offsets.push_back({b.tag, tr / static_cast<double>(op.shape.dim)});
    op.matrix += m;
    op.block_matrices.push_back(std::move(m));
  }
  op.registry = std::move(reg);
  return op;
}

// ---------------------------------------------------------------------------
// Qu8it encoding.

namespace detail {

inline std::shared_ptr<const MatX> share(MatX m) { return std::make_shared<const MatX>(std::move(m)); }

inline std::vector<int> between(int a, int b) {
  std::vector<int> s;
  for (int k = a + 1; k < b; ++k) s.push_back(k);
  return s;
}

/// The eight commuting-set pieces of sum_a G^a (x) H^a for given slot parities.
struct ChargePairPieces {
  std::array<std::shared_ptr<const MatX>, 8> op;
  std::array<std::string, 8> label;
};

inline ChargePairPieces charge_pair_pieces(const Qu8itOperators& ops, bool left_anti, bool right_anti) {
  const auto& g = grouped_operators();
  const double cc = (left_anti == right_anti) ? 1.0 : -1.0;
  ChargePairPieces p;
  for (std::size_t k = 0; k < 3; ++k) {
    p.op[2 * k] = share(cc * 0.25 * kron(g.C[k], g.C[k]));
    p.label[2 * k] = std::string("CC") + kChargePairLabels[k];
    p.op[2 * k + 1] = share(0.25 * kron(g.D[k], g.D[k]));
    p.label[2 * k + 1] = std::string("DD") + kChargePairLabels[k];
  }
  const auto& l = ops.charges(left_anti);
  const auto& r = ops.charges(right_anti);
  p.op[6] = share(kron(l[2], r[2]));
  p.label[6] = "Q3Q3";
  p.op[7] = share(kron(l[7], r[7]));
  p.label[7] = "Q8Q8";
  return p;
}

inline MatX single_casimir(const Qu8itOperators& ops, bool anti) {
  MatX c = MatX::Zero(8, 8);
  for (const auto& q : ops.charges(anti)) c += q * q;
  return c;
}

inline std::string slot_pair_name(int a, int b) { return "s" + std::to_string(a) + "-s" + std::to_string(b); }

/// Adds coeff_self(s) * C_s and coeff_pair(s,t) * Q_s.Q_t (all commuting-set pieces).
template <class Self, class Pair>
void add_qu8it_charge_square(Block& block, const SiteIndexing& idx, const Qu8itOperators& ops,
                             const std::vector<int>& slots, Self&& self_coeff, Pair&& pair_coeff,
                             const std::string& prefix) {
  const auto cas_q = share(single_casimir(ops, false));
  const auto cas_qbar = share(single_casimir(ops, true));
  for (int s : slots) {
    const double c = self_coeff(s);
    if (c != 0.0) block.terms.push_back({c, {s}, idx.anti(s) ? cas_qbar : cas_q, {}, prefix + ":diag"});
  }
  std::array<std::array<ChargePairPieces, 2>, 2> pieces;
  for (int a : {0, 1})
    for (int b : {0, 1}) pieces[a][b] = charge_pair_pieces(ops, a == 1, b == 1);
  for (std::size_t i = 0; i < slots.size(); ++i)
    for (std::size_t j = i + 1; j < slots.size(); ++j) {
      const int s = slots[i];
      const int t = slots[j];
      const double c = pair_coeff(s, t);
      if (c == 0.0) continue;
      const auto& pc = pieces[idx.anti(s) ? 1 : 0][idx.anti(t) ? 1 : 0];
      for (std::size_t k = 0; k < 8; ++k)
        block.terms.push_back({c, {s, t}, pc.op[k], {}, prefix + ":" + slot_pair_name(s, t) + ":" + pc.label[k]});
    }
}

}  // namespace detail

inline TermRegistry qu8it_registry(const LatticeParams& p) {
  p.validate();
  const SiteIndexing idx(p);
  const auto ops = build_qu8it_operators();
  const auto& g = grouped_operators();

  TermRegistry reg;
  reg.params = p;
  reg.mapping = Mapping::qu8it;
  reg.slots = idx.slots();
  reg.local_dim = 8;
  reg.parity.resize(8);
  for (int k = 0; k < 8; ++k) reg.parity[static_cast<std::size_t>(k)] = ops.P(k, k).real();

  Block kin{BlockTag::kinetic, {}};
  std::array<std::shared_ptr<const MatX>, 3> aa, bb;
  for (std::size_t c = 0; c < 3; ++c) {
    aa[c] = detail::share(kron(g.A[0][c], g.A[1][c]));
    bb[c] = detail::share(kron(g.B[0][c], g.B[1][c]));
  }
  static constexpr std::array<const char*, 3> color_name{"r", "g", "b"};
  for (int n = 0; n + 1 < p.sites(); ++n)
    for (int f = 0; f < p.nf; ++f) {
      const int s0 = idx.slot(n, f);
      const int s1 = idx.slot(n + 1, f);
      const std::string link = "kin:n" + std::to_string(n) + ":f" + std::to_string(f) + ":";
      for (std::size_t c = 0; c < 3; ++c) {
        kin.terms.push_back({0.25, {s0, s1}, aa[c], detail::between(s0, s1), link + color_name[c] + ":AA"});
        kin.terms.push_back({-0.25, {s0, s1}, bb[c], detail::between(s0, s1), link + color_name[c] + ":BB"});
      }
    }
  reg.blocks.push_back(std::move(kin));

  Block mass{BlockTag::mass, {}};
  const auto b_op = detail::share(MatX(ops.B));
  for (int s = 0; s < reg.slots; ++s) {
    const double m = p.mass(idx.flavor(s));
    if (m != 0.0) mass.terms.push_back({3.0 * m, {s}, b_op, {}, "mass:diag"});
  }
  reg.blocks.push_back(std::move(mass));

  // g^2/2 sum_{n<=2L-2} (sum_{m<=n} Q_m)^2: the slot pair (s,t) appears in
  // 2L-1-max(site) of the partial sums.
  Block el{BlockTag::electric, {}};
  if (p.g != 0.0) {
    std::vector<int> slots;
    for (int s = 0; s < reg.slots; ++s)
      if (idx.site(s) <= p.sites() - 2) slots.push_back(s);
    const double g2 = p.g * p.g;
    const int top = p.sites() - 1;
    detail::add_qu8it_charge_square(
        el, idx, ops, slots, [&](int s) { return 0.5 * g2 * (top - idx.site(s)); },
        [&](int s, int t) { return g2 * (top - std::max(idx.site(s), idx.site(t))); }, "el");
  }
  reg.blocks.push_back(std::move(el));

  if (p.include_h) {
    Block hb{BlockTag::h, {}};
    if (p.h != 0.0) {
      std::vector<int> slots(static_cast<std::size_t>(reg.slots));
      std::iota(slots.begin(), slots.end(), 0);
      const double h2 = p.h * p.h;
      detail::add_qu8it_charge_square(
          hb, idx, ops, slots, [&](int) { return 0.5 * h2; }, [&](int, int) { return h2; }, "h");
    }
    reg.blocks.push_back(std::move(hb));
  }
  return reg;
}

inline LatticeOperator build_qu8it_hamiltonian(const LatticeParams& p, const BuildOptions& opt = {}) {
  return assemble(qu8it_registry(p), opt);
}

// ---------------------------------------------------------------------------
// Qubit (Jordan-Wigner) encoding. Per staggered site the qubits run flavor by
// flavor, colors b, g, r within a flavor. Qubit |0> (sigma_z = +1) is an
// occupied fermion mode; sigma^+ = |0><1| creates.

struct QubitIndexing {
  int nf = 1;
  explicit QubitIndexing(const LatticeParams& p) : nf(p.nf) {}
  int qubit(int n, int f, Color c) const { return 3 * nf * n + 3 * f + (2 - static_cast<int>(c)); }
  /// First of the three contiguous qubits of (site, flavor).
  int triple(int n, int f) const { return 3 * nf * n + 3 * f; }
};

namespace pauli {

inline MatX I2() { return MatX::Identity(2, 2); }
inline MatX Z() {
  MatX m = MatX::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}
inline MatX Sp() {
  MatX m = MatX::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}
inline MatX Sm() { return Sp().transpose(); }

inline MatX kron_all(const std::vector<MatX>& fs) {
  MatX out = MatX::Identity(1, 1);
  for (const auto& f : fs) out = kron(out, f);
  return out;
}

/// Q_s.Q_s = (3 - Z0Z1 - Z0Z2 - Z1Z2)/3 on one triple.
inline MatX self_product() {
  const MatX z = Z(), i = I2();
  MatX m = 3.0 * kron_all({i, i, i});
  m -= kron_all({z, z, i}) + kron_all({z, i, z}) + kron_all({i, z, z});
  return m / 3.0;
}

/// Q_s.Q_t on two triples (6 qubits, s first).
inline MatX cross_product() {
  const MatX z = Z(), i = I2(), p = Sp(), m = Sm();
  MatX hop = kron_all({p, m, i, m, p, i}) + kron_all({p, z, m, m, z, p}) + kron_all({i, p, m, i, m, p});
  MatX out = 2.0 * (hop + MatX(hop.adjoint()));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      std::vector<MatX> f(6, i);
      f[static_cast<std::size_t>(a)] = z;
      f[static_cast<std::size_t>(3 + b)] = z;
      out += ((a == b ? 3.0 : 0.0) - 1.0) / 6.0 * kron_all(f);
    }
  return 0.25 * out;
}

}  // namespace pauli

namespace detail {

inline std::vector<int> range(int first, int count) {
  std::vector<int> v(static_cast<std::size_t>(count));
  std::iota(v.begin(), v.end(), first);
  return v;
}

template <class Self, class Pair>
void add_qubit_charge_square(Block& block, const LatticeParams& p, int max_site, Self&& self_coeff,
                             Pair&& pair_coeff, const std::string& prefix) {
  const QubitIndexing qi(p);
  const auto self = share(pauli::self_product());
  const auto cross = share(pauli::cross_product());
  std::vector<std::pair<int, int>> triples;
  for (int n = 0; n <= max_site; ++n)
    for (int f = 0; f < p.nf; ++f) triples.emplace_back(n, f);
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const auto [n, f] = triples[i];
    const double c = self_coeff(n);
    if (c != 0.0) block.terms.push_back({c, range(qi.triple(n, f), 3), self, {}, prefix + ":diag"});
    for (std::size_t j = i + 1; j < triples.size(); ++j) {
      const auto [n2, f2] = triples[j];
      const double c2 = pair_coeff(n, n2);
      if (c2 == 0.0) continue;
      auto slots = range(qi.triple(n, f), 3);
      const auto rest = range(qi.triple(n2, f2), 3);
      slots.insert(slots.end(), rest.begin(), rest.end());
      block.terms.push_back({c2, slots, cross, {}, prefix + ":pair"});
    }
  }
}

}  // namespace detail

inline TermRegistry qubit_registry(const LatticeParams& p) {
  p.validate();
  const QubitIndexing qi(p);
  TermRegistry reg;
  reg.params = p;
  reg.mapping = Mapping::qubit;
  reg.slots = p.qubits();
  reg.local_dim = 2;
  reg.parity = {1.0, -1.0};

  Block kin{BlockTag::kinetic, {}};
  const double sign = ((3 * p.nf - 1) % 2 == 0) ? 1.0 : -1.0;
  const auto hop = detail::share(kron(pauli::Sp(), pauli::Sm()));
  const auto hop_dag = detail::share(kron(pauli::Sm(), pauli::Sp()));
  for (int n = 0; n + 1 < p.sites(); ++n)
    for (int f = 0; f < p.nf; ++f)
      for (Color c : kColors) {
        const int a = qi.qubit(n, f, c);
        const int b = qi.qubit(n + 1, f, c);
        kin.terms.push_back({0.5 * sign, {a, b}, hop, detail::between(a, b), "kin"});
        kin.terms.push_back({0.5 * sign, {a, b}, hop_dag, detail::between(a, b), "kin"});
      }
  reg.blocks.push_back(std::move(kin));

  Block mass{BlockTag::mass, {}};
  const auto z = detail::share(pauli::Z());
  const auto one = detail::share(MatX::Identity(1, 1));
  for (int n = 0; n < p.sites(); ++n)
    for (int f = 0; f < p.nf; ++f) {
      const double m = p.mass(f);
      if (m == 0.0) continue;
      for (Color c : kColors) {
        mass.terms.push_back({0.5 * m * (n % 2 == 0 ? 1.0 : -1.0), {qi.qubit(n, f, c)}, z, {}, "mass"});
        mass.terms.push_back({0.5 * m, {}, one, {}, "mass:const"});
      }
    }
  reg.blocks.push_back(std::move(mass));

  Block el{BlockTag::electric, {}};
  if (p.g != 0.0) {
    const double g2 = p.g * p.g;
    const int top = p.sites() - 1;
    detail::add_qubit_charge_square(
        el, p, p.sites() - 2, [&](int n) { return 0.5 * g2 * (top - n); },
        [&](int n, int m) { return g2 * (top - std::max(n, m)); }, "el");
  }
  reg.blocks.push_back(std::move(el));

  if (p.include_h) {
    Block hb{BlockTag::h, {}};
    if (p.h != 0.0) {
      const double h2 = p.h * p.h;
      detail::add_qubit_charge_square(
          hb, p, p.sites() - 1, [&](int) { return 0.5 * h2; }, [&](int, int) { return h2; }, "h");
    }
    reg.blocks.push_back(std::move(hb));
  }
  return reg;
}

inline LatticeOperator build_qubit_hamiltonian(const LatticeParams& p, const BuildOptions& opt = {}) {
  return assemble(qubit_registry(p), opt);
}

/// Constant to subtract from the qubit spectrum to align it with the qu8it one.
/// Per fermion mode the shifted qubit mass term is m * (particle or hole
/// number), and 3 m B counts exactly those numbers on each qu8it, so the
/// constant is zero for every (N_f, L).
inline double mapping_offset(const LatticeParams&) { return 0.0; }

// ---------------------------------------------------------------------------
// Conserved charges and symmetry labels.

/// Integer labels (3B, 2Q3, 2 sqrt(3) Q8) of a computational basis state.
using SectorKey = std::array<int, 3>;

namespace detail {

struct LocalLabels {
  std::vector<std::array<int, 3>> even, odd;  ///< per local digit
};

inline LocalLabels local_labels(Mapping m) {
  LocalLabels out;
  if (m == Mapping::qu8it) {
    const auto ops = build_qu8it_operators();
    const double s3 = 2.0 * std::sqrt(3.0);
    for (int k = 0; k < 8; ++k) {
      const int occ = Qu8itBasis::occupation[static_cast<std::size_t>(k)];
      for (bool anti : {false, true}) {
        const auto& q = ops.charges(anti);
        const std::array<int, 3> lab{anti ? -occ : occ, static_cast<int>(std::lround(2.0 * q[2](k, k).real())),
                                     static_cast<int>(std::lround(s3 * q[7](k, k).real()))};
        (anti ? out.odd : out.even).push_back(lab);
      }
    }
  }
  return out;
}

}  // namespace detail

/// Sector labels for every basis state of the register.
inline std::vector<SectorKey> sector_keys(const TermRegistry& reg, const RegisterShape& shape) {
  std::vector<SectorKey> keys(shape.dim, SectorKey{0, 0, 0});
  const auto& p = reg.params;
  if (reg.mapping == Mapping::qu8it) {
    const SiteIndexing idx(p);
    const auto lab = detail::local_labels(Mapping::qu8it);
    for (std::size_t i = 0; i < shape.dim; ++i)
      for (int s = 0; s < reg.slots; ++s) {
        const auto& l = (idx.anti(s) ? lab.odd : lab.even)[static_cast<std::size_t>(shape.digit(i, s))];
        for (std::size_t k = 0; k < 3; ++k) keys[i][k] += l[k];
      }
  } else {
    const QubitIndexing qi(p);
    static constexpr std::array<int, 3> t3{1, -1, 0};
    static constexpr std::array<int, 3> t8{1, 1, -2};
    for (std::size_t i = 0; i < shape.dim; ++i)
      for (int n = 0; n < p.sites(); ++n)
        for (int f = 0; f < p.nf; ++f)
          for (Color c : kColors) {
            const int occ = shape.digit(i, qi.qubit(n, f, c)) == 0 ? 1 : 0;
            const auto ci = static_cast<std::size_t>(c);
            keys[i][0] += (n % 2 == 0) ? occ : occ - 1;
            keys[i][1] += t3[ci] * occ;
            keys[i][2] += t8[ci] * occ;
          }
  }
  return keys;
}

inline std::vector<SectorKey> sector_keys(const LatticeOperator& op) { return sector_keys(op.registry, op.shape); }

struct ConservedCharges {
  SparseOp B_total;
  SparseOp casimir_total;
  SparseOp Q3_total;
  SparseOp Q8_total;
};

inline SparseOp diagonal_operator(const std::vector<double>& d) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i] != 0.0) t.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i), d[i]);
  SparseOp m(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

/// sum_a (sum_m Q^a_m)^2 over the whole register.
inline TermRegistry casimir_registry(const LatticeParams& p, Mapping mapping) {
  LatticeParams q = p;
  q.g = 0.0;
  q.h = 1.0;
  q.include_h = true;
  q.masses.assign(1, 0.0);
  TermRegistry reg = mapping == Mapping::qu8it ? qu8it_registry(q) : qubit_registry(q);
  Block b = std::move(*std::find_if(reg.blocks.begin(), reg.blocks.end(), [](const Block& x) { return x.tag == BlockTag::h; }));
  b.tag = BlockTag::observable;
  for (auto& t : b.terms) t.coeff *= 2.0;
  reg.blocks.clear();
  reg.blocks.push_back(std::move(b));
  return reg;
}

inline ConservedCharges conserved_charges(const TermRegistry& reg, const RegisterShape& shape) {
  ConservedCharges out;
  const auto keys = sector_keys(reg, shape);
  std::vector<double> b(shape.dim), q3(shape.dim), q8(shape.dim);
  for (std::size_t i = 0; i < shape.dim; ++i) {
    b[i] = keys[i][0] / 3.0;
    q3[i] = keys[i][1] / 2.0;
    q8[i] = keys[i][2] / (2.0 * std::sqrt(3.0));
  }
  out.B_total = diagonal_operator(b);
  out.Q3_total = diagonal_operator(q3);
  out.Q8_total = diagonal_operator(q8);
  const auto cas = casimir_registry(reg.params, reg.mapping);
  out.casimir_total = terms_to_sparse(cas.blocks.front().terms, shape, cas.parity);
  return out;
}

inline ConservedCharges conserved_charges(const LatticeOperator& op) { return conserved_charges(op.registry, op.shape); }

/// Embedded single-slot annihilator, with the parity string on all earlier slots.
inline SparseOp embedded_annihilator(const TermRegistry& reg, const RegisterShape& shape, int slot, Color c) {
  const auto ops = build_qu8it_operators();
  LocalTerm t{1.0, {slot}, std::make_shared<const MatX>(ops.annihilate(c)), detail::range(0, slot), "c"};
  return terms_to_sparse({t}, shape, reg.parity);
}

}  // namespace qu8it
