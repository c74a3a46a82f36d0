#pragma once

// The verification suite: every construction checked against an independent
// route, with the measured residual recorded. Checks never abort the suite; an
// exception inside a check marks that check failed.

#include "qu8it/io.hpp"
#include "qu8it/resources.hpp"

#include <chrono>
#include <functional>
#include <random>

namespace qu8it {

struct CheckResult {
  std::string section;
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  std::vector<std::string> sections;  ///< empty = all
  Tolerances tol;
  bool corrupt_state6 = false;        ///< flips the sign of |6> in c_r (negative control)
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
  }
  std::size_t failures() const {
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.passed; }));
  }
};

inline const std::vector<std::string>& verify_sections() {
  static const std::vector<std::string> s{"algebra", "mapping", "givens", "identities", "charge_pairs",
                                          "lattice", "fermions", "sectors", "resources", "evolution"};
  return s;
}

namespace detail {

class Suite {
 public:
  explicit Suite(VerifyReport& r) : report_(r) {}

  void section(std::string s) { section_ = std::move(s); }

  /// Residual check: passes when residual <= tol.
  void residual(const std::string& name, double tol, const std::function<double()>& f) {
    CheckResult c{section_, name, 0.0, tol, false, ""};
    try {
      c.residual = f();
      c.passed = c.residual <= tol;
    } catch (const std::exception& e) {
      c.detail = e.what();
    }
    report_.checks.push_back(std::move(c));
  }

  /// Exact check on an integer or boolean outcome; detail carries the values.
  void exact(const std::string& name, const std::function<std::pair<bool, std::string>()>& f) {
    CheckResult c{section_, name, 0.0, 0.0, false, ""};
    try {
      auto [ok, detail] = f();
      c.passed = ok;
      c.residual = ok ? 0.0 : 1.0;
      c.detail = std::move(detail);
    } catch (const std::exception& e) {
      c.residual = 1.0;
      c.detail = e.what();
    }
    report_.checks.push_back(std::move(c));
  }

 private:
  VerifyReport& report_;
  std::string section_;
};

inline Qu8itOperators suite_operators(const VerifyOptions& opt) {
  auto ops = build_qu8it_operators();
  if (opt.corrupt_state6) {
    const int six = index_from_label(6);
    for (int k = 0; k < 8; ++k) {
      ops.c[0](k, six) = -ops.c[0](k, six);
      ops.c[0](six, k) = -ops.c[0](six, k);
    }
    ops.c_dag[0] = ops.c[0].adjoint();
  }
  return ops;
}

template <class M>
std::string describe(const M& m) {
  std::ostringstream os;
  os << m;
  return os.str();
}

inline double spectra_distance(std::vector<double> a, std::vector<double> b, double shift = 0.0) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - (b[i] - shift)));
  return worst;
}

inline double dual_spectrum_residual(const LatticeParams& p, std::size_t cap = std::size_t{1} << 13) {
  const auto a = build_qu8it_hamiltonian(p);
  const auto b = build_qubit_hamiltonian(p);
  const auto sa = block_diagonalize(a.matrix, sector_keys(a), cap);
  const auto sb = block_diagonalize(b.matrix, sector_keys(b), cap);
  return std::max({spectra_distance(sa.sorted_values(), sb.sorted_values(), mapping_offset(p)), sa.off_block_residual,
                   sb.off_block_residual});
}

inline double max_anticommutator_residual(const std::vector<SparseOp>& c) {
  double worst = 0.0;
  const auto n = c.front().rows();
  SparseOp id(n, n);
  id.setIdentity();
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) {
      const SparseOp cj_dag = c[j].adjoint();
      SparseOp ac = c[i] * cj_dag + cj_dag * c[i];
      if (i == j) ac -= id;
      worst = std::max(worst, max_abs(ac));
      const SparseOp aa = c[i] * c[j] + c[j] * c[i];
      worst = std::max(worst, max_abs(aa));
    }
  return worst;
}

}  // namespace detail

inline VerifyReport run_verification(const VerifyOptions& opt = {}) {
  VerifyReport report;
  detail::Suite s(report);
  const auto& tol = opt.tol;
  auto want = [&](const std::string& sec) {
    return opt.sections.empty() || std::find(opt.sections.begin(), opt.sections.end(), sec) != opt.sections.end();
  };
  for (const auto& sec : opt.sections)
    if (std::find(verify_sections().begin(), verify_sections().end(), sec) == verify_sections().end())
      throw Error(ErrorKind::InvalidParams, "unknown section '" + sec + "'");

  const auto& gm = gell_mann();
  const auto ops = detail::suite_operators(opt);
  const auto& g = grouped_operators();

  if (want("algebra")) {
    s.section("algebra");
    s.residual("[T^a,T^b] = i f^abc T^c", tol.identity, [&] { return closure_residual(gm, false); });
    s.residual("[Tbar^a,Tbar^b] = i f^abc Tbar^c", tol.identity, [&] { return closure_residual(gm, true); });
    s.residual("sum T^a T^a = 4/3 I", tol.identity, [&] { return max_abs(casimir_fundamental(gm) - Mat3::Identity() * (4.0 / 3.0)); });
    s.residual("sum Tbar^a Tbar^a = 4/3 I", tol.identity,
               [&] { return max_abs(casimir_antifundamental(gm) - Mat3::Identity() * (4.0 / 3.0)); });
    s.residual("Tr(T^a T^b) = delta/2", tol.identity, [&] {
      double w = 0;
      for (std::size_t a = 0; a < 8; ++a)
        for (std::size_t b = 0; b < 8; ++b)
          w = std::max(w, std::abs((gm.T[a] * gm.T[b]).trace() - (a == b ? 0.5 : 0.0)));
      return w;
    });
    s.residual("f totally antisymmetric", tol.identity, [&] {
      double w = 0;
      for (int a = 1; a <= 8; ++a)
        for (int b = 1; b <= 8; ++b)
          for (int c = 1; c <= 8; ++c)
            w = std::max({w, std::abs(gm.structure(a, b, c) + gm.structure(b, a, c)),
                          std::abs(gm.structure(a, b, c) - gm.structure(b, c, a))});
      return w;
    });
    s.residual("f^123 = 1, f^458 = sqrt(3)/2", tol.identity, [&] {
      return std::max(std::abs(gm.structure(1, 2, 3) - 1.0), std::abs(gm.structure(4, 5, 8) - std::sqrt(3.0) / 2));
    });
  }

  if (want("mapping")) {
    s.section("mapping");
    const auto fo = fock_oracle(gm);
    static constexpr std::array<const char*, 3> col{"r", "g", "b"};
    for (std::size_t k = 0; k < 3; ++k)
      s.residual(std::string("c_") + col[k] + " = Fock oracle", tol.identity, [&, k] { return max_abs(ops.c[k] - fo.c[k]); });
    s.residual("P = Fock parity", tol.identity, [&] { return max_abs(ops.P - fo.P); });
    s.residual("B = Fock number / 3", tol.identity, [&] { return max_abs(ops.B - fo.B); });
    s.residual("Q^a = Fock charges", tol.identity, [&] {
      double w = 0;
      for (std::size_t a = 0; a < 8; ++a) w = std::max(w, max_abs(ops.Q[a] - fo.Q[a]));
      return w;
    });
    s.residual("Qbar^a = Fock anti-charges", tol.identity, [&] {
      double w = 0;
      for (std::size_t a = 0; a < 8; ++a) w = std::max(w, max_abs(ops.Qbar[a] - fo.Qbar[a]));
      return w;
    });
    s.residual("{c_a, c_b^dag} = delta_ab, {c_a, c_b} = 0", tol.identity, [&] {
      double w = 0;
      for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b) {
          Mat8 ac = ops.c[a] * ops.c_dag[b] + ops.c_dag[b] * ops.c[a];
          if (a == b) ac -= Mat8::Identity();
          w = std::max({w, max_abs(ac), max_abs(Mat8(ops.c[a] * ops.c[b] + ops.c[b] * ops.c[a]))});
        }
      return w;
    });
    s.residual("{P, c_a} = 0", tol.identity, [&] {
      double w = 0;
      for (const auto& c : ops.c) w = std::max(w, max_abs(Mat8(ops.P * c + c * ops.P)));
      return w;
    });
    s.residual("[Q^a, Q^b] = i f^abc Q^c", tol.identity, [&] {
      double w = 0;
      for (bool anti : {false, true}) {
        const auto& q = ops.charges(anti);
        for (std::size_t a = 0; a < 8; ++a)
          for (std::size_t b = 0; b < 8; ++b) {
            Mat8 rhs = Mat8::Zero();
            for (std::size_t c = 0; c < 8; ++c) rhs += kI * gm.f[a][b][c] * q[c];
            w = std::max(w, max_abs(Mat8(q[a] * q[b] - q[b] * q[a] - rhs)));
          }
      }
      return w;
    });
    s.exact("connectivity: |1>,|8> degree 3; triplets and anti-triplets degree 5", [&] {
      const auto tg = transition_graph(ops);
      const std::array<int, 8> want_deg{3, 5, 5, 5, 5, 5, 5, 3};
      std::string d;
      bool ok = true;
      for (int i = 0; i < 8; ++i) {
        d += std::to_string(tg.degree(i)) + (i < 7 ? "," : "");
        ok = ok && tg.degree(i) == want_deg[static_cast<std::size_t>(i)];
      }
      return std::make_pair(ok, "degrees " + d);
    });
  }

  if (want("givens")) {
    s.section("givens");
    const auto& basis = build_basis();
    s.residual("hermitian basis orthogonal (Tr = 2 or 1 for w)", tol.identity, [&] {
      const auto labels = basis.hermitian_labels();
      double w = 0;
      for (std::size_t a = 0; a < labels.size(); ++a)
        for (std::size_t b = 0; b < labels.size(); ++b) {
          const double want_v = a == b ? detail::gram(labels[a]) : 0.0;
          w = std::max(w, std::abs((basis.matrix(labels[a]) * basis.matrix(labels[b])).trace() - want_v));
        }
      return w;
    });
    s.residual("random 8x8 Hermitian round trip", tol.identity, [&] {
      std::mt19937_64 rng(20240521);
      std::normal_distribution<double> nd;
      MatX h(8, 8);
      for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) h(i, j) = cplx(nd(rng), nd(rng));
      h = (h + h.adjoint()).eval();
      return max_abs(decompose(h).to_matrix(1) - h);
    });
    s.residual("random 64x64 Hermitian two-site round trip", tol.identity, [&] {
      std::mt19937_64 rng(7);
      std::normal_distribution<double> nd;
      MatX h(64, 64);
      for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 64; ++j) h(i, j) = cplx(nd(rng), nd(rng));
      h = (0.5 * (h + h.adjoint())).eval();
      return max_abs(decompose_two_site(h).to_matrix(2) - h);
    });
    s.exact("non-Hermitian input rejected", [&] {
      MatX h = MatX::Zero(8, 8);
      h(0, 1) = 1.0;
      try {
        decompose(h);
      } catch (const Error& e) {
        return std::make_pair(e.kind() == ErrorKind::NonHermitianInput, std::string(e.what()));
      }
      return std::make_pair(false, std::string("no error raised"));
    });
    s.residual("Walsh <-> diagonal round trip", tol.identity, [&] {
      const std::array<double, 8> d{0.3, -1.2, 2.0, 0.0, 5.5, -0.1, 1.0, 7.0};
      const auto back = walsh_to_diag(diag_to_walsh(d));
      double w = 0;
      for (std::size_t k = 0; k < 8; ++k) w = std::max(w, std::abs(back[k] - d[k]));
      return w;
    });
  }

  if (want("identities")) {
    s.section("identities");
    s.residual("baryon number Walsh form", tol.identity, [&] { return max_abs(forms::baryon_walsh().to_matrix(1) - ops.B); });
    s.residual("mass link: 3m(B(x)I + I(x)B) Walsh form", tol.identity, [&] {
      return max_abs(forms::mass_link_walsh().to_matrix(2) - 3.0 * (kron(ops.B, ops.I) + kron(ops.I, ops.B)));
    });
    s.residual("electric L=1: block form", tol.identity,
               [&] { return max_abs(forms::casimir_left_block_form().to_matrix(2) - forms::casimir_left(ops)); });
    s.residual("electric L=1: Walsh form", tol.identity,
               [&] { return max_abs(forms::casimir_left_walsh_form().to_matrix(2) - forms::casimir_left(ops)); });
    s.residual("electric L=1: I - diag(1,-1/3,...,1) form", tol.identity,
               [&] { return max_abs(forms::casimir_left_literal_form().to_matrix(2) - forms::casimir_left(ops)); });
    s.residual("anti-site Casimir: Walsh and literal forms", tol.identity, [&] {
      return std::max(max_abs(forms::casimir_right_walsh_form().to_matrix(2) - forms::casimir_right(ops)),
                      max_abs(forms::casimir_right_literal_form().to_matrix(2) - forms::casimir_right(ops)));
    });
    s.residual("total charge squared: expanded form", tol.identity,
               [&] { return max_abs(forms::total_charge_squared_expanded().to_matrix(2) - forms::total_charge_squared(ops)); });
    s.residual("total charge squared: grouped form", tol.identity,
               [&] { return max_abs(forms::total_charge_squared_grouped(ops) - forms::total_charge_squared(ops)); });
    s.residual("hopping: 96-term expansion", tol.identity,
               [&] { return max_abs(forms::hopping_link_expanded().to_matrix(2) - forms::hopping_link(ops)); });
    s.exact("hopping expansion has 96 terms", [&] {
      const auto n = forms::hopping_link_expanded().canonical().size();
      return std::make_pair(n == 96, std::to_string(n) + " terms");
    });
    s.residual("hopping: grouped A/B form", tol.identity,
               [&] { return max_abs(forms::hopping_link_grouped(g) - forms::hopping_link(ops)); });
    s.residual("grouped A/B operators commute within each product", tol.identity, [&] {
      double w = 0;
      for (std::size_t c = 0; c < 3; ++c) {
        w = std::max(w, detail::internal_commutation(kron(g.A[0][c], g.A[1][c])).second);
        w = std::max(w, detail::internal_commutation(kron(g.B[0][c], g.B[1][c])).second);
      }
      return w;
    });
  }

  if (want("charge_pairs")) {
    s.section("charge_pairs");
    s.residual("sum Q (x) Q expanded", tol.identity, [&] {
      return max_abs(forms::charge_same_parity_expanded().to_matrix(2) - forms::charge_contraction(ops, false, false));
    });
    s.residual("sum Qbar (x) Qbar expanded", tol.identity, [&] {
      return max_abs(forms::charge_same_parity_expanded().to_matrix(2) - forms::charge_contraction(ops, true, true));
    });
    s.residual("sum Q (x) Qbar expanded", tol.identity, [&] {
      return max_abs(forms::charge_mixed_parity_expanded().to_matrix(2) - forms::charge_contraction(ops, false, true));
    });
    s.residual("sum Qbar (x) Q expanded", tol.identity, [&] {
      return max_abs(forms::charge_mixed_parity_expanded().to_matrix(2) - forms::charge_contraction(ops, true, false));
    });
    for (int a : {0, 1})
      for (int b : {0, 1}) {
        const std::string name = std::string("grouped ") + (a ? "Qbar" : "Q") + " (x) " + (b ? "Qbar" : "Q");
        s.residual(name, tol.identity, [&, a, b] {
          return max_abs(forms::charge_contraction_grouped(ops, a == 1, b == 1, g) - forms::charge_contraction(ops, a == 1, b == 1));
        });
      }
    s.residual("Q^1 = C(12)/2, Q^2 = D(12)/2", tol.identity,
               [&] { return std::max(max_abs(ops.Q[0] - 0.5 * g.C[0]), max_abs(ops.Q[1] - 0.5 * g.D[0])); });
    s.residual("charge-pair groups commute internally", tol.identity, [&] {
      double w = 0;
      for (int a : {0, 1})
        for (int b : {0, 1}) {
          const auto pc = detail::charge_pair_pieces(ops, a == 1, b == 1);
          for (const auto& op : pc.op) w = std::max(w, detail::internal_commutation(*op).second);
        }
      return w;
    });
  }

  if (want("lattice")) {
    s.section("lattice");
    LatticeParams p;
    p.masses = {0.7};
    p.g = 1.3;
    p.h = 0.9;
    p.include_h = true;
    const auto H = build_qu8it_hamiltonian(p);
    s.residual("L=1 register H = printed single-link pieces", tol.identity, [&] {
      const MatX printed = forms::hopping_link_expanded().to_matrix(2) + 0.7 * forms::mass_link_walsh().to_matrix(2) +
                           0.5 * 1.3 * 1.3 * forms::casimir_left_walsh_form().to_matrix(2) +
                           0.5 * 0.9 * 0.9 * forms::total_charge_squared_expanded().to_matrix(2);
      return max_abs(MatX(H.matrix) - printed);
    });
    s.residual("L=1 electric block = (2g^2/3) diag(0,1,1,1,1,1,1,0) (x) I", tol.identity, [&] {
      const Mat8 d = diag8({0, 1, 1, 1, 1, 1, 1, 0});
      return max_abs(MatX(H.block_matrices[2]) - (2.0 * 1.3 * 1.3 / 3.0) * kron(d, ops.I));
    });
    for (const LatticeParams& q : {p, LatticeParams{.L = 2, .nf = 1, .masses = {0.7}, .g = 1.3, .h = 0.9, .include_h = true},
                                   LatticeParams{.L = 1, .nf = 2, .masses = {0.7, 1.1}, .g = 1.3, .h = 0.9, .include_h = true}}) {
      const std::string tag = "(N_f=" + std::to_string(q.nf) + ", L=" + std::to_string(q.L) + ")";
      s.residual("dual-mapping spectra " + tag, tol.eigenvalue, [q] { return detail::dual_spectrum_residual(q); });
    }
    s.residual("Hermiticity of every block, L=2", tol.hermitian, [&] {
      LatticeParams q = p;
      q.L = 2;
      const auto H2 = build_qu8it_hamiltonian(q);
      double w = hermiticity_residual(H2.matrix);
      SparseOp sum(H2.matrix.rows(), H2.matrix.cols());
      for (const auto& b : H2.block_matrices) {
        w = std::max(w, hermiticity_residual(b));
        sum += b;
      }
      return std::max(w, max_abs(SparseOp(sum - H2.matrix)));
    });
    s.residual("[H, B_total], [H, Casimir], [H, Q3], [H, Q8] (L=2)", 1e-11, [&] {
      LatticeParams q = p;
      q.L = 2;
      const auto H2 = build_qu8it_hamiltonian(q);
      const auto cc = conserved_charges(H2);
      double w = 0;
      for (const SparseOp* o : {&cc.B_total, &cc.casimir_total, &cc.Q3_total, &cc.Q8_total})
        w = std::max(w, max_abs(SparseOp(H2.matrix * *o - *o * H2.matrix)));
      return w;
    });
  }

  if (want("fermions")) {
    s.section("fermions");
    for (const LatticeParams& q : {LatticeParams{}, LatticeParams{.L = 1, .nf = 2}, LatticeParams{.L = 2, .nf = 1}}) {
      const std::string tag = "(N_f=" + std::to_string(q.nf) + ", L=" + std::to_string(q.L) + ")";
      const auto reg = qu8it_registry(q);
      const RegisterShape shape(reg.slots, 8, 1 << 13);
      s.residual("embedded c operators anticommute " + tag, tol.identity, [&, reg, shape] {
        std::vector<SparseOp> cs;
        for (int sl = 0; sl < reg.slots; ++sl)
          for (Color c : kColors) cs.push_back(embedded_annihilator(reg, shape, sl, c));
        return detail::max_anticommutator_residual(cs);
      });
      s.residual("kinetic block = 1/2 sum (c^dag c^dag - c c) over links " + tag, tol.identity, [&, q, reg, shape] {
        const SiteIndexing idx(q);
        SparseOp want_k(static_cast<Eigen::Index>(shape.dim), static_cast<Eigen::Index>(shape.dim));
        for (int n = 0; n + 1 < q.sites(); ++n)
          for (int f = 0; f < q.nf; ++f)
            for (Color c : kColors) {
              const SparseOp a = embedded_annihilator(reg, shape, idx.slot(n, f), c);
              const SparseOp b = embedded_annihilator(reg, shape, idx.slot(n + 1, f), c);
              const SparseOp ad = a.adjoint(), bd = b.adjoint();
              want_k += 0.5 * (SparseOp(ad * bd) - SparseOp(a * b));
            }
        return max_abs(SparseOp(terms_to_sparse(reg.blocks[0].terms, shape, reg.parity) - want_k));
      });
    }
  }

  if (want("sectors")) {
    s.section("sectors");
    LatticeParams p;
    p.h = 20.0;
    p.include_h = true;
    const auto H = build_qu8it_hamiltonian(p);
    const auto keys = sector_keys(H);
    s.exact("B=0 sector dimension 20", [&] {
      const auto n = sector_project(H, 0.0).basis.size();
      return std::make_pair(n == 20, std::to_string(n));
    });
    s.exact("B=1/3 sector dimension 15, B=1 dimension 1", [&] {
      const auto a = sector_project(H, 1.0 / 3.0).basis.size();
      const auto b = sector_project(H, 1.0).basis.size();
      return std::make_pair(a == 15 && b == 1, std::to_string(a) + ", " + std::to_string(b));
    });
    s.residual("sector projection is block diagonal", tol.hermitian, [&] { return sector_project(H, 0.0).off_block_residual; });
    s.exact("h=20: four color singlets lowest in B=0", [&] {
      const auto cc = conserved_charges(H);
      const auto lv = levels_with_casimir(block_diagonalize(H.matrix, keys, 4096, baryon_filter(0.0)), cc.casimir_total);
      bool ok = lv.size() == 20;
      double worst_singlet = 0, gap = 0;
      for (std::size_t k = 0; k < lv.size(); ++k) {
        if (k < 4) worst_singlet = std::max(worst_singlet, std::abs(lv[k].casimir));
      }
      if (ok) gap = lv[4].energy - lv[3].energy;
      ok = ok && worst_singlet < 1e-6 && gap > 0.5 * p.h * p.h;
      return std::make_pair(ok, "max singlet Casimir " + fmt17(worst_singlet) + ", gap " + fmt17(gap));
    });
    s.exact("empty sector rejected", [&] {
      try {
        sector_project(H, 5.0);
      } catch (const Error& e) {
        return std::make_pair(e.kind() == ErrorKind::EmptySector, std::string(e.what()));
      }
      return std::make_pair(false, std::string("no error raised"));
    });
  }

  if (want("resources")) {
    s.section("resources");
    s.exact("grouped counts equal closed forms, N_f, L in {1,2,3}", [&] {
      std::string bad;
      for (int nf = 1; nf <= 3; ++nf)
        for (int L = 1; L <= 3; ++L) {
          const LatticeParams q{.L = L, .nf = nf};
          const auto e = enumerate_circuit_counts(q, false);
          const auto c = closed_form_counts(q, Mapping::qu8it);
          if (e.kinetic_entangling != c.kinetic_entangling || e.electric_entangling != c.electric_entangling ||
              e.qudit_count != c.qudit_count)
            bad += "(" + std::to_string(nf) + "," + std::to_string(L) + ") ";
        }
      return std::make_pair(bad.empty(), bad.empty() ? std::string("all equal") : "mismatch at " + bad);
    });
    s.exact("L=1 with h: 6 + 8 grouped, 96 + 26 ungrouped, 732 controlled, 249 single", [&] {
      const auto r = enumerate_circuit_counts(LatticeParams{}, true);
      const bool ok = r.kinetic_entangling == 6 && r.h_entangling == 8 && r.ungrouped_two_qudit == 122 &&
                      r.controlled_gate_count == 732 && r.single_rotation_count == 249;
      return std::make_pair(ok, to_json(r).dump());
    });
    s.residual("L=200 reduction ratios vs (3, 4, 5.75), relative", 0.01, [&] {
      const auto r = reduction_ratios(LatticeParams{.L = 200});
      return std::max({std::abs(r[0] / 3 - 1), std::abs(r[1] / 4 - 1), std::abs(r[2] / 5.75 - 1)});
    });
  }

  if (want("evolution")) {
    s.section("evolution");
    const LatticeParams p;
    const auto H = build_qu8it_hamiltonian(p);
    const auto obs = default_observables(H);
    const auto psi = StateVector::basis(H.dim(), 0);
    s.residual("L=1 Trotter keeps the singlet (100 steps, dt=0.1)", 1e-10, [&] {
      const auto tr = trotter_evolve(build_trotter_plan(H, 1), H, psi, 10.0, 100, obs);
      const auto k = tr.column("casimir");
      double w = 0;
      for (const auto& r : tr.rows) w = std::max(w, std::abs(r.values[k]));
      return w;
    });
    s.residual("exact evolution conserves B_total and energy", 1e-10, [&] {
      const ExactPropagator ex(H);
      const auto tr = exact_trajectory(ex, psi, 3.0, 30, obs);
      const auto kb = tr.column("B_total"), ke = tr.column("energy");
      double w = 0;
      for (const auto& r : tr.rows)
        w = std::max({w, std::abs(r.values[kb] - tr.rows[0].values[kb]), std::abs(r.values[ke] - tr.rows[0].values[ke]),
                      std::abs(r.norm - 1.0)});
      return w;
    });
    s.exact("kinetic plan 6 groups, h plan 8 groups (L=1)", [&] {
      LatticeParams q = p;
      q.include_h = true;
      q.h = 1.0;
      const auto plan = build_trotter_plan(qu8it_registry(q), 1);
      const auto k = plan.two_qudit_groups(BlockTag::kinetic), h = plan.two_qudit_groups(BlockTag::h);
      return std::make_pair(k == 6 && h == 8 && plan.max_commutator_residual() <= 1e-13,
                            std::to_string(k) + " + " + std::to_string(h) + ", commutator " + fmt17(plan.max_commutator_residual()));
    });
  }
  return report;
}

inline nlohmann::json to_json(const VerifyReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"section", c.section},
                      {"name", c.name},
                      {"residual", c.residual},
                      {"tolerance", c.tolerance},
                      {"passed", c.passed},
                      {"detail", c.detail}});
  return {{"schema_version", kSchemaVersion}, {"passed", r.passed()}, {"failures", r.failures()}, {"checks", checks}};
}

inline std::string report_text(const VerifyReport& r) {
  std::ostringstream os;
  for (const auto& c : r.checks) {
    os << (c.passed ? "PASS " : "FAIL ") << std::left << std::setw(11) << c.section << ' ' << c.name;
    if (c.tolerance > 0) os << "  residual " << fmt17(c.residual) << " (tol " << c.tolerance << ")";
    if (!c.detail.empty()) os << "  [" << c.detail << "]";
    os << '\n';
  }
  os << r.checks.size() - r.failures() << "/" << r.checks.size() << " checks passed\n";
  return os.str();
}

}  // namespace qu8it
