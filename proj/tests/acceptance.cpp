// Acceptance suite: one [PASS]/[FAIL] line per criterion, nonzero exit on any failure.

#include "qu8it/resources.hpp"
#include "qu8it/spectrum.hpp"
#include "qu8it/verify.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace qu8it;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

int failures = 0;

void run(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < budget_s;
  const bool pass = o.ok && in_time;
  if (!pass) ++failures;
  char t[64];
  std::snprintf(t, sizeof t, "%.3fs / %.0fs", secs, budget_s);
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << id << " " << name << ": " << o.detail << " (" << t
            << (in_time ? "" : ", over budget") << ")" << std::endl;
}

std::string sci(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", x);
  return b;
}

// Largest sorted-eigenvalue difference, infinity on size mismatch.
double spectra_gap(std::vector<double> a, std::vector<double> b, double shift) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double r = 0;
  for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i] - shift));
  return r;
}

std::vector<double> full_spectrum(const LatticeOperator& H) {
  Eigen::SelfAdjointEigenSolver<MatX> es{MatX(H.matrix)};
  const Eigen::VectorXd v = es.eigenvalues();
  return {v.data(), v.data() + v.size()};
}

Outcome checks_pass(const std::vector<std::string>& sections, double ceiling) {
  VerifyOptions opt;
  opt.sections = sections;
  const auto rep = run_verification(opt);
  double worst = 0;
  std::string bad;
  bool ok = !rep.checks.empty();
  for (const auto& c : rep.checks) {
    const bool within = c.passed && (c.tolerance == 0.0 || c.residual <= ceiling);
    if (!within) {
      ok = false;
      bad += " [" + c.name + "]";
    }
    worst = std::max(worst, c.residual);
  }
  return {ok, std::to_string(rep.checks.size()) + " checks, max residual " + sci(worst) + bad};
}

}  // namespace

int main() {
  run(1, "dual-mapping spectra, N_f=1 L=1", 1.0, [] {
    LatticeParams p{.masses = {0.7}, .g = 1.3, .h = 0.9, .include_h = true};
    const auto a = full_spectrum(build_qu8it_hamiltonian(p));
    const auto b = full_spectrum(build_qubit_hamiltonian(p));
    const double d = spectra_gap(a, b, mapping_offset(p));
    return Outcome{a.size() == 64 && d <= 1e-9, std::to_string(a.size()) + " levels, max |dE| " + sci(d)};
  });

  run(2, "sector structure, N_f=1 L=1", 1.0, [] {
    LatticeParams p{.masses = {1.0}, .g = 1.0, .h = 20.0, .include_h = true};
    const auto H = build_qu8it_hamiltonian(p);
    const auto proj = sector_project(H, 0.0);
    Eigen::SelfAdjointEigenSolver<MatX> es(proj.matrix);
    const MatX C = dense_restriction(conserved_charges(H).casimir_total, proj.basis);
    std::vector<double> cas;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
      cas.push_back((es.eigenvectors().col(k).adjoint() * C * es.eigenvectors().col(k))(0, 0).real());
    const auto& e = es.eigenvalues();
    double low = 0;
    for (int k = 0; k < 4; ++k) low = std::max(low, std::abs(cas[static_cast<std::size_t>(k)]));
    double high = std::numeric_limits<double>::infinity();
    for (std::size_t k = 4; k < cas.size(); ++k) high = std::min(high, cas[k]);
    const double gap = e(4) - e(3);
    const double h2 = p.h * p.h;
    const bool ok = proj.basis.size() == 20 && low < 1e-6 && high > 0.1 && gap > 0.1 * h2 && gap < 10 * h2;
    return Outcome{ok, "dim " + std::to_string(proj.basis.size()) + ", singlet Casimir " + sci(low) +
                           ", gap " + sci(gap) + " = " + sci(gap / h2) + " h^2"};
  });

  run(3, "identity suite", 5.0, [] { return checks_pass({"identities", "charge_pairs"}, 1e-13); });

  run(4, "operator oracle", 1.0, [] {
    const auto ops = build_qu8it_operators();
    const auto fo = fock_oracle();
    double exact = 0, charges = 0, anti = 0;
    for (std::size_t k = 0; k < 3; ++k) exact = std::max(exact, max_abs(ops.c[k] - fo.c[k]));
    exact = std::max(exact, max_abs(ops.P - fo.P));
    for (std::size_t a = 0; a < 8; ++a)
      charges = std::max({charges, max_abs(ops.Q[a] - fo.Q[a]), max_abs(ops.Qbar[a] - fo.Qbar[a])});
    charges = std::max(charges, max_abs(ops.B - fo.B));
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) {
        const Mat8 d = (a == b) ? Mat8(Mat8::Identity()) : Mat8(Mat8::Zero());
        anti = std::max({anti, max_abs(ops.c[a] * ops.c_dag[b] + ops.c_dag[b] * ops.c[a] - d),
                         max_abs(Mat8(ops.c[a] * ops.c[b] + ops.c[b] * ops.c[a])),
                         max_abs(Mat8(ops.P * ops.c[a] + ops.c[a] * ops.P))});
      }
    const bool ok = exact == 0.0 && anti == 0.0 && charges <= 1e-15;
    return Outcome{ok, "c,P diff " + sci(exact) + ", Q,Qbar,B diff " + sci(charges) + ", anticommutators " + sci(anti)};
  });

  run(5, "resource counts", 1.0, [] {
    std::ostringstream os;
    bool ok = true;
    for (int nf = 1; nf <= 3; ++nf)
      for (int L = 1; L <= 3; ++L) {
        const LatticeParams p{.L = L, .nf = nf};
        const auto e = enumerate_circuit_counts(p, false);
        const std::int64_t M = nf * (2 * L - 1);
        ok = ok && e.qudit_count == 2 * nf * L && e.kinetic_entangling == 6 * M &&
             e.electric_entangling == 4 * M * (M - 1);
        const auto q = closed_form_counts(p, Mapping::qubit);
        ok = ok && q.qudit_count == 6 * nf * L && q.kinetic_entangling == 6 * nf * (8 * L - 3) - 4 &&
             q.electric_entangling == M * (23 * M - 17);
      }
    os << "table " << (ok ? "ok" : "mismatch");
    const auto r = reduction_ratios(LatticeParams{.L = 200});
    const double want[3] = {3.0, 4.0, 5.75};
    double rel = 0;
    for (int k = 0; k < 3; ++k) rel = std::max(rel, std::abs(r[static_cast<std::size_t>(k)] / want[k] - 1));
    ok = ok && rel < 0.01;
    os << ", L=200 ratios " << sci(r[0]) << "/" << sci(r[1]) << "/" << sci(r[2]);
    const auto ops = build_qu8it_operators();
    const int uk = ungrouped_rotation_count(forms::hopping_link(ops));
    const int uh = ungrouped_rotation_count(forms::total_charge_squared(ops));
    const auto low = enumerate_circuit_counts(LatticeParams{}, true);
    ok = ok && uk == 96 && uh == 26 && low.controlled_gate_count == 732 && low.single_rotation_count == 249;
    os << ", ungrouped " << uk << "+" << uh << ", lowered " << low.controlled_gate_count << " controlled "
       << low.single_rotation_count << " single";
    return Outcome{ok, os.str()};
  });

  run(6, "Trotter Casimir conservation", 120.0, [] {
    std::ostringstream os;
    // (a) L=1 keeps the singlet exactly.
    const auto H1 = build_qu8it_hamiltonian(LatticeParams{});
    const auto obs1 = default_observables(H1);
    const auto tr = trotter_evolve(build_trotter_plan(H1, 1), H1, StateVector::basis(H1.dim(), 0), 10.0, 100, obs1);
    const auto ci = tr.column("casimir");
    double worst = 0;
    for (const auto& r : tr.rows) worst = std::max(worst, std::abs(r.values[ci]));
    bool ok = worst <= 1e-10;
    os << "L=1 max " << sci(worst);
    // (b) L=2 violation shrinks with dt at the plan order.
    const auto H2 = build_qu8it_hamiltonian(LatticeParams{.L = 2});
    const auto obs2 = default_observables(H2);
    const auto psi = StateVector::basis(H2.dim(), 0);
    for (int order : {1, 2}) {
      const auto plan = build_trotter_plan(H2, order);
      std::vector<double> dt, viol;
      for (int steps : {5, 10, 20, 40}) {
        const auto t = trotter_evolve(plan, H2, psi, 1.0, steps, obs2);
        dt.push_back(1.0 / steps);
        viol.push_back(std::abs(t.rows.back().values[t.column("casimir")]));
      }
      bool mono = viol[0] > 1e-12;
      for (std::size_t k = 1; k < viol.size(); ++k) mono = mono && viol[k] < viol[k - 1];
      const double p = fitted_order(dt, viol);
      ok = ok && mono && p >= (order == 1 ? 0.7 : 1.7);
      os << "; order " << order << ": dt=0.2 " << sci(viol[0]) << (mono ? " monotone" : " NOT monotone") << ", slope "
         << sci(p);
    }
    return Outcome{ok, os.str()};
  });

  run(7, "fidelity convergence, N_f=1 L=1", 10.0, [] {
    std::ostringstream os;
    const auto H = build_qu8it_hamiltonian(LatticeParams{});
    const ExactPropagator ex(H);
    const auto obs = default_observables(H);
    const auto psi = StateVector::basis(H.dim(), 0);
    bool ok = true;
    for (int order : {1, 2}) {
      const auto plan = build_trotter_plan(H, order);
      std::vector<double> dt, err;
      for (int steps : {5, 10, 20, 40, 80}) {
        const auto t = trotter_evolve(plan, H, psi, 1.0, steps, obs, &ex);
        dt.push_back(1.0 / steps);
        err.push_back(std::sqrt(std::max(0.0, 1.0 - t.rows.back().fidelity)));
      }
      const double p = fitted_order(dt, err);
      ok = ok && std::abs(p - order) <= 0.3;
      os << (order == 1 ? "" : ", ") << "order " << order << " fit " << sci(p);
    }
    return Outcome{ok, os.str()};
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
