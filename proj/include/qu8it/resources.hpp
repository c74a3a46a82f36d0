#pragma once

// Entangling-gate counts: closed forms for both encodings and counts
// enumerated from an actual qu8it Trotter plan.

#include "qu8it/evolution.hpp"

#include <json.hpp>

#include <cstdint>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

namespace qu8it {

struct ResourceReport {
  Mapping mapping = Mapping::qu8it;
  std::int64_t qudit_count = 0;
  std::int64_t kinetic_entangling = 0;
  std::int64_t electric_entangling = 0;
  std::int64_t h_entangling = 0;  ///< qu8it only
  std::int64_t ungrouped_two_qudit = 0;
  std::int64_t controlled_gate_count = 0;
  std::int64_t single_rotation_count = 0;
  std::array<double, 3> reduction_ratios{};  ///< qubit / qu8it: qudits, U_kin, U_el
};

inline std::array<double, 3> reduction_ratios(const LatticeParams& p) {
  const double L = p.L, N = p.nf;
  const double kin_qubit = 6 * N * (8 * L - 3) - 4;
  const double kin_qu8it = 6 * N * (2 * L - 1);
  const double M = N * (2 * L - 1);
  const double el_qubit = M * (23 * M - 17);
  const double el_qu8it = 4 * M * (M - 1);
  return {3.0, kin_qubit / kin_qu8it,
          el_qu8it > 0 ? el_qubit / el_qu8it : std::numeric_limits<double>::infinity()};
}

/// Closed-form counts. The h-term is counted separately; for the qu8it encoding
/// with include_h its grouped count is 8 per pair of qu8its.
inline ResourceReport closed_form_counts(const LatticeParams& p, Mapping mapping) {
  p.validate();
  const std::int64_t L = p.L, N = p.nf;
  ResourceReport r;
  r.mapping = mapping;
  const std::int64_t M = N * (2 * L - 1);
  if (mapping == Mapping::qubit) {
    r.qudit_count = 6 * N * L;
    r.kinetic_entangling = 6 * N * (8 * L - 3) - 4;
    r.electric_entangling = M * (23 * M - 17);
  } else {
    r.qudit_count = 2 * N * L;
    r.kinetic_entangling = 6 * M;
    r.electric_entangling = 4 * M * (M - 1);
    const std::int64_t S = 2 * N * L;
    if (p.include_h) r.h_entangling = 4 * S * (S - 1);
  }
  r.reduction_ratios = reduction_ratios(p);
  return r;
}

/// Counts from the qu8it Trotter plan. Grouped entangling gates are the
/// two-qudit groups of the plan. The ungrouped count expands every two-qudit
/// interaction into individual Givens products; each of those lowers to 6
/// controlled gates and 2 single-qudit rotations, and each diagonal block adds
/// one rotation per qudit it touches.
inline ResourceReport enumerate_circuit_counts(const LatticeParams& p, bool include_h) {
  p.validate();
  // The counts depend on which terms are present, not on coupling values.
  LatticeParams q = p;
  q.g = 1.0;
  q.h = 1.0;
  q.include_h = include_h;
  q.masses.assign(1, 1.0);
  const TermRegistry reg = qu8it_registry(q);
  const TrotterPlan plan = build_trotter_plan(reg, 1, false);
  const SiteIndexing idx(q);

  ResourceReport r;
  r.mapping = Mapping::qu8it;
  r.qudit_count = q.qudits();
  r.kinetic_entangling = static_cast<std::int64_t>(plan.two_qudit_groups(BlockTag::kinetic));
  r.electric_entangling = static_cast<std::int64_t>(plan.two_qudit_groups(BlockTag::electric));
  r.h_entangling = static_cast<std::int64_t>(plan.two_qudit_groups(BlockTag::h));

  // One interaction = all groups of a block acting on the same slot pair.
  std::map<std::tuple<BlockTag, int, int>, MatX> interactions;
  for (const auto& g : plan.groups) {
    if (g.diagonal) continue;
    const auto key = std::make_tuple(g.tag, g.slots[0], g.slots[1]);
    auto it = interactions.find(key);
    if (it == interactions.end())
      interactions.emplace(key, g.generator);
    else
      it->second += g.generator;
  }
  std::map<std::tuple<BlockTag, bool, bool>, int> cache;
  for (const auto& [key, op] : interactions) {
    const auto [tag, s, t] = key;
    const auto ck = std::make_tuple(tag, idx.anti(s), idx.anti(t));
    auto it = cache.find(ck);
    if (it == cache.end()) it = cache.emplace(ck, ungrouped_rotation_count(op)).first;
    r.ungrouped_two_qudit += it->second;
  }

  std::int64_t diagonal_rotations = 0;
  for (const auto& g : plan.groups) {
    if (!g.diagonal) continue;
    std::set<std::pair<BlockTag, int>> touched;
    for (std::size_t k = 0; k < g.terms.size(); ++k)
      if (!g.terms[k].slots.empty()) touched.emplace(g.term_tags[k], g.terms[k].slots[0]);
    diagonal_rotations += static_cast<std::int64_t>(touched.size());
  }
  r.controlled_gate_count = 6 * r.ungrouped_two_qudit;
  r.single_rotation_count = 2 * r.ungrouped_two_qudit + diagonal_rotations;
  r.reduction_ratios = reduction_ratios(q);
  return r;
}

// ---------------------------------------------------------------------------
// Report formatting.

inline std::string resource_table_text(const LatticeParams& p) {
  const auto qb = closed_form_counts(p, Mapping::qubit);
  const auto q8 = closed_form_counts(p, Mapping::qu8it);
  const auto inf = reduction_ratios(LatticeParams{.L = 1000000, .nf = p.nf});
  std::ostringstream os;
  os << "N_f = " << p.nf << ", L = " << p.L << "\n";
  os << std::left << std::setw(22) << "" << std::right << std::setw(12) << "qubit" << std::setw(12) << "qu8it"
     << std::setw(16) << "ratio" << std::setw(16) << "ratio (L->inf)" << "\n";
  auto row = [&](const char* name, std::int64_t a, std::int64_t b, double ratio, double lim) {
    os << std::left << std::setw(22) << name << std::right << std::setw(12) << a << std::setw(12) << b << std::setw(16)
       << std::setprecision(6) << ratio << std::setw(16) << std::setprecision(4) << lim << "\n";
  };
  row("qudits", qb.qudit_count, q8.qudit_count, q8.reduction_ratios[0], inf[0]);
  row("U_kin entangling", qb.kinetic_entangling, q8.kinetic_entangling, q8.reduction_ratios[1], inf[1]);
  row("U_el entangling", qb.electric_entangling, q8.electric_entangling, q8.reduction_ratios[2], inf[2]);
  return os.str();
}

inline nlohmann::json to_json(const ResourceReport& r) {
  auto finite = [](double x) -> nlohmann::json { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
  return {{"mapping", to_string(r.mapping)},
          {"qudit_count", r.qudit_count},
          {"kinetic_entangling", r.kinetic_entangling},
          {"electric_entangling", r.electric_entangling},
          {"h_entangling", r.h_entangling},
          {"ungrouped_two_qudit", r.ungrouped_two_qudit},
          {"controlled_gate_count", r.controlled_gate_count},
          {"single_rotation_count", r.single_rotation_count},
          {"reduction_ratios", {finite(r.reduction_ratios[0]), finite(r.reduction_ratios[1]), finite(r.reduction_ratios[2])}}};
}

inline std::string resource_csv_header() {
  return "source,mapping,N_f,L,qudits,U_kin,U_el,U_h,ungrouped,controlled,single_rotations";
}

inline std::string resource_csv_row(const std::string& source, const LatticeParams& p, const ResourceReport& r) {
  std::ostringstream os;
  os << source << ',' << to_string(r.mapping) << ',' << p.nf << ',' << p.L << ',' << r.qudit_count << ','
     << r.kinetic_entangling << ',' << r.electric_entangling << ',' << r.h_entangling << ',' << r.ungrouped_two_qudit
     << ',' << r.controlled_gate_count << ',' << r.single_rotation_count;
  return os.str();
}

}  // namespace qu8it
