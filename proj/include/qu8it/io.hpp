#pragma once

// Run configuration, initial-state specs and file output. Floats are written
// with 17 significant digits so identical runs give byte-identical files.

#include "qu8it/evolution.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

namespace qu8it {

inline constexpr int kSchemaVersion = 1;

inline std::string fmt17(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Parses "0", "-1", "1/3", "0.333...": baryon number in baryon units.
inline double parse_rational(const std::string& s) {
  try {
    std::size_t used = 0;
    const auto slash = s.find('/');
    if (slash == std::string::npos) {
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    }
    const std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    const double a = std::stod(num, &used);
    if (used != num.size()) throw std::invalid_argument(s);
    const double b = std::stod(den, &used);
    if (used != den.size() || b == 0.0) throw std::invalid_argument(s);
    return a / b;
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::InvalidParams, "cannot parse '" + s + "' as a rational number");
  }
}

struct RunConfig {
  std::string command = "spectrum";
  LatticeParams params;
  double t = 1.0;
  int steps = 10;
  int order = 1;
  std::string state = "vac";
  std::optional<double> sector;
  std::string out = ".";
  std::string format = "csv";
  std::size_t dense_cap = 4096;
  std::string method = "auto";  ///< exact propagation: auto, dense or krylov
  std::vector<std::string> sections;
  Tolerances tol;

  bool operator==(const RunConfig&) const = default;
};

inline nlohmann::json to_json(const LatticeParams& p) {
  return {{"L", p.L}, {"N_f", p.nf}, {"masses", p.masses}, {"g", p.g}, {"h", p.h}, {"include_h", p.include_h}};
}

inline LatticeParams params_from_json(const nlohmann::json& j, LatticeParams p = {}) {
  p.L = j.value("L", p.L);
  p.nf = j.value("N_f", p.nf);
  p.masses = j.value("masses", p.masses);
  p.g = j.value("g", p.g);
  p.h = j.value("h", p.h);
  p.include_h = j.value("include_h", p.include_h);
  return p;
}

inline nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j{{"schema_version", kSchemaVersion},
                   {"command", c.command},
                   {"params", to_json(c.params)},
                   {"t", c.t},
                   {"steps", c.steps},
                   {"order", c.order},
                   {"state", c.state},
                   {"sector", c.sector ? nlohmann::json(*c.sector) : nlohmann::json(nullptr)},
                   {"out", c.out},
                   {"format", c.format},
                   {"dense_cap", c.dense_cap},
                   {"method", c.method},
                   {"sections", c.sections},
                   {"tolerances", {{"identity", c.tol.identity}, {"hermitian", c.tol.hermitian}, {"eigenvalue", c.tol.eigenvalue}}}};
  return j;
}

/// Fields missing from `j` keep their values in `c`.
inline RunConfig config_from_json(const nlohmann::json& j, RunConfig c = {}) {
  try {
    c.command = j.value("command", c.command);
    if (j.contains("params")) c.params = params_from_json(j.at("params"), c.params);
    c.t = j.value("t", c.t);
    c.steps = j.value("steps", c.steps);
    c.order = j.value("order", c.order);
    c.state = j.value("state", c.state);
    if (j.contains("sector")) {
      const auto& s = j.at("sector");
      if (s.is_null())
        c.sector.reset();
      else if (s.is_string())
        c.sector = parse_rational(s.get<std::string>());
      else
        c.sector = s.get<double>();
    }
    c.out = j.value("out", c.out);
    c.format = j.value("format", c.format);
    c.dense_cap = j.value("dense_cap", c.dense_cap);
    c.method = j.value("method", c.method);
    c.sections = j.value("sections", c.sections);
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      c.tol.identity = t.value("identity", c.tol.identity);
      c.tol.hermitian = t.value("hermitian", c.tol.hermitian);
      c.tol.eigenvalue = t.value("eigenvalue", c.tol.eigenvalue);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidParams, std::string("config: ") + e.what());
  }
  return c;
}

// ---------------------------------------------------------------------------
// Initial states.
//
//   "vac"          every slot in |1> (|Omega>)
//   "1,8b"         one label per slot, 1..8; a trailing "b", "bar" or a
//                  combining macron marks an anti-quark slot
//   "gs" / "gs:B=0" ground state of the Hamiltonian (optionally in a sector)

struct StateSpec {
  enum class Kind { labels, ground } kind = Kind::labels;
  std::vector<int> labels;
  std::optional<double> sector;
};

inline StateSpec parse_state_spec(const std::string& spec, const LatticeParams& p) {
  StateSpec out;
  const SiteIndexing idx(p);
  if (spec == "vac" || spec == "vacuum") {
    out.labels.assign(static_cast<std::size_t>(idx.slots()), 1);
    return out;
  }
  if (spec.rfind("gs", 0) == 0) {
    out.kind = StateSpec::Kind::ground;
    if (spec.size() > 2) {
      if (spec.rfind("gs:B=", 0) != 0) throw Error(ErrorKind::BadStateSpec, "expected gs or gs:B=<rational>");
      try {
        out.sector = parse_rational(spec.substr(5));
      } catch (const Error&) {
        throw Error(ErrorKind::BadStateSpec, "bad sector in '" + spec + "'");
      }
    }
    return out;
  }
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::string s = item;
    s.erase(0, s.find_first_not_of(" \t"));
    s.erase(s.find_last_not_of(" \t") + 1);
    if (s.empty() || s[0] < '1' || s[0] > '8')
      throw Error(ErrorKind::BadStateSpec, "slot label '" + item + "' is not in 1..8");
    const std::string suffix = s.substr(1);
    const bool bar = suffix == "b" || suffix == "bar" || suffix == "\xCC\x84";
    if (!suffix.empty() && !bar) throw Error(ErrorKind::BadStateSpec, "unknown suffix in '" + item + "'");
    const int slot = static_cast<int>(out.labels.size());
    if (slot < idx.slots() && bar && !idx.anti(slot))
      throw Error(ErrorKind::BadStateSpec, "slot " + std::to_string(slot) + " is a quark slot and takes no bar");
    out.labels.push_back(s[0] - '0');
  }
  if (static_cast<int>(out.labels.size()) != idx.slots())
    throw Error(ErrorKind::BadStateSpec, "expected " + std::to_string(idx.slots()) + " slot labels, got " +
                                             std::to_string(out.labels.size()));
  return out;
}

inline std::size_t basis_index(const RegisterShape& shape, const std::vector<int>& labels) {
  std::size_t i = 0;
  for (int l : labels) i = i * static_cast<std::size_t>(shape.d) + static_cast<std::size_t>(index_from_label(l));
  return i;
}

/// Resolves a spec on the qu8it Hamiltonian `H`.
inline StateVector resolve_state(const StateSpec& spec, const LatticeOperator& H, std::size_t dense_cap = 4096) {
  if (spec.kind == StateSpec::Kind::labels) return StateVector::basis(H.dim(), basis_index(H.shape, spec.labels));
  SectorFilter keep;
  if (spec.sector) keep = baryon_filter(*spec.sector);
  const auto sp = block_diagonalize(H.matrix, sector_keys(H), dense_cap, keep);
  std::size_t best_b = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < sp.blocks.size(); ++b)
    if (sp.blocks[b].values.size() > 0 && sp.blocks[b].values(0) < best) {
      best = sp.blocks[b].values(0);
      best_b = b;
    }
  StateVector s;
  s.amp = sp.eigenvector(best_b, 0);
  return s;
}

// ---------------------------------------------------------------------------
// Output.

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidParams, "cannot write " + path);
  f << text;
}

inline std::string trajectory_csv(const Trajectory& tr) {
  std::ostringstream os;
  os << "step,t,norm,fidelity";
  for (const auto& c : tr.columns) os << ',' << c;
  os << '\n';
  for (const auto& r : tr.rows) {
    os << r.step << ',' << fmt17(r.t) << ',' << fmt17(r.norm) << ',' << fmt17(r.fidelity);
    for (double v : r.values) os << ',' << fmt17(v);
    os << '\n';
  }
  return os.str();
}

inline nlohmann::json trajectory_json(const Trajectory& tr) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : tr.rows) {
    nlohmann::json row{{"step", r.step}, {"t", r.t}, {"norm", r.norm}};
    row["fidelity"] = std::isnan(r.fidelity) ? nlohmann::json(nullptr) : nlohmann::json(r.fidelity);
    for (std::size_t k = 0; k < tr.columns.size(); ++k) row[tr.columns[k]] = r.values[k];
    rows.push_back(row);
  }
  return {{"schema_version", kSchemaVersion}, {"columns", tr.columns}, {"rows", rows}};
}

inline nlohmann::json plan_json(const TrotterPlan& plan) {
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : plan.groups)
    groups.push_back({{"id", g.id},
                      {"block", to_string(g.tag)},
                      {"diagonal", g.diagonal},
                      {"slots", g.slots},
                      {"string", g.string},
                      {"commutator_residual", g.commutator_residual}});
  nlohmann::json seq = nlohmann::json::array();
  for (const auto& [g, f] : plan.sequence) seq.push_back({g, f});
  return {{"order", plan.order}, {"groups", groups}, {"sequence", seq}};
}

/// JSON manifest of an assembled operator (params, blocks, offsets).
inline nlohmann::json operator_manifest(const LatticeOperator& op) {
  nlohmann::json blocks = nlohmann::json::array();
  for (std::size_t k = 0; k < op.registry.blocks.size(); ++k)
    blocks.push_back({{"tag", to_string(op.registry.blocks[k].tag)},
                      {"terms", op.registry.blocks[k].terms.size()},
                      {"nnz", op.block_matrices[k].nonZeros()},
                      {"identity_component", op.offsets[k].identity_component}});
  return {{"schema_version", kSchemaVersion},
          {"mapping", to_string(op.registry.mapping)},
          {"params", to_json(op.registry.params)},
          {"dim", op.dim()},
          {"local_dim", op.registry.local_dim},
          {"slots", op.registry.slots},
          {"nnz", op.matrix.nonZeros()},
          {"mapping_offset", mapping_offset(op.registry.params)},
          {"blocks", blocks}};
}

/// One "row col re im" line per stored entry, rows in ascending order.
inline std::string triplet_text(const SparseOp& m) {
  std::ostringstream os;
  os << "# rows " << m.rows() << " cols " << m.cols() << " nnz " << m.nonZeros() << '\n';
  for (Eigen::Index r = 0; r < m.outerSize(); ++r)
    for (SparseOp::InnerIterator it(m, r); it; ++it)
      os << it.row() << ' ' << it.col() << ' ' << fmt17(it.value().real()) << ' ' << fmt17(it.value().imag()) << '\n';
  return os.str();
}

}  // namespace qu8it
