// qu8it: spectra, time evolution, resource tables and the verification suite
// from the command line.
//
// Exit status: 0 success, 1 verification failure, 2 usage or config error.

#include "qu8it/io.hpp"
#include "qu8it/resources.hpp"
#include "qu8it/verify.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace qu8it;

namespace {

struct Flags {
  std::string config;
  int nf = 1, L = 1, order = 1, steps = 10;
  std::vector<double> mass{1.0};
  double g = 1.0, h = 0.0, t = 1.0;
  bool include_h = false;
  std::string state = "vac", sector, out, format = "csv", method = "auto", mapping = "qu8it";
  std::size_t dense_cap = 4096;
  std::vector<std::string> sections;
  bool export_op = false, compare = false, corrupt = false;
};

std::string default_out() {
  const char* env = std::getenv("QU8IT_OUT_DIR");
  return env && *env ? env : ".";
}

RunConfig make_config(const std::string& command, const Flags& f, const CLI::App& sub) {
  RunConfig c;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw Error(ErrorKind::InvalidParams, "cannot read config " + f.config);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::InvalidParams, std::string("config: ") + e.what());
    }
    c = config_from_json(j);
  } else {
    c.out = default_out();
  }
  c.command = command;
  auto set = [&](const char* name) { return sub.get_option_no_throw(name) && sub.get_option(name)->count() > 0; };
  if (set("--nf")) c.params.nf = f.nf;
  if (set("--L")) c.params.L = f.L;
  if (set("--mass")) c.params.masses = f.mass;
  if (set("--g")) c.params.g = f.g;
  if (set("--h")) c.params.h = f.h;
  if (set("--include-h")) c.params.include_h = f.include_h;
  if (set("--order")) c.order = f.order;
  if (set("--steps")) c.steps = f.steps;
  if (set("--t")) c.t = f.t;
  if (set("--state")) c.state = f.state;
  if (set("--sector")) c.sector = parse_rational(f.sector);
  if (set("--out")) c.out = f.out;
  if (set("--format")) c.format = f.format;
  if (set("--dense-cap")) c.dense_cap = f.dense_cap;
  if (set("--method")) c.method = f.method;
  if (set("--section")) c.sections = f.sections;
  c.params.validate();
  return c;
}

fs::path prepare_out(const RunConfig& c) {
  fs::path dir(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::InvalidParams, "cannot create output directory " + c.out);
  return dir;
}

std::string key_csv(const SectorKey& k) {
  return fmt17(k[0] / 3.0) + ',' + fmt17(k[1] / 2.0) + ',' + fmt17(k[2] / (2.0 * std::sqrt(3.0)));
}

int cmd_spectrum(const RunConfig& c, const Flags& f) {
  const Mapping mapping = f.mapping == "qubit" ? Mapping::qubit : Mapping::qu8it;
  const LatticeOperator H = mapping == Mapping::qu8it ? build_qu8it_hamiltonian(c.params) : build_qubit_hamiltonian(c.params);
  const auto keys = sector_keys(H);
  SectorFilter keep;
  if (c.sector) keep = baryon_filter(*c.sector);
  const auto spec = block_diagonalize(H.matrix, keys, c.dense_cap, keep);
  const auto cc = conserved_charges(H);
  const auto levels = levels_with_casimir(spec, cc.casimir_total);
  const auto dir = prepare_out(c);

  nlohmann::json manifest{{"schema_version", kSchemaVersion},
                          {"config", to_json(c)},
                          {"mapping", to_string(mapping)},
                          {"operator", operator_manifest(H)},
                          {"levels", levels.size()},
                          {"off_block_residual", spec.off_block_residual}};
  if (f.compare) {
    const LatticeOperator other = mapping == Mapping::qu8it ? build_qubit_hamiltonian(c.params) : build_qu8it_hamiltonian(c.params);
    const auto s2 = block_diagonalize(other.matrix, sector_keys(other), c.dense_cap, keep);
    const auto a = spec.sorted_values(), b = s2.sorted_values();
    double worst = a.size() == b.size() ? 0.0 : std::numeric_limits<double>::infinity();
    const double shift = mapping == Mapping::qu8it ? mapping_offset(c.params) : -mapping_offset(c.params);
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) worst = std::max(worst, std::abs(a[i] - (b[i] - shift)));
    manifest["dual_mapping_max_difference"] = worst;
    std::cout << "dual-mapping max eigenvalue difference " << fmt17(worst) << '\n';
  }

  if (c.format == "json") {
    nlohmann::json lv = nlohmann::json::array();
    for (const auto& l : levels)
      lv.push_back({{"energy", l.energy}, {"B", l.key[0] / 3.0}, {"Q3", l.key[1] / 2.0},
                    {"Q8", l.key[2] / (2.0 * std::sqrt(3.0))}, {"casimir", l.casimir}});
    manifest["spectrum"] = lv;
    write_text((dir / "spectrum.json").string(), manifest.dump(2) + '\n');
  } else {
    std::ostringstream os;
    os << "index,energy,B,Q3,Q8,casimir\n";
    for (std::size_t i = 0; i < levels.size(); ++i)
      os << i << ',' << fmt17(levels[i].energy) << ',' << key_csv(levels[i].key) << ',' << fmt17(levels[i].casimir) << '\n';
    write_text((dir / "spectrum.csv").string(), os.str());
    write_text((dir / "spectrum_manifest.json").string(), manifest.dump(2) + '\n');
  }
  if (f.export_op) {
    write_text((dir / "hamiltonian.json").string(), operator_manifest(H).dump(2) + '\n');
    write_text((dir / "hamiltonian.triplets.txt").string(), triplet_text(H.matrix));
  }
  std::cout << levels.size() << " levels";
  if (!levels.empty()) std::cout << ", lowest " << fmt17(levels.front().energy);
  std::cout << " -> " << dir.string() << '\n';
  return 0;
}

int cmd_evolve(const RunConfig& c) {
  const LatticeOperator H = build_qu8it_hamiltonian(c.params);
  const StateVector psi0 = resolve_state(parse_state_spec(c.state, c.params), H, c.dense_cap);
  const auto obs = default_observables(H);
  ExactOptions eo;
  eo.dense_cap = c.dense_cap;
  if (c.method == "dense") eo.method = ExactMethod::dense;
  else if (c.method == "krylov") eo.method = ExactMethod::krylov;
  else if (c.method != "auto") throw Error(ErrorKind::InvalidParams, "method must be auto, dense or krylov");
  const ExactPropagator exact(H, eo);
  const TrotterPlan plan = build_trotter_plan(H, c.order);
  const Trajectory trot = trotter_evolve(plan, H, psi0, c.t, c.steps, obs, &exact);
  const Trajectory ex = exact_trajectory(exact, psi0, c.t, c.steps, obs);
  const auto dir = prepare_out(c);

  const nlohmann::json manifest{{"schema_version", kSchemaVersion},
                                {"config", to_json(c)},
                                {"plan", plan_json(plan)},
                                {"exact_method", exact.dense() ? "dense" : "krylov"},
                                {"tolerances", {{"norm", 1e-12}, {"commutator", plan.max_commutator_residual()}}}};
  if (c.format == "json") {
    nlohmann::json j = manifest;
    j["trotter"] = trajectory_json(trot);
    j["exact"] = trajectory_json(ex);
    write_text((dir / "evolve.json").string(), j.dump(2) + '\n');
  } else {
    write_text((dir / "trajectory_trotter.csv").string(), trajectory_csv(trot));
    write_text((dir / "trajectory_exact.csv").string(), trajectory_csv(ex));
    write_text((dir / "evolve_manifest.json").string(), manifest.dump(2) + '\n');
  }
  std::cout << "final fidelity " << fmt17(trot.rows.back().fidelity) << ", Casimir "
            << fmt17(trot.rows.back().values[trot.column("casimir")]) << " -> " << dir.string() << '\n';
  return 0;
}

int cmd_resources(const RunConfig& c) {
  const auto qb = closed_form_counts(c.params, Mapping::qubit);
  const auto q8 = closed_form_counts(c.params, Mapping::qu8it);
  const auto en = enumerate_circuit_counts(c.params, c.params.include_h);
  std::cout << resource_table_text(c.params);
  std::cout << "enumerated qu8it plan: U_kin " << en.kinetic_entangling << ", U_el " << en.electric_entangling << ", U_h "
            << en.h_entangling << "; ungrouped " << en.ungrouped_two_qudit << " -> " << en.controlled_gate_count
            << " controlled, " << en.single_rotation_count << " single rotations\n";
  const auto dir = prepare_out(c);
  if (c.format == "json") {
    const nlohmann::json j{{"schema_version", kSchemaVersion},
                           {"config", to_json(c)},
                           {"closed_form", {{"qubit", to_json(qb)}, {"qu8it", to_json(q8)}}},
                           {"enumerated", to_json(en)}};
    write_text((dir / "resources.json").string(), j.dump(2) + '\n');
  } else {
    std::ostringstream os;
    os << resource_csv_header() << '\n'
       << resource_csv_row("closed_form", c.params, qb) << '\n'
       << resource_csv_row("closed_form", c.params, q8) << '\n'
       << resource_csv_row("enumerated", c.params, en) << '\n';
    write_text((dir / "resources.csv").string(), os.str());
  }
  return en.kinetic_entangling == q8.kinetic_entangling && en.electric_entangling == q8.electric_entangling ? 0 : 1;
}

int cmd_verify(const RunConfig& c, const Flags& f) {
  VerifyOptions vo;
  for (const auto& s : c.sections) {
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) vo.sections.push_back(item);
  }
  vo.tol = c.tol;
  vo.corrupt_state6 = f.corrupt;
  const auto report = run_verification(vo);
  std::cout << report_text(report);
  const auto dir = prepare_out(c);
  write_text((dir / "verify.json").string(), to_json(report).dump(2) + '\n');
  return report.passed() ? 0 : 1;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file; flags override its fields");
  sub->add_option("--nf", f.nf, "number of flavors");
  sub->add_option("--L", f.L, "number of spatial sites");
  sub->add_option("--mass", f.mass, "quark mass, or one per flavor")->expected(1, -1);
  sub->add_option("--g", f.g, "gauge coupling");
  sub->add_option("--h", f.h, "color-neutrality penalty coupling");
  sub->add_flag("--include-h", f.include_h, "add the h penalty term");
  sub->add_option("--out", f.out, "output directory (default: $QU8IT_OUT_DIR or .)");
  sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--dense-cap", f.dense_cap, "largest dimension for dense diagonalization");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qu8it: SU(3) lattice gauge theory on qu8its"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  Flags f;

  auto* spectrum = app.add_subcommand("spectrum", "exact eigenvalues with Casimir expectations");
  add_common(spectrum, f);
  spectrum->add_option("--sector", f.sector, "restrict to baryon number B (e.g. 0, 1/3, 1)");
  spectrum->add_option("--mapping", f.mapping, "qu8it or qubit")->check(CLI::IsMember({"qu8it", "qubit"}));
  spectrum->add_flag("--compare", f.compare, "also diagonalize the other encoding and report the difference");
  spectrum->add_flag("--export", f.export_op, "write the Hamiltonian as a JSON manifest plus triplets");

  auto* evolve = app.add_subcommand("evolve", "Trotterized and exact time evolution");
  add_common(evolve, f);
  evolve->add_option("--t", f.t, "final time");
  evolve->add_option("--steps", f.steps, "Trotter steps")->check(CLI::PositiveNumber);
  evolve->add_option("--order", f.order, "Trotter order, 1 or 2")->check(CLI::IsMember({1, 2}));
  evolve->add_option("--state", f.state, "initial state: vac, per-slot labels like 1,8b, gs or gs:B=0");
  evolve->add_option("--method", f.method, "exact propagation: auto, dense or krylov")
      ->check(CLI::IsMember({"auto", "dense", "krylov"}));

  auto* resources = app.add_subcommand("resources", "entangling-gate counts");
  add_common(resources, f);

  auto* verify = app.add_subcommand("verify", "run the identity and oracle suite");
  add_common(verify, f);
  verify->add_option("--section", f.sections, "sections to run (repeatable or comma separated)");
  verify->add_flag("--corrupt-state6", f.corrupt, "negative control: flip the sign of |6> in c_r");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*spectrum) return cmd_spectrum(make_config("spectrum", f, *spectrum), f);
    if (*evolve) return cmd_evolve(make_config("evolve", f, *evolve));
    if (*resources) return cmd_resources(make_config("resources", f, *resources));
    if (*verify) return cmd_verify(make_config("verify", f, *verify), f);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (e.kind() == ErrorKind::DimensionCapExceeded) {
      if (std::string(e.what()).find("assembly cap") != std::string::npos)
        std::cerr << "hint: the full register is too large to assemble; reduce L or N_f\n";
      else
        std::cerr << "hint: pass --sector B or raise --dense-cap; evolve also takes --method krylov\n";
    }
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
