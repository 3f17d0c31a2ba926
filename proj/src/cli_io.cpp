#include "vem/cli_io.hpp"

#include "vem/dof_map.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vem {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  size_t pos = 0;
  double x;
  try {
    x = std::stod(v, &pos);
  } catch (...) {
    throw std::runtime_error(key + ": expected a number, got '" + v + "'");
  }
  if (pos != v.size()) throw std::runtime_error(key + ": expected a number, got '" + v + "'");
  return x;
}

int parse_int(const std::string& key, const std::string& v) {
  size_t pos = 0;
  int x;
  try {
    x = std::stoi(v, &pos);
  } catch (...) {
    throw std::runtime_error(key + ": expected an integer, got '" + v + "'");
  }
  if (pos != v.size()) throw std::runtime_error(key + ": expected an integer, got '" + v + "'");
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::runtime_error(key + ": expected a boolean, got '" + v + "'");
}

DatumKind parse_datum(const std::string& v) {
  if (v == "cross") return DatumKind::Cross;
  if (v == "spinodal-disk") return DatumKind::SpinodalDisk;
  if (v == "stripes-damaged") return DatumKind::StripesDamaged;
  if (v == "cross-damaged") return DatumKind::CrossDamaged;
  if (v == "circle-damaged") return DatumKind::CircleDamaged;
  throw std::runtime_error("datum: unknown kind '" + v + "'");
}

const char* kSchema =
    "scenario (-): preset name test2-cross|test3-spinodal|test4-stripes|"
    "test5-cross-inpaint|test6-circle; applied first, later keys override\n"
    "variant (ach): problem variant ach|chi\n"
    "gamma (0.01): interface parameter, in (0, 0.5)\n"
    "pe (100): Peclet number (ACH)\n"
    "lambda0 (50000): fidelity strength (CHI)\n"
    "tau (2e-5): time step size\n"
    "time_scale (1): time compression: spatial terms are multiplied by this "
    "factor, so one unit of scenario time covers time_scale physical units\n"
    "n_steps (50): number of backward-Euler steps\n"
    "k (2): VEM order, 2 or 3\n"
    "mesh (quad): mesh family quad|tri|tri-delaunay|cvt\n"
    "n (32): mesh resolution (1/h for quad/tri, cell count for cvt)\n"
    "mesh_seed (0): seed for tri-delaunay/cvt generation\n"
    "lloyd_iters (100): Lloyd iterations for cvt\n"
    "datum (cross): initial datum cross|spinodal-disk|stripes-damaged|"
    "cross-damaged|circle-damaged\n"
    "noise_amplitude (0.05): spinodal noise amplitude\n"
    "seed (0): RNG seed for the spinodal datum\n"
    "convection (true): use the rotational field (ACH)\n"
    "out (out): output directory\n"
    "snapshot_every (100): VTK cadence in steps, 0 disables\n"
    "solver (direct): linear solver direct|gmres\n"
    "newton_tol (1e-6): Newton relative-residual tolerance\n"
    "newton_max_iters (25): Newton iteration cap\n"
    "line_search (false): enable Newton backtracking\n"
    "linear_tol (1e-8): GMRES relative tolerance\n"
    "repro (false): reproducibility mode\n";

}  // namespace

std::string config_schema() { return kSchema; }

void RunConfig::set(const std::string& key, const std::string& value) {
  ProblemConfig& p = problem;
  if (key == "scenario") {
    p = scenario_preset(value);
  } else if (key == "variant") {
    if (value == "ach") p.variant = ProblemKind::ACH;
    else if (value == "chi") p.variant = ProblemKind::CHI;
    else throw std::runtime_error("variant: expected ach|chi, got '" + value + "'");
  } else if (key == "gamma") {
    p.gamma = parse_double(key, value);
  } else if (key == "pe") {
    p.Pe = parse_double(key, value);
  } else if (key == "lambda0") {
    p.lambda0 = parse_double(key, value);
  } else if (key == "tau") {
    p.tau = parse_double(key, value);
  } else if (key == "time_scale") {
    p.time_scale = parse_double(key, value);
  } else if (key == "n_steps") {
    p.n_steps = parse_int(key, value);
  } else if (key == "k") {
    p.k = parse_int(key, value);
  } else if (key == "mesh") {
    if (value == "quad") p.mesh.family = MeshFamily::Quad;
    else if (value == "tri") p.mesh.family = MeshFamily::TriStructured;
    else if (value == "tri-delaunay") p.mesh.family = MeshFamily::TriDelaunay;
    else if (value == "cvt") p.mesh.family = MeshFamily::Cvt;
    else throw std::runtime_error("mesh: unknown family '" + value + "'");
  } else if (key == "n") {
    p.mesh.n = parse_int(key, value);
  } else if (key == "mesh_seed") {
    p.mesh.seed = static_cast<unsigned>(parse_int(key, value));
  } else if (key == "lloyd_iters") {
    p.mesh.lloyd_iters = parse_int(key, value);
  } else if (key == "datum") {
    p.datum = parse_datum(value);
  } else if (key == "noise_amplitude") {
    p.noise_amplitude = parse_double(key, value);
  } else if (key == "seed") {
    p.seed = static_cast<unsigned>(parse_int(key, value));
  } else if (key == "convection") {
    p.convection = parse_bool(key, value);
  } else if (key == "out") {
    out_dir = value;
  } else if (key == "snapshot_every") {
    snapshot_every = parse_int(key, value);
  } else if (key == "solver") {
    if (value == "direct") solver = LinearMethod::Direct;
    else if (value == "gmres") solver = LinearMethod::Gmres;
    else throw std::runtime_error("solver: expected direct|gmres, got '" + value + "'");
  } else if (key == "newton_tol") {
    newton.tol_rel = parse_double(key, value);
  } else if (key == "newton_max_iters") {
    newton.max_iters = parse_int(key, value);
  } else if (key == "line_search") {
    newton.line_search = parse_bool(key, value);
  } else if (key == "linear_tol") {
    newton.linear.tol = parse_double(key, value);
  } else if (key == "repro") {
    reproducible = parse_bool(key, value);
  } else {
    throw std::runtime_error("unknown key '" + key + "'");
  }
}

RunConfig parse_config_stream(std::istream& in, const std::string& label) {
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(label + ":" + std::to_string(lineno) +
                               ": expected 'key = value'");
    try {
      cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const std::exception& e) {
      throw std::runtime_error(label + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("parse_config: cannot open " + path);
  return parse_config_stream(in, path);
}

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

void write_vtk_snapshot(const Assembler& asmbl, const Eigen::VectorXd& c,
                        const std::string& path) {
  const PolyMesh& mesh = asmbl.mesh();
  const GlobalDofMap& map = asmbl.dof_map();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_vtk_snapshot: cannot open " + path);

  out << "# vtk DataFile Version 3.0\n";
  out << "phase field snapshot\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.n_vertices() << " double\n";
  for (const Vec2& p : mesh.vertices) out << fmt(p.x()) << " " << fmt(p.y()) << " 0\n";

  int list_size = 0;
  for (const Cell& C : mesh.cells) list_size += 1 + C.n_edges();
  out << "CELLS " << mesh.n_cells() << " " << list_size << "\n";
  for (const Cell& C : mesh.cells) {
    out << C.n_edges();
    for (int v : C.vertices) out << " " << v;
    out << "\n";
  }
  out << "CELL_TYPES " << mesh.n_cells() << "\n";
  for (int i = 0; i < mesh.n_cells(); ++i) out << "7\n";  // VTK_POLYGON

  out << "POINT_DATA " << mesh.n_vertices() << "\n";
  out << "SCALARS c double 1\nLOOKUP_TABLE default\n";
  for (int v = 0; v < mesh.n_vertices(); ++v) out << fmt(c[map.raw_value[v]]) << "\n";

  std::vector<double> binary = binary_projection(asmbl, c);
  out << "CELL_DATA " << mesh.n_cells() << "\n";
  out << "SCALARS c_mean double 1\nLOOKUP_TABLE default\n";
  for (int cell = 0; cell < mesh.n_cells(); ++cell) {
    const LocalSpace& S = asmbl.space(cell);
    const double mean = S.mono_int.dot(S.P_0 * gather_local(map, cell, c)) / S.area();
    out << fmt(mean) << "\n";
  }
  out << "SCALARS c_binary double 1\nLOOKUP_TABLE default\n";
  for (double b : binary) out << fmt(b) << "\n";
  if (!out) throw std::runtime_error("write_vtk_snapshot: write failed for " + path);
}

int run_simulation(const RunConfig& config, std::ostream& log, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  namespace fs = std::filesystem;
  try {
    fs::create_directories(config.out_dir);
    Scenario sc = build_scenario(config.problem);
    log << "scenario " << config.problem.name << ": " << sc.mesh.n_cells() << " cells, "
        << sc.mesh.n_vertices() << " vertices\n";

    const std::string mesh_path = config.out_dir + "/mesh.polymesh";
    write_polymesh(sc.mesh, mesh_path);

    Assembler asmbl(sc.mesh, config.problem.k, sc.params);
    log << "free DoFs: " << asmbl.n_free() << "\n";
    Eigen::VectorXd c0 = initial_state(sc, asmbl.dof_map());

    NewtonOptions newton = config.newton;
    newton.linear.method = config.solver;

    std::vector<std::string> snapshots;
    StepCallback callback;
    if (config.snapshot_every > 0) {
      callback = [&](int step, double, const Eigen::VectorXd& state) {
        if (step % config.snapshot_every != 0 && step != config.problem.n_steps) return;
        char name[32];
        std::snprintf(name, sizeof(name), "snapshot_%06d.vtk", step);
        const std::string path = config.out_dir + "/" + std::string(name);
        write_vtk_snapshot(asmbl, state, path);
        snapshots.push_back(path);
      };
    }

    TimeLoopResult result = run_time_loop(asmbl, c0, config.problem.n_steps, newton, callback);

    const std::string csv_path = config.out_dir + "/diagnostics.csv";
    // The CSV carries the initial diagnostics as step 0 plus one row per step.
    std::vector<StepRecord> records;
    records.push_back({0, 0.0, asmbl.total_mass(c0), asmbl.energy(c0), 0, 0, 0.0});
    records.insert(records.end(), result.records.begin(), result.records.end());
    write_diagnostics_csv(records, csv_path);

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::string summary_path = config.out_dir + "/summary.txt";
    {
      std::ofstream sum(summary_path);
      sum.precision(17);
      sum << "scenario = " << config.problem.name << "\n";
      sum << "variant = " << (config.problem.variant == ProblemKind::ACH ? "ach" : "chi")
          << "\n";
      sum << "cells = " << sc.mesh.n_cells() << "\n";
      sum << "free_dofs = " << asmbl.n_free() << "\n";
      sum << "steps = " << config.problem.n_steps << "\n";
      sum << "final_mass = " << asmbl.total_mass(result.state) << "\n";
      sum << "final_energy = " << asmbl.energy(result.state) << "\n";
      sum << "avg_newton_iterations = " << result.average_newton_iterations() << "\n";
      sum << "reproducible = " << (config.reproducible ? "true" : "false") << "\n";
      sum << "wall_time_s = " << wall << "\n";
      sum << "artifact = " << mesh_path << "\n";
      sum << "artifact = " << csv_path << "\n";
      for (const auto& s : snapshots) sum << "artifact = " << s << "\n";
      sum << "artifact = " << summary_path << "\n";
    }
    log << "done in " << wall << " s; wrote " << summary_path << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace vem
