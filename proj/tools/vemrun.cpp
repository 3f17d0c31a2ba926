#include "vem/cli_io.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Polygonal C1 VEM solver for advective Cahn-Hilliard and "
               "Cahn-Hilliard inpainting"};
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "Run a scenario");
  std::string config_path, scenario, mesh_family, solver, out_dir;
  int n = -1, k = -1, n_steps = -1, seed = -1, snapshot_every = -1;
  double tau = -1.0;
  bool repro = false;
  std::vector<std::string> sets;
  run->add_option("--config", config_path, "key = value config file");
  run->add_option("--scenario", scenario,
                  "preset: test2-cross|test3-spinodal|test4-stripes|"
                  "test5-cross-inpaint|test6-circle");
  run->add_option("--mesh", mesh_family, "mesh family quad|tri|tri-delaunay|cvt");
  run->add_option("--n", n, "mesh resolution");
  run->add_option("--k", k, "VEM order (2 or 3)");
  run->add_option("--tau", tau, "time step size");
  run->add_option("--n-steps", n_steps, "number of time steps");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--seed", seed, "RNG seed for the initial datum");
  run->add_option("--snapshot-every", snapshot_every, "VTK cadence (0 disables)");
  run->add_option("--solver", solver, "linear solver direct|gmres");
  run->add_flag("--repro", repro, "reproducibility mode");
  run->add_option("--set", sets, "extra key=value overrides (repeatable)")
      ->take_all();
  run->footer("Config keys (file and --set):\n" + vem::config_schema());

  CLI11_PARSE(app, argc, argv);

  try {
    vem::RunConfig cfg;
    if (!config_path.empty()) cfg = vem::parse_config(config_path);
    // CLI flags override file values, in schema terms.
    if (!scenario.empty()) cfg.set("scenario", scenario);
    if (!mesh_family.empty()) cfg.set("mesh", mesh_family);
    if (n >= 0) cfg.set("n", std::to_string(n));
    if (k >= 0) cfg.set("k", std::to_string(k));
    if (tau >= 0.0) cfg.set("tau", std::to_string(tau));
    if (n_steps >= 0) cfg.set("n_steps", std::to_string(n_steps));
    if (!out_dir.empty()) cfg.set("out", out_dir);
    if (seed >= 0) cfg.set("seed", std::to_string(seed));
    if (snapshot_every >= 0) cfg.set("snapshot_every", std::to_string(snapshot_every));
    if (!solver.empty()) cfg.set("solver", solver);
    if (repro) cfg.set("repro", "true");
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw std::runtime_error("--set expects key=value");
      cfg.set(s.substr(0, eq), s.substr(eq + 1));
    }
    return vem::run_simulation(cfg, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
