#pragma once

#include "vem/scenarios.hpp"
#include "vem/timesolver.hpp"

#include <iosfwd>
#include <string>

namespace vem {

/// Everything a run needs: the problem itself plus output and solver
/// choices. Parsed from a line-based `key = value` file and/or CLI flags.
struct RunConfig {
  ProblemConfig problem;
  std::string out_dir = "out";
  int snapshot_every = 100;  // 0 disables snapshots
  LinearMethod solver = LinearMethod::Direct;
  bool reproducible = false;
  NewtonOptions newton;

  /// Applies one `key = value` assignment; throws on unknown keys or bad
  /// values. All keys double as CLI flag names.
  void set(const std::string& key, const std::string& value);
};

/// Schema listing: one "key (default): description" line per config key.
std::string config_schema();

/// Parses a config file; errors carry the offending line number.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_stream(std::istream& in, const std::string& label);

/// Legacy ASCII VTK snapshot: polygons as VTK_POLYGON, point data = vertex
/// DoF values of c, cell data = cell means of Pi0 c and their binary
/// projection. Deterministic (17 significant digits).
void write_vtk_snapshot(const Assembler& asmbl, const Eigen::VectorXd& c,
                        const std::string& path);

/// Executes the configured scenario end to end; writes mesh.polymesh,
/// diagnostics.csv, snapshot_XXXXXX.vtk series, and summary.txt into
/// out_dir. Returns 0 on success; on failure prints a module-tagged reason
/// to `err` and returns nonzero.
int run_simulation(const RunConfig& config, std::ostream& log, std::ostream& err);

}  // namespace vem
