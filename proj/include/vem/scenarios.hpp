#pragma once

#include "vem/assembler.hpp"
#include "vem/mesh_generators.hpp"

#include <optional>
#include <string>

namespace vem {

enum class MeshFamily { Quad, TriStructured, TriDelaunay, Cvt };

struct MeshSpec {
  MeshFamily family = MeshFamily::Quad;
  int n = 32;          // resolution: 1/h for QUAD/TRI, cell count for CVT
  unsigned seed = 0;   // TRI-Delaunay / CVT
  int lloyd_iters = 100;
};

enum class DatumKind { Cross, SpinodalDisk, StripesDamaged, CrossDamaged, CircleDamaged };

/// Full description of a run: variant, physics parameters, mesh, datum,
/// and numerical knobs. Defaults follow the reference setups.
struct ProblemConfig {
  ProblemKind variant = ProblemKind::ACH;
  double gamma = 0.01;
  double Pe = 100.0;       // ACH only
  double lambda0 = 50000.0;  // CHI only
  double tau = 2e-5;
  // Desk-scale time compression: all spatial terms are multiplied by this
  // factor, so one unit of scenario time covers `time_scale` units of the
  // physical dynamics. 1 = physical time.
  double time_scale = 1.0;
  int n_steps = 50;
  int k = 2;
  MeshSpec mesh;
  DatumKind datum = DatumKind::Cross;
  double noise_amplitude = 0.05;  // spinodal disk
  unsigned seed = 0;              // spinodal noise
  bool convection = true;         // ACH: use the rotational field
  int output_every = 10;
  std::string name = "custom";

  void validate() const;  // throws on out-of-range parameters
};

/// A config resolved into a concrete mesh, assembler parameters (with the
/// cell-wise datum and tags for CHI), and the ground-truth field.
struct Scenario {
  ProblemConfig config;
  PolyMesh mesh;
  ProblemParams params;
  // Undamaged piecewise-constant truth (+1/-1, 0 on the jump set); for the
  // spinodal datum this is the unperturbed zero field.
  std::function<double(const Vec2&)> truth;
  std::optional<RegionMask> damage;  // CHI damage region D
};

Scenario build_scenario(const ProblemConfig& config);

/// Free-DoF vector of the initial datum on the scenario's mesh: vertex
/// values sampled pointwise (ties on jump sets resolve to the phase mean),
/// all gradient and edge DoFs zero; inside D the neutral value 0.
Eigen::VectorXd initial_state(const Scenario& scenario, const GlobalDofMap& map);

/// Named presets: test2-cross, test3-spinodal, test4-stripes,
/// test5-cross-inpaint, test6-circle.
ProblemConfig scenario_preset(const std::string& name);

/// Per-cell binary projection of the cell means of Pi0 c: 0.95 where the
/// mean is positive, -0.95 where negative, 0 on exact ties.
std::vector<double> binary_projection(const Assembler& asmbl, const Eigen::VectorXd& c);

/// Zero-level-set metrics of the vertex/centroid-sampled field, contoured
/// on the centroid-fan sub-triangulation.
struct ShapeMetrics {
  bool empty = true;
  double perimeter = 0.0;
  double area = 0.0;   // enclosed (positive-phase) area
  double isoperimetric_ratio = 0.0;  // perimeter^2 / (4 pi area)
};
ShapeMetrics shape_metrics(const Assembler& asmbl, const Eigen::VectorXd& c);

/// PGM (P2 ASCII / P5 binary, maxval <= 255) reader; returns a square
/// pixel field thresholded at mid-gray to {-1, +1}, row 0 at the top.
struct PgmImage {
  int width = 0;
  int height = 0;
  std::vector<double> values;  // thresholded to -1 / +1, row-major from top
};
PgmImage read_pgm(const std::string& path, double threshold = 0.5);

/// Cell-wise datum for a QUAD mesh of resolution n = width = height from a
/// thresholded image (pixel containing the cell centroid).
std::vector<double> image_to_cells(const PgmImage& img, const PolyMesh& mesh);

}  // namespace vem
