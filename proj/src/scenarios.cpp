#include "vem/scenarios.hpp"

#include "vem/dof_map.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

namespace vem {

namespace {

constexpr double kGeomTol = 1e-12;

// Classify against an axis-aligned rectangle: +1 strictly inside,
// -1 strictly outside, 0 on the boundary.
int classify_rect(const Vec2& p, double x0, double x1, double y0, double y1) {
  if (p.x() > x0 + kGeomTol && p.x() < x1 - kGeomTol && p.y() > y0 + kGeomTol &&
      p.y() < y1 - kGeomTol)
    return 1;
  if (p.x() < x0 - kGeomTol || p.x() > x1 + kGeomTol || p.y() < y0 - kGeomTol ||
      p.y() > y1 + kGeomTol)
    return -1;
  return 0;
}

int classify_union(std::initializer_list<int> classes) {
  bool boundary = false;
  for (int c : classes) {
    if (c > 0) return 1;
    if (c == 0) boundary = true;
  }
  return boundary ? 0 : -1;
}

// Centered plus-sign, arm width 0.2, arm length 0.8.
double cross_truth(const Vec2& p) {
  return classify_union({classify_rect(p, 0.4, 0.6, 0.1, 0.9),
                         classify_rect(p, 0.1, 0.9, 0.4, 0.6)});
}

double stripes_truth(const Vec2& p) {
  return classify_union({classify_rect(p, 0.2, 0.35, -1.0, 2.0),
                         classify_rect(p, 0.65, 0.8, -1.0, 2.0)});
}

double circle_truth(const Vec2& p) {
  const double r = (p - Vec2(0.5, 0.5)).norm();
  if (r < 0.3 - kGeomTol) return 1.0;
  if (r > 0.3 + kGeomTol) return -1.0;
  return 0.0;
}

RegionMask band_mask(double y0, double y1) {
  RegionMask m;
  m.inside = [y0, y1](const Vec2& p) { return p.y() > y0 && p.y() < y1; };
  m.area = y1 - y0;
  m.ylines = {y0, y1};
  return m;
}

RegionMask square_mask(double x0, double x1, double y0, double y1) {
  RegionMask m;
  m.inside = [x0, x1, y0, y1](const Vec2& p) {
    return p.x() > x0 && p.x() < x1 && p.y() > y0 && p.y() < y1;
  };
  m.area = (x1 - x0) * (y1 - y0);
  m.xlines = {x0, x1};
  m.ylines = {y0, y1};
  return m;
}

PolyMesh make_mesh(const MeshSpec& spec) {
  switch (spec.family) {
    case MeshFamily::Quad:
      return make_quad_mesh(spec.n);
    case MeshFamily::TriStructured:
      return make_tri_mesh(spec.n);
    case MeshFamily::TriDelaunay:
      return make_tri_mesh(spec.n, TriStyle::Delaunay, spec.seed);
    case MeshFamily::Cvt:
      return make_cvt_mesh(spec.n, spec.seed, spec.lloyd_iters);
  }
  throw std::logic_error("make_mesh: unknown family");
}

}  // namespace

void ProblemConfig::validate() const {
  if (!(gamma > 0.0 && gamma < 0.5))
    throw std::runtime_error("config: gamma must lie in (0, 0.5)");
  if (variant == ProblemKind::ACH && Pe <= 0.0)
    throw std::runtime_error("config: Pe must be positive");
  if (variant == ProblemKind::CHI && lambda0 <= 0.0)
    throw std::runtime_error("config: lambda0 must be positive");
  if (tau <= 0.0) throw std::runtime_error("config: tau must be positive");
  if (time_scale <= 0.0) throw std::runtime_error("config: time_scale must be positive");
  if (n_steps < 0) throw std::runtime_error("config: n_steps must be >= 0");
  if (k != 2 && k != 3) throw std::runtime_error("config: unsupported order k");
  if (mesh.n < 2) throw std::runtime_error("config: mesh resolution too small");
}

Scenario build_scenario(const ProblemConfig& config) {
  config.validate();
  Scenario sc;
  sc.config = config;
  sc.mesh = make_mesh(config.mesh);

  switch (config.datum) {
    case DatumKind::Cross:
      sc.truth = cross_truth;
      break;
    case DatumKind::SpinodalDisk:
      sc.truth = [](const Vec2&) { return 0.0; };
      break;
    case DatumKind::StripesDamaged:
      sc.truth = stripes_truth;
      sc.damage = band_mask(0.4375, 0.5625);
      break;
    case DatumKind::CrossDamaged:
      sc.truth = cross_truth;
      sc.damage = square_mask(0.375, 0.625, 0.375, 0.625);
      break;
    case DatumKind::CircleDamaged:
      sc.truth = circle_truth;
      sc.damage = band_mask(0.4375, 0.5625);
      break;
  }

  sc.params.kind = config.variant;
  sc.params.tau = config.tau;
  sc.params.time_scale = config.time_scale;
  sc.params.gamma = config.gamma;
  sc.params.Pe = config.Pe;
  sc.params.lambda0 = config.lambda0;
  if (config.variant == ProblemKind::ACH) {
    if (config.convection)
      sc.params.velocity = [](const Vec2& p) { return rotational_field(p); };
  } else {
    if (!sc.damage) throw std::runtime_error("build_scenario: CHI needs a damaged datum");
    sc.mesh = conform_to_lines(sc.mesh, sc.damage->xlines, sc.damage->ylines);
    tag_inpainting_region(sc.mesh, *sc.damage);
    sc.params.f_cell.resize(sc.mesh.n_cells());
    for (int c = 0; c < sc.mesh.n_cells(); ++c)
      sc.params.f_cell[c] = sc.truth(sc.mesh.cells[c].centroid) >= 0.0 ? 1.0 : -1.0;
  }
  return sc;
}

Eigen::VectorXd initial_state(const Scenario& scenario, const GlobalDofMap& map) {
  const PolyMesh& mesh = scenario.mesh;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(map.n_free);
  std::mt19937_64 rng(scenario.config.seed);
  std::uniform_real_distribution<double> noise(-scenario.config.noise_amplitude,
                                               scenario.config.noise_amplitude);
  const bool spinodal = scenario.config.datum == DatumKind::SpinodalDisk;
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    const Vec2& p = mesh.vertices[v];
    double value;
    if (spinodal) {
      const double draw = noise(rng);  // drawn per vertex regardless, for determinism
      value = (p - Vec2(0.5, 0.5)).norm() < 0.35 ? draw : 0.0;
    } else {
      value = scenario.truth(p);
    }
    if (scenario.damage && scenario.damage->inside(p)) value = 0.0;
    x[map.raw_value[v]] = value;
  }
  return x;
}

ProblemConfig scenario_preset(const std::string& name) {
  ProblemConfig cfg;
  cfg.name = name;
  if (name == "test2-cross") {
    cfg.variant = ProblemKind::ACH;
    cfg.datum = DatumKind::Cross;
    cfg.mesh.n = 32;
    cfg.tau = 1e-4;
    cfg.time_scale = 20.0;   // scenario t = 0.5 covers physical T = 10
    cfg.n_steps = 5000;      // horizon t = 0.5
  } else if (name == "test3-spinodal") {
    cfg.variant = ProblemKind::ACH;
    cfg.datum = DatumKind::SpinodalDisk;
    cfg.mesh.n = 32;
    cfg.tau = 2e-5;
    cfg.n_steps = 50;
  } else if (name == "test4-stripes" || name == "test5-cross-inpaint" ||
             name == "test6-circle") {
    cfg.variant = ProblemKind::CHI;
    cfg.datum = name == "test4-stripes"
                    ? DatumKind::StripesDamaged
                    : (name == "test5-cross-inpaint" ? DatumKind::CrossDamaged
                                                     : DatumKind::CircleDamaged);
    cfg.convection = false;
    // The central damage square of test5 spans several spinodal wavelengths;
    // below n = 48 the lattice can select the inverted phase in its interior.
    cfg.mesh.n = name == "test5-cross-inpaint" ? 48 : 32;
    // Same horizon T = 0.02 as the reference runs, but with tau small
    // enough that backward Euler treats the damage band's unstable
    // (spinodal) modes monotonically: tau * sigma_max < 1 with
    // sigma_max = 1/(4 gamma^2) = 2.5e5. At tau = 2e-5 those modes flip
    // sign every step and the recovered phase can lock inverted.
    cfg.tau = 2e-6;
    cfg.n_steps = 10000;
  } else {
    throw std::runtime_error("scenario_preset: unknown preset '" + name + "'");
  }
  return cfg;
}

std::vector<double> binary_projection(const Assembler& asmbl, const Eigen::VectorXd& c) {
  std::vector<double> out(asmbl.mesh().n_cells());
  for (int cell = 0; cell < asmbl.mesh().n_cells(); ++cell) {
    const LocalSpace& S = asmbl.space(cell);
    const double mean =
        S.mono_int.dot(S.P_0 * gather_local(asmbl.dof_map(), cell, c)) / S.area();
    out[cell] = mean > 0.0 ? 0.95 : (mean < 0.0 ? -0.95 : 0.0);
  }
  return out;
}

namespace {

// Area of the {f > 0} part of a triangle with linearly interpolated vertex
// values, by half-plane clipping in value space.
double positive_area(const Vec2 p[3], const double f[3]) {
  std::vector<Vec2> poly;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    if (f[i] > 0.0) poly.push_back(p[i]);
    if ((f[i] > 0.0) != (f[j] > 0.0) && f[i] != f[j]) {
      const double t = f[i] / (f[i] - f[j]);
      poly.push_back(p[i] + t * (p[j] - p[i]));
    }
  }
  double a = 0.0;
  for (size_t i = 0; i < poly.size(); ++i) {
    const Vec2& u = poly[i];
    const Vec2& v = poly[(i + 1) % poly.size()];
    a += 0.5 * (u.x() * v.y() - v.x() * u.y());
  }
  return a;
}

}  // namespace

ShapeMetrics shape_metrics(const Assembler& asmbl, const Eigen::VectorXd& c) {
  const PolyMesh& mesh = asmbl.mesh();
  const GlobalDofMap& map = asmbl.dof_map();
  ShapeMetrics m;
  for (int cell = 0; cell < mesh.n_cells(); ++cell) {
    const Cell& C = mesh.cells[cell];
    const LocalSpace& S = asmbl.space(cell);
    const Eigen::VectorXd coef = S.P_0 * gather_local(map, cell, c);
    const double fc = coef[0];  // Pi0 c at the centroid (monomials vanish there)
    for (int i = 0; i < C.n_edges(); ++i) {
      const int va = C.vertices[i];
      const int vb = C.vertices[(i + 1) % C.n_edges()];
      const Vec2 p[3] = {C.centroid, mesh.vertices[va], mesh.vertices[vb]};
      const double f[3] = {fc, c[map.raw_value[va]], c[map.raw_value[vb]]};
      m.area += positive_area(p, f);
      // Zero-level segment inside this sub-triangle.
      std::vector<Vec2> cuts;
      for (int a = 0; a < 3; ++a) {
        const int b = (a + 1) % 3;
        if ((f[a] > 0.0) != (f[b] > 0.0) && f[a] != f[b])
          cuts.push_back(p[a] + (f[a] / (f[a] - f[b])) * (p[b] - p[a]));
      }
      if (cuts.size() == 2) m.perimeter += (cuts[0] - cuts[1]).norm();
    }
  }
  m.empty = m.perimeter == 0.0;
  if (!m.empty && m.area > 0.0)
    m.isoperimetric_ratio = m.perimeter * m.perimeter / (4.0 * M_PI * m.area);
  return m;
}

PgmImage read_pgm(const std::string& path, double threshold) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_pgm: cannot open " + path);
  auto next_token = [&in]() {
    std::string tok;
    while (in >> tok) {
      if (tok[0] == '#') {
        std::string rest;
        std::getline(in, rest);
        continue;
      }
      return tok;
    }
    throw std::runtime_error("read_pgm: truncated header");
  };
  const std::string magic = next_token();
  if (magic != "P2" && magic != "P5") throw std::runtime_error("read_pgm: not a P2/P5 file");
  PgmImage img;
  img.width = std::stoi(next_token());
  img.height = std::stoi(next_token());
  const int maxval = std::stoi(next_token());
  if (img.width <= 0 || img.height <= 0 || maxval <= 0 || maxval > 255)
    throw std::runtime_error("read_pgm: unsupported dimensions or maxval");
  const size_t n = static_cast<size_t>(img.width) * img.height;
  img.values.resize(n);
  if (magic == "P2") {
    for (size_t i = 0; i < n; ++i) {
      int v;
      if (!(in >> v)) throw std::runtime_error("read_pgm: truncated pixel data");
      img.values[i] = static_cast<double>(v) / maxval > threshold ? 1.0 : -1.0;
    }
  } else {
    in.get();  // single whitespace after maxval
    std::vector<unsigned char> buf(n);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(n));
    if (static_cast<size_t>(in.gcount()) != n)
      throw std::runtime_error("read_pgm: truncated pixel data");
    for (size_t i = 0; i < n; ++i)
      img.values[i] = static_cast<double>(buf[i]) / maxval > threshold ? 1.0 : -1.0;
  }
  return img;
}

std::vector<double> image_to_cells(const PgmImage& img, const PolyMesh& mesh) {
  std::vector<double> out(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const Vec2& p = mesh.cells[c].centroid;
    const int col = std::min(img.width - 1, std::max(0, static_cast<int>(p.x() * img.width)));
    const int row =
        std::min(img.height - 1, std::max(0, static_cast<int>((1.0 - p.y()) * img.height)));
    out[c] = img.values[static_cast<size_t>(row) * img.width + col];
  }
  return out;
}

}  // namespace vem
