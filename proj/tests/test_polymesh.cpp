#include "doctest.h"

#include "vem/mesh_generators.hpp"
#include "vem/polymesh.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

using namespace vem;

TEST_CASE("quad mesh counts and area") {
  auto m = make_quad_mesh(2);
  CHECK(m.n_cells() == 4);
  CHECK(m.n_vertices() == 9);
  CHECK(m.n_edges() == 12);

  auto m8 = make_quad_mesh(8);
  CHECK(m8.total_area() == doctest::Approx(1.0).epsilon(1e-14));

  auto m128 = make_quad_mesh(128);
  CHECK(m128.n_cells() == 16384);
  CHECK(m128.n_vertices() == 16641);
}

TEST_CASE("quad mesh rejects n < 2") {
  CHECK_THROWS(make_quad_mesh(1));
}

TEST_CASE("euler relation holds for all generators") {
  for (const PolyMesh& m : {make_quad_mesh(5), make_tri_mesh(4), make_tri_mesh(6, TriStyle::Delaunay, 3),
                            make_cvt_mesh(40, 11, 20)}) {
    CHECK(m.n_vertices() - m.n_edges() + m.n_cells() == 1);
    CHECK(std::abs(m.total_area() - 1.0) < 1e-12);
  }
}

TEST_CASE("structured tri mesh") {
  auto m = make_tri_mesh(2);
  CHECK(m.n_cells() == 8);
  CHECK(m.n_vertices() == 9);
  for (const auto& c : m.cells) CHECK(c.n_edges() == 3);
}

TEST_CASE("delaunay tri mesh tracks the reference density") {
  auto m = make_tri_mesh(32, TriStyle::Delaunay, 0);
  // Reference counts scale like 28723 vertices / 56932 cells at n = 128.
  const double vref = 28723.0 * (32.0 * 32.0) / (128.0 * 128.0);
  const double cref = 56932.0 * (32.0 * 32.0) / (128.0 * 128.0);
  CHECK(m.n_vertices() > 0.85 * vref);
  CHECK(m.n_vertices() < 1.15 * vref);
  CHECK(m.n_cells() > 0.85 * cref);
  CHECK(m.n_cells() < 1.15 * cref);
  for (const auto& c : m.cells) CHECK(c.n_edges() == 3);
}

TEST_CASE("cvt mesh basic properties") {
  auto m = make_cvt_mesh(100, 7, 100);
  CHECK(m.n_cells() == 100);
  auto rep = validate_A1(m, 0.05);
  CHECK(rep.min_edge_ratio > 0.05);
  CHECK(rep.min_inball_ratio > 0.05);
}

TEST_CASE("cvt from quadrant generators gives congruent squares") {
  std::vector<Vec2> gens = {{0.25, 0.25}, {0.75, 0.25}, {0.25, 0.75}, {0.75, 0.75}};
  auto m = make_cvt_mesh_from_generators(gens, 0);
  CHECK(m.n_cells() == 4);
  for (const auto& c : m.cells) {
    CHECK(c.area == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(c.n_edges() == 4);
  }
}

TEST_CASE("mesh determinism per seed") {
  std::ostringstream a, b;
  write_polymesh(make_cvt_mesh(50, 3, 10), a);
  write_polymesh(make_cvt_mesh(50, 3, 10), b);
  CHECK(a.str() == b.str());
  std::ostringstream c, d;
  write_polymesh(make_tri_mesh(8, TriStyle::Delaunay, 5), c);
  write_polymesh(make_tri_mesh(8, TriStyle::Delaunay, 5), d);
  CHECK(c.str() == d.str());
}

TEST_CASE("A1 report on quad mesh") {
  auto m = make_quad_mesh(4);
  auto rep = validate_A1(m, 0.1);
  CHECK(rep.min_edge_ratio == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(rep.violating_cells.empty());
}

TEST_CASE("region tagging") {
  auto m = make_quad_mesh(64);
  RegionMask whole{[](const Vec2&) { return true; }, 1.0, {}, {}};
  tag_inpainting_region(m, whole);
  for (const auto& c : m.cells) CHECK(c.tag == RegionTag::InsideD);

  RegionMask empty{[](const Vec2&) { return false; }, 0.0, {}, {}};
  tag_inpainting_region(m, empty);
  for (const auto& c : m.cells) CHECK(c.tag == RegionTag::OutsideD);

  // Horizontal band with edges on gridlines: y in [0.4375, 0.5625].
  RegionMask band{[](const Vec2& p) { return p.y() > 0.4375 && p.y() < 0.5625; },
                  0.125, {}, {0.4375, 0.5625}};
  tag_inpainting_region(m, band);
  int tagged = 0;
  for (const auto& c : m.cells)
    if (c.tag == RegionTag::InsideD) ++tagged;
  CHECK(tagged == 64 * 8);
}

TEST_CASE("straddling cell is rejected") {
  auto m = make_quad_mesh(4);
  RegionMask disk{[](const Vec2& p) { return (p - Vec2(0.5, 0.5)).norm() < 0.3; },
                  M_PI * 0.09, {}, {}};
  CHECK_THROWS(tag_inpainting_region(m, disk));
}

TEST_CASE("conform_to_lines makes tagging possible on cvt meshes") {
  auto m = make_cvt_mesh(60, 5, 30);
  auto conf = conform_to_lines(m, {}, {0.4, 0.6});
  CHECK(std::abs(conf.total_area() - 1.0) < 1e-12);
  RegionMask band{[](const Vec2& p) { return p.y() > 0.4 && p.y() < 0.6; }, 0.2, {}, {0.4, 0.6}};
  tag_inpainting_region(conf, band);
  double area = 0;
  for (const auto& c : conf.cells)
    if (c.tag == RegionTag::InsideD) area += c.area;
  CHECK(area == doctest::Approx(0.2).epsilon(1e-10));
}

TEST_CASE("mesh text format round trip") {
  auto m = make_cvt_mesh(30, 9, 10);
  std::ostringstream out;
  write_polymesh(m, out);
  std::istringstream in(out.str());
  auto m2 = read_polymesh(in);
  std::ostringstream out2;
  write_polymesh(m2, out2);
  CHECK(out.str() == out2.str());
}

TEST_CASE("boundary edges lie exactly on the square") {
  auto m = make_cvt_mesh(50, 13, 20);
  for (const auto& e : m.edges)
    if (e.on_boundary()) {
      const Vec2& a = m.vertices[e.a];
      const Vec2& b = m.vertices[e.b];
      const bool vert = a.x() == b.x() && (a.x() == 0.0 || a.x() == 1.0);
      const bool horiz = a.y() == b.y() && (a.y() == 0.0 || a.y() == 1.0);
      CHECK((vert || horiz));
    }
}
