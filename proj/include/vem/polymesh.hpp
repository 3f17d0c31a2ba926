#pragma once

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace vem {

using Vec2 = Eigen::Vector2d;

enum class RegionTag { Untagged, InsideD, OutsideD };

/// Oriented mesh edge. The stored orientation is global (from the lower
/// vertex index to the higher one); elements traverse it in either
/// direction and carry the sign.
struct Edge {
  int a = -1;            // first vertex, a < b
  int b = -1;            // second vertex
  Vec2 tangent;          // unit, points from a to b
  Vec2 normal;           // unit, tangent rotated by -90 deg: (t_y, -t_x)
  double length = 0.0;   // h_e
  int cell_left = -1;    // cell traversing a->b (outward normal == normal)
  int cell_right = -1;   // cell traversing b->a, or -1 on the boundary
  bool on_boundary() const { return cell_left < 0 || cell_right < 0; }
};

struct Cell {
  std::vector<int> vertices;  // CCW loop
  std::vector<int> edges;     // edges[i] joins vertices[i], vertices[i+1]
  std::vector<int> edge_dir;  // +1 if traversed a->b, else -1
  double area = 0.0;          // |E|
  Vec2 centroid;              // x_E
  double diameter = 0.0;      // h_E
  RegionTag tag = RegionTag::Untagged;

  int n_edges() const { return static_cast<int>(vertices.size()); }
  // Outward unit normal of local edge i.
  Vec2 outward_normal(const std::vector<Edge>& mesh_edges, int i) const {
    return edge_dir[i] * mesh_edges[edges[i]].normal;
  }
};

/// Polygonal mesh of the unit square. Immutable after construction.
struct PolyMesh {
  std::vector<Vec2> vertices;
  std::vector<Edge> edges;
  std::vector<Cell> cells;
  std::vector<double> vertex_patch_size;  // h_xi, mean diameter of incident cells
  std::vector<bool> vertex_on_boundary;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }
  double total_area() const;
};

/// Builds edges, cell geometry, boundary flags and h_xi from vertex
/// coordinates plus CCW cell loops, and checks the mesh invariants
/// (simple star-shaped cells, consistent incidence, unit total area).
PolyMesh build_mesh(std::vector<Vec2> vertices,
                    std::vector<std::vector<int>> cell_loops,
                    std::vector<RegionTag> tags = {});

struct MeshQualityReport {
  double min_edge_ratio = 1.0;    // min over cells of min edge length / h_E
  double min_inball_ratio = 1.0;  // min over cells of inradius-from-centroid / h_E
  std::vector<int> violating_cells;
  bool all_star_shaped = true;
};

MeshQualityReport validate_A1(const PolyMesh& mesh, double rho_min);

/// Cell-wise region description used for inpainting tagging. `inside`
/// decides membership, `area` is |D|, and xlines/ylines list the
/// axis-aligned lines making up the region boundary (used to make
/// arbitrary meshes conform to the region).
struct RegionMask {
  std::function<bool(const Vec2&)> inside;
  double area = 0.0;
  std::vector<double> xlines;
  std::vector<double> ylines;
};

/// Tags every cell INSIDE_D / OUTSIDE_D. Throws if a cell straddles the
/// region boundary or the tagged area does not match |D|.
void tag_inpainting_region(PolyMesh& mesh, const RegionMask& mask);

/// Splits every cell along the given axis-aligned lines so that the mesh
/// conforms to a rectangle-bounded region. Returns a new mesh.
PolyMesh conform_to_lines(const PolyMesh& mesh, const std::vector<double>& xlines,
                          const std::vector<double>& ylines);

void write_polymesh(const PolyMesh& mesh, std::ostream& out);
void write_polymesh(const PolyMesh& mesh, const std::string& path);
PolyMesh read_polymesh(std::istream& in);
PolyMesh read_polymesh(const std::string& path);

}  // namespace vem
