#pragma once

#include "vem/polymesh.hpp"

#include <cstdint>

namespace vem {

enum class TriStyle { Structured, Delaunay };

/// n x n uniform squares on (0,1)^2.
PolyMesh make_quad_mesh(int n);

/// Conforming triangulation of (0,1)^2. Structured: each square split in
/// two. Delaunay: Delaunay triangulation of a perturbed lattice sized so
/// the vertex count tracks roughly 1.7x the quad mesh of the same 1/h.
PolyMesh make_tri_mesh(int n, TriStyle style = TriStyle::Structured, std::uint64_t seed = 0);

/// Clipped centroidal Voronoi tessellation of n_cells seeded generators
/// after Lloyd relaxation. Deterministic per seed.
PolyMesh make_cvt_mesh(int n_cells, std::uint64_t seed, int lloyd_iters = 100, double tol = 1e-4);

/// Same as make_cvt_mesh but starting from explicit generator positions.
PolyMesh make_cvt_mesh_from_generators(std::vector<Vec2> generators, int lloyd_iters = 0,
                                       double tol = 1e-4);

}  // namespace vem
