#include "vem/dof_map.hpp"

#include <stdexcept>

namespace vem {

GlobalDofMap build_global_map(const PolyMesh& mesh, int k) {
  if (k != 2 && k != 3)
    throw std::runtime_error("build_global_map: unsupported order k=" + std::to_string(k));

  const int nv = mesh.n_vertices();
  const int ne = mesh.n_edges();
  GlobalDofMap map;
  map.k = k;
  map.n_raw = 3 * nv + (k == 3 ? ne : 0);
  map.vertex_type.assign(nv, GlobalDofMap::VertexType::Interior);
  map.boundary_tangent.assign(nv, Vec2::Zero());

  // Classify boundary vertices by the tangents of their incident boundary
  // edges: one direction -> regular boundary vertex, two independent
  // directions -> corner (gradient fully constrained there).
  std::vector<std::vector<Vec2>> btan(nv);
  for (const Edge& e : mesh.edges) {
    if (!e.on_boundary()) continue;
    btan[e.a].push_back(e.tangent);
    btan[e.b].push_back(e.tangent);
  }
  for (int v = 0; v < nv; ++v) {
    if (btan[v].empty()) continue;
    if (btan[v].size() != 2)
      throw std::runtime_error("build_global_map: boundary vertex without two boundary edges");
    const double cross = btan[v][0].x() * btan[v][1].y() - btan[v][0].y() * btan[v][1].x();
    if (std::abs(cross) > 1e-8) {
      map.vertex_type[v] = GlobalDofMap::VertexType::Corner;
    } else {
      map.vertex_type[v] = GlobalDofMap::VertexType::Boundary;
      map.boundary_tangent[v] = btan[v][0];
    }
  }

  map.raw_value.assign(nv, -1);
  map.raw_grad_x.assign(nv, -1);
  map.raw_grad_y.assign(nv, -1);
  map.grad_tangent.assign(nv, -1);
  int next = 0;
  for (int v = 0; v < nv; ++v) {
    map.raw_value[v] = next++;
    switch (map.vertex_type[v]) {
      case GlobalDofMap::VertexType::Interior:
        map.raw_grad_x[v] = next++;
        map.raw_grad_y[v] = next++;
        break;
      case GlobalDofMap::VertexType::Boundary:
        map.grad_tangent[v] = next++;
        break;
      case GlobalDofMap::VertexType::Corner:
        break;
    }
  }
  if (k == 3) {
    map.edge_normal.assign(ne, -1);
    for (int e = 0; e < ne; ++e)
      if (!mesh.edges[e].on_boundary()) map.edge_normal[e] = next++;
  }
  map.n_free = next;

  map.cell_scatter.resize(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const DofLayout layout = build_dof_layout(mesh, c, k);
    auto& scatter = map.cell_scatter[c];
    scatter.resize(layout.size());
    for (int i = 0; i < layout.size(); ++i) {
      const DofDescriptor& d = layout.dofs[i];
      const int v = d.entity;
      switch (d.kind) {
        case DofDescriptor::Kind::VertexValue:
          scatter[i].push_back({map.raw_value[v], 1.0});
          break;
        case DofDescriptor::Kind::VertexGradX1:
          if (map.vertex_type[v] == GlobalDofMap::VertexType::Interior)
            scatter[i].push_back({map.raw_grad_x[v], 1.0});
          else if (map.vertex_type[v] == GlobalDofMap::VertexType::Boundary)
            scatter[i].push_back({map.grad_tangent[v], map.boundary_tangent[v].x()});
          break;
        case DofDescriptor::Kind::VertexGradX2:
          if (map.vertex_type[v] == GlobalDofMap::VertexType::Interior)
            scatter[i].push_back({map.raw_grad_y[v], 1.0});
          else if (map.vertex_type[v] == GlobalDofMap::VertexType::Boundary)
            scatter[i].push_back({map.grad_tangent[v], map.boundary_tangent[v].y()});
          break;
        case DofDescriptor::Kind::EdgeNormalDeriv:
          if (map.edge_normal[d.entity] >= 0)
            scatter[i].push_back({map.edge_normal[d.entity], 1.0});
          break;
      }
    }
  }
  return map;
}

Eigen::VectorXd gather_local(const GlobalDofMap& map, int cell, const Eigen::VectorXd& free_vec) {
  const auto& scatter = map.cell_scatter[cell];
  Eigen::VectorXd local = Eigen::VectorXd::Zero(scatter.size());
  for (size_t i = 0; i < scatter.size(); ++i)
    for (const DofScatter& s : scatter[i]) local[i] += s.weight * free_vec[s.free_index];
  return local;
}

Eigen::VectorXd interpolate_free(const PolyMesh& mesh, const GlobalDofMap& map,
                                 const std::function<double(const Vec2&)>& f,
                                 const std::function<Vec2(const Vec2&)>& grad_f) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(map.n_free);
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    const Vec2& p = mesh.vertices[v];
    x[map.raw_value[v]] = f(p);
    const Vec2 g = mesh.vertex_patch_size[v] * grad_f(p);
    if (map.vertex_type[v] == GlobalDofMap::VertexType::Interior) {
      x[map.raw_grad_x[v]] = g.x();
      x[map.raw_grad_y[v]] = g.y();
    } else if (map.vertex_type[v] == GlobalDofMap::VertexType::Boundary) {
      x[map.grad_tangent[v]] = map.boundary_tangent[v].dot(g);
    }
  }
  if (map.k == 3) {
    for (int e = 0; e < mesh.n_edges(); ++e) {
      if (map.edge_normal[e] < 0) continue;
      const Edge& ed = mesh.edges[e];
      const Vec2 mid = 0.5 * (mesh.vertices[ed.a] + mesh.vertices[ed.b]);
      x[map.edge_normal[e]] = ed.length * ed.normal.dot(grad_f(mid));
    }
  }
  return x;
}

}  // namespace vem
