#pragma once

#include "vem/local_space.hpp"

namespace vem {

/// One scatter entry: a local DoF contributes weight * value to a free
/// global DoF. Boundary rotations make some local DoFs scatter to one free
/// DoF with a direction-cosine weight; constrained DoFs scatter nowhere.
struct DofScatter {
  int free_index;
  double weight;
};

/// Global numbering with the essential constraints of V (normal derivative
/// zero on the boundary) eliminated. Raw DoFs are ordered vertex-major
/// (value, gx, gy per vertex), then one normal-derivative DoF per edge for
/// k = 3. At boundary vertices the gradient pair is rotated into the
/// (tangent, normal) frame and the normal component is dropped; corners
/// drop both components; boundary-edge normal DoFs are dropped for k = 3.
struct GlobalDofMap {
  enum class VertexType { Interior, Boundary, Corner };

  int k = 2;
  int n_raw = 0;
  int n_free = 0;
  std::vector<VertexType> vertex_type;
  std::vector<Vec2> boundary_tangent;  // unit tangent at non-corner boundary vertices

  // raw index -> free index for unrotated raw DoFs (-1 if constrained or
  // replaced by a rotated pair); rotated pairs are described by
  // grad_free/grad_tangent below.
  std::vector<int> raw_value;     // per vertex: free index of the value DoF
  std::vector<int> raw_grad_x;    // per vertex: free index of gx (interior only, else -1)
  std::vector<int> raw_grad_y;    // per vertex: free index of gy (interior only, else -1)
  std::vector<int> grad_tangent;  // per vertex: free index of the tangential
                                  // gradient (boundary non-corner only, else -1)
  std::vector<int> edge_normal;   // per edge (k=3): free index or -1

  // Per cell, per local DoF in DofLayout order: the scatter entries.
  std::vector<std::vector<std::vector<DofScatter>>> cell_scatter;
};

GlobalDofMap build_global_map(const PolyMesh& mesh, int k);

/// Local DoF vector of a cell from the free global vector (applies the
/// inverse boundary rotation; constrained DoFs read as 0).
Eigen::VectorXd gather_local(const GlobalDofMap& map, int cell, const Eigen::VectorXd& free_vec);

/// Free vector of the DoF interpolant of a smooth function. The gradient
/// at boundary vertices is projected onto the admissible (tangential)
/// directions, consistent with the constrained space.
Eigen::VectorXd interpolate_free(const PolyMesh& mesh, const GlobalDofMap& map,
                                 const std::function<double(const Vec2&)>& f,
                                 const std::function<Vec2(const Vec2&)>& grad_f);

}  // namespace vem
