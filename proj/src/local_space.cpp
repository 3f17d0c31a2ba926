#include "vem/local_space.hpp"

#include <cmath>
#include <stdexcept>

namespace vem {

DofLayout build_dof_layout(const PolyMesh& mesh, int cell, int k) {
  if (k != 2 && k != 3)
    throw std::runtime_error("build_dof_layout: unsupported order k = " + std::to_string(k) +
                             " (only k = 2, 3 are implemented)");
  const Cell& c = mesh.cells.at(cell);
  DofLayout layout;
  layout.k = k;
  for (int vi : c.vertices) {
    const double hxi = mesh.vertex_patch_size[vi];
    layout.dofs.push_back({DofDescriptor::Kind::VertexValue, vi, 1.0});
    layout.dofs.push_back({DofDescriptor::Kind::VertexGradX1, vi, hxi});
    layout.dofs.push_back({DofDescriptor::Kind::VertexGradX2, vi, hxi});
  }
  if (k == 3)
    for (int ei : c.edges)
      layout.dofs.push_back({DofDescriptor::Kind::EdgeNormalDeriv, ei, mesh.edges[ei].length});
  return layout;
}

namespace {

// Local indices of the vertex block of the global start (a) and end (b)
// vertex of local edge i, respecting the global edge orientation.
struct EdgeEnds {
  int la, lb;  // local vertex positions of edge.a, edge.b
};

EdgeEnds edge_ends(const Cell& c, int i) {
  const int next = (i + 1) % c.n_edges();
  if (c.edge_dir[i] > 0) return {i, next};
  return {next, i};
}

}  // namespace

double LocalSpace::trace_value(int local_edge, double t, const Eigen::VectorXd& dofs) const {
  const Eigen::VectorXd c = value_trace[local_edge] * dofs;
  return c[0] + t * (c[1] + t * (c[2] + t * c[3]));
}

double LocalSpace::trace_normal_derivative(int local_edge, double t, const Eigen::VectorXd& dofs) const {
  const Eigen::VectorXd c = normal_trace[local_edge] * dofs;
  double v = 0.0, tp = 1.0;
  for (int i = 0; i < c.size(); ++i) {
    v += c[i] * tp;
    tp *= t;
  }
  return v;
}

LocalSpace build_local_space(const PolyMesh& mesh, int cell_index, int k, int quad_exactness) {
  LocalSpace S;
  S.mesh = &mesh;
  S.cell = cell_index;
  S.k = k;
  S.layout = build_dof_layout(mesh, cell_index, k);

  const Cell& cell = mesh.cells[cell_index];
  const int ne = cell.n_edges();
  const int nd = S.n_dofs();
  const int nk = poly_dim(k);
  const int nk1 = poly_dim(k - 1);
  const int nk2 = poly_dim(k - 2);
  S.basis = ScaledMonomialBasis(cell, k);

  if (quad_exactness < 0) quad_exactness = 4 * k - 2;
  S.quad = element_quadrature(mesh, cell_index, quad_exactness);
  S.mono_vals = S.basis.values(S.quad.points);
  S.mono_int = S.mono_vals.transpose() * S.quad.weights;

  // ---- edge traces ----------------------------------------------------
  S.value_trace.resize(ne);
  S.normal_trace.resize(ne);
  for (int i = 0; i < ne; ++i) {
    const Edge& e = mesh.edges[cell.edges[i]];
    const auto [la, lb] = edge_ends(cell, i);
    const double hxa = mesh.vertex_patch_size[e.a];
    const double hxb = mesh.vertex_patch_size[e.b];

    // Hermite cubic in t from DoFs: endpoint values and h_e-scaled
    // tangential derivatives (recovered from the scaled gradient pairs).
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(4, nd);
    Eigen::RowVectorXd va = Eigen::RowVectorXd::Zero(nd), vb = va, ma = va, mb = va;
    va[3 * la] = 1.0;
    vb[3 * lb] = 1.0;
    ma[3 * la + 1] = e.length * e.tangent.x() / hxa;
    ma[3 * la + 2] = e.length * e.tangent.y() / hxa;
    mb[3 * lb + 1] = e.length * e.tangent.x() / hxb;
    mb[3 * lb + 2] = e.length * e.tangent.y() / hxb;
    V.row(0) = va;
    V.row(1) = ma;
    V.row(2) = -3.0 * va - 2.0 * ma + 3.0 * vb - mb;
    V.row(3) = 2.0 * va + ma - 2.0 * vb + mb;
    S.value_trace[i] = V;

    Eigen::RowVectorXd da = Eigen::RowVectorXd::Zero(nd), db = da;
    da[3 * la + 1] = e.normal.x() / hxa;
    da[3 * la + 2] = e.normal.y() / hxa;
    db[3 * lb + 1] = e.normal.x() / hxb;
    db[3 * lb + 2] = e.normal.y() / hxb;
    Eigen::MatrixXd N = Eigen::MatrixXd::Zero(k, nd);
    if (k == 2) {
      N.row(0) = da;
      N.row(1) = db - da;
    } else {
      Eigen::RowVectorXd dm = Eigen::RowVectorXd::Zero(nd);
      dm[3 * ne + i] = 1.0 / e.length;  // midpoint DoF, unscaled
      N.row(0) = da;
      N.row(1) = -3.0 * da + 4.0 * dm - db;
      N.row(2) = 2.0 * da - 4.0 * dm + 2.0 * db;
    }
    S.normal_trace[i] = N;
  }

  // ---- D: DoFs of the monomials --------------------------------------
  S.D.resize(nd, nk);
  for (int a = 0; a < nk; ++a) {
    for (int i = 0; i < ne; ++i) {
      const int vi = cell.vertices[i];
      const Vec2& x = mesh.vertices[vi];
      const double hxi = mesh.vertex_patch_size[vi];
      S.D(3 * i, a) = S.basis.value(a, x);
      const Vec2 g = S.basis.gradient(a, x);
      S.D(3 * i + 1, a) = hxi * g.x();
      S.D(3 * i + 2, a) = hxi * g.y();
    }
    if (k == 3)
      for (int i = 0; i < ne; ++i) {
        const Edge& e = mesh.edges[cell.edges[i]];
        const Vec2 mid = 0.5 * (mesh.vertices[e.a] + mesh.vertices[e.b]);
        S.D(3 * ne + i, a) = e.length * S.basis.gradient(a, mid).dot(e.normal);
      }
  }

  // ---- edge Gauss data -------------------------------------------------
  const int n_gl = k + 4;
  Eigen::VectorXd gl_x, gl_w;
  gauss_legendre(n_gl, gl_x, gl_w);
  Eigen::VectorXd tq(n_gl), wq(n_gl);
  for (int q = 0; q < n_gl; ++q) {
    tq[q] = 0.5 * (gl_x[q] + 1.0);
    wq[q] = 0.5 * gl_w[q];  // weights on [0,1], sum to 1
  }

  // Per edge and Gauss point: trace value rows and arclength-derivative
  // rows as linear maps from DoFs, plus monomial data at the point.
  struct EdgePointData {
    Vec2 x;
    double w;          // arclength weight (h_e * wq)
    Vec2 t, n, n_out;  // global frames and outward normal
    Eigen::RowVectorXd val;    // v(x) from DoFs
    Eigen::RowVectorXd ds;     // dv/ds (tangential, global orientation)
    Eigen::RowVectorXd dn;     // dv/dn (global normal)
  };
  std::vector<EdgePointData> bpts;
  bpts.reserve(ne * n_gl);
  for (int i = 0; i < ne; ++i) {
    const Edge& e = mesh.edges[cell.edges[i]];
    const Vec2& pa = mesh.vertices[e.a];
    const Vec2& pb = mesh.vertices[e.b];
    for (int q = 0; q < n_gl; ++q) {
      EdgePointData d;
      const double t = tq[q];
      d.x = pa + t * (pb - pa);
      d.w = wq[q] * e.length;
      d.t = e.tangent;
      d.n = e.normal;
      d.n_out = cell.edge_dir[i] * e.normal;
      Eigen::RowVector4d powv(1.0, t, t * t, t * t * t);
      Eigen::RowVector4d powd(0.0, 1.0, 2.0 * t, 3.0 * t * t);
      d.val = powv * S.value_trace[i];
      d.ds = (powd * S.value_trace[i]) / e.length;
      Eigen::RowVectorXd pown(k);
      double tp = 1.0;
      for (int j = 0; j < k; ++j) {
        pown[j] = tp;
        tp *= t;
      }
      d.dn = pown * S.normal_trace[i];
      bpts.push_back(std::move(d));
    }
  }

  // ---- Pi^{D2}_k ------------------------------------------------------
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(nk, nk);
  for (int q = 0; q < S.quad.size(); ++q) {
    const Vec2 x = S.quad.points.row(q).transpose();
    std::vector<Eigen::Matrix2d> H(nk);
    for (int a = 0; a < nk; ++a) H[a] = S.basis.hessian(a, x);
    for (int b = 0; b < nk; ++b)
      for (int a = 0; a < nk; ++a)
        G(b, a) += S.quad.weights[q] * H[b].cwiseProduct(H[a]).sum();
  }
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nk, nd);
  for (int b = 3; b < nk; ++b) {
    const auto [bx, by] = ScaledMonomialBasis::exponent(b);
    // grad(Laplacian) of the monomial, constant for k = 3, zero for k = 2.
    Vec2 grad_lap = Vec2::Zero();
    if (bx + by == 3) {
      const double h3 = std::pow(cell.diameter, 3);
      if (bx == 3) grad_lap = Vec2(6.0 / h3, 0.0);
      else if (bx == 2) grad_lap = Vec2(0.0, 2.0 / h3);
      else if (bx == 1) grad_lap = Vec2(2.0 / h3, 0.0);
      else grad_lap = Vec2(0.0, 6.0 / h3);
    }
    for (const auto& p : bpts) {
      const Eigen::Matrix2d Hb = S.basis.hessian(b, p.x);
      const Vec2 Hn = Hb * p.n_out;
      B.row(b) += p.w * (Hn.dot(p.t) * p.ds + Hn.dot(p.n) * p.dn);
      B.row(b) -= p.w * grad_lap.dot(p.n_out) * p.val;
    }
  }
  // Closure: boundary means of the value and of the full gradient replace
  // the rows of the P_1 kernel (those Hessian-Gram rows are zero).
  G.row(0).setZero();
  G.row(1).setZero();
  G.row(2).setZero();
  for (int a = 0; a < nk; ++a)
    for (const auto& p : bpts) {
      G(0, a) += p.w * S.basis.value(a, p.x);
      const Vec2 g = S.basis.gradient(a, p.x);
      G(1, a) += p.w * g.x();
      G(2, a) += p.w * g.y();
    }
  for (const auto& p : bpts) {
    B.row(0) += p.w * p.val;
    B.row(1) += p.w * (p.t.x() * p.ds + p.n.x() * p.dn);
    B.row(2) += p.w * (p.t.y() * p.ds + p.n.y() * p.dn);
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(G);
  S.P_D2 = lu.solve(B);
  // One step of iterative refinement.
  S.P_D2 += lu.solve(B - G * S.P_D2);
  if (!S.P_D2.allFinite())
    throw std::runtime_error("build_local_space: singular projector system on cell " +
                             std::to_string(cell_index));

  // Enhancement makes the full L2 projection coincide with Pi^{D2} for k <= 3.
  S.P_0 = S.P_D2;

  // ---- mass matrices of the sub-bases ---------------------------------
  Eigen::MatrixXd M_full = S.mono_vals.transpose() * S.quad.weights.asDiagonal() * S.mono_vals;

  // ---- Pi^0_{k-1} of the gradient -------------------------------------
  {
    Eigen::MatrixXd RHSx = Eigen::MatrixXd::Zero(nk1, nd);
    Eigen::MatrixXd RHSy = Eigen::MatrixXd::Zero(nk1, nd);
    // Volume part: -int (Pi0_k v) d_c m_delta.
    Eigen::MatrixXd Cx = Eigen::MatrixXd::Zero(nk1, nk), Cy = Cx;
    for (int q = 0; q < S.quad.size(); ++q) {
      const Vec2 x = S.quad.points.row(q).transpose();
      for (int d = 0; d < nk1; ++d) {
        const Vec2 g = S.basis.gradient(d, x);
        for (int a = 0; a < nk; ++a) {
          Cx(d, a) += S.quad.weights[q] * g.x() * S.mono_vals(q, a);
          Cy(d, a) += S.quad.weights[q] * g.y() * S.mono_vals(q, a);
        }
      }
    }
    RHSx = -Cx * S.P_0;
    RHSy = -Cy * S.P_0;
    for (const auto& p : bpts)
      for (int d = 0; d < nk1; ++d) {
        const double md = S.basis.value(d, p.x);
        RHSx.row(d) += p.w * md * p.n_out.x() * p.val;
        RHSy.row(d) += p.w * md * p.n_out.y() * p.val;
      }
    Eigen::PartialPivLU<Eigen::MatrixXd> mlu(M_full.topLeftCorner(nk1, nk1));
    S.G0x = mlu.solve(RHSx);
    S.G0y = mlu.solve(RHSy);
  }

  // ---- Pi^0_{k-2} of the Hessian --------------------------------------
  {
    Eigen::MatrixXd R11 = Eigen::MatrixXd::Zero(nk2, nd), R22 = R11, R12 = R11;
    // Volume parts: -int (Pi0 grad v) . div(m_delta E_ab).
    for (int q = 0; q < S.quad.size(); ++q) {
      const Vec2 x = S.quad.points.row(q).transpose();
      Eigen::RowVectorXd gx = S.mono_vals.row(q).head(nk1) * S.G0x;
      Eigen::RowVectorXd gy = S.mono_vals.row(q).head(nk1) * S.G0y;
      for (int d = 0; d < nk2; ++d) {
        const Vec2 g = S.basis.gradient(d, x);
        R11.row(d) -= S.quad.weights[q] * g.x() * gx;
        R22.row(d) -= S.quad.weights[q] * g.y() * gy;
        R12.row(d) -= S.quad.weights[q] * (g.y() * gx + g.x() * gy);
      }
    }
    for (const auto& p : bpts) {
      const Eigen::RowVectorXd dvx = p.t.x() * p.ds + p.n.x() * p.dn;
      const Eigen::RowVectorXd dvy = p.t.y() * p.ds + p.n.y() * p.dn;
      for (int d = 0; d < nk2; ++d) {
        const double md = S.basis.value(d, p.x);
        R11.row(d) += p.w * md * p.n_out.x() * dvx;
        R22.row(d) += p.w * md * p.n_out.y() * dvy;
        R12.row(d) += p.w * md * (p.n_out.y() * dvx + p.n_out.x() * dvy);
      }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> mlu(M_full.topLeftCorner(nk2, nk2));
    S.H11 = mlu.solve(R11);
    S.H22 = mlu.solve(R22);
    S.H12 = mlu.solve(R12) / 2.0;
  }

  return S;
}

Eigen::VectorXd interpolate_local(const LocalSpace& space,
                                  const std::function<double(const Vec2&)>& f,
                                  const std::function<Vec2(const Vec2&)>& grad_f) {
  const PolyMesh& mesh = *space.mesh;
  Eigen::VectorXd dofs(space.n_dofs());
  for (int i = 0; i < space.n_dofs(); ++i) {
    const DofDescriptor& d = space.layout.dofs[i];
    switch (d.kind) {
      case DofDescriptor::Kind::VertexValue:
        dofs[i] = f(mesh.vertices[d.entity]);
        break;
      case DofDescriptor::Kind::VertexGradX1:
        dofs[i] = d.scale * grad_f(mesh.vertices[d.entity]).x();
        break;
      case DofDescriptor::Kind::VertexGradX2:
        dofs[i] = d.scale * grad_f(mesh.vertices[d.entity]).y();
        break;
      case DofDescriptor::Kind::EdgeNormalDeriv: {
        const Edge& e = mesh.edges[d.entity];
        const Vec2 mid = 0.5 * (mesh.vertices[e.a] + mesh.vertices[e.b]);
        dofs[i] = d.scale * grad_f(mid).dot(e.normal);
        break;
      }
    }
  }
  return dofs;
}

}  // namespace vem
