#include "vem/polymesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

namespace vem {

namespace {

constexpr double kBoundarySnapTol = 1e-12;

double polygon_area(const std::vector<Vec2>& pts) {
  double a = 0.0;
  const int n = static_cast<int>(pts.size());
  for (int i = 0; i < n; ++i) {
    const Vec2& p = pts[i];
    const Vec2& q = pts[(i + 1) % n];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

Vec2 polygon_centroid(const std::vector<Vec2>& pts, double area) {
  Vec2 c = Vec2::Zero();
  const int n = static_cast<int>(pts.size());
  for (int i = 0; i < n; ++i) {
    const Vec2& p = pts[i];
    const Vec2& q = pts[(i + 1) % n];
    const double w = p.x() * q.y() - q.x() * p.y();
    c += w * (p + q);
  }
  return c / (6.0 * area);
}

}  // namespace

double PolyMesh::total_area() const {
  double a = 0.0;
  for (const auto& c : cells) a += c.area;
  return a;
}

PolyMesh build_mesh(std::vector<Vec2> vertices,
                    std::vector<std::vector<int>> cell_loops,
                    std::vector<RegionTag> tags) {
  PolyMesh m;
  // Snap near-boundary coordinates exactly onto the unit square sides.
  for (auto& v : vertices) {
    for (int d = 0; d < 2; ++d) {
      if (std::abs(v[d]) < kBoundarySnapTol) v[d] = 0.0;
      if (std::abs(v[d] - 1.0) < kBoundarySnapTol) v[d] = 1.0;
    }
  }
  m.vertices = std::move(vertices);
  m.cells.resize(cell_loops.size());

  std::map<std::pair<int, int>, int> edge_index;
  for (size_t ci = 0; ci < cell_loops.size(); ++ci) {
    Cell& cell = m.cells[ci];
    cell.vertices = std::move(cell_loops[ci]);
    const int ne = cell.n_edges();
    if (ne < 3) throw std::runtime_error("build_mesh: cell " + std::to_string(ci) + " has fewer than 3 vertices");

    std::vector<Vec2> pts(ne);
    for (int i = 0; i < ne; ++i) {
      const int vi = cell.vertices[i];
      if (vi < 0 || vi >= m.n_vertices())
        throw std::runtime_error("build_mesh: vertex index out of range in cell " + std::to_string(ci));
      pts[i] = m.vertices[vi];
    }
    cell.area = polygon_area(pts);
    if (cell.area <= 0.0)
      throw std::runtime_error("build_mesh: cell " + std::to_string(ci) + " has non-positive area (loop must be CCW)");
    cell.centroid = polygon_centroid(pts, cell.area);
    cell.diameter = 0.0;
    for (int i = 0; i < ne; ++i)
      for (int j = i + 1; j < ne; ++j)
        cell.diameter = std::max(cell.diameter, (pts[i] - pts[j]).norm());

    // Star-shapedness with respect to the centroid: the centroid must lie
    // strictly on the inner side of every edge.
    for (int i = 0; i < ne; ++i) {
      const Vec2& p = pts[i];
      const Vec2& q = pts[(i + 1) % ne];
      const double cross = (q.x() - p.x()) * (cell.centroid.y() - p.y()) -
                           (q.y() - p.y()) * (cell.centroid.x() - p.x());
      if (cross <= 0.0)
        throw std::runtime_error("build_mesh: cell " + std::to_string(ci) +
                                 " is not star-shaped with respect to its centroid");
    }

    cell.edges.resize(ne);
    cell.edge_dir.resize(ne);
    for (int i = 0; i < ne; ++i) {
      int va = cell.vertices[i];
      int vb = cell.vertices[(i + 1) % ne];
      const int dir = va < vb ? 1 : -1;
      if (va > vb) std::swap(va, vb);
      auto [it, inserted] = edge_index.try_emplace({va, vb}, m.n_edges());
      if (inserted) {
        Edge e;
        e.a = va;
        e.b = vb;
        const Vec2 d = m.vertices[vb] - m.vertices[va];
        e.length = d.norm();
        if (e.length <= 0.0) throw std::runtime_error("build_mesh: zero-length edge");
        e.tangent = d / e.length;
        e.normal = Vec2(e.tangent.y(), -e.tangent.x());
        m.edges.push_back(e);
      }
      const int ei = it->second;
      Edge& e = m.edges[ei];
      int& slot = dir > 0 ? e.cell_left : e.cell_right;
      if (slot >= 0)
        throw std::runtime_error("build_mesh: edge traversed twice in the same direction (inconsistent orientation)");
      slot = static_cast<int>(ci);
      cell.edges[i] = ei;
      cell.edge_dir[i] = dir;
    }
    cell.tag = tags.empty() ? RegionTag::Untagged : tags.at(ci);
  }

  // Incidence consistency and boundary flags.
  m.vertex_on_boundary.assign(m.n_vertices(), false);
  for (const Edge& e : m.edges) {
    if (e.cell_left < 0 && e.cell_right < 0)
      throw std::runtime_error("build_mesh: edge with no incident cell");
    if (e.on_boundary()) {
      m.vertex_on_boundary[e.a] = true;
      m.vertex_on_boundary[e.b] = true;
      const Vec2& pa = m.vertices[e.a];
      const Vec2& pb = m.vertices[e.b];
      const bool on_side =
          (pa.x() == pb.x() && (pa.x() == 0.0 || pa.x() == 1.0)) ||
          (pa.y() == pb.y() && (pa.y() == 0.0 || pa.y() == 1.0));
      if (!on_side)
        throw std::runtime_error("build_mesh: boundary edge not on the unit square boundary");
    }
  }

  // h_xi: mean diameter of the incident cells.
  m.vertex_patch_size.assign(m.n_vertices(), 0.0);
  std::vector<int> incident(m.n_vertices(), 0);
  for (const Cell& c : m.cells)
    for (int vi : c.vertices) {
      m.vertex_patch_size[vi] += c.diameter;
      ++incident[vi];
    }
  for (int i = 0; i < m.n_vertices(); ++i) {
    if (incident[i] == 0)
      throw std::runtime_error("build_mesh: isolated vertex " + std::to_string(i));
    m.vertex_patch_size[i] /= incident[i];
  }

  if (std::abs(m.total_area() - 1.0) > 1e-12)
    throw std::runtime_error("build_mesh: cell areas do not tile the unit square");
  return m;
}

MeshQualityReport validate_A1(const PolyMesh& mesh, double rho_min) {
  MeshQualityReport rep;
  for (int ci = 0; ci < mesh.n_cells(); ++ci) {
    const Cell& c = mesh.cells[ci];
    double edge_ratio = 1.0;
    double inball = c.diameter;
    for (int i = 0; i < c.n_edges(); ++i) {
      const Edge& e = mesh.edges[c.edges[i]];
      edge_ratio = std::min(edge_ratio, e.length / c.diameter);
      // Distance from the centroid to the edge line: lower bound for the
      // radius of a ball the cell is star-shaped with respect to.
      const Vec2& pa = mesh.vertices[e.a];
      const double dist = std::abs(e.normal.dot(c.centroid - pa));
      inball = std::min(inball, dist);
    }
    const double inball_ratio = inball / c.diameter;
    rep.min_edge_ratio = std::min(rep.min_edge_ratio, edge_ratio);
    rep.min_inball_ratio = std::min(rep.min_inball_ratio, inball_ratio);
    if (edge_ratio < rho_min || inball_ratio < rho_min)
      rep.violating_cells.push_back(ci);
  }
  return rep;
}

void tag_inpainting_region(PolyMesh& mesh, const RegionMask& mask) {
  double tagged_area = 0.0;
  for (int ci = 0; ci < mesh.n_cells(); ++ci) {
    Cell& c = mesh.cells[ci];
    // Sample the predicate at interior points: the centroid plus points
    // pulled from each vertex toward the centroid. A straddling cell
    // produces mixed answers.
    bool any_in = false, any_out = false;
    auto probe = [&](const Vec2& p) { (mask.inside(p) ? any_in : any_out) = true; };
    probe(c.centroid);
    for (int vi : c.vertices) {
      const Vec2& v = mesh.vertices[vi];
      probe(0.75 * v + 0.25 * c.centroid);
      probe(0.5 * v + 0.5 * c.centroid);
    }
    if (any_in && any_out)
      throw std::runtime_error("tag_inpainting_region: cell " + std::to_string(ci) +
                               " straddles the region boundary");
    c.tag = any_in ? RegionTag::InsideD : RegionTag::OutsideD;
    if (any_in) tagged_area += c.area;
  }
  if (std::abs(tagged_area - mask.area) > 1e-10)
    throw std::runtime_error("tag_inpainting_region: tagged area " + std::to_string(tagged_area) +
                             " does not match |D| = " + std::to_string(mask.area));
}

namespace {

// Splits a convex-ish polygon by the line coord[axis] == c. Returns one or
// two loops of points; intersection points are computed from the edge
// endpoints, so both cells sharing an edge produce identical coordinates.
std::vector<std::vector<Vec2>> split_loop(const std::vector<Vec2>& pts, int axis, double c) {
  const int n = static_cast<int>(pts.size());
  bool below = false, above = false;
  for (const Vec2& p : pts) {
    if (p[axis] < c - 1e-13) below = true;
    if (p[axis] > c + 1e-13) above = true;
  }
  if (!below || !above) return {pts};

  std::vector<Vec2> lo, hi;
  for (int i = 0; i < n; ++i) {
    Vec2 p = pts[i];
    Vec2 q = pts[(i + 1) % n];
    const double sp = p[axis] - c, sq = q[axis] - c;
    if (sp <= 1e-13) lo.push_back(p);
    if (sp >= -1e-13) hi.push_back(p);
    if ((sp < -1e-13 && sq > 1e-13) || (sp > 1e-13 && sq < -1e-13)) {
      // Deterministic intersection: always parametrize from the smaller point.
      Vec2 A = p, B = q;
      if (B[axis] < A[axis]) std::swap(A, B);
      const double t = (c - A[axis]) / (B[axis] - A[axis]);
      Vec2 x = A + t * (B - A);
      x[axis] = c;
      lo.push_back(x);
      hi.push_back(x);
    }
  }
  return {lo, hi};
}

int merge_point(std::vector<Vec2>& verts, std::map<std::pair<long long, long long>, int>& lookup,
                const Vec2& p) {
  // Quantized lookup with neighbor probing so points equal to ~1e-12 merge.
  const double scale = 1e9;
  const long long qx = llround(p.x() * scale);
  const long long qy = llround(p.y() * scale);
  for (long long dx = -1; dx <= 1; ++dx)
    for (long long dy = -1; dy <= 1; ++dy) {
      auto it = lookup.find({qx + dx, qy + dy});
      if (it != lookup.end() && (verts[it->second] - p).norm() < 2e-9) return it->second;
    }
  verts.push_back(p);
  lookup[{qx, qy}] = static_cast<int>(verts.size()) - 1;
  return static_cast<int>(verts.size()) - 1;
}

}  // namespace

PolyMesh conform_to_lines(const PolyMesh& mesh, const std::vector<double>& xlines,
                          const std::vector<double>& ylines) {
  std::vector<std::vector<Vec2>> loops;
  for (const Cell& c : mesh.cells) {
    std::vector<Vec2> pts;
    for (int vi : c.vertices) pts.push_back(mesh.vertices[vi]);
    std::vector<std::vector<Vec2>> pieces = {pts};
    auto cut = [&](int axis, double v) {
      std::vector<std::vector<Vec2>> next;
      for (const auto& piece : pieces)
        for (auto& part : split_loop(piece, axis, v)) next.push_back(std::move(part));
      pieces = std::move(next);
    };
    for (double x : xlines) cut(0, x);
    for (double y : ylines) cut(1, y);
    for (auto& piece : pieces) loops.push_back(std::move(piece));
  }

  std::vector<Vec2> verts;
  std::map<std::pair<long long, long long>, int> lookup;
  std::vector<std::vector<int>> cell_loops;
  for (const auto& loop : loops) {
    std::vector<int> idx;
    for (const Vec2& p : loop) {
      const int vi = merge_point(verts, lookup, p);
      if (idx.empty() || idx.back() != vi) idx.push_back(vi);
    }
    while (idx.size() > 1 && idx.front() == idx.back()) idx.pop_back();
    if (idx.size() >= 3) cell_loops.push_back(std::move(idx));
  }

  // A cut may introduce a vertex in the interior of a neighbor's edge that
  // was not itself split; insert such hanging points into every loop. Only
  // vertices sitting on a cut line can hang.
  std::vector<int> candidates;
  for (int vi = 0; vi < static_cast<int>(verts.size()); ++vi) {
    bool on_line = false;
    for (double x : xlines)
      if (std::abs(verts[vi].x() - x) < 1e-12) on_line = true;
    for (double y : ylines)
      if (std::abs(verts[vi].y() - y) < 1e-12) on_line = true;
    if (on_line) candidates.push_back(vi);
  }
  for (auto& loop : cell_loops) {
    std::vector<int> out;
    const int n = static_cast<int>(loop.size());
    for (int i = 0; i < n; ++i) {
      const Vec2& p = verts[loop[i]];
      const Vec2& q = verts[loop[(i + 1) % n]];
      out.push_back(loop[i]);
      const double len = (q - p).norm();
      std::vector<std::pair<double, int>> on_seg;
      for (int vi : candidates) {
        if (vi == loop[i] || vi == loop[(i + 1) % n]) continue;
        const Vec2& x = verts[vi];
        const double t = (x - p).dot(q - p) / (len * len);
        if (t <= 1e-12 || t >= 1.0 - 1e-12) continue;
        const Vec2 proj = p + t * (q - p);
        if ((x - proj).norm() < 1e-10) on_seg.emplace_back(t, vi);
      }
      std::sort(on_seg.begin(), on_seg.end());
      for (auto& [t, vi] : on_seg) out.push_back(vi);
    }
    loop = std::move(out);
  }
  return build_mesh(std::move(verts), std::move(cell_loops));
}

void write_polymesh(const PolyMesh& mesh, std::ostream& out) {
  out << "polymesh 1\n";
  out << "vertices " << mesh.n_vertices() << "\n";
  out << std::setprecision(17);
  for (const Vec2& v : mesh.vertices) out << v.x() << " " << v.y() << "\n";
  out << "cells " << mesh.n_cells() << "\n";
  for (const Cell& c : mesh.cells) {
    for (size_t i = 0; i < c.vertices.size(); ++i)
      out << (i ? " " : "") << c.vertices[i];
    out << "\n";
  }
  bool any_tag = false;
  for (const Cell& c : mesh.cells)
    if (c.tag != RegionTag::Untagged) any_tag = true;
  if (any_tag) {
    out << "tags\n";
    for (const Cell& c : mesh.cells)
      out << (c.tag == RegionTag::InsideD ? "inside" : c.tag == RegionTag::OutsideD ? "outside" : "untagged")
          << "\n";
  }
}

void write_polymesh(const PolyMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_polymesh: cannot open " + path);
  write_polymesh(mesh, out);
}

PolyMesh read_polymesh(std::istream& in) {
  std::string token;
  int version = 0;
  in >> token >> version;
  if (token != "polymesh" || version != 1)
    throw std::runtime_error("read_polymesh: bad header");
  int nv = 0;
  in >> token >> nv;
  if (token != "vertices" || nv <= 0) throw std::runtime_error("read_polymesh: bad vertices section");
  std::vector<Vec2> verts(nv);
  for (auto& v : verts) in >> v.x() >> v.y();
  int nc = 0;
  in >> token >> nc;
  if (token != "cells" || nc <= 0) throw std::runtime_error("read_polymesh: bad cells section");
  in.ignore();
  std::vector<std::vector<int>> loops(nc);
  for (auto& loop : loops) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_polymesh: truncated cells section");
    std::istringstream ls(line);
    int vi;
    while (ls >> vi) loop.push_back(vi);
  }
  std::vector<RegionTag> tags;
  if (in >> token && token == "tags") {
    tags.resize(nc);
    for (auto& t : tags) {
      in >> token;
      t = token == "inside" ? RegionTag::InsideD : token == "outside" ? RegionTag::OutsideD : RegionTag::Untagged;
    }
  }
  return build_mesh(std::move(verts), std::move(loops), std::move(tags));
}

PolyMesh read_polymesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_polymesh: cannot open " + path);
  return read_polymesh(in);
}

}  // namespace vem
