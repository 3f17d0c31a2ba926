#include "vem/mesh_generators.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

namespace vem {

PolyMesh make_quad_mesh(int n) {
  if (n < 2) throw std::runtime_error("make_quad_mesh: n must be >= 2");
  std::vector<Vec2> verts((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      verts[j * (n + 1) + i] = Vec2(double(i) / n, double(j) / n);
  std::vector<std::vector<int>> loops;
  loops.reserve(n * n);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      loops.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
  return build_mesh(std::move(verts), std::move(loops));
}

namespace {

double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

// d strictly inside the circumcircle of CCW triangle (a,b,c)?
bool in_circle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const double ax = a.x() - d.x(), ay = a.y() - d.y();
  const double bx = b.x() - d.x(), by = b.y() - d.y();
  const double cx = c.x() - d.x(), cy = c.y() - d.y();
  const double det = (ax * ax + ay * ay) * (bx * cy - cx * by) -
                     (bx * bx + by * by) * (ax * cy - cx * ay) +
                     (cx * cx + cy * cy) * (ax * by - bx * ay);
  return det > 1e-14;
}

// Lawson flips: starts from any valid triangulation and flips interior
// edges failing the incircle test until none remain.
void lawson_flip(const std::vector<Vec2>& pts, std::vector<std::array<int, 3>>& tris) {
  auto key = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
  std::map<std::pair<int, int>, std::vector<int>> edge_tris;
  for (int t = 0; t < static_cast<int>(tris.size()); ++t)
    for (int i = 0; i < 3; ++i)
      edge_tris[key(tris[t][i], tris[t][(i + 1) % 3])].push_back(t);

  std::deque<std::pair<int, int>> queue;
  std::set<std::pair<int, int>> queued;
  for (auto& [e, ts] : edge_tris)
    if (ts.size() == 2) {
      queue.push_back(e);
      queued.insert(e);
    }

  auto opposite = [&](int t, int a, int b) {
    for (int v : tris[t])
      if (v != a && v != b) return v;
    return -1;
  };

  long guard = 100 * static_cast<long>(tris.size()) + 1000;
  while (!queue.empty() && guard-- > 0) {
    auto e = queue.front();
    queue.pop_front();
    queued.erase(e);
    auto it = edge_tris.find(e);
    if (it == edge_tris.end() || it->second.size() != 2) continue;
    const int t1 = it->second[0], t2 = it->second[1];
    const int a = e.first, b = e.second;
    const int c = opposite(t1, a, b);
    const int d = opposite(t2, a, b);
    if (c < 0 || d < 0) continue;
    // Orient t1 as containing (a,b,c) CCW.
    int aa = a, bb = b;
    if (orient(pts[aa], pts[bb], pts[c]) < 0) std::swap(aa, bb);
    if (!in_circle(pts[aa], pts[bb], pts[c], pts[d])) continue;
    // Flip requires the quad (aa, d, bb, c) to be strictly convex.
    if (orient(pts[c], pts[aa], pts[d]) <= 0 || orient(pts[d], pts[bb], pts[c]) <= 0) continue;

    auto erase_ref = [&](int a0, int b0, int t) {
      auto& v = edge_tris[key(a0, b0)];
      v.erase(std::remove(v.begin(), v.end(), t), v.end());
    };
    for (int i = 0; i < 3; ++i) {
      erase_ref(tris[t1][i], tris[t1][(i + 1) % 3], t1);
      erase_ref(tris[t2][i], tris[t2][(i + 1) % 3], t2);
    }
    tris[t1] = {aa, d, c};
    tris[t2] = {d, bb, c};
    for (int t : {t1, t2})
      for (int i = 0; i < 3; ++i)
        edge_tris[key(tris[t][i], tris[t][(i + 1) % 3])].push_back(t);
    for (auto ne : {key(aa, d), key(d, bb), key(bb, c), key(c, aa)})
      if (edge_tris[ne].size() == 2 && !queued.count(ne)) {
        queue.push_back(ne);
        queued.insert(ne);
      }
  }
}

}  // namespace

PolyMesh make_tri_mesh(int n, TriStyle style, std::uint64_t seed) {
  if (n < 2) throw std::runtime_error("make_tri_mesh: n must be >= 2");
  // Delaunay lattices are refined so the vertex count lands near the usual
  // unstructured-triangulation density for the same 1/h.
  const int m = style == TriStyle::Structured ? n : std::max(2, static_cast<int>(std::lround(1.324 * n)));
  std::vector<Vec2> pts((m + 1) * (m + 1));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.3 / m, 0.3 / m);
  for (int j = 0; j <= m; ++j)
    for (int i = 0; i <= m; ++i) {
      Vec2 p(double(i) / m, double(j) / m);
      if (style == TriStyle::Delaunay && i > 0 && i < m && j > 0 && j < m)
        p += Vec2(jitter(rng), jitter(rng));
      pts[j * (m + 1) + i] = p;
    }
  auto id = [m](int i, int j) { return j * (m + 1) + i; };
  std::vector<std::array<int, 3>> tris;
  tris.reserve(2 * m * m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      const int v00 = id(i, j), v10 = id(i + 1, j), v01 = id(i, j + 1), v11 = id(i + 1, j + 1);
      // Split along whichever diagonal keeps both triangles valid.
      const bool diag_ok = orient(pts[v00], pts[v10], pts[v11]) > 0 && orient(pts[v00], pts[v11], pts[v01]) > 0;
      if (diag_ok) {
        tris.push_back({v00, v10, v11});
        tris.push_back({v00, v11, v01});
      } else {
        tris.push_back({v00, v10, v01});
        tris.push_back({v10, v11, v01});
      }
    }
  if (style == TriStyle::Delaunay) lawson_flip(pts, tris);

  std::vector<std::vector<int>> loops;
  loops.reserve(tris.size());
  for (auto& t : tris) loops.push_back({t[0], t[1], t[2]});
  return build_mesh(std::move(pts), std::move(loops));
}

namespace {

// Clip a convex polygon against the half-plane dir . x <= bound.
std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, const Vec2& dir, double bound) {
  std::vector<Vec2> out;
  const int n = static_cast<int>(poly.size());
  for (int i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    const double sp = dir.dot(p) - bound;
    const double sq = dir.dot(q) - bound;
    if (sp <= 0) out.push_back(p);
    if ((sp < 0 && sq > 0) || (sp > 0 && sq < 0)) {
      const double t = sp / (sp - sq);
      out.push_back(p + t * (q - p));
    }
  }
  return out;
}

struct VoronoiGrid {
  int dim;
  double cell;
  std::vector<std::vector<int>> buckets;
  explicit VoronoiGrid(const std::vector<Vec2>& gens) {
    dim = std::max(1, static_cast<int>(std::floor(std::sqrt(double(gens.size())))));
    cell = 1.0 / dim;
    buckets.resize(dim * dim);
    for (int i = 0; i < static_cast<int>(gens.size()); ++i) buckets[index(gens[i])].push_back(i);
  }
  int index(const Vec2& p) const {
    const int i = std::clamp(static_cast<int>(p.x() / cell), 0, dim - 1);
    const int j = std::clamp(static_cast<int>(p.y() / cell), 0, dim - 1);
    return j * dim + i;
  }
};

// Voronoi cell of generator gi clipped to the unit square, examining
// generators in expanding grid rings until none can cut the cell.
std::vector<Vec2> voronoi_cell(const std::vector<Vec2>& gens, const VoronoiGrid& grid, int gi) {
  const Vec2 g = gens[gi];
  std::vector<Vec2> poly = {Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)};
  const int ci = std::clamp(static_cast<int>(g.x() / grid.cell), 0, grid.dim - 1);
  const int cj = std::clamp(static_cast<int>(g.y() / grid.cell), 0, grid.dim - 1);

  auto max_dist = [&]() {
    double d = 0;
    for (const Vec2& p : poly) d = std::max(d, (p - g).norm());
    return d;
  };
  auto clip_against = [&](int qi) {
    if (qi == gi || poly.empty()) return;
    const Vec2 q = gens[qi];
    const Vec2 d = q - g;
    // Bisector: points closer to g satisfy d.x <= d.(g+q)/2.
    poly = clip_halfplane(poly, d, 0.5 * d.dot(g + q));
  };

  for (int ring = 0; ring <= 2 * grid.dim; ++ring) {
    if (ring > 0) {
      const double ring_dist = (ring - 1) * grid.cell;  // lower bound to ring cells
      if (ring_dist > 2.0 * max_dist()) break;
    }
    for (int j = cj - ring; j <= cj + ring; ++j) {
      if (j < 0 || j >= grid.dim) continue;
      for (int i = ci - ring; i <= ci + ring; ++i) {
        if (i < 0 || i >= grid.dim) continue;
        if (std::max(std::abs(i - ci), std::abs(j - cj)) != ring) continue;
        for (int qi : grid.buckets[j * grid.dim + i]) clip_against(qi);
      }
    }
  }
  // Drop numerically duplicate consecutive points.
  std::vector<Vec2> clean;
  for (const Vec2& p : poly)
    if (clean.empty() || (p - clean.back()).norm() > 1e-12) clean.push_back(p);
  while (clean.size() > 1 && (clean.front() - clean.back()).norm() < 1e-12) clean.pop_back();
  return clean;
}

int merge_vertex(std::vector<Vec2>& verts, std::map<std::pair<long long, long long>, int>& lookup,
                 const Vec2& p) {
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

PolyMesh lloyd_and_build(std::vector<Vec2> gens, int lloyd_iters, double tol) {
  const int n = static_cast<int>(gens.size());
  const double h = 1.0 / std::sqrt(double(n));
  for (int it = 0; it < lloyd_iters; ++it) {
    VoronoiGrid grid(gens);
    double max_move = 0.0;
    std::vector<Vec2> next(n);
    for (int gi = 0; gi < n; ++gi) {
      const auto poly = voronoi_cell(gens, grid, gi);
      if (poly.size() < 3) throw std::runtime_error("make_cvt_mesh: degenerate Voronoi cell");
      double area = 0.0;
      Vec2 c = Vec2::Zero();
      const int np = static_cast<int>(poly.size());
      for (int i = 0; i < np; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % np];
        const double w = p.x() * q.y() - q.x() * p.y();
        area += 0.5 * w;
        c += w * (p + q);
      }
      next[gi] = c / (6.0 * area);
      max_move = std::max(max_move, (next[gi] - gens[gi]).norm());
    }
    gens = std::move(next);
    if (max_move < tol * h) break;
  }

  VoronoiGrid grid(gens);
  std::vector<Vec2> verts;
  std::map<std::pair<long long, long long>, int> lookup;
  std::vector<std::vector<int>> loops(n);
  for (int gi = 0; gi < n; ++gi) {
    const auto poly = voronoi_cell(gens, grid, gi);
    if (poly.size() < 3) throw std::runtime_error("make_cvt_mesh: degenerate Voronoi cell");
    std::vector<int>& loop = loops[gi];
    for (const Vec2& p : poly) {
      const int vi = merge_vertex(verts, lookup, p);
      if (loop.empty() || loop.back() != vi) loop.push_back(vi);
    }
    while (loop.size() > 1 && loop.front() == loop.back()) loop.pop_back();
    if (loop.size() < 3) throw std::runtime_error("make_cvt_mesh: collapsed Voronoi cell");
  }
  return build_mesh(std::move(verts), std::move(loops));
}

}  // namespace

PolyMesh make_cvt_mesh(int n_cells, std::uint64_t seed, int lloyd_iters, double tol) {
  if (n_cells < 4) throw std::runtime_error("make_cvt_mesh: n_cells must be >= 4");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<Vec2> gens(n_cells);
  for (auto& g : gens) {
    const double x = uni(rng);
    const double y = uni(rng);
    g = Vec2(x, y);
  }
  return lloyd_and_build(std::move(gens), lloyd_iters, tol);
}

PolyMesh make_cvt_mesh_from_generators(std::vector<Vec2> generators, int lloyd_iters, double tol) {
  if (generators.size() < 4)
    throw std::runtime_error("make_cvt_mesh_from_generators: need at least 4 generators");
  return lloyd_and_build(std::move(generators), lloyd_iters, tol);
}

}  // namespace vem
