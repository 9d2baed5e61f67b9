#include "shadowbench/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <queue>

#include "shadowbench/combinatorics.hpp"

namespace shadowbench {

double VPolytope::max_generator_norm() const {
  double m = include_origin ? 0.0 : -1.0;
  for (Index i = 0; i < points.rows(); ++i) m = std::max(m, points.row(i).norm());
  return std::max(m, 0.0);
}

VPolytope polar_of_H(const HPolytope& P) {
  if (P.rows() < 1) throw input_error("polar_of_H: no rows");
  if (P.rhs.size() != P.rows()) throw input_error("polar_of_H: rhs size mismatch");
  if (!all_finite(P.normals) || !all_finite(P.rhs))
    throw input_error("polar_of_H: non-finite input");
  if (!(P.rhs.array() == 1.0).all())
    throw unsupported_form_error("polar_of_H: right-hand side must be identically 1");
  return VPolytope{P.normals, true};
}

Plane plane_from_span(const Vec& z0, const Vec& z) {
  if (z0.size() != z.size()) throw input_error("plane_from_span: dimension mismatch");
  if (z0.size() < 2) throw input_error("plane_from_span: need dimension >= 2");
  if (!all_finite(z0) || !all_finite(z)) throw input_error("plane_from_span: non-finite input");
  const double n0 = z0.norm();
  const double n1 = z.norm();
  if (!(n0 > 0.0) || !(n1 > 0.0)) throw input_error("plane_from_span: zero vector");
  Vec u = z0 / n0;
  Vec w = z - u.dot(z) * u;
  if (w.norm() < 1e-10 * n1)
    throw degenerate_span_error("plane_from_span: vectors are numerically collinear");
  Vec v = w.normalized();
  v = (v - u.dot(v) * u).normalized();  // second pass nails the 1e-12 orthogonality
  Plane E{std::move(u), std::move(v), std::make_pair(z0, z)};
  return E;
}

namespace {

// Normal to the affine hull of d points, or empty when the hull is deficient.
// d = 2 and d = 3 avoid the decomposition; they dominate the subset loops.
bool subset_normal(const Mat& pts, const std::vector<int>& rows,
                   const std::vector<Vec>& gen_cache, Vec& h) {
  const Index d = pts.cols();
  (void)pts;
  const Vec& p0 = gen_cache[static_cast<std::size_t>(rows[0])];
  if (d == 2) {
    const Vec e = gen_cache[static_cast<std::size_t>(rows[1])] - p0;
    if (e.squaredNorm() <= 0.0) return false;
    h.resize(2);
    h[0] = -e[1];
    h[1] = e[0];
    return true;
  }
  if (d == 3) {
    const Vec a = gen_cache[static_cast<std::size_t>(rows[1])] - p0;
    const Vec b = gen_cache[static_cast<std::size_t>(rows[2])] - p0;
    h.resize(3);
    h[0] = a[1] * b[2] - a[2] * b[1];
    h[1] = a[2] * b[0] - a[0] * b[2];
    h[2] = a[0] * b[1] - a[1] * b[0];
    return h.squaredNorm() > 0.0;
  }
  Mat D(d - 1, d);
  for (Index r = 0; r + 1 < d; ++r)
    D.row(r) = (gen_cache[static_cast<std::size_t>(rows[static_cast<std::size_t>(r) + 1])] - p0)
                   .transpose();
  Eigen::FullPivLU<Mat> lu(D);
  lu.setThreshold(1e-12);
  if (lu.dimensionOfKernel() != 1) return false;
  h = lu.kernel().col(0);
  return h.squaredNorm() > 0.0;
}

}  // namespace

FacetList enumerate_facets(const VPolytope& K, std::size_t subset_budget) {
  const Index d = K.dim();
  const Index N = K.generator_count();
  if (d < 2) throw input_error("enumerate_facets: need dimension >= 2");
  if (N < d + 1) throw degeneracy_error("enumerate_facets: too few generators to span");
  if (!all_finite(K.points)) throw input_error("enumerate_facets: non-finite generators");
  if (binomial_capped(static_cast<std::size_t>(N), static_cast<std::size_t>(d),
                      subset_budget) > subset_budget)
    throw budget_error("enumerate_facets: subset count exceeds budget");

  std::vector<Vec> gen(static_cast<std::size_t>(N));
  double scale = 1.0;
  for (Index i = 0; i < N; ++i) {
    gen[static_cast<std::size_t>(i)] = K.generator(i);
    scale = std::max(scale, gen[static_cast<std::size_t>(i)].lpNorm<Eigen::Infinity>());
  }

  // Affine span must be all of R^d.
  {
    Mat C(N - 1, d);
    for (Index i = 1; i < N; ++i)
      C.row(i - 1) = (gen[static_cast<std::size_t>(i)] - gen[0]).transpose();
    Eigen::FullPivLU<Mat> lu(C);
    lu.setThreshold(1e-10);
    if (lu.rank() < d)
      throw degeneracy_error("enumerate_facets: generators do not affinely span R^d");
  }

  const double tol_coord = 1e-9 * scale;
  std::map<std::vector<int>, Facet> found;

  CombinationIter it(static_cast<int>(N), static_cast<int>(d));
  if (!it.valid()) throw degeneracy_error("enumerate_facets: too few generators");
  do {
    Vec h;
    if (!subset_normal(K.points, it.idx, gen, h)) continue;
    const double hn = h.norm();
    const double tol = tol_coord * hn;
    const double c = h.dot(gen[static_cast<std::size_t>(it.idx[0])]);
    bool pos = false;
    bool neg = false;
    bool split = false;
    for (Index j = 0; j < N; ++j) {
      const double s = h.dot(gen[static_cast<std::size_t>(j)]) - c;
      if (s > tol) {
        pos = true;
      } else if (s < -tol) {
        neg = true;
      }
      if (pos && neg) {
        split = true;
        break;
      }
    }
    if (split) continue;
    Vec hu = h / hn;
    double cu = c / hn;
    if (pos) {  // flip so the hull sits on the <= side
      hu = -hu;
      cu = -cu;
    }
    std::vector<int> eq;
    for (Index j = 0; j < N; ++j) {
      if (std::abs(hu.dot(gen[static_cast<std::size_t>(j)]) - cu) <= tol_coord)
        eq.push_back(static_cast<int>(j));
    }
    Facet& slot = found[eq];
    if (slot.generators.empty()) {
      slot.generators = std::move(eq);
      slot.normal = std::move(hu);
      slot.offset = cu;
    }
  } while (it.next());

  FacetList fl;
  fl.facets.reserve(found.size());
  for (auto& [key, f] : found)
    if (!f.generators.empty()) fl.facets.push_back(std::move(f));
  if (fl.facets.empty()) throw degeneracy_error("enumerate_facets: no facets found");
  return fl;
}

namespace {

std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, double a, double b, double c) {
  std::vector<Vec2> out;
  const std::size_t n = poly.size();
  if (n == 0) return out;
  out.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    const double fp = a * p.x() + b * p.y() - c;
    const double fq = a * q.x() + b * q.y() - c;
    if (fp <= 0.0) out.push_back(p);
    if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) {
      const double t = fp / (fp - fq);
      out.emplace_back(p + t * (q - p));
    }
  }
  return out;
}

}  // namespace

SectionResult section_polygon(const VPolytope& K, const Plane& E, std::size_t subset_budget) {
  if (E.dim() != K.dim()) throw input_error("section_polygon: dimension mismatch");
  const FacetList fl = enumerate_facets(K, subset_budget);

  const double max_norm = K.max_generator_norm();
  const double R = 2.0 * max_norm + 1.0;
  std::vector<Vec2> poly = {Vec2(-R, -R), Vec2(R, -R), Vec2(R, R), Vec2(-R, R)};

  SectionResult res;
  for (const Facet& f : fl.facets) {
    const double a = f.normal.dot(E.u);
    const double b = f.normal.dot(E.v);
    if (std::hypot(a, b) <= 1e-13) {
      // Facet plane parallel to E: it either excludes the whole plane or is inert.
      if (f.offset < -1e-12 * std::max(1.0, max_norm)) {
        poly.clear();
        break;
      }
      continue;
    }
    poly = clip_halfplane(poly, a, b, f.offset);
    if (poly.empty()) break;
  }

  // The box must never survive; it would mean the facet list failed to close.
  for (const Vec2& p : poly) {
    if (p.lpNorm<Eigen::Infinity>() > max_norm + 0.5)
      throw internal_error("section_polygon: facet half-planes failed to bound the section");
  }

  // Merge near-coincident vertices, then enforce strict convex ordering.
  const double merge_tol = 1e-9;
  const double area_tol = 1e-12 * std::max(1.0, max_norm * max_norm);
  bool changed = true;
  while (changed && poly.size() > 1) {
    changed = false;
    std::vector<Vec2> next;
    next.reserve(poly.size());
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Vec2& p = poly[i];
      if (!next.empty() && (p - next.back()).norm() < merge_tol) {
        ++res.merged_vertices;
        changed = true;
        continue;
      }
      next.push_back(p);
    }
    if (next.size() > 1 && (next.front() - next.back()).norm() < merge_tol) {
      next.pop_back();
      ++res.merged_vertices;
      changed = true;
    }
    poly.swap(next);
    if (poly.size() < 3) break;
    std::vector<Vec2> convex;
    convex.reserve(poly.size());
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Vec2& a = poly[(i + poly.size() - 1) % poly.size()];
      const Vec2& b = poly[i];
      const Vec2& c = poly[(i + 1) % poly.size()];
      const double cross = (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
      if (cross <= area_tol) {
        ++res.merged_vertices;
        changed = true;
        continue;  // drop b
      }
      convex.push_back(b);
    }
    poly.swap(convex);
  }
  if (poly.size() <= 2 && !poly.empty()) {
    // A touching point or sliver; keep what survived, flag via merged count.
    if (poly.size() == 2 && (poly[0] - poly[1]).norm() < merge_tol) poly.pop_back();
  }
  res.polygon.vertices = std::move(poly);
  return res;
}

int polygon_edge_count(const Polygon2D& poly) {
  const std::size_t n = poly.vertices.size();
  if (n < 2) return 0;
  if (n == 2) return 1;
  return static_cast<int>(n);
}

double perimeter(const Polygon2D& poly) {
  const std::size_t n = poly.vertices.size();
  if (n < 2) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    s += (poly.vertices[(i + 1) % n] - poly.vertices[i]).norm();
  return s;
}

std::size_t VertexEdgeGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& a : adjacency) twice += a.size();
  return twice / 2;
}

VertexEdgeGraph vertex_edge_graph(const HPolytope& P, std::size_t subset_budget) {
  const Index n = P.rows();
  const Index d = P.dim();
  if (d < 1) throw input_error("vertex_edge_graph: empty dimension");
  if (P.rhs.size() != n) throw input_error("vertex_edge_graph: rhs size mismatch");
  if (!all_finite(P.normals) || !all_finite(P.rhs))
    throw input_error("vertex_edge_graph: non-finite input");
  if (binomial_capped(static_cast<std::size_t>(n), static_cast<std::size_t>(d),
                      subset_budget) > subset_budget)
    throw budget_error("vertex_edge_graph: subset count exceeds budget");
  {
    Eigen::FullPivLU<Mat> lu(P.normals);
    lu.setThreshold(1e-10);
    if (lu.rank() < d)
      throw degeneracy_error("vertex_edge_graph: constraint rows do not span (not pointed)");
  }

  struct Candidate {
    std::vector<int> basis;
    Vec x;
  };
  std::vector<Candidate> verts;

  std::vector<double> row_norm(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) row_norm[static_cast<std::size_t>(i)] = P.normals.row(i).norm();

  CombinationIter it(static_cast<int>(n), static_cast<int>(d));
  if (it.valid()) {
    Mat AI(d, d);
    Vec bI(d);
    do {
      for (Index r = 0; r < d; ++r) {
        AI.row(r) = P.normals.row(it.idx[static_cast<std::size_t>(r)]);
        bI[r] = P.rhs[it.idx[static_cast<std::size_t>(r)]];
      }
      Eigen::FullPivLU<Mat> lu(AI);
      lu.setThreshold(1e-10);
      if (!lu.isInvertible()) continue;
      Vec x = lu.solve(bI);
      bool feasible = true;
      for (Index j = 0; j < n && feasible; ++j) {
        const double tol =
            1e-9 * (1.0 + row_norm[static_cast<std::size_t>(j)] * (1.0 + x.norm()));
        if (P.normals.row(j).dot(x) > P.rhs[j] + tol) feasible = false;
      }
      if (!feasible) continue;
      // Unbounded-edge check: a relaxation direction no row blocks is a ray.
      const Mat Ainv = lu.inverse();
      for (Index r = 0; r < d; ++r) {
        const Vec y = -Ainv.col(r);
        bool blocked = false;
        for (Index j = 0; j < n; ++j) {
          const double den = P.normals.row(j).dot(y);
          if (den > 1e-12 * (1.0 + row_norm[static_cast<std::size_t>(j)] * y.norm())) {
            blocked = true;
            break;
          }
        }
        if (!blocked)
          throw unbounded_error("vertex_edge_graph: polytope has an unbounded edge");
      }
      verts.push_back(Candidate{it.idx, std::move(x)});
    } while (it.next());
  }
  if (verts.empty()) throw degeneracy_error("vertex_edge_graph: no vertices found");

  // Group bases that solve to the same point (degenerate vertices).
  const std::size_t nb = verts.size();
  std::vector<int> group(nb, -1);
  std::vector<Vec> pts;
  std::vector<std::vector<int>> tight;
  for (std::size_t i = 0; i < nb; ++i) {
    const double tol = 1e-8 * (1.0 + verts[i].x.norm());
    int g = -1;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if ((pts[k] - verts[i].x).lpNorm<Eigen::Infinity>() <= tol) {
        g = static_cast<int>(k);
        break;
      }
    }
    if (g < 0) {
      g = static_cast<int>(pts.size());
      pts.push_back(verts[i].x);
      tight.emplace_back();
    }
    group[i] = g;
    auto& t = tight[static_cast<std::size_t>(g)];
    for (int row : verts[i].basis)
      if (std::find(t.begin(), t.end(), row) == t.end()) t.push_back(row);
  }
  for (auto& t : tight) std::sort(t.begin(), t.end());

  // Adjacency: bases sharing d-1 tight rows; collapse to the group level.
  std::map<std::vector<int>, std::vector<std::size_t>> ridge;
  for (std::size_t i = 0; i < nb; ++i) {
    for (Index drop = 0; drop < d; ++drop) {
      std::vector<int> key;
      key.reserve(static_cast<std::size_t>(d) - 1);
      for (Index r = 0; r < d; ++r)
        if (r != drop) key.push_back(verts[i].basis[static_cast<std::size_t>(r)]);
      ridge[key].push_back(i);
    }
  }
  std::vector<std::vector<int>> adj(pts.size());
  for (const auto& [key, members] : ridge) {
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const int ga = group[members[a]];
        const int gb = group[members[b]];
        if (ga == gb) continue;
        adj[static_cast<std::size_t>(ga)].push_back(gb);
        adj[static_cast<std::size_t>(gb)].push_back(ga);
      }
    }
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }

  VertexEdgeGraph g;
  g.points = std::move(pts);
  g.tight_rows = std::move(tight);
  g.adjacency = std::move(adj);
  return g;
}

int graph_diameter(const VertexEdgeGraph& g) {
  const std::size_t nv = g.points.size();
  if (nv == 0) throw input_error("graph_diameter: empty graph");
  int diam = 0;
  std::vector<int> dist(nv);
  for (std::size_t s = 0; s < nv; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::queue<std::size_t> q;
    dist[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const std::size_t cur = q.front();
      q.pop();
      for (int nb : g.adjacency[cur]) {
        if (dist[static_cast<std::size_t>(nb)] < 0) {
          dist[static_cast<std::size_t>(nb)] = dist[cur] + 1;
          q.push(static_cast<std::size_t>(nb));
        }
      }
    }
    for (std::size_t v = 0; v < nv; ++v) {
      if (dist[v] < 0)
        throw degeneracy_error("graph_diameter: vertex-edge graph is disconnected");
      diam = std::max(diam, dist[v]);
    }
  }
  return diam;
}

}  // namespace shadowbench
