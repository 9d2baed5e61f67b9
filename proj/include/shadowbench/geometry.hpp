#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "shadowbench/types.hpp"

namespace shadowbench {

/// Intersection of half-spaces <a_i, x> <= b_i; rows of `normals` are the a_i.
struct HPolytope {
  Mat normals;  // n x d
  Vec rhs;      // n

  Index rows() const { return normals.rows(); }
  Index dim() const { return normals.cols(); }
};

/// Convex hull of the rows of `points`, optionally together with the origin.
/// When the origin is included it is addressed as generator index n (last).
struct VPolytope {
  Mat points;  // n x d
  bool include_origin = false;

  Index dim() const { return points.cols(); }
  Index generator_count() const { return points.rows() + (include_origin ? 1 : 0); }
  Vec generator(Index i) const {
    return i < points.rows() ? Vec(points.row(i).transpose()) : Vec(Vec::Zero(dim()));
  }
  double max_generator_norm() const;
};

/// Two-dimensional subspace through the origin, orthonormal basis (u, v).
struct Plane {
  Vec u;
  Vec v;
  std::optional<std::pair<Vec, Vec>> spanned_by;  // original (z0, z) if built from one

  Index dim() const { return u.size(); }
};

/// Convex polygon in plane coordinates, vertices in counter-clockwise order.
struct Polygon2D {
  std::vector<Vec2> vertices;
};

struct Facet {
  std::vector<int> generators;  // indices lying on the facet hyperplane
  Vec normal;                   // outward unit normal
  double offset = 0.0;          // <normal, x> = offset on the facet
};

struct FacetList {
  std::vector<Facet> facets;
};

struct SectionResult {
  Polygon2D polygon;
  int merged_vertices = 0;  // near-duplicate or non-convex vertices removed
  bool empty() const { return polygon.vertices.empty(); }
};

inline constexpr std::size_t kDefaultSubsetBudget = 10'000'000;

/// Polar dual of {x : <a_i, x> <= 1}: conv(0, a_1, ..., a_n).
/// Requires the canonical unit right-hand side.
VPolytope polar_of_H(const HPolytope& P);

/// Orthonormal basis of span(z0, z) with u parallel to z0 and <z, v> > 0.
Plane plane_from_span(const Vec& z0, const Vec& z);

/// All facets of the hull, found by testing every d-subset of generators for
/// one-sidedness. Subsets sharing a supporting hyperplane are merged, so each
/// geometric facet appears once with its full equality set.
FacetList enumerate_facets(const VPolytope& K, std::size_t subset_budget = kDefaultSubsetBudget);

/// K intersected with span(u, v), expressed in (u, v) coordinates.
/// Empty polygon when the plane misses K.
SectionResult section_polygon(const VPolytope& K, const Plane& E,
                              std::size_t subset_budget = kDefaultSubsetBudget);

int polygon_edge_count(const Polygon2D& poly);

/// Total length of the closed boundary; 0 for empty or single-point polygons.
double perimeter(const Polygon2D& poly);

/// Vertices (feasible nondegenerate basis solutions) and the edges joining
/// bases that share d-1 tight rows.
struct VertexEdgeGraph {
  std::vector<Vec> points;
  std::vector<std::vector<int>> tight_rows;  // per vertex, sorted
  std::vector<std::vector<int>> adjacency;   // per vertex, sorted neighbor ids
  std::size_t edge_count() const;
};

VertexEdgeGraph vertex_edge_graph(const HPolytope& P, std::size_t subset_budget = 1'000'000);

/// Graph diameter by breadth-first search from every vertex.
int graph_diameter(const VertexEdgeGraph& g);

}  // namespace shadowbench
