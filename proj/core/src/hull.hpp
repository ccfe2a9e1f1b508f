#pragma once

#include <array>
#include <optional>
#include <vector>

#include "sphqmc/pointset.hpp"

namespace sphqmc::detail {

using Vec3 = std::array<double, 3>;

struct DelaunayFacet {
  std::array<int, 3> v;  // counter-clockwise seen from outside the sphere
  Vec3 center;           // spherical circumcenter (outward facet normal)
  double radius = 0.0;   // geodesic circumradius
};

// Triangulation of points on S^2 from their convex hull. Every point becomes a vertex:
// ties between cocircular points are broken by a tiny tangential perturbation of the
// combinatorics only; centers and radii use the original coordinates.
// Returns nullopt when fewer than 4 points are given or all points are coplanar.
std::optional<std::vector<DelaunayFacet>> spherical_delaunay(const PointSet& ps);

// For each vertex, the indices of its incident facets in counter-clockwise order.
std::vector<std::vector<int>> vertex_fans(const std::vector<DelaunayFacet>& facets,
                                          std::size_t vertex_count);

inline Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
Vec3 normalized(const Vec3& a);
double angle_between(const Vec3& a, const Vec3& b);

}  // namespace sphqmc::detail
