#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "sphqmc/pointset.hpp"

namespace sphqmc {

struct Hole {
  std::vector<double> center;  // unit vector
  double radius = 0.0;         // geodesic radius
};

enum class CoveringMethod { exact_circle, hull_facets, grid };

const char* to_string(CoveringMethod m);

struct CoveringResult {
  double radius = 0.0;
  Hole hole;
  CoveringMethod method = CoveringMethod::grid;
  double resolution = 0.0;  // grid spacing; 0 for exact methods
};

struct QualityReport {
  double covering = 0.0;
  double separation = 0.0;
  double mesh_ratio = 0.0;
  CoveringMethod method = CoveringMethod::grid;
  double resolution = 0.0;
  Hole hole;
};

// Largest empty cap. Exact on S^1 and S^2, grid estimate otherwise.
CoveringResult covering_radius(const PointSet& ps, double grid_resolution = 1e-3);

// Minimal geodesic distance between distinct points; requires N >= 2.
double separation(const PointSet& ps);

QualityReport mesh_ratio(const PointSet& ps, double grid_resolution = 1e-3);

// Empty caps bounded by hull facets (S^2) or gaps (S^1), each with its exact radius.
std::vector<Hole> maximal_holes(const PointSet& ps);

// Greedy ordered X_N-avoiding packing: pairwise disjoint maximal holes with
// non-increasing radii.
std::vector<Hole> ordered_avoiding_packing(const PointSet& ps, std::size_t max_holes);

// Max-min distance over a quasi-uniform grid of spacing <= resolution, refined locally.
double grid_covering_estimate(const PointSet& ps, double resolution);
CoveringResult grid_covering(const PointSet& ps, double resolution);

// Distance from y to the nearest point of a point set, with a bucketed index on S^2.
class NearestPoint {
 public:
  explicit NearestPoint(const PointSet& ps);
  double distance(std::span<const double> y) const;

 private:
  const PointSet* ps_;
  std::vector<double> sorted_angles_;  // S^1
  int rows_ = 0;                       // S^2 buckets
  std::vector<int> cols_;
  std::vector<std::size_t> row_start_;
  std::vector<std::vector<std::size_t>> buckets_;
  std::size_t bucket_of(double z, double lon) const;
};

// Local maximization of f on S^d from a start point by compass search with step halving.
// Returns the best point found and updates value.
std::vector<double> refine_maximum(int dim, const std::function<double(std::span<const double>)>& f,
                                   std::vector<double> start, double step, int halvings,
                                   double& value);

}  // namespace sphqmc
