#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sphqmc {

// Ordered, immutable set of unit vectors in R^{d+1}.
class PointSet {
 public:
  // coords holds size() * (dim + 1) values, row-major.
  PointSet(int dim, std::vector<double> coords, std::string label = {},
           bool allow_duplicates = false);

  int dim() const { return dim_; }
  int ambient() const { return dim_ + 1; }
  std::size_t size() const { return coords_.size() / static_cast<std::size_t>(dim_ + 1); }
  const std::string& label() const { return label_; }
  const std::vector<double>& coords() const { return coords_; }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dim_ + 1),
            static_cast<std::size_t>(dim_ + 1)};
  }
  // First three coordinates, zero padded; meaningful for d <= 2.
  std::array<double, 3> point3(std::size_t i) const;

  PointSet with_label(std::string label) const;

 private:
  int dim_;
  std::vector<double> coords_;
  std::string label_;
};

enum class Family {
  equal_spaced_circle,
  circle_removed,
  fibonacci_s2,
  random_uniform,
  equal_area_s2,
  cap_depleted,
};

struct GeneratorSpec {
  Family family = Family::equal_spaced_circle;
  long n = 0;
  // circle_removed
  long removed = 0;
  bool consecutive = true;
  // random_uniform
  std::uint64_t seed = 0;
  int dim = 2;
  // cap_depleted
  std::shared_ptr<const GeneratorSpec> base;
  std::vector<double> cap_center;
  double cap_radius = 0.0;

  static GeneratorSpec equal_spaced_circle(long n);
  static GeneratorSpec circle_removed(long n, long removed, bool consecutive = true);
  static GeneratorSpec fibonacci_s2(long n);
  static GeneratorSpec random_uniform(long n, std::uint64_t seed, int dim = 2);
  static GeneratorSpec equal_area_s2(long n);
  static GeneratorSpec cap_depleted(const GeneratorSpec& base, std::vector<double> center,
                                    double radius);

  // Sphere dimension of the generated points.
  int sphere_dim() const;
  void validate() const;

  // Text form "family:key=value,...", e.g. "circle_removed:n=256,m=1".
  std::string to_string() const;
  static GeneratorSpec parse(std::string_view text);
};

PointSet generate(const GeneratorSpec& spec);

// Text format: one point per line, d+1 whitespace-separated reals, '#' comments.
PointSet read_points(std::istream& in, const std::string& label = {});
void write_points(std::ostream& out, const PointSet& ps);
PointSet load(const std::filesystem::path& path);
void save(const PointSet& ps, const std::filesystem::path& path);

// Geodesic distance on the sphere, accurate for nearby and nearly antipodal points.
double geodesic_distance(std::span<const double> x, std::span<const double> y);

// Applies a (d+1)x(d+1) row-major matrix to every point.
PointSet transformed(const PointSet& ps, std::span<const double> matrix);

// Uniformly random rotation matrix of size n x n (row-major), deterministic in seed.
std::vector<double> random_rotation(int n, std::uint64_t seed);

}  // namespace sphqmc
