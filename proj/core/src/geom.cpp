#include "sphqmc/geom.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>

#include "hull.hpp"
#include "sphqmc/error.hpp"
#include "sphqmc/parallel.hpp"
#include "sphqmc/special.hpp"

namespace sphqmc {
namespace {

using detail::Vec3;
constexpr double kPi = std::numbers::pi;
constexpr double kDisjointSlack = 1e-12;

std::vector<double> circle_angles(const PointSet& ps) {
  std::vector<double> a(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    auto x = ps.point(i);
    double t = std::atan2(x[1], x[0]);
    if (t < 0.0) t += 2.0 * kPi;
    a[i] = t;
  }
  std::sort(a.begin(), a.end());
  return a;
}

// Gap k runs from angle[k] to angle[k+1] (wrapping).
std::vector<Hole> circle_gaps(const PointSet& ps) {
  const auto a = circle_angles(ps);
  std::vector<Hole> holes;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double lo = a[k];
    const double hi = (k + 1 < a.size()) ? a[k + 1] : a[0] + 2.0 * kPi;
    const double mid = 0.5 * (lo + hi);
    holes.push_back(Hole{{std::cos(mid), std::sin(mid)}, 0.5 * (hi - lo)});
  }
  return holes;
}

// Distance from c to the nearest point, computed exactly by a full scan.
double empty_radius(const PointSet& ps, const Vec3& c) {
  double best = -2.0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto x = ps.point3(i);
    const double d = detail::dot(c, x);
    if (d > best) {
      best = d;
      arg = i;
    }
  }
  return detail::angle_between(c, ps.point3(arg));
}

Hole make_hole(const Vec3& c, double r) { return Hole{{c[0], c[1], c[2]}, r}; }

// Empty caps of a point set on S^2 that is too small or too flat for a hull.
std::vector<Hole> degenerate_sphere_holes(const PointSet& ps) {
  const std::size_t n = ps.size();
  std::vector<Hole> holes;
  const Vec3 x0 = ps.point3(0);
  if (n == 1) {
    holes.push_back(make_hole({-x0[0], -x0[1], -x0[2]}, kPi));
    return holes;
  }
  // the largest cross product of chords gives the common plane normal
  Vec3 normal{0.0, 0.0, 0.0};
  double best = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec3 c = detail::cross(detail::sub(ps.point3(i), x0), detail::sub(ps.point3(j), x0));
      if (detail::dot(c, c) > best) {
        best = detail::dot(c, c);
        normal = c;
      }
    }
  }
  if (best == 0.0) {
    // two points: the bisecting great circle contains the hole centers
    const Vec3 x1 = ps.point3(1);
    const Vec3 s{x0[0] + x1[0], x0[1] + x1[1], x0[2] + x1[2]};
    Vec3 c;
    if (detail::dot(s, s) > 1e-24) {
      c = detail::normalized({-s[0], -s[1], -s[2]});
    } else {
      const Vec3 e = std::fabs(x0[0]) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
      c = detail::normalized(detail::cross(x0, e));
    }
    holes.push_back(make_hole(c, empty_radius(ps, c)));
    return holes;
  }
  const Vec3 nrm = detail::normalized(normal);
  for (const Vec3& c : {nrm, Vec3{-nrm[0], -nrm[1], -nrm[2]}}) {
    holes.push_back(make_hole(c, empty_radius(ps, c)));
  }
  return holes;
}

std::vector<Hole> sphere_holes(const PointSet& ps) {
  auto facets = detail::spherical_delaunay(ps);
  if (!facets) return degenerate_sphere_holes(ps);
  std::vector<Hole> holes(facets->size());
  parallel_for(facets->size(), [&](std::size_t f) {
    const auto& df = (*facets)[f];
    holes[f] = make_hole(df.center, std::min(df.radius, empty_radius(ps, df.center)));
  });
  return holes;
}

bool lexicographic_less(const std::vector<double>& a, const std::vector<double>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::vector<double> tangent_basis(std::span<const double> y) {
  const std::size_t n = y.size();
  std::vector<double> basis;
  for (std::size_t k = 0; k < n && basis.size() < (n - 1) * n; ++k) {
    std::vector<double> e(n, 0.0);
    e[k] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      double d = 0.0;
      for (std::size_t i = 0; i < n; ++i) d += e[i] * y[i];
      for (std::size_t i = 0; i < n; ++i) e[i] -= d * y[i];
      for (std::size_t b = 0; b < basis.size() / n; ++b) {
        double db = 0.0;
        for (std::size_t i = 0; i < n; ++i) db += e[i] * basis[b * n + i];
        for (std::size_t i = 0; i < n; ++i) e[i] -= db * basis[b * n + i];
      }
    }
    double r = 0.0;
    for (double v : e) r += v * v;
    r = std::sqrt(r);
    if (r < 1e-6) continue;
    for (double v : e) basis.push_back(v / r);
  }
  return basis;
}

struct Candidate {
  double value;
  std::vector<double> y;
};

void keep_top(std::vector<Candidate>& top, Candidate c, std::size_t k) {
  if (top.size() < k) {
    top.push_back(std::move(c));
  } else {
    auto worst = std::min_element(top.begin(), top.end(),
                                  [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
    if (c.value > worst->value) *worst = std::move(c);
  }
}

std::vector<double> fibonacci_node(std::size_t j, std::size_t count) {
  const double golden_angle = 2.0 * kPi / (std::numbers::phi * std::numbers::phi);
  const double z = 1.0 - (2.0 * j + 1.0) / static_cast<double>(count);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  const double a = std::fmod(golden_angle * static_cast<double>(j), 2.0 * kPi);
  return {r * std::cos(a), r * std::sin(a), z};
}

}  // namespace

const char* to_string(CoveringMethod m) {
  switch (m) {
    case CoveringMethod::exact_circle: return "exact_circle";
    case CoveringMethod::hull_facets: return "hull_facets";
    case CoveringMethod::grid: return "grid";
  }
  return "unknown";
}

NearestPoint::NearestPoint(const PointSet& ps) : ps_(&ps) {
  if (ps.dim() == 1) {
    sorted_angles_ = circle_angles(ps);
    return;
  }
  if (ps.dim() != 2) return;
  rows_ = std::max(1, static_cast<int>(std::lround(std::sqrt(ps.size() / 2.0))));
  cols_.resize(rows_);
  row_start_.resize(rows_ + 1);
  std::size_t total = 0;
  for (int r = 0; r < rows_; ++r) {
    const double zmid = -1.0 + (2.0 * r + 1.0) / rows_;
    cols_[r] = std::max(1, static_cast<int>(std::lround(2.0 * rows_ * std::sqrt(1.0 - zmid * zmid))));
    row_start_[r] = total;
    total += cols_[r];
  }
  row_start_[rows_] = total;
  buckets_.resize(total);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    auto x = ps.point(i);
    double lon = std::atan2(x[1], x[0]);
    if (lon < 0.0) lon += 2.0 * kPi;
    buckets_[bucket_of(x[2], lon)].push_back(i);
  }
}

std::size_t NearestPoint::bucket_of(double z, double lon) const {
  const int r = std::clamp(static_cast<int>(std::floor((z + 1.0) / 2.0 * rows_)), 0, rows_ - 1);
  const int c = std::clamp(static_cast<int>(std::floor(lon / (2.0 * kPi) * cols_[r])), 0, cols_[r] - 1);
  return row_start_[r] + static_cast<std::size_t>(c);
}

double NearestPoint::distance(std::span<const double> y) const {
  const PointSet& ps = *ps_;
  if (ps.dim() == 1) {
    double t = std::atan2(y[1], y[0]);
    if (t < 0.0) t += 2.0 * kPi;
    const auto& a = sorted_angles_;
    auto it = std::lower_bound(a.begin(), a.end(), t);
    const double after = (it == a.end()) ? a.front() + 2.0 * kPi : *it;
    const double before = (it == a.begin()) ? a.back() - 2.0 * kPi : *(it - 1);
    return std::min(after - t, t - before);
  }
  auto nearest_of = [&](const std::vector<std::size_t>& idx, double& best_dot, std::size_t& arg) {
    for (std::size_t i : idx) {
      auto x = ps.point(i);
      double d = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) d += x[k] * y[k];
      if (d > best_dot) {
        best_dot = d;
        arg = i;
      }
    }
  };
  double best_dot = -2.0;
  std::size_t arg = 0;
  if (ps.dim() != 2) {
    for (std::size_t i = 0; i < ps.size(); ++i) {
      auto x = ps.point(i);
      double d = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) d += x[k] * y[k];
      if (d > best_dot) {
        best_dot = d;
        arg = i;
      }
    }
    return geodesic_distance(ps.point(arg), y);
  }
  const double colat = std::acos(std::clamp(y[2], -1.0, 1.0));
  double lon = std::atan2(y[1], y[0]);
  if (lon < 0.0) lon += 2.0 * kPi;
  double rho = 2.0 * std::sqrt(4.0 * kPi / static_cast<double>(ps.size()));
  for (;;) {
    if (rho >= kPi) {
      for (const auto& b : buckets_) nearest_of(b, best_dot, arg);
      return geodesic_distance(ps.point(arg), y);
    }
    const double zlo = std::cos(std::min(kPi, colat + rho));
    const double zhi = std::cos(std::max(0.0, colat - rho));
    const int r0 = std::clamp(static_cast<int>(std::floor((zlo + 1.0) / 2.0 * rows_)), 0, rows_ - 1);
    const int r1 = std::clamp(static_cast<int>(std::floor((zhi + 1.0) / 2.0 * rows_)), 0, rows_ - 1);
    const bool all_lon = colat - rho <= 0.0 || colat + rho >= kPi;
    const double half = all_lon ? kPi : std::asin(std::min(1.0, std::sin(rho) / std::sin(colat)));
    for (int r = r0; r <= r1; ++r) {
      const int nc = cols_[r];
      if (all_lon || half >= kPi / 2.0 || nc <= 2) {
        for (int c = 0; c < nc; ++c) nearest_of(buckets_[row_start_[r] + c], best_dot, arg);
        continue;
      }
      const double width = 2.0 * kPi / nc;
      const int c0 = static_cast<int>(std::floor((lon - half) / width));
      const int c1 = static_cast<int>(std::floor((lon + half) / width));
      for (int c = c0; c <= std::min(c1, c0 + nc - 1); ++c) {
        const int cc = ((c % nc) + nc) % nc;
        nearest_of(buckets_[row_start_[r] + cc], best_dot, arg);
      }
    }
    if (best_dot > -2.0) {
      const double d = geodesic_distance(ps.point(arg), y);
      if (d <= rho) return d;
    }
    rho *= 2.0;
  }
}

std::vector<double> refine_maximum(int dim, const std::function<double(std::span<const double>)>& f,
                                   std::vector<double> y, double step, int halvings, double& value) {
  const auto n = static_cast<std::size_t>(dim + 1);
  value = f(y);
  std::vector<double> trial(n);
  int remaining = halvings;
  int moves = 0;
  while (remaining > 0 && moves < 100000) {
    const auto basis = tangent_basis(y);
    bool improved = false;
    for (std::size_t b = 0; b < basis.size() / n && !improved; ++b) {
      for (double sign : {1.0, -1.0}) {
        double r = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          trial[i] = std::cos(step) * y[i] + sign * std::sin(step) * basis[b * n + i];
          r += trial[i] * trial[i];
        }
        r = std::sqrt(r);
        for (double& v : trial) v /= r;
        const double ft = f(trial);
        if (ft > value) {
          value = ft;
          y = trial;
          improved = true;
          ++moves;
          break;
        }
      }
    }
    if (!improved) {
      step *= 0.5;
      --remaining;
    }
  }
  return y;
}

CoveringResult grid_covering(const PointSet& ps, double resolution) {
  if (!(resolution > 0.0)) throw InvalidArgument("grid resolution must be positive");
  const NearestPoint nearest(ps);
  auto f = [&](std::span<const double> y) { return nearest.distance(y); };
  const int d = ps.dim();
  std::size_t count = 0;
  double reported = resolution;
  std::function<std::vector<double>(std::size_t)> node;
  if (d == 1) {
    count = static_cast<std::size_t>(std::ceil(2.0 * kPi / resolution));
    node = [count](std::size_t j) {
      const double a = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(count);
      return std::vector<double>{std::cos(a), std::sin(a)};
    };
  } else if (d == 2) {
    const double side = std::ceil(4.0 / resolution);
    count = static_cast<std::size_t>(side * side);
    node = [count](std::size_t j) { return fibonacci_node(j, count); };
  } else {
    const double wanted = std::pow(4.0 / resolution, d);
    count = static_cast<std::size_t>(std::min(wanted, 2e6));
    reported = std::pow(sphere_area(d) / static_cast<double>(count), 1.0 / d) * 2.0;
    node = [count, d](std::size_t j) {
      std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ (j * 0xbf58476d1ce4e5b9ULL));
      std::normal_distribution<double> g;
      std::vector<double> y(d + 1);
      double r = 0.0;
      for (double& v : y) {
        v = g(rng);
        r += v * v;
      }
      r = std::sqrt(r);
      for (double& v : y) v /= r;
      return y;
    };
  }
  constexpr std::size_t kChunk = 16384;
  constexpr std::size_t kTop = 8;
  const std::size_t chunks = (count + kChunk - 1) / kChunk;
  std::vector<std::vector<Candidate>> tops(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    std::vector<Candidate> top;
    for (std::size_t j = c * kChunk; j < std::min(count, (c + 1) * kChunk); ++j) {
      auto y = node(j);
      const double v = f(y);
      if (top.size() < kTop || v > top.front().value) {
        keep_top(top, Candidate{v, std::move(y)}, kTop);
        std::sort(top.begin(), top.end(),
                  [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
      }
    }
    tops[c] = std::move(top);
  });
  std::vector<Candidate> all;
  for (auto& t : tops) {
    for (auto& c : t) keep_top(all, std::move(c), kTop);
  }
  CoveringResult out;
  out.method = CoveringMethod::grid;
  out.resolution = reported;
  out.radius = -1.0;
  for (auto& c : all) {
    double v = 0.0;
    auto y = refine_maximum(d, f, c.y, resolution, 40, v);
    if (v > out.radius) {
      out.radius = v;
      out.hole = Hole{std::move(y), v};
    }
  }
  return out;
}

double grid_covering_estimate(const PointSet& ps, double resolution) {
  return grid_covering(ps, resolution).radius;
}

std::vector<Hole> maximal_holes(const PointSet& ps) {
  if (ps.dim() == 1) return circle_gaps(ps);
  if (ps.dim() == 2) return sphere_holes(ps);
  throw InvalidArgument("maximal holes are available on S^1 and S^2 only");
}

CoveringResult covering_radius(const PointSet& ps, double grid_resolution) {
  if (ps.dim() > 2) return grid_covering(ps, grid_resolution);
  const auto holes = maximal_holes(ps);
  CoveringResult out;
  out.method = ps.dim() == 1 ? CoveringMethod::exact_circle : CoveringMethod::hull_facets;
  out.radius = -1.0;
  for (const auto& h : holes) {
    if (h.radius > out.radius) {
      out.radius = h.radius;
      out.hole = h;
    }
  }
  return out;
}

double separation(const PointSet& ps) {
  const std::size_t n = ps.size();
  if (n < 2) throw InvalidArgument("separation requires at least two points");
  if (ps.dim() == 1) {
    const auto a = circle_angles(ps);
    double best = a.front() + 2.0 * kPi - a.back();
    for (std::size_t k = 1; k < n; ++k) best = std::min(best, a[k] - a[k - 1]);
    return best;
  }
  struct Best {
    double d2 = 1e300;
    std::size_t i = 0;
    std::size_t j = 0;
  };
  std::vector<Best> rows(n);
  const std::size_t w = static_cast<std::size_t>(ps.ambient());
  const double* c = ps.coords().data();
  parallel_for(n, [&](std::size_t i) {
    Best b;
    for (std::size_t j = i + 1; j < n; ++j) {
      double d2 = 0.0;
      for (std::size_t k = 0; k < w; ++k) {
        const double t = c[i * w + k] - c[j * w + k];
        d2 += t * t;
      }
      if (d2 < b.d2) b = {d2, i, j};
    }
    rows[i] = b;
  });
  Best best;
  for (const auto& b : rows) {
    if (b.d2 < best.d2) best = b;
  }
  return geodesic_distance(ps.point(best.i), ps.point(best.j));
}

QualityReport mesh_ratio(const PointSet& ps, double grid_resolution) {
  const CoveringResult cov = covering_radius(ps, grid_resolution);
  QualityReport r;
  r.covering = cov.radius;
  r.separation = separation(ps);
  r.mesh_ratio = r.covering / r.separation;
  r.method = cov.method;
  r.resolution = cov.resolution;
  r.hole = cov.hole;
  return r;
}

std::vector<Hole> ordered_avoiding_packing(const PointSet& ps, std::size_t max_holes) {
  if (ps.dim() != 1 && ps.dim() != 2) {
    throw InvalidArgument("ordered packings are available on S^1 and S^2 only");
  }
  if (ps.dim() == 2 && ps.size() < 4) {
    throw InvalidArgument("ordered packings on S^2 require at least 4 points");
  }
  auto holes = maximal_holes(ps);
  std::sort(holes.begin(), holes.end(), [](const Hole& a, const Hole& b) {
    if (a.radius != b.radius) return a.radius > b.radius;
    return lexicographic_less(a.center, b.center);
  });
  std::vector<Hole> chosen;
  for (auto& h : holes) {
    if (chosen.size() >= max_holes) break;
    bool disjoint = true;
    for (const auto& c : chosen) {
      if (!(geodesic_distance(h.center, c.center) > h.radius + c.radius + kDisjointSlack)) {
        disjoint = false;
        break;
      }
    }
    if (disjoint) chosen.push_back(std::move(h));
  }
  return chosen;
}

}  // namespace sphqmc
