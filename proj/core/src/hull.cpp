#include "hull.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <unordered_map>

namespace sphqmc::detail {
namespace {

constexpr double kPerturbation = 1e-10;
constexpr double kPlanarTol = 1e-10;

std::uint64_t edge_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

double orient(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& p) {
  return dot(cross(sub(b, a), sub(c, a)), sub(p, a));
}

struct Face {
  std::array<int, 3> v;
  bool alive = true;
};

}  // namespace

Vec3 normalized(const Vec3& a) {
  const double r = std::sqrt(dot(a, a));
  return {a[0] / r, a[1] / r, a[2] / r};
}

double angle_between(const Vec3& a, const Vec3& b) {
  const Vec3 d = sub(a, b);
  const Vec3 s = {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
  return 2.0 * std::atan2(std::sqrt(dot(d, d)), std::sqrt(dot(s, s)));
}

std::optional<std::vector<DelaunayFacet>> spherical_delaunay(const PointSet& ps) {
  if (ps.dim() != 2 || ps.size() < 4) return std::nullopt;
  const int n = static_cast<int>(ps.size());
  std::vector<Vec3> orig(n);
  for (int i = 0; i < n; ++i) orig[i] = ps.point3(i);

  // initial simplex from the original coordinates
  int i0 = 0;
  int i1 = 0;
  double best = -1.0;
  for (int i = 0; i < n; ++i) {
    const Vec3 d = sub(orig[i], orig[i0]);
    if (dot(d, d) > best) {
      best = dot(d, d);
      i1 = i;
    }
  }
  int i2 = -1;
  best = -1.0;
  const Vec3 e01 = sub(orig[i1], orig[i0]);
  for (int i = 0; i < n; ++i) {
    const Vec3 c = cross(e01, sub(orig[i], orig[i0]));
    if (dot(c, c) > best) {
      best = dot(c, c);
      i2 = i;
    }
  }
  const Vec3 normal = normalized(cross(e01, sub(orig[i2], orig[i0])));
  int i3 = -1;
  best = -1.0;
  for (int i = 0; i < n; ++i) {
    const double h = std::fabs(dot(normal, sub(orig[i], orig[i0])));
    if (h > best) {
      best = h;
      i3 = i;
    }
  }
  if (best < kPlanarTol) return std::nullopt;

  std::vector<Vec3> pts(orig);
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> gauss;
  for (auto& p : pts) {
    Vec3 t{gauss(rng), gauss(rng), gauss(rng)};
    const double along = dot(t, p);
    t = {t[0] - along * p[0], t[1] - along * p[1], t[2] - along * p[2]};
    const Vec3 u = normalized(t);
    p = {p[0] + kPerturbation * u[0], p[1] + kPerturbation * u[1], p[2] + kPerturbation * u[2]};
  }

  std::vector<Face> faces;
  std::unordered_map<std::uint64_t, int> owner;
  owner.reserve(static_cast<std::size_t>(6 * n));
  auto add_face = [&](int a, int b, int c) {
    const int id = static_cast<int>(faces.size());
    faces.push_back(Face{{a, b, c}});
    owner[edge_key(a, b)] = id;
    owner[edge_key(b, c)] = id;
    owner[edge_key(c, a)] = id;
  };
  const std::array<int, 4> s = {i0, i1, i2, i3};
  const std::array<std::array<int, 4>, 4> combos = {{{0, 1, 2, 3}, {0, 1, 3, 2}, {0, 2, 3, 1}, {1, 2, 3, 0}}};
  for (const auto& c : combos) {
    int a = s[c[0]];
    int b = s[c[1]];
    const int d = s[c[2]];
    if (orient(pts[a], pts[b], pts[d], pts[s[c[3]]]) > 0.0) std::swap(a, b);
    add_face(a, b, d);
  }

  std::vector<int> visible;
  std::vector<std::pair<int, int>> horizon;
  std::vector<char> is_visible;
  for (int p = 0; p < n; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    visible.clear();
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
      if (!faces[f].alive) continue;
      const auto& v = faces[f].v;
      if (orient(pts[v[0]], pts[v[1]], pts[v[2]], pts[p]) > 0.0) visible.push_back(f);
    }
    if (visible.empty()) continue;
    is_visible.assign(faces.size(), 0);
    for (int f : visible) is_visible[f] = 1;
    horizon.clear();
    for (int f : visible) {
      const auto& v = faces[f].v;
      for (int k = 0; k < 3; ++k) {
        const int a = v[k];
        const int b = v[(k + 1) % 3];
        auto it = owner.find(edge_key(b, a));
        if (it == owner.end() || !is_visible[it->second]) horizon.emplace_back(a, b);
      }
    }
    for (int f : visible) {
      faces[f].alive = false;
      const auto& v = faces[f].v;
      for (int k = 0; k < 3; ++k) {
        auto it = owner.find(edge_key(v[k], v[(k + 1) % 3]));
        if (it != owner.end() && it->second == f) owner.erase(it);
      }
    }
    for (const auto& [a, b] : horizon) add_face(a, b, p);
  }

  std::vector<DelaunayFacet> out;
  for (const auto& f : faces) {
    if (!f.alive) continue;
    DelaunayFacet df;
    df.v = f.v;
    const Vec3& a = orig[f.v[0]];
    const Vec3& b = orig[f.v[1]];
    const Vec3& c = orig[f.v[2]];
    Vec3 nrm = cross(sub(b, a), sub(c, a));
    if (dot(nrm, nrm) == 0.0) nrm = cross(sub(pts[f.v[1]], pts[f.v[0]]), sub(pts[f.v[2]], pts[f.v[0]]));
    df.center = normalized(nrm);
    df.radius = std::max({angle_between(df.center, a), angle_between(df.center, b),
                          angle_between(df.center, c)});
    out.push_back(df);
  }
  return out;
}

std::vector<std::vector<int>> vertex_fans(const std::vector<DelaunayFacet>& facets,
                                          std::size_t vertex_count) {
  std::unordered_map<std::uint64_t, int> owner;
  owner.reserve(3 * facets.size());
  std::vector<int> first(vertex_count, -1);
  for (int f = 0; f < static_cast<int>(facets.size()); ++f) {
    const auto& v = facets[f].v;
    for (int k = 0; k < 3; ++k) {
      owner[edge_key(v[k], v[(k + 1) % 3])] = f;
      if (first[v[k]] < 0) first[v[k]] = f;
    }
  }
  std::vector<std::vector<int>> fans(vertex_count);
  for (std::size_t a = 0; a < vertex_count; ++a) {
    const int start = first[a];
    if (start < 0) continue;
    int f = start;
    do {
      fans[a].push_back(f);
      const auto& v = facets[f].v;
      int k = 0;
      while (v[k] != static_cast<int>(a)) ++k;
      const int last = v[(k + 2) % 3];
      auto it = owner.find(edge_key(static_cast<int>(a), last));
      if (it == owner.end()) break;
      f = it->second;
    } while (f != start && fans[a].size() <= facets.size());
  }
  return fans;
}

}  // namespace sphqmc::detail
