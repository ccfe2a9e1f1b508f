#include "sphqmc/wce.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include <boost/math/tools/roots.hpp>

#include "hull.hpp"
#include "sphqmc/error.hpp"
#include "sphqmc/geom.hpp"
#include "sphqmc/parallel.hpp"
#include "sphqmc/quadrature.hpp"
#include "sphqmc/special.hpp"

namespace sphqmc {
namespace {

constexpr double kPi = std::numbers::pi;
using detail::Vec3;

double angle_from_chords(const double* x, const double* y, std::size_t n) {
  double dm = 0.0;
  double dp = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = x[k] - y[k];
    const double b = x[k] + y[k];
    dm += a * a;
    dp += b * b;
  }
  return 2.0 * std::atan2(std::sqrt(dm), std::sqrt(dp));
}

double neumaier(const std::vector<double>& v) { return compensated_sum(v); }

bool is_even_integer(double q) {
  return std::isfinite(q) && q == std::round(q) && std::fmod(q, 2.0) == 0.0;
}

// Grading exponent that makes the endpoint behaviour r^e of the integrand smooth enough
// for Gauss-Legendre.
int grading_exponent(const SobolevParams& prm) {
  const double q = std::isinf(prm.q) ? 1.0 : prm.q;
  const double beta = prm.s < prm.d ? q * (prm.s - prm.d) : prm.s - prm.d;
  const double e = beta + (prm.d - 1);
  return std::clamp(static_cast<int>(std::ceil(6.0 / (e + 1.0))), 2, 14);
}

struct Interval {
  double a;
  double b;
  bool grade_left;
  bool grade_right;
  long left_site = -1;   // sorted index of a point sitting at a, if any
  long right_site = -1;  // same for b
};

// Maps u in [0,1] to [0,1] with algebraic clustering at the graded ends; returns the
// Jacobian and 1 - result without cancellation.
double graded(double u, int g, bool left, bool right, double& jac, double& comp) {
  if (left && right) {
    const double p = std::pow(u, g);
    const double q = std::pow(1.0 - u, g);
    const double den = p + q;
    jac = g * std::pow(u, g - 1) * std::pow(1.0 - u, g - 1) / (den * den);
    comp = q / den;
    return p / den;
  }
  if (left) {
    jac = g * std::pow(u, g - 1);
    comp = 1.0 - std::pow(u, g);
    return std::pow(u, g);
  }
  if (right) {
    jac = g * std::pow(1.0 - u, g - 1);
    comp = std::pow(1.0 - u, g);
    return 1.0 - comp;
  }
  jac = 1.0;
  comp = 1.0 - u;
  return u;
}

double graded(double u, int g, bool left, bool right, double& jac) {
  double comp = 0.0;
  return graded(u, g, left, right, jac, comp);
}

double lq_power(double a, double q) { return q == 2.0 ? a * a : std::pow(std::fabs(a), q); }

// ---- S^1 -------------------------------------------------------------------------------

struct CircleSetup {
  std::vector<Interval> pieces;
  double multiplicity = 1.0;  // equally spaced sets integrate a single period
};

bool equally_spaced(const std::vector<double>& a) {
  const std::size_t n = a.size();
  if (n < 2) return false;
  const double h = 2.0 * kPi / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double hi = (k + 1 < n) ? a[k + 1] : a[0] + 2.0 * kPi;
    if (std::fabs(hi - a[k] - h) > 1e-12) return false;
  }
  return true;
}

CircleSetup circle_pieces(const ErrorFunction& A, bool split_roots) {
  const auto& ang = A.sorted_angles();
  const std::size_t n = ang.size();
  CircleSetup setup;
  std::size_t arcs = n;
  if (equally_spaced(ang)) {
    arcs = 1;
    setup.multiplicity = static_cast<double>(n);
  }
  std::vector<std::vector<Interval>> per_arc(arcs);
  parallel_for(arcs, [&](std::size_t k) {
    const double a = ang[k];
    const double b = (k + 1 < n) ? ang[k + 1] : ang[0] + 2.0 * kPi;
    std::vector<double> roots;
    if (split_roots) {
      constexpr int kSamples = 96;
      double prev_t = 0.0;
      double prev_v = 0.0;
      for (int i = 1; i < kSamples; ++i) {
        const double t = a + (b - a) * i / kSamples;
        const double v = A.at_angle(t);
        if (i > 1 && ((prev_v < 0.0) != (v < 0.0)) && prev_v != 0.0 && v != 0.0) {
          std::uintmax_t iters = 200;
          auto tol = [](double lo, double hi) { return std::fabs(hi - lo) <= 1e-15 * std::max(1.0, std::fabs(lo)); };
          auto f = [&](double x) { return A.at_angle(x); };
          const auto r = boost::math::tools::toms748_solve(f, prev_t, t, prev_v, v, tol, iters);
          roots.push_back(0.5 * (r.first + r.second));
        }
        prev_t = t;
        prev_v = v;
      }
    }
    std::vector<Interval> pieces;
    double lo = a;
    bool left = true;
    for (double r : roots) {
      pieces.push_back({lo, r, left, false});
      lo = r;
      left = false;
    }
    pieces.push_back({lo, b, left, true});
    pieces.front().left_site = static_cast<long>(k);
    pieces.back().right_site = static_cast<long>((k + 1) % n);
    per_arc[k] = std::move(pieces);
  });
  for (auto& p : per_arc) setup.pieces.insert(setup.pieces.end(), p.begin(), p.end());
  return setup;
}

double circle_rule(const ErrorFunction& A, const CircleSetup& setup, std::size_t order, int g,
                   double q) {
  const GaussRule& rule = gauss_legendre(order);
  std::vector<double> partial(setup.pieces.size());
  parallel_for(setup.pieces.size(), [&](std::size_t i) {
    const Interval& iv = setup.pieces[i];
    std::vector<double> terms(order);
    for (std::size_t k = 0; k < order; ++k) {
      const double u = 0.5 * (rule.nodes[k] + 1.0);
      double jac = 0.0;
      double wc = 0.0;
      const double w = graded(u, g, iv.grade_left, iv.grade_right, jac, wc);
      const double len = iv.b - iv.a;
      double v = 0.0;
      if (iv.left_site >= 0 && w <= 0.5) {
        v = A.near_angle(static_cast<std::size_t>(iv.left_site), len * w);
      } else if (iv.right_site >= 0 && w > 0.5) {
        v = A.near_angle(static_cast<std::size_t>(iv.right_site), -len * wc);
      } else {
        v = A.at_angle(iv.a + len * w);
      }
      terms[k] = 0.5 * rule.weights[k] * jac * len * lq_power(v, q);
    }
    partial[i] = neumaier(terms);
  });
  return setup.multiplicity * pairwise_sum(partial) / (2.0 * kPi);
}

// ---- S^2 -------------------------------------------------------------------------------

struct Sector {
  std::size_t site;     // x_j
  std::size_t neighbor; // x_k across the Voronoi edge
  double alpha0;
  double alpha1;
  Vec3 e1;
  Vec3 e2;
};

std::optional<std::vector<Sector>> sphere_sectors(const PointSet& ps) {
  auto facets = detail::spherical_delaunay(ps);
  if (!facets) return std::nullopt;
  const auto fans = detail::vertex_fans(*facets, ps.size());
  std::vector<Sector> sectors;
  for (std::size_t j = 0; j < ps.size(); ++j) {
    const auto& fan = fans[j];
    if (fan.size() < 3) return std::nullopt;
    const Vec3 x = ps.point3(j);
    const Vec3 seed = std::fabs(x[0]) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
    const Vec3 e1 = detail::normalized(detail::cross(detail::cross(x, seed), x));
    const Vec3 e2 = detail::cross(x, e1);
    std::vector<double> alphas(fan.size());
    for (std::size_t i = 0; i < fan.size(); ++i) {
      const Vec3& c = (*facets)[fan[i]].center;
      alphas[i] = std::atan2(detail::dot(c, e2), detail::dot(c, e1));
    }
    for (std::size_t i = 0; i < fan.size(); ++i) {
      const std::size_t i1 = (i + 1) % fan.size();
      double a0 = alphas[i];
      double a1 = alphas[i1];
      while (a1 < a0) a1 += 2.0 * kPi;
      if (a1 - a0 < 1e-14) continue;
      // the facets fan[i] and fan[i1] share the edge (j, k)
      const auto& va = (*facets)[fan[i]].v;
      const auto& vb = (*facets)[fan[i1]].v;
      int k = -1;
      for (int a : va) {
        if (a == static_cast<int>(j)) continue;
        if (std::find(vb.begin(), vb.end(), a) != vb.end()) k = a;
      }
      if (k < 0) return std::nullopt;
      sectors.push_back({j, static_cast<std::size_t>(k), a0, a1, e1, e2});
    }
  }
  return sectors;
}

double sphere_rule(const ErrorFunction& A, const std::vector<Sector>& sectors, std::size_t order,
                   int g, double q, bool split_roots) {
  const PointSet& ps = A.points();
  const GaussRule& rule = gauss_legendre(order);
  std::vector<double> partial(sectors.size());
  parallel_for(sectors.size(), [&](std::size_t si) {
    const Sector& sec = sectors[si];
    const Vec3 x = ps.point3(sec.site);
    const Vec3 xk = ps.point3(sec.neighbor);
    const double c = detail::dot(x, xk);
    std::vector<double> terms;
    terms.reserve(order * order);
    std::vector<double> cuts;
    for (std::size_t ia = 0; ia < order; ++ia) {
      const double alpha = sec.alpha0 + 0.5 * (rule.nodes[ia] + 1.0) * (sec.alpha1 - sec.alpha0);
      const double wa = 0.5 * rule.weights[ia] * (sec.alpha1 - sec.alpha0);
      const double ca = std::cos(alpha);
      const double sa = std::sin(alpha);
      const Vec3 u{ca * sec.e1[0] + sa * sec.e2[0], ca * sec.e1[1] + sa * sec.e2[1],
                   ca * sec.e1[2] + sa * sec.e2[2]};
      const double R = std::atan2(1.0 - c, detail::dot(u, xk));
      auto along = [&](double r) {
        const double cr = std::cos(r);
        const double sr = std::sin(r);
        const std::array<double, 3> y{cr * x[0] + sr * u[0], cr * x[1] + sr * u[1], cr * x[2] + sr * u[2]};
        return A.near_point(sec.site, r, y);
      };
      cuts.assign(1, 0.0);
      if (split_roots) {
        // sign changes of A along the ray; samples cluster toward the point like the rule
        constexpr int kSamples = 24;
        double prev_r = 0.0;
        double prev_v = 0.0;
        for (int i = 1; i <= kSamples; ++i) {
          const double w = static_cast<double>(i) / kSamples;
          const double r = R * w * w;
          const double v = along(r);
          if (i > 1 && (prev_v < 0.0) != (v < 0.0) && prev_v != 0.0 && v != 0.0) {
            std::uintmax_t iters = 100;
            auto tol = [](double lo, double hi) { return std::fabs(hi - lo) <= 1e-14 * std::max(1e-3, lo); };
            const auto br = boost::math::tools::toms748_solve(along, prev_r, r, prev_v, v, tol, iters);
            cuts.push_back(0.5 * (br.first + br.second));
          }
          prev_r = r;
          prev_v = v;
        }
      }
      cuts.push_back(R);
      for (std::size_t piece = 0; piece + 1 < cuts.size(); ++piece) {
        const double a = cuts[piece];
        const double len = cuts[piece + 1] - a;
        for (std::size_t ir = 0; ir < order; ++ir) {
          double jac = 0.0;
          const double w = graded(0.5 * (rule.nodes[ir] + 1.0), g, piece == 0, false, jac);
          const double r = a + len * w;
          terms.push_back(wa * 0.5 * rule.weights[ir] * jac * len * std::sin(r) * lq_power(along(r), q));
        }
      }
    }
    partial[si] = neumaier(terms);
  });
  return pairwise_sum(partial) / (4.0 * kPi);
}

// Gauss-Legendre in z times equispaced longitudes; used when no triangulation exists.
double product_rule(const ErrorFunction& A, std::size_t order, double q) {
  const GaussRule& rule = gauss_legendre(order);
  const std::size_t nlon = 2 * order;
  std::vector<double> partial(order);
  parallel_for(order, [&](std::size_t i) {
    const double z = rule.nodes[i];
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    std::vector<double> terms(nlon);
    for (std::size_t k = 0; k < nlon; ++k) {
      const double lon = (k + 0.5) * 2.0 * kPi / static_cast<double>(nlon);
      const std::array<double, 3> y{r * std::cos(lon), r * std::sin(lon), z};
      terms[k] = lq_power(A(y), q);
    }
    partial[i] = rule.weights[i] * neumaier(terms) * (2.0 * kPi / static_cast<double>(nlon));
  });
  return pairwise_sum(partial) / (4.0 * kPi);
}

WceResult linf_search(const ErrorFunction& A, const SobolevParams& prm, const QuadratureSpec& quad) {
  const PointSet& ps = A.points();
  const int d = ps.dim();
  auto absA = [&](std::span<const double> y) { return std::fabs(A(y)); };
  std::vector<std::vector<double>> cands;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    auto x = ps.point(i);
    cands.emplace_back(x.begin(), x.end());
  }
  if (d == 1) {
    const auto& ang = A.sorted_angles();
    for (std::size_t k = 0; k < ang.size(); ++k) {
      const double a = ang[k];
      const double b = (k + 1 < ang.size()) ? ang[k + 1] : ang[0] + 2.0 * kPi;
      for (int i = 1; i < 32; ++i) {
        const double t = a + (b - a) * i / 32.0;
        cands.push_back({std::cos(t), std::sin(t)});
      }
    }
  } else {
    for (const auto& h : maximal_holes(ps)) cands.push_back(h.center);
    const std::size_t grid = std::max<std::size_t>(2000, 20 * ps.size());
    const double golden_angle = 2.0 * kPi / (std::numbers::phi * std::numbers::phi);
    for (std::size_t j = 0; j < grid; ++j) {
      const double z = 1.0 - (2.0 * j + 1.0) / static_cast<double>(grid);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double a = golden_angle * static_cast<double>(j);
      cands.push_back({r * std::cos(a), r * std::sin(a), z});
    }
  }
  std::vector<double> vals(cands.size());
  parallel_for(cands.size(), [&](std::size_t i) { vals[i] = absA(cands[i]); });
  std::vector<std::size_t> order(cands.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const std::size_t top = std::min<std::size_t>(12, order.size());
  std::partial_sort(order.begin(), order.begin() + top, order.end(),
                    [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
  const double coarse_best = vals[order[0]];
  const double spacing = d == 1 ? 2.0 * kPi / (32.0 * ps.size())
                                : std::sqrt(4.0 * kPi / static_cast<double>(cands.size()));
  int halvings = 1;
  while (spacing * std::ldexp(1.0, -halvings) > quad.linf_resolution) ++halvings;
  std::vector<double> refined(top);
  parallel_for(top, [&](std::size_t i) {
    double v = 0.0;
    refine_maximum(d, absA, cands[order[i]], spacing, halvings, v);
    refined[i] = v;
  });
  WceResult res;
  res.params = prm;
  res.method = WceMethod::linf_grid;
  res.value = *std::max_element(refined.begin(), refined.end());
  res.resolution = spacing * std::ldexp(1.0, -halvings);
  res.err_estimate = res.value - coarse_best;
  res.nodes = cands.size();
  return res;
}

}  // namespace

const char* to_string(WceMethod m) {
  switch (m) {
    case WceMethod::closed_form_p2: return "closed_form_p2";
    case WceMethod::circle_exact: return "circle_exact";
    case WceMethod::lq_quadrature: return "lq_quadrature";
    case WceMethod::linf_grid: return "linf_grid";
  }
  return "unknown";
}

WceResult wce_p2(const PointSet& ps, double s, const KernelSpec& spec) {
  const int d = ps.dim();
  if (!(2.0 * s > d)) throw InvalidArgument("wce_p2 requires s > d/2");
  const auto kernel = make_zonal_kernel(spec.rebind(2.0 * s, d));
  const std::size_t n = ps.size();
  const std::size_t w = static_cast<std::size_t>(ps.ambient());
  const double* c = ps.coords().data();
  const double off = deterministic_sum(n, [&](std::size_t i) {
    std::vector<double> row;
    row.reserve(n - i);
    for (std::size_t j = i + 1; j < n; ++j) {
      row.push_back(kernel->at_angle(angle_from_chords(c + i * w, c + j * w, w)));
    }
    return compensated_sum(row);
  });
  const double nd = static_cast<double>(n);
  const double radicand = (nd * kernel->at_angle(0.0) + 2.0 * off) / (nd * nd);
  WceResult res;
  res.params = SobolevParams::make(d, 2.0, s);
  res.method = WceMethod::closed_form_p2;
  const double kerr = kernel->error_bound() + 1e-16 * std::fabs(kernel->at_angle(0.0)) * std::log2(nd * nd + 2.0);
  if (radicand < -1e-12) {
    throw ConvergenceError("wce_p2: negative radicand; kernel evaluation too inaccurate");
  }
  if (radicand < 0.0) {
    res.warnings.push_back("radicand " + std::to_string(radicand) + " clamped to 0");
  }
  res.value = std::sqrt(std::max(radicand, 0.0));
  res.err_estimate = res.value > 0.0 ? std::min(std::sqrt(kerr), kerr / (2.0 * res.value)) : std::sqrt(kerr);
  res.nodes = n * n;
  return res;
}

WceResult wce_circle_exact(long N, long M, double s) {
  if (N < 2) throw InvalidArgument("wce_circle_exact requires N >= 2");
  if (M < 0 || M >= N) throw InvalidArgument("wce_circle_exact requires 0 <= M < N");
  if (!(s > 0.5)) throw InvalidArgument("wce_circle_exact requires s > 1/2");
  const double nd = static_cast<double>(N);
  // Lambda = sum_{nu>=1} (1 + nu^2 N^2)^{-s} = N^{-2s} sum_m binom(-s, m) zeta(2s + 2m) N^{-2m}
  double bracket = 0.0;
  double coef = 1.0;
  const double inv_n2 = 1.0 / (nd * nd);
  double power = 1.0;
  bool converged = false;
  for (int m = 0; m < 400; ++m) {
    const double term = coef * zeta(2.0 * s + 2.0 * m) * power;
    bracket += term;
    if (m > 0 && std::fabs(term) < 1e-17 * std::fabs(bracket)) {
      converged = true;
      break;
    }
    coef *= (-s - m) / (m + 1.0);
    power *= inv_n2;
  }
  if (!converged) throw ConvergenceError("wce_circle_exact: lattice series did not converge");
  const double lambda = std::pow(nd, -2.0 * s) * bracket;
  WceResult res;
  res.params = SobolevParams::make(1, 2.0, s);
  res.method = WceMethod::circle_exact;
  if (M == 0) {
    res.value = std::sqrt(2.0 * lambda);
    res.err_estimate = 1e-15 * res.value;
    return res;
  }
  const auto kernel = make_zonal_kernel(2.0 * s, 1);
  const double md = static_cast<double>(M);
  // sum over removed pairs: M K(1) + 2 sum_{nu=1}^{M-1} (M - nu) K(cos(2 pi nu / N))
  std::vector<double> terms;
  terms.push_back(md * kernel->at_angle(0.0));
  for (long nu = 1; nu < M; ++nu) {
    const double angle = 2.0 * kPi * static_cast<double>(nu) / nd;
    terms.push_back(2.0 * static_cast<double>(M - nu) * kernel->at_angle(std::min(angle, 2.0 * kPi - angle)));
  }
  const double removed = compensated_sum(terms);
  const double kept = nd - md;
  const double radicand = (2.0 * nd * (nd - 2.0 * md) * lambda + removed) / (kept * kept);
  res.value = std::sqrt(std::max(radicand, 0.0));
  res.err_estimate = kernel->error_bound() * md * md / (kept * kept) / std::max(res.value, 1e-300);
  return res;
}

ErrorFunction::ErrorFunction(const PointSet& ps, double s, const KernelSpec& spec)
    : ps_(&ps), kernel_(make_zonal_kernel(spec.rebind(s, ps.dim()))) {
  if (ps.dim() == 1) {
    angles_.resize(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) {
      auto x = ps.point(i);
      double t = std::atan2(x[1], x[0]);
      if (t < 0.0) t += 2.0 * kPi;
      angles_[i] = t;
    }
    std::sort(angles_.begin(), angles_.end());
  }
}

double ErrorFunction::operator()(std::span<const double> y) const {
  const std::size_t w = static_cast<std::size_t>(ps_->ambient());
  const double* c = ps_->coords().data();
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t j = 0; j < ps_->size(); ++j) {
    const double v = kernel_->at_angle(angle_from_chords(c + j * w, y.data(), w));
    const double t = sum + v;
    comp += std::fabs(sum) >= std::fabs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return (sum + comp) / static_cast<double>(ps_->size());
}

double ErrorFunction::at_angle(double t) const {
  double sum = 0.0;
  double comp = 0.0;
  for (double a : angles_) {
    const double v = kernel_->at_angle(std::fabs(std::remainder(t - a, 2.0 * kPi)));
    const double s = sum + v;
    comp += std::fabs(sum) >= std::fabs(v) ? (sum - s) + v : (v - s) + sum;
    sum = s;
  }
  return (sum + comp) / static_cast<double>(angles_.size());
}

double ErrorFunction::near_angle(std::size_t k, double r) const {
  const double t = angles_[k] + r;
  double sum = kernel_->at_angle(std::fabs(r));
  double comp = 0.0;
  for (std::size_t i = 0; i < angles_.size(); ++i) {
    if (i == k) continue;
    const double v = kernel_->at_angle(std::fabs(std::remainder(t - angles_[i], 2.0 * kPi)));
    const double s = sum + v;
    comp += std::fabs(sum) >= std::fabs(v) ? (sum - s) + v : (v - s) + sum;
    sum = s;
  }
  return (sum + comp) / static_cast<double>(angles_.size());
}

double ErrorFunction::near_point(std::size_t j, double r, std::span<const double> y) const {
  const std::size_t w = static_cast<std::size_t>(ps_->ambient());
  const double* c = ps_->coords().data();
  double sum = kernel_->at_angle(r);
  double comp = 0.0;
  for (std::size_t k = 0; k < ps_->size(); ++k) {
    if (k == j) continue;
    const double v = kernel_->at_angle(angle_from_chords(c + k * w, y.data(), w));
    const double t = sum + v;
    comp += std::fabs(sum) >= std::fabs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return (sum + comp) / static_cast<double>(ps_->size());
}

double wce_error_function(const PointSet& ps, double s, const KernelSpec& spec,
                          std::span<const double> y) {
  if (y.size() != static_cast<std::size_t>(ps.ambient())) {
    throw InvalidArgument("wce_error_function: y has the wrong dimension");
  }
  return ErrorFunction(ps, s, spec)(y);
}

WceResult wce_lq(const PointSet& ps, const SobolevParams& params, const KernelSpec& spec,
                 const QuadratureSpec& quad) {
  const int d = ps.dim();
  if (params.d != d) throw InvalidArgument("wce_lq: parameter dimension does not match the points");
  if (d != 1 && d != 2) throw InvalidArgument("wce_lq supports S^1 and S^2 only");
  const SobolevParams prm = SobolevParams::make(d, params.p, params.s);
  const ErrorFunction A(ps, prm.s, spec);
  if (std::isinf(prm.q)) return linf_search(A, prm, quad);

  const double q = prm.q;
  const int g = grading_exponent(prm);
  const bool split = !is_even_integer(q);
  std::function<double(std::size_t)> rule;
  double evals_per_order2 = 0.0;  // kernel evaluations = factor * order (S^1) or order^2 (S^2)
  bool quadratic = false;
  CircleSetup circle;
  std::optional<std::vector<Sector>> sectors;
  if (d == 1) {
    circle = circle_pieces(A, split);
    rule = [&](std::size_t n) { return circle_rule(A, circle, n, g, q); };
    evals_per_order2 = static_cast<double>(circle.pieces.size() * ps.size());
  } else {
    sectors = sphere_sectors(ps);
    quadratic = true;
    if (sectors) {
      rule = [&](std::size_t n) { return sphere_rule(A, *sectors, n, g, q, split); };
      evals_per_order2 = static_cast<double>(sectors->size() * ps.size());
    } else {
      rule = [&](std::size_t n) { return product_rule(A, n, q); };
      evals_per_order2 = 2.0 * static_cast<double>(ps.size());
    }
  }
  WceResult res;
  res.params = prm;
  res.method = WceMethod::lq_quadrature;
  std::size_t order = 4;
  double prev = rule(order);
  double spent = evals_per_order2 * (quadratic ? 16.0 : 4.0);
  for (int k = 0; k < quad.max_doublings; ++k) {
    const std::size_t next = order * 2;
    const double cost = evals_per_order2 * (quadratic ? double(next) * next : double(next));
    if (spent + cost > quad.max_evaluations) break;
    const double cur = rule(next);
    spent += cost;
    order = next;
    const double diff = std::fabs(cur - prev);
    prev = cur;
    res.err_estimate = diff;
    if (diff <= quad.rel_tol * std::fabs(cur)) {
      res.value = std::pow(std::max(cur, 0.0), 1.0 / q);
      res.err_estimate = res.value * diff / (q * std::max(std::fabs(cur), 1e-300));
      res.nodes = static_cast<std::size_t>(evals_per_order2 / ps.size() *
                                           (quadratic ? double(order) * order : double(order)));
      return res;
    }
  }
  res.converged = false;
  res.value = std::pow(std::max(prev, 0.0), 1.0 / q);
  res.err_estimate = res.value * res.err_estimate / (q * std::max(std::fabs(prev), 1e-300));
  res.nodes = static_cast<std::size_t>(evals_per_order2 / ps.size() *
                                       (quadratic ? double(order) * order : double(order)));
  if (quad.strict) {
    throw ConvergenceError("wce_lq: quadrature did not converge (estimate " +
                           std::to_string(res.value) + " +- " + std::to_string(res.err_estimate) + ")");
  }
  res.warnings.push_back("quadrature not converged to the requested tolerance");
  return res;
}

}  // namespace sphqmc
