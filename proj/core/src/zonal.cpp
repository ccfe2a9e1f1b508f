#include "sphqmc/zonal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "clausen.hpp"
#include "sphqmc/error.hpp"
#include "sphqmc/parallel.hpp"
#include "sphqmc/quadrature.hpp"
#include "sphqmc/special.hpp"

namespace sphqmc {
namespace {

constexpr double kPi = std::numbers::pi;

class CircleKernel final : public ZonalKernel {
 public:
  explicit CircleKernel(double order) : ZonalKernel(order, 1), series_(order) {
    if (order > 1.0) diagonal_ = series_.at_zero();
  }
  double at_angle(double theta) const override {
    if (theta == 0.0) {
      if (!has_diagonal()) throw InvalidArgument("kernel diagonal requires order > dimension");
      return diagonal_;
    }
    return series_(theta);
  }
  double error_bound() const override { return 1e-14 * std::max(1.0, std::fabs(diagonal_)); }

 private:
  detail::CircleKernelSeries series_;
  double diagonal_ = 0.0;
};

// K(theta) = int_0^inf g(u) B(u, theta) du with
//   g(u) = sqrt(pi) / ((2c)^mu Gamma(sigma/2)) u^mu J_mu(c u),  mu = (sigma-1)/2, c = sqrt(3)/2
//   B(u, theta) = sum_{l>=1} (2l+1) P_l(cos theta) e^{-(l+1/2) u}.
class SphereIntegrand {
 public:
  explicit SphereIntegrand(double sigma)
      : sigma_(sigma), mu_((sigma - 1.0) / 2.0), c_(std::sqrt(3.0) / 2.0) {
    log_scale_ = 0.5 * std::log(kPi) - mu_ * std::log(2.0 * c_) - std::lgamma(sigma / 2.0);
  }

  double g(double u) const {
    if (u == 0.0) return 0.0;
    const double j = boost::math::cyl_bessel_j(mu_, c_ * u);
    return std::exp(log_scale_ + mu_ * std::log(u)) * j;
  }

  static double b(double u, double theta) {
    if (u < 2.0) {
      const double sh = std::sinh(u / 2.0);
      const double sn = std::sin(theta / 2.0);
      const double w = 2.0 * sh * sh + 2.0 * sn * sn;
      return 2.0 * std::sinh(u) / std::pow(2.0 * w, 1.5) - std::exp(-u / 2.0);
    }
    const double q = std::exp(-u);
    const double t = std::cos(theta);
    const double r = 1.0 - 2.0 * t * q + q * q;
    // (1 - q^2) r^{-3/2} - 1, written to avoid cancellation for small q
    const double rm = std::pow(r, -1.5);
    const double diff = (rm - 1.0) - q * q * rm;
    return std::sqrt(q) * diff;
  }

  double operator()(double u, double theta) const { return g(u) * b(u, theta); }

  double upper_limit() const { return 40.0 + 2.0 * sigma_; }

 private:
  double sigma_;
  double mu_;
  double c_;
  double log_scale_;
};

double integrate_sphere_kernel(const SphereIntegrand& f, double theta) {
  const double delta = std::min(2.0 * std::sin(theta / 2.0), 1.0);
  auto h = [&](double u) { return f(u, theta); };
  thread_local boost::math::quadrature::tanh_sinh<double> ts(12);
  double total = ts.integrate(h, 0.0, delta, 1e-15);
  const GaussRule& gl = gauss_legendre(30);
  double a = delta;
  while (a < 2.0) {
    const double b = std::min(2.0 * a, 2.0);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    double seg = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) seg += gl.weights[i] * h(mid + half * gl.nodes[i]);
    total += half * seg;
    a = b;
  }
  const double upper = f.upper_limit();
  for (double lo = 2.0; lo < upper; lo += 4.0) {
    const double hi = std::min(lo + 4.0, upper);
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(h, lo, hi, 0, 1e-15);
  }
  return total;
}

// sum_{l>=1} (2l+1) ((l+1/2)^2 + 3/4)^{-sigma/2}
double sphere_diagonal(double sigma) {
  constexpr int kDirect = 64;
  double head = 0.0;
  for (int l = kDirect - 1; l >= 1; --l) {
    const double nu = l + 0.5;
    head += 2.0 * nu * std::pow(nu * nu + 0.75, -sigma / 2.0);
  }
  // tail: 2 sum_m binom(-sigma/2, m) (3/4)^m zeta_H(sigma - 1 + 2m, kDirect + 1/2)
  double tail = 0.0;
  double coef = 1.0;
  for (int m = 0; m < 40; ++m) {
    const double term = coef * hurwitz_zeta(sigma - 1.0 + 2.0 * m, kDirect + 0.5);
    tail += term;
    if (std::fabs(term) < 1e-18 * std::fabs(tail)) break;
    coef *= 0.75 * (-sigma / 2.0 - m) / (m + 1.0);
  }
  return head + 2.0 * tail;
}

constexpr int kChebDegree = 28;
constexpr int kGeometricPanels = 16;    // [2^-20, 2^-4]
constexpr double kPanelWidth = 1.0 / 16.0;
constexpr double kSmallest = 1.0 / 1048576.0;

class SphereKernel final : public ZonalKernel {
 public:
  explicit SphereKernel(double order) : ZonalKernel(order, 2), integrand_(order) {
    if (order > 2.0) diagonal_ = sphere_diagonal(order);
    for (int k = 0; k < kGeometricPanels; ++k) {
      edges_.push_back(std::ldexp(kSmallest, k));
    }
    for (int k = 1; k * kPanelWidth < kPi; ++k) edges_.push_back(k * kPanelWidth);
    edges_.push_back(kPi);
    const std::size_t panels = edges_.size() - 1;
    coef_.assign(panels * (kChebDegree + 1), 0.0);
    std::vector<double> check(panels, 0.0);
    parallel_for(panels, [&](std::size_t p) {
      const double a = edges_[p];
      const double b = edges_[p + 1];
      std::array<double, kChebDegree + 1> values{};
      for (int j = 0; j <= kChebDegree; ++j) {
        const double x = std::cos(kPi * j / kChebDegree);
        values[j] = integrate_sphere_kernel(integrand_, 0.5 * (a + b) + 0.5 * (b - a) * x);
      }
      double* c = &coef_[p * (kChebDegree + 1)];
      for (int k = 0; k <= kChebDegree; ++k) {
        double sum = 0.0;
        for (int j = 0; j <= kChebDegree; ++j) {
          const double w = (j == 0 || j == kChebDegree) ? 0.5 : 1.0;
          sum += w * values[j] * std::cos(kPi * k * j / kChebDegree);
        }
        c[k] = 2.0 * sum / kChebDegree;
      }
      c[0] *= 0.5;
      c[kChebDegree] *= 0.5;
      const double probe = a + 0.382 * (b - a);
      check[p] = std::fabs(eval_panel(p, probe) - integrate_sphere_kernel(integrand_, probe));
    });
    double worst = 0.0;
    for (double e : check) worst = std::max(worst, e);
    error_ = std::max(4.0 * worst, 1e-15);
    fit_small_angles();
  }

  double at_angle(double theta) const override {
    if (theta == 0.0) {
      if (!has_diagonal()) throw InvalidArgument("kernel diagonal requires order > dimension");
      return diagonal_;
    }
    if (theta < kSmallest) return small_angle(theta);
    std::size_t p;
    if (theta < edges_[kGeometricPanels]) {
      int e = 0;
      std::frexp(theta / kSmallest, &e);
      p = static_cast<std::size_t>(std::clamp(e - 1, 0, kGeometricPanels - 1));
    } else {
      p = kGeometricPanels - 1 + static_cast<std::size_t>(theta / kPanelWidth);
      p = std::min(p, edges_.size() - 2);
    }
    return eval_panel(p, theta);
  }

  double error_bound() const override { return error_; }

 private:
  double eval_panel(std::size_t p, double theta) const {
    const double a = edges_[p];
    const double b = edges_[p + 1];
    const double x = (2.0 * theta - a - b) / (b - a);
    const double* c = &coef_[p * (kChebDegree + 1)];
    double b1 = 0.0;
    double b2 = 0.0;
    for (int k = kChebDegree; k >= 1; --k) {
      const double t = 2.0 * x * b1 - b2 + c[k];
      b2 = b1;
      b1 = t;
    }
    return x * b1 - b2 + c[0];
  }

  // Below 2^-20: K = a theta^(order-2) + b (+ c theta^2), with a from the large-degree
  // behaviour 2 l^(1-order) of the coefficients and the rest matched at 2^-20.
  void fit_small_angles() {
    const double sigma = order();
    const double h = kSmallest;
    const double kh = eval_panel(0, h);
    even_ = sigma == std::round(sigma) && std::fmod(sigma, 2.0) == 0.0;
    if (sigma == 2.0) {
      lead_ = -2.0;
      constant_ = kh + 2.0 * std::log(h);
      return;
    }
    lead_ = even_ ? 0.0 : std::exp2(2.0 - sigma) * std::tgamma(1.0 - 0.5 * sigma) / std::tgamma(0.5 * sigma);
    if (sigma < 2.0) {
      constant_ = kh - lead_ * std::pow(h, sigma - 2.0);
      return;
    }
    constant_ = diagonal_;
    quadratic_ = (kh - diagonal_ - lead_ * std::pow(h, sigma - 2.0)) / (h * h);
  }

  double small_angle(double theta) const {
    const double sigma = order();
    if (sigma == 2.0) return lead_ * std::log(theta) + constant_;
    const double sing = lead_ == 0.0 ? 0.0 : lead_ * std::pow(theta, sigma - 2.0);
    return constant_ + sing + quadratic_ * theta * theta;
  }

  SphereIntegrand integrand_;
  bool even_ = false;
  double lead_ = 0.0;
  double constant_ = 0.0;
  double quadratic_ = 0.0;
  double diagonal_ = 0.0;
  double error_ = 0.0;
  std::vector<double> edges_;
  std::vector<double> coef_;
};

class SeriesKernel final : public ZonalKernel {
 public:
  explicit SeriesKernel(const KernelSpec& spec) : ZonalKernel(spec.order, spec.dim), spec_(spec) {
    spec_.evaluation = KernelEvaluation::truncated_series;
    error_ = bessel_tail_bound(spec.dim, spec.order, spec.truncation_degree);
  }
  double at_angle(double theta) const override {
    if (theta == 0.0 && !has_diagonal()) {
      throw InvalidArgument("kernel diagonal requires order > dimension");
    }
    return bessel_kernel_centered(spec_, std::cos(theta)).value;
  }
  double error_bound() const override { return error_; }

 private:
  KernelSpec spec_;
  double error_ = 0.0;
};

}  // namespace

double ZonalKernel::at(double t) const {
  if (!(std::fabs(t) <= 1.0 + 1e-12)) throw InvalidArgument("zonal kernel: |t| > 1");
  t = std::clamp(t, -1.0, 1.0);
  return at_angle(std::acos(t));
}

std::shared_ptr<const ZonalKernel> make_zonal_kernel(double order, int dim) {
  if (!(order > 0.0)) throw InvalidArgument("kernel order must be positive");
  if (dim != 1 && dim != 2) {
    throw InvalidArgument("closed kernel representation is available for d = 1, 2 only");
  }
  static std::mutex mutex;
  static std::map<std::pair<int, double>, std::shared_ptr<const ZonalKernel>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{dim, order}];
  if (!slot) {
    if (dim == 1) {
      slot = std::make_shared<CircleKernel>(order);
    } else {
      slot = std::make_shared<SphereKernel>(order);
    }
  }
  return slot;
}

std::shared_ptr<const ZonalKernel> make_zonal_kernel(const KernelSpec& spec) {
  if (spec.evaluation == KernelEvaluation::automatic && spec.dim <= 2) {
    return make_zonal_kernel(spec.order, spec.dim);
  }
  return std::make_shared<SeriesKernel>(spec);
}

double sphere_kernel_by_integral(double order, double theta) {
  if (!(theta > 0.0 && theta <= kPi)) throw InvalidArgument("angle must lie in (0, pi]");
  return integrate_sphere_kernel(SphereIntegrand(order), theta);
}

}  // namespace sphqmc
