#include "sphqmc/pointset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "sphqmc/error.hpp"

namespace sphqmc {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNormTol = 1e-12;
constexpr double kLoadRejectTol = 1e-6;

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

std::string family_name(Family f) {
  switch (f) {
    case Family::equal_spaced_circle: return "circle";
    case Family::circle_removed: return "circle_removed";
    case Family::fibonacci_s2: return "fibonacci";
    case Family::random_uniform: return "random";
    case Family::equal_area_s2: return "equal_area";
    case Family::cap_depleted: return "cap_depleted";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  static const std::map<std::string, Family, std::less<>> names = {
      {"circle", Family::equal_spaced_circle},
      {"equal_spaced_circle", Family::equal_spaced_circle},
      {"circle_removed", Family::circle_removed},
      {"fibonacci", Family::fibonacci_s2},
      {"fibonacci_s2", Family::fibonacci_s2},
      {"random", Family::random_uniform},
      {"random_uniform", Family::random_uniform},
      {"equal_area", Family::equal_area_s2},
      {"equal_area_s2", Family::equal_area_s2},
      {"cap_depleted", Family::cap_depleted},
  };
  auto it = names.find(name);
  if (it == names.end()) throw InvalidArgument("unknown point family '" + std::string(name) + "'");
  return it->second;
}

double parse_double(std::string_view text, std::string_view what) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidArgument("cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
  }
  return v;
}

long parse_long(std::string_view text, std::string_view what) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidArgument("cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
  }
  return v;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void push_point(std::vector<double>& out, std::initializer_list<double> x) {
  out.insert(out.end(), x.begin(), x.end());
}

PointSet circle_points(long n, const std::vector<bool>& keep, const std::string& label) {
  std::vector<double> coords;
  for (long j = 0; j < n; ++j) {
    if (!keep.empty() && !keep[j]) continue;
    const double a = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
    push_point(coords, {std::cos(a), std::sin(a)});
  }
  return PointSet(1, std::move(coords), label);
}

PointSet fibonacci(long n, const std::string& label) {
  const double golden_angle = 2.0 * kPi / (std::numbers::phi * std::numbers::phi);
  std::vector<double> coords;
  coords.reserve(3 * n);
  for (long j = 0; j < n; ++j) {
    const double z = 1.0 - (2.0 * j + 1.0) / static_cast<double>(n);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double a = std::fmod(golden_angle * static_cast<double>(j), 2.0 * kPi);
    push_point(coords, {r * std::cos(a), r * std::sin(a), z});
  }
  return PointSet(2, std::move(coords), label);
}

void push_spherical(std::vector<double>& coords, double colat, double lon) {
  const double s = std::sin(colat);
  push_point(coords, {s * std::cos(lon), s * std::sin(lon), std::cos(colat)});
}

// Zonal equal-area partition: two polar caps and collars of equal-area cells, with one
// point at the centre of each cell.
PointSet equal_area(long n, const std::string& label) {
  std::vector<double> coords;
  if (n == 1) {
    push_point(coords, {0.0, 0.0, 1.0});
    return PointSet(2, std::move(coords), label);
  }
  if (n == 2) {
    push_point(coords, {0.0, 0.0, 1.0});
    push_point(coords, {0.0, 0.0, -1.0});
    return PointSet(2, std::move(coords), label);
  }
  const double nd = static_cast<double>(n);
  const double cap = std::acos(1.0 - 2.0 / nd);
  const double ideal = std::sqrt(4.0 * kPi / nd);
  const long collars = std::max(1L, std::lround((kPi - 2.0 * cap) / ideal));
  const double fitted = (kPi - 2.0 * cap) / static_cast<double>(collars);
  std::vector<long> counts(collars);
  double carry = 0.0;
  long assigned = 0;
  for (long i = 0; i < collars; ++i) {
    const double top = cap + i * fitted;
    const double bottom = cap + (i + 1) * fitted;
    const double ideal_count = (std::cos(top) - std::cos(bottom)) * nd / 2.0;
    counts[i] = std::lround(ideal_count + carry);
    carry += ideal_count - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  counts.back() += (n - 2) - assigned;
  push_point(coords, {0.0, 0.0, 1.0});
  long before = 1;
  const double offset_step = 2.0 * kPi * (std::numbers::phi - 1.0);
  for (long i = 0; i < collars; ++i) {
    const double top = std::acos(std::clamp(1.0 - 2.0 * before / nd, -1.0, 1.0));
    const double bottom = std::acos(std::clamp(1.0 - 2.0 * (before + counts[i]) / nd, -1.0, 1.0));
    const double colat = 0.5 * (top + bottom);
    const double offset = std::fmod(offset_step * i, 2.0 * kPi);
    for (long j = 0; j < counts[i]; ++j) {
      push_spherical(coords, colat, offset + (j + 0.5) * 2.0 * kPi / counts[i]);
    }
    before += counts[i];
  }
  push_point(coords, {0.0, 0.0, -1.0});
  return PointSet(2, std::move(coords), label);
}

PointSet random_points(long n, std::uint64_t seed, int dim, const std::string& label) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> coords;
  coords.reserve(n * (dim + 1));
  std::vector<double> x(dim + 1);
  for (long j = 0; j < n; ++j) {
    double r = 0.0;
    do {
      for (double& v : x) v = normal(rng);
      r = norm(x);
    } while (r < 1e-8);
    for (double v : x) coords.push_back(v / r);
  }
  return PointSet(dim, std::move(coords), label);
}

}  // namespace

PointSet::PointSet(int dim, std::vector<double> coords, std::string label, bool allow_duplicates)
    : dim_(dim), coords_(std::move(coords)), label_(std::move(label)) {
  if (dim < 1) throw InvalidArgument("point set dimension must be >= 1");
  const auto width = static_cast<std::size_t>(dim + 1);
  if (coords_.empty()) throw InvalidArgument("point set must not be empty");
  if (coords_.size() % width != 0) {
    throw InvalidArgument("coordinate count is not a multiple of d+1");
  }
  for (std::size_t i = 0; i < size(); ++i) {
    const double r = norm(point(i));
    if (!std::isfinite(r) || std::fabs(r - 1.0) > kNormTol) {
      throw InvalidArgument("point " + std::to_string(i) + " is not a unit vector");
    }
  }
  if (!allow_duplicates) {
    std::vector<std::size_t> order(size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto row = [&](std::size_t i) { return coords_.begin() + static_cast<std::ptrdiff_t>(i * width); };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::lexicographical_compare(row(a), row(a) + width, row(b), row(b) + width);
    });
    for (std::size_t k = 1; k < order.size(); ++k) {
      if (std::equal(row(order[k - 1]), row(order[k - 1]) + width, row(order[k]))) {
        throw InvalidArgument("points " + std::to_string(order[k - 1]) + " and " +
                              std::to_string(order[k]) + " are identical");
      }
    }
  }
}

std::array<double, 3> PointSet::point3(std::size_t i) const {
  std::array<double, 3> out{0.0, 0.0, 0.0};
  auto p = point(i);
  for (std::size_t k = 0; k < std::min<std::size_t>(3, p.size()); ++k) out[k] = p[k];
  return out;
}

PointSet PointSet::with_label(std::string label) const {
  PointSet out = *this;
  out.label_ = std::move(label);
  return out;
}

GeneratorSpec GeneratorSpec::equal_spaced_circle(long n) {
  GeneratorSpec s;
  s.family = Family::equal_spaced_circle;
  s.n = n;
  s.dim = 1;
  return s;
}

GeneratorSpec GeneratorSpec::circle_removed(long n, long removed, bool consecutive) {
  GeneratorSpec s;
  s.family = Family::circle_removed;
  s.n = n;
  s.removed = removed;
  s.consecutive = consecutive;
  s.dim = 1;
  return s;
}

GeneratorSpec GeneratorSpec::fibonacci_s2(long n) {
  GeneratorSpec s;
  s.family = Family::fibonacci_s2;
  s.n = n;
  s.dim = 2;
  return s;
}

GeneratorSpec GeneratorSpec::random_uniform(long n, std::uint64_t seed, int dim) {
  GeneratorSpec s;
  s.family = Family::random_uniform;
  s.n = n;
  s.seed = seed;
  s.dim = dim;
  return s;
}

GeneratorSpec GeneratorSpec::equal_area_s2(long n) {
  GeneratorSpec s;
  s.family = Family::equal_area_s2;
  s.n = n;
  s.dim = 2;
  return s;
}

GeneratorSpec GeneratorSpec::cap_depleted(const GeneratorSpec& base, std::vector<double> center,
                                          double radius) {
  GeneratorSpec s;
  s.family = Family::cap_depleted;
  s.n = base.n;
  s.dim = base.sphere_dim();
  s.base = std::make_shared<const GeneratorSpec>(base);
  s.cap_center = std::move(center);
  s.cap_radius = radius;
  return s;
}

int GeneratorSpec::sphere_dim() const {
  switch (family) {
    case Family::equal_spaced_circle:
    case Family::circle_removed: return 1;
    case Family::fibonacci_s2:
    case Family::equal_area_s2: return 2;
    case Family::random_uniform: return dim;
    case Family::cap_depleted: return base ? base->sphere_dim() : dim;
  }
  return dim;
}

void GeneratorSpec::validate() const {
  if (n <= 0) throw InvalidArgument("point count n must be positive");
  switch (family) {
    case Family::circle_removed:
      if (removed < 0 || removed >= n) throw InvalidArgument("circle_removed requires 0 <= M < n");
      break;
    case Family::random_uniform:
      if (dim < 1) throw InvalidArgument("random_uniform requires d >= 1");
      break;
    case Family::cap_depleted: {
      if (!base) throw InvalidArgument("cap_depleted requires a base family");
      if (base->family == Family::cap_depleted) throw InvalidArgument("cap_depleted base cannot be nested");
      base->validate();
      if (!(cap_radius > 0.0 && cap_radius < kPi)) {
        throw InvalidArgument("cap_depleted requires 0 < cap_radius < pi");
      }
      if (static_cast<int>(cap_center.size()) != base->sphere_dim() + 1) {
        throw InvalidArgument("cap center has the wrong number of coordinates");
      }
      if (std::fabs(norm(cap_center) - 1.0) > 1e-9) throw InvalidArgument("cap center must be a unit vector");
      break;
    }
    default:
      break;
  }
}

std::string GeneratorSpec::to_string() const {
  std::ostringstream os;
  switch (family) {
    case Family::circle_removed:
      os << "circle_removed:n=" << n << ",m=" << removed;
      if (!consecutive) os << ",consecutive=0";
      break;
    case Family::random_uniform:
      os << "random:n=" << n << ",seed=" << seed << ",d=" << dim;
      break;
    case Family::cap_depleted: {
      std::string b = base ? base->to_string() : std::string("?");
      const auto colon = b.find(':');
      os << "cap_depleted:base=" << b.substr(0, colon);
      if (colon != std::string::npos) os << "," << b.substr(colon + 1);
      os << ",radius=" << format_double(cap_radius) << ",center=";
      for (std::size_t k = 0; k < cap_center.size(); ++k) {
        os << (k ? "/" : "") << format_double(cap_center[k]);
      }
      break;
    }
    default:
      os << family_name(family) << ":n=" << n;
  }
  return os.str();
}

GeneratorSpec GeneratorSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  const Family family = parse_family(text.substr(0, colon));
  std::map<std::string, std::string, std::less<>> kv;
  if (colon != std::string_view::npos) {
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = rest.substr(0, comma);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw InvalidArgument("family parameter '" + std::string(item) + "' lacks '='");
      }
      kv[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
  }
  auto take = [&](const char* key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto require_n = [&]() {
    auto v = take("n");
    if (!v) throw InvalidArgument("family spec requires n=");
    return parse_long(*v, "n");
  };
  GeneratorSpec spec;
  switch (family) {
    case Family::equal_spaced_circle: spec = equal_spaced_circle(require_n()); break;
    case Family::fibonacci_s2: spec = fibonacci_s2(require_n()); break;
    case Family::equal_area_s2: spec = equal_area_s2(require_n()); break;
    case Family::random_uniform: {
      const long n = require_n();
      const auto seed = take("seed");
      const auto d = take("d");
      spec = random_uniform(n, seed ? static_cast<std::uint64_t>(parse_long(*seed, "seed")) : 0,
                            d ? static_cast<int>(parse_long(*d, "d")) : 2);
      break;
    }
    case Family::circle_removed: {
      const long n = require_n();
      long m = 0;
      if (auto v = take("m")) {
        m = parse_long(*v, "m");
      } else if (auto e = take("mexp")) {
        m = static_cast<long>(std::ceil(std::pow(static_cast<double>(n), parse_double(*e, "mexp"))));
      } else {
        throw InvalidArgument("circle_removed requires m= or mexp=");
      }
      bool consecutive = true;
      if (auto c = take("consecutive")) consecutive = parse_long(*c, "consecutive") != 0;
      spec = circle_removed(n, m, consecutive);
      break;
    }
    case Family::cap_depleted: {
      const auto base_name = take("base");
      std::string base_text = base_name ? *base_name : std::string("fibonacci");
      const auto radius = take("radius");
      const auto rscale = take("rscale");
      const auto rexp = take("rexp");
      const auto center = take("center");
      std::string rest;
      for (const auto& [k, v] : kv) rest += (rest.empty() ? "" : ",") + k + "=" + v;
      kv.clear();
      const GeneratorSpec base = parse(base_text + ":" + rest);
      double r = 0.0;
      if (radius) {
        r = parse_double(*radius, "radius");
      } else if (rscale && rexp) {
        r = parse_double(*rscale, "rscale") *
            std::pow(static_cast<double>(base.n), -parse_double(*rexp, "rexp"));
      } else {
        throw InvalidArgument("cap_depleted requires radius= or rscale= and rexp=");
      }
      std::vector<double> c;
      if (center) {
        std::string_view cv = *center;
        while (true) {
          const auto slash = cv.find('/');
          c.push_back(parse_double(cv.substr(0, slash), "center"));
          if (slash == std::string_view::npos) break;
          cv.remove_prefix(slash + 1);
        }
        const double r2 = norm(c);
        if (r2 == 0.0) throw InvalidArgument("cap center must be nonzero");
        for (double& v : c) v /= r2;
      } else {
        c.assign(base.sphere_dim() + 1, 0.0);
        c.back() = 1.0;
      }
      spec = cap_depleted(base, std::move(c), r);
      break;
    }
  }
  if (!kv.empty()) throw InvalidArgument("unknown family parameter '" + kv.begin()->first + "'");
  spec.validate();
  return spec;
}

PointSet generate(const GeneratorSpec& spec) {
  spec.validate();
  const std::string label = spec.to_string();
  switch (spec.family) {
    case Family::equal_spaced_circle: return circle_points(spec.n, {}, label);
    case Family::circle_removed: {
      std::vector<bool> keep(spec.n, true);
      for (long k = 0; k < spec.removed; ++k) {
        const long j = spec.consecutive ? k : (k * spec.n) / spec.removed;
        keep[j] = false;
      }
      return circle_points(spec.n, keep, label);
    }
    case Family::fibonacci_s2: return fibonacci(spec.n, label);
    case Family::random_uniform: return random_points(spec.n, spec.seed, spec.dim, label);
    case Family::equal_area_s2: return equal_area(spec.n, label);
    case Family::cap_depleted: {
      const PointSet base = generate(*spec.base);
      const double threshold = std::cos(spec.cap_radius);
      std::vector<double> coords;
      for (std::size_t i = 0; i < base.size(); ++i) {
        auto x = base.point(i);
        double dot = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) dot += x[k] * spec.cap_center[k];
        if (dot >= threshold) continue;
        coords.insert(coords.end(), x.begin(), x.end());
      }
      if (coords.empty()) throw InvalidArgument("cap_depleted removed every point");
      return PointSet(base.dim(), std::move(coords), label);
    }
  }
  throw InvalidArgument("unknown family");
}

PointSet read_points(std::istream& in, const std::string& label) {
  std::vector<double> coords;
  std::string line;
  std::string file_label = label;
  std::size_t columns = 0;
  std::size_t line_no = 0;
  std::vector<double> row;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view v = line;
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.remove_suffix(1);
    if (v.empty()) continue;
    if (v.front() == '#') {
      constexpr std::string_view tag = "# label:";
      if (file_label.empty() && v.substr(0, tag.size()) == tag) {
        std::string_view rest = v.substr(tag.size());
        while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
        file_label = std::string(rest);
      }
      continue;
    }
    row.clear();
    std::size_t pos = 0;
    while (pos < v.size()) {
      while (pos < v.size() && std::isspace(static_cast<unsigned char>(v[pos]))) ++pos;
      if (pos >= v.size()) break;
      std::size_t end = pos;
      while (end < v.size() && !std::isspace(static_cast<unsigned char>(v[end]))) ++end;
      std::string_view tok = v.substr(pos, end - pos);
      if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
      double x = 0.0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
      if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(x)) {
        throw ParseError("cannot parse number '" + std::string(v.substr(pos, end - pos)) + "'", line_no);
      }
      row.push_back(x);
      pos = end;
    }
    if (columns == 0) {
      if (row.size() < 2) throw ParseError("a point needs at least 2 coordinates", line_no);
      columns = row.size();
    } else if (row.size() != columns) {
      throw ParseError("expected " + std::to_string(columns) + " columns, found " +
                           std::to_string(row.size()), line_no);
    }
    const double r = norm(row);
    if (std::fabs(r - 1.0) > kLoadRejectTol) {
      throw ParseError("row norm " + format_double(r) + " is not 1", line_no);
    }
    if (std::fabs(r - 1.0) > kNormTol) {
      for (double& x : row) x /= r;
    }
    coords.insert(coords.end(), row.begin(), row.end());
  }
  if (coords.empty()) throw ParseError("no points found", line_no);
  return PointSet(static_cast<int>(columns) - 1, std::move(coords), file_label);
}

void write_points(std::ostream& out, const PointSet& ps) {
  if (!ps.label().empty()) out << "# label: " << ps.label() << '\n';
  for (std::size_t i = 0; i < ps.size(); ++i) {
    auto x = ps.point(i);
    for (std::size_t k = 0; k < x.size(); ++k) out << (k ? " " : "") << format_double(x[k]);
    out << '\n';
  }
}

PointSet load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_points(in);
}

void save(const PointSet& ps, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  write_points(out, ps);
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

double geodesic_distance(std::span<const double> x, std::span<const double> y) {
  double dm = 0.0;
  double dp = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double a = x[k] - y[k];
    const double b = x[k] + y[k];
    dm += a * a;
    dp += b * b;
  }
  return 2.0 * std::atan2(std::sqrt(dm), std::sqrt(dp));
}

PointSet transformed(const PointSet& ps, std::span<const double> matrix) {
  const auto n = static_cast<std::size_t>(ps.ambient());
  if (matrix.size() != n * n) throw InvalidArgument("transform matrix has the wrong size");
  std::vector<double> coords(ps.coords().size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    auto x = ps.point(i);
    double r = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      double v = 0.0;
      for (std::size_t b = 0; b < n; ++b) v += matrix[a * n + b] * x[b];
      coords[i * n + a] = v;
      r += v * v;
    }
    r = std::sqrt(r);
    for (std::size_t a = 0; a < n; ++a) coords[i * n + a] /= r;
  }
  return PointSet(ps.dim(), std::move(coords), ps.label(), true);
}

std::vector<double> random_rotation(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const auto un = static_cast<std::size_t>(n);
  std::vector<double> q(un * un);
  for (double& v : q) v = normal(rng);
  // Gram-Schmidt on rows
  for (std::size_t i = 0; i < un; ++i) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < i; ++j) {
        double dot = 0.0;
        for (std::size_t k = 0; k < un; ++k) dot += q[i * un + k] * q[j * un + k];
        for (std::size_t k = 0; k < un; ++k) q[i * un + k] -= dot * q[j * un + k];
      }
    }
    double r = 0.0;
    for (std::size_t k = 0; k < un; ++k) r += q[i * un + k] * q[i * un + k];
    r = std::sqrt(r);
    for (std::size_t k = 0; k < un; ++k) q[i * un + k] /= r;
  }
  return q;
}

}  // namespace sphqmc
