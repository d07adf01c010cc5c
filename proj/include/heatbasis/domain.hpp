#pragma once

// Space–time cylinders over balls, annuli and boxes, and tensor Gauss
// quadrature over them.

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "heatbasis/error.hpp"
#include "heatbasis/kahan.hpp"

namespace heatbasis {

/// Spatial vector. Only the first `n` components are meaningful; the rest
/// stay zero.
using Vec = std::array<double, 3>;

struct SpaceTimePoint {
  Vec x{};
  double t = 0.0;

  friend bool operator==(const SpaceTimePoint&, const SpaceTimePoint&) = default;
};

inline double norm2(const Vec& v, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += v[i] * v[i];
  return s;
}
inline double norm(const Vec& v, int n) { return std::sqrt(norm2(v, n)); }
inline Vec sub(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

struct Ball {
  Vec center{};
  double radius = 1.0;
};

struct Annulus {
  Vec center{};
  double r_inner = 0.5;
  double r_outer = 1.0;
};

struct Box {
  Vec low{};
  Vec high{};
};

/// Bounded spatial base domain in dimension 1, 2 or 3.
class BaseDomain {
 public:
  using Shape = std::variant<Ball, Annulus, Box>;

  static BaseDomain ball(int n, Vec center, double radius) {
    check_dim(n);
    if (!(radius > 0)) throw InvalidArgument("ball radius must be positive");
    return BaseDomain(n, Ball{center, radius});
  }
  static BaseDomain annulus(int n, Vec center, double r_inner, double r_outer) {
    check_dim(n);
    if (!(r_inner > 0 && r_inner < r_outer))
      throw InvalidArgument("annulus requires 0 < r_inner < r_outer");
    return BaseDomain(n, Annulus{center, r_inner, r_outer});
  }
  static BaseDomain box(int n, Vec low, Vec high) {
    check_dim(n);
    for (int i = 0; i < n; ++i)
      if (!(low[i] < high[i])) throw InvalidArgument("box requires low < high componentwise");
    for (int i = n; i < 3; ++i) low[i] = high[i] = 0.0;
    return BaseDomain(n, Box{low, high});
  }

  int dim() const noexcept { return dim_; }
  const Shape& shape() const noexcept { return shape_; }
  bool is_ball() const noexcept { return std::holds_alternative<Ball>(shape_); }
  bool is_annulus() const noexcept { return std::holds_alternative<Annulus>(shape_); }
  bool is_box() const noexcept { return std::holds_alternative<Box>(shape_); }

  /// Lebesgue measure of the domain.
  double volume() const {
    return std::visit(
        [this](const auto& s) -> double {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Ball>) {
            return unit_ball_volume(dim_) * std::pow(s.radius, dim_);
          } else if constexpr (std::is_same_v<T, Annulus>) {
            return unit_ball_volume(dim_) * (std::pow(s.r_outer, dim_) - std::pow(s.r_inner, dim_));
          } else {
            double v = 1.0;
            for (int i = 0; i < dim_; ++i) v *= s.high[i] - s.low[i];
            return v;
          }
        },
        shape_);
  }

  /// Signed distance-like test: negative strictly inside, positive strictly
  /// outside, zero on the boundary (exact for balls/annuli, sup-norm for boxes).
  double boundary_offset(const Vec& x) const {
    return std::visit(
        [&](const auto& s) -> double {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Ball>) {
            return norm(sub(x, s.center), dim_) - s.radius;
          } else if constexpr (std::is_same_v<T, Annulus>) {
            const double r = norm(sub(x, s.center), dim_);
            return std::max(r - s.r_outer, s.r_inner - r);
          } else {
            double d = -1e300;
            for (int i = 0; i < dim_; ++i) d = std::max({d, s.low[i] - x[i], x[i] - s.high[i]});
            return d;
          }
        },
        shape_);
  }

  bool contains(const Vec& x) const { return boundary_offset(x) < 0; }

  static double unit_ball_volume(int n) {
    switch (n) {
      case 1: return 2.0;
      case 2: return std::numbers::pi;
      default: return 4.0 * std::numbers::pi / 3.0;
    }
  }

 private:
  BaseDomain(int n, Shape s) : shape_(s), dim_(n) {}
  static void check_dim(int n) {
    if (n < 1 || n > 3) throw InvalidArgument("unsupported dimension " + std::to_string(n));
  }

  Shape shape_;
  int dim_;
};

/// Space–time cylinder base × (t_start, t_end).
class Cylinder {
 public:
  Cylinder(BaseDomain base, double t_start, double t_end)
      : base_(std::move(base)), t_start_(t_start), t_end_(t_end) {
    if (!(t_start < t_end)) throw InvalidArgument("cylinder requires t_start < t_end");
  }

  const BaseDomain& base() const noexcept { return base_; }
  int dim() const noexcept { return base_.dim(); }
  double t_start() const noexcept { return t_start_; }
  double t_end() const noexcept { return t_end_; }
  double volume() const { return base_.volume() * (t_end_ - t_start_); }

  bool contains(const SpaceTimePoint& p) const {
    return base_.contains(p.x) && p.t > t_start_ && p.t < t_end_;
  }
  /// True when p lies in the closed cylinder.
  bool closure_contains(const SpaceTimePoint& p) const {
    return base_.boundary_offset(p.x) <= 0 && p.t >= t_start_ && p.t <= t_end_;
  }

 private:
  BaseDomain base_;
  double t_start_;
  double t_end_;
};

struct Resolution {
  int radial = 8;
  int angular = 16;
  int temporal = 8;

  Resolution doubled() const { return {2 * radial, 2 * angular, 2 * temporal}; }
};

/// Nodes and strictly positive weights over a cylinder. `axis_counts` lists
/// the per-axis node counts of the tensor product, temporal axis last.
struct QuadratureRule {
  int dim = 0;
  Resolution resolution;
  std::vector<int> axis_counts;
  std::vector<SpaceTimePoint> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
  double weight_sum() const {
    KahanSum s;
    for (double w : weights) s += w;
    return s.value();
  }
};

/// Gauss–Legendre nodes (ascending) and weights on [a, b].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussRule gauss_legendre(int count, double a, double b) {
  if (count < 1) throw InvalidArgument("Gauss–Legendre rule needs at least one node");
  if (!(a < b)) throw InvalidArgument("degenerate integration interval");
  GaussRule g;
  g.nodes.resize(count);
  g.weights.resize(count);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (int i = 0; i < (count + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= count; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = count * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) {
        // one more evaluation of the derivative at the converged root
        p0 = 1.0, p1 = z;
        for (int k = 2; k <= count; ++k) {
          const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = count * (z * p1 - p0) / (z * z - 1.0);
        break;
      }
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    g.nodes[i] = mid - half * z;
    g.nodes[count - 1 - i] = mid + half * z;
    g.weights[i] = g.weights[count - 1 - i] = half * w;
  }
  return g;
}

namespace detail {

/// Spatial part of a tensor rule: points (absolute) and weights.
struct SpatialRule {
  std::vector<Vec> points;
  std::vector<double> weights;
  std::vector<int> axis_counts;
};

/// Unit directions with weights on the sphere S^{n-1}.
inline SpatialRule sphere_rule(int n, int angular) {
  SpatialRule s;
  if (n == 1) {
    s.points = {Vec{-1, 0, 0}, Vec{1, 0, 0}};
    s.weights = {1.0, 1.0};
    s.axis_counts = {2};
  } else if (n == 2) {
    for (int j = 0; j < angular; ++j) {
      const double th = 2.0 * std::numbers::pi * j / angular;
      s.points.push_back(Vec{std::cos(th), std::sin(th), 0.0});
      s.weights.push_back(2.0 * std::numbers::pi / angular);
    }
    s.axis_counts = {angular};
  } else {
    const GaussRule polar = gauss_legendre(angular, -1.0, 1.0);  // in cos(polar angle)
    const int naz = 2 * angular;
    for (int a = 0; a < angular; ++a) {
      const double z = polar.nodes[a], rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      for (int b = 0; b < naz; ++b) {
        const double ph = 2.0 * std::numbers::pi * b / naz;
        s.points.push_back(Vec{rho * std::cos(ph), rho * std::sin(ph), z});
        s.weights.push_back(polar.weights[a] * 2.0 * std::numbers::pi / naz);
      }
    }
    s.axis_counts = {angular, naz};
  }
  return s;
}

inline SpatialRule shell_rule(int n, const Vec& c, double r0, double r1, int radial, int angular) {
  const GaussRule rad = gauss_legendre(radial, r0, r1);
  const SpatialRule sph = sphere_rule(n, angular);
  SpatialRule s;
  for (int i = 0; i < radial; ++i) {
    const double r = rad.nodes[i], jac = std::pow(r, n - 1);
    for (std::size_t a = 0; a < sph.points.size(); ++a) {
      Vec p{};
      for (int d = 0; d < n; ++d) p[d] = c[d] + r * sph.points[a][d];
      s.points.push_back(p);
      s.weights.push_back(rad.weights[i] * jac * sph.weights[a]);
    }
  }
  s.axis_counts = {radial};
  s.axis_counts.insert(s.axis_counts.end(), sph.axis_counts.begin(), sph.axis_counts.end());
  return s;
}

inline SpatialRule box_rule(int n, const Box& b, int per_axis) {
  std::array<GaussRule, 3> axes;
  for (int d = 0; d < n; ++d) axes[d] = gauss_legendre(per_axis, b.low[d], b.high[d]);
  SpatialRule s;
  std::array<int, 3> idx{0, 0, 0};
  const int total = static_cast<int>(std::pow(per_axis, n));
  for (int flat = 0; flat < total; ++flat) {
    int rem = flat;
    for (int d = n - 1; d >= 0; --d) {
      idx[d] = rem % per_axis;
      rem /= per_axis;
    }
    Vec p{};
    double w = 1.0;
    for (int d = 0; d < n; ++d) {
      p[d] = axes[d].nodes[idx[d]];
      w *= axes[d].weights[idx[d]];
    }
    s.points.push_back(p);
    s.weights.push_back(w);
  }
  s.axis_counts.assign(n, per_axis);
  return s;
}

inline SpatialRule spatial_rule(const BaseDomain& base, const Resolution& res) {
  const int n = base.dim();
  return std::visit(
      [&](const auto& s) -> SpatialRule {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return shell_rule(n, s.center, 0.0, s.radius, res.radial, res.angular);
        } else if constexpr (std::is_same_v<T, Annulus>) {
          if (res.radial < 2) throw InvalidArgument("annulus quadrature requires radial count >= 2");
          return shell_rule(n, s.center, s.r_inner, s.r_outer, res.radial, res.angular);
        } else {
          return box_rule(n, s, res.radial);
        }
      },
      base.shape());
}

}  // namespace detail

/// Tensor Gauss rule over the cylinder: Gauss–Legendre in radius and time,
/// trapezoid in the circle angle (n=2), Gauss in cos(polar) × trapezoid in
/// azimuth with 2·angular points (n=3). Box bases use `radial` Gauss nodes
/// per coordinate axis; n=1 balls/annuli mirror the radial rule to both sides.
inline QuadratureRule tensor_quadrature(const Cylinder& cyl, const Resolution& res) {
  if (res.radial < 1 || res.angular < 1 || res.temporal < 1)
    throw InvalidArgument("quadrature resolution components must be >= 1");
  const detail::SpatialRule space = detail::spatial_rule(cyl.base(), res);
  const GaussRule time = gauss_legendre(res.temporal, cyl.t_start(), cyl.t_end());
  QuadratureRule q;
  q.dim = cyl.dim();
  q.resolution = res;
  q.axis_counts = space.axis_counts;
  q.axis_counts.push_back(res.temporal);
  q.nodes.reserve(space.points.size() * res.temporal);
  q.weights.reserve(space.points.size() * res.temporal);
  for (std::size_t i = 0; i < space.points.size(); ++i) {
    for (int k = 0; k < res.temporal; ++k) {
      q.nodes.push_back(SpaceTimePoint{space.points[i], time.nodes[k]});
      q.weights.push_back(space.weights[i] * time.weights[k]);
    }
  }
  return q;
}

/// Σ weightᵢ · f(nodeᵢ), compensated.
template <class F>
double quad_integrate(F&& f, const QuadratureRule& rule) {
  KahanSum s;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(rule.nodes[i]);
  return s.value();
}

// JSON: {"base": {"kind": "ball", "center": [...], "radius": R}, "t": [T1, T2]}.
// The dimension is the length of "center" (or "low" for boxes).

namespace detail {
inline Vec vec_from_json(const nlohmann::json& j, int& n) {
  if (!j.is_array() || j.empty() || j.size() > 3)
    throw InvalidArgument("invalid-config", "point must be an array of 1 to 3 numbers");
  n = static_cast<int>(j.size());
  Vec v{};
  for (int i = 0; i < n; ++i) v[i] = j.at(i).get<double>();
  return v;
}
inline nlohmann::json vec_to_json(const Vec& v, int n) {
  nlohmann::json a = nlohmann::json::array();
  for (int i = 0; i < n; ++i) a.push_back(v[i]);
  return a;
}
}  // namespace detail

inline nlohmann::json to_json(const BaseDomain& b) {
  const int n = b.dim();
  return std::visit(
      [n](const auto& s) -> nlohmann::json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>)
          return {{"kind", "ball"}, {"center", detail::vec_to_json(s.center, n)}, {"radius", s.radius}};
        else if constexpr (std::is_same_v<T, Annulus>)
          return {{"kind", "annulus"},
                  {"center", detail::vec_to_json(s.center, n)},
                  {"r_inner", s.r_inner},
                  {"r_outer", s.r_outer}};
        else
          return {{"kind", "box"}, {"low", detail::vec_to_json(s.low, n)}, {"high", detail::vec_to_json(s.high, n)}};
      },
      b.shape());
}

inline nlohmann::json to_json(const Cylinder& c) {
  return {{"base", to_json(c.base())}, {"t", {c.t_start(), c.t_end()}}};
}

inline BaseDomain base_domain_from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    int n = 0;
    if (kind == "ball") {
      const Vec c = detail::vec_from_json(j.at("center"), n);
      return BaseDomain::ball(n, c, j.at("radius").get<double>());
    }
    if (kind == "annulus") {
      const Vec c = detail::vec_from_json(j.at("center"), n);
      return BaseDomain::annulus(n, c, j.at("r_inner").get<double>(), j.at("r_outer").get<double>());
    }
    if (kind == "box") {
      int m = 0;
      const Vec lo = detail::vec_from_json(j.at("low"), n);
      const Vec hi = detail::vec_from_json(j.at("high"), m);
      if (m != n) throw InvalidArgument("invalid-config", "box corners differ in dimension");
      return BaseDomain::box(n, lo, hi);
    }
    throw InvalidArgument("invalid-config", "unknown base kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("invalid-config", std::string("base domain: ") + e.what());
  } catch (const Error& e) {
    throw InvalidArgument("invalid-config", e.what());
  }
}

inline Cylinder cylinder_from_json(const nlohmann::json& j) {
  try {
    const auto& t = j.at("t");
    if (!t.is_array() || t.size() != 2) throw InvalidArgument("invalid-config", "\"t\" must be [T1, T2]");
    return Cylinder(base_domain_from_json(j.at("base")), t.at(0).get<double>(), t.at(1).get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("invalid-config", std::string("cylinder: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument("invalid-config", e.what());
  }
}

}  // namespace heatbasis
