#pragma once

// Parabolic potentials over a cylinder Ω × (T1, T2) and a numerical check of
// the Green representation
//   u = I(u(·,T1)) + G(Hu) + V(∂_ν u) + W(u)   inside,   0 outside.

#include <cmath>
#include <numbers>
#include <vector>

#include "heatbasis/caloric.hpp"
#include "heatbasis/domain.hpp"
#include "heatbasis/kahan.hpp"

namespace heatbasis {

/// Boundary nodes of a sphere (n=3), circle (n=2) or interval ends (n=1)
/// with outward unit normals and surface-measure weights.
struct SurfaceQuadrature {
  std::vector<Vec> nodes;
  std::vector<Vec> normals;
  std::vector<double> weights;

  double area() const {
    KahanSum s;
    for (double w : weights) s += w;
    return s.value();
  }
};

inline SurfaceQuadrature sphere_surface_quadrature(const BaseDomain& base, int angular) {
  const auto* ball = std::get_if<Ball>(&base.shape());
  if (!ball) throw InvalidArgument("surface quadrature is available for ball bases only");
  if (angular < 1) throw InvalidArgument("surface quadrature needs angular count >= 1");
  const int n = base.dim();
  const detail::SpatialRule dirs = detail::sphere_rule(n, angular);
  SurfaceQuadrature s;
  const double jac = std::pow(ball->radius, n - 1);
  for (std::size_t i = 0; i < dirs.points.size(); ++i) {
    Vec p{}, nu{};
    for (int d = 0; d < n; ++d) {
      nu[d] = dirs.points[i][d];
      p[d] = ball->center[d] + ball->radius * nu[d];
    }
    s.nodes.push_back(p);
    s.normals.push_back(nu);
    s.weights.push_back(jac * dirs.weights[i]);
  }
  return s;
}

/// Resolution of potential evaluation. `temporal` is the Gauss count per
/// level of the graded time mesh on [T1, t].
struct PotentialResolution {
  int radial = 16;
  int angular = 32;
  int temporal = 6;
  int levels = 12;
  double ratio = 0.5;

  PotentialResolution doubled() const { return {2 * radial, 2 * angular, 2 * temporal, levels, ratio}; }
};

/// Gauss rule on [T1, t] with geometric clustering at τ = t: breakpoints
/// t − (t−T1)·ratio^ℓ, ℓ = 0..levels, plus the final piece up to t.
inline GaussRule graded_time_rule(double T1, double t, int per_level, int levels, double ratio) {
  GaussRule g;
  const double L = t - T1;
  double a = T1;
  for (int l = 1; l <= levels + 1; ++l) {
    const double b = l <= levels ? t - L * std::pow(ratio, l) : t;
    const GaussRule piece = gauss_legendre(per_level, a, b);
    g.nodes.insert(g.nodes.end(), piece.nodes.begin(), piece.nodes.end());
    g.weights.insert(g.weights.end(), piece.weights.begin(), piece.weights.end());
    a = b;
  }
  return g;
}

enum class PotentialKind { InitialI, VolumeG, SingleLayerV, DoubleLayerW };

namespace detail {

inline void check_potential_point(const Cylinder& cyl, const Vec& x, double t, PotentialKind kind) {
  if (t > cyl.t_end()) throw InvalidArgument("potentials are evaluated for t <= T2 only");
  if ((kind == PotentialKind::SingleLayerV || kind == PotentialKind::DoubleLayerW) &&
      std::abs(cyl.base().boundary_offset(x)) <= 1e-12)
    throw DomainError("layer potentials are not evaluated on the boundary surface");
}

}  // namespace detail

/// Quadrature value of one parabolic potential at (x, t). `density` maps a
/// space–time point to the density value; for InitialI it is sampled at
/// τ = T1. Time lags use t − T1 for the initial potential.
template <class Density>
double parabolic_potential(PotentialKind kind, const Density& density, const Cylinder& cyl, const Vec& x, double t,
                           const PotentialResolution& res = {}) {
  detail::check_potential_point(cyl, x, t, kind);
  const double T1 = cyl.t_start();
  if (t <= T1) return 0.0;
  const int n = cyl.dim();
  KahanSum s;
  if (kind == PotentialKind::InitialI) {
    const detail::SpatialRule vol = detail::spatial_rule(cyl.base(), Resolution{res.radial, res.angular, 1});
    for (std::size_t i = 0; i < vol.points.size(); ++i) {
      const double k = fundamental_solution(n, sub(x, vol.points[i]), t - T1);
      if (k != 0.0) s += vol.weights[i] * k * density(SpaceTimePoint{vol.points[i], T1});
    }
    return s.value();
  }
  const GaussRule time = graded_time_rule(T1, t, res.temporal, res.levels, res.ratio);
  if (kind == PotentialKind::VolumeG) {
    const detail::SpatialRule vol = detail::spatial_rule(cyl.base(), Resolution{res.radial, res.angular, 1});
    for (std::size_t q = 0; q < time.nodes.size(); ++q)
      for (std::size_t i = 0; i < vol.points.size(); ++i) {
        const double k = fundamental_solution(n, sub(x, vol.points[i]), t - time.nodes[q]);
        if (k != 0.0) s += time.weights[q] * vol.weights[i] * k * density(SpaceTimePoint{vol.points[i], time.nodes[q]});
      }
    return s.value();
  }
  const SurfaceQuadrature surf = sphere_surface_quadrature(cyl.base(), res.angular);
  for (std::size_t q = 0; q < time.nodes.size(); ++q) {
    const double lag = t - time.nodes[q];
    for (std::size_t i = 0; i < surf.nodes.size(); ++i) {
      const Vec z = sub(x, surf.nodes[i]);
      const double phi = fundamental_solution(n, z, lag);
      if (phi == 0.0) continue;
      const SpaceTimePoint y{surf.nodes[i], time.nodes[q]};
      double kernel = phi;
      if (kind == PotentialKind::DoubleLayerW) {
        // −∂_{ν_y} Φ(x−y, lag) = −((x−y)·ν / (2·lag)) Φ
        double zn = 0.0;
        for (int d = 0; d < n; ++d) zn += z[d] * surf.normals[i][d];
        kernel = -zn / (2.0 * lag) * phi;
      }
      s += time.weights[q] * surf.weights[i] * kernel * density(y);
    }
  }
  return s.value();
}

struct GreenCheck {
  double value = 0.0;       ///< u at the point (0 outside the closed cylinder)
  double reproduced = 0.0;  ///< I + V + W at the point
  double residual = 0.0;    ///< |reproduced − value|
  bool inside = false;
};

/// Green representation of a caloric field at a point strictly inside or
/// strictly outside the closed cylinder (ball base). The volume term
/// vanishes because Hu = 0.
template <CaloricField U>
GreenCheck green_identity(const U& u, const Cylinder& cyl, const SpaceTimePoint& point,
                          const PotentialResolution& res = {}) {
  const bool inside = cyl.contains(point);
  if (!inside && cyl.closure_contains(point))
    throw DomainError("green_identity: point lies on the cylinder boundary");
  if (point.t > cyl.t_end()) throw InvalidArgument("green_identity: points later than T2 are unsupported");
  const int n = cyl.dim();
  GreenCheck g;
  g.inside = inside;
  g.value = inside ? u.eval(MultiIndex{}, point) : 0.0;
  if (point.t > cyl.t_start()) {
    const auto* ball = std::get_if<Ball>(&cyl.base().shape());
    if (!ball) throw InvalidArgument("green_identity needs a ball base");
    auto value = [&](const SpaceTimePoint& p) { return u.eval(MultiIndex{}, p); };
    auto normal_derivative = [&](const SpaceTimePoint& p) {
      double dn = 0.0;
      const Vec nu = sub(p.x, ball->center);
      for (int i = 0; i < n; ++i) {
        MultiIndex d;
        d.alpha[i] = 1;
        dn += nu[i] / ball->radius * u.eval(d, p);
      }
      return dn;
    };
    g.reproduced = parabolic_potential(PotentialKind::InitialI, value, cyl, point.x, point.t, res) +
                   parabolic_potential(PotentialKind::SingleLayerV, normal_derivative, cyl, point.x, point.t, res) +
                   parabolic_potential(PotentialKind::DoubleLayerW, value, cyl, point.x, point.t, res);
  }
  g.residual = std::abs(g.reproduced - g.value);
  return g;
}

}  // namespace heatbasis
