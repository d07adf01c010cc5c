#pragma once

// Bessel functions of the first kind (real order), their zeros, and real
// orthonormal spherical harmonics on S^1 and S^2.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>

#include "heatbasis/error.hpp"

namespace heatbasis {

/// J_ν(x) for ν ≥ 0, x ≥ 0. Backed by the standard library's
/// cyl_bessel_j; arguments beyond the guarded range raise OutOfRange.
inline double bessel_j(double nu, double x) {
  if (!(nu >= 0) || !(x >= 0)) throw InvalidArgument("bessel_j requires nu >= 0 and x >= 0");
  if (nu > 500.0 || x > 1e5) throw OutOfRange("bessel_j: (nu, x) outside the supported range");
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  double v;
  try {
    v = std::cyl_bessel_j(nu, x);
  } catch (const std::exception& e) {
    throw OutOfRange(std::string("bessel_j: ") + e.what());
  }
  if (!std::isfinite(v)) throw OutOfRange("bessel_j: non-finite result");
  return v;
}

/// J'_ν(x). Uses (J_{ν−1} − J_{ν+1})/2 for ν ≥ 1, −J_1 for ν = 0 and
/// (ν/x)J_ν − J_{ν+1} for 0 < ν < 1 (unbounded at x = 0).
inline double bessel_j_prime(double nu, double x) {
  if (!(nu >= 0) || !(x >= 0)) throw InvalidArgument("bessel_j_prime requires nu >= 0 and x >= 0");
  if (nu == 0.0) return -bessel_j(1.0, x);
  if (nu >= 1.0) return 0.5 * (bessel_j(nu - 1.0, x) - bessel_j(nu + 1.0, x));
  if (x == 0.0) throw DomainError("J'_nu(0) is unbounded for 0 < nu < 1");
  return nu / x * bessel_j(nu, x) - bessel_j(nu + 1.0, x);
}

/// J''_ν(x) for x > 0 through first-derivative recurrences only.
inline double bessel_j_second(double nu, double x) {
  if (!(x > 0)) throw DomainError("bessel_j_second requires x > 0");
  const double j0 = bessel_j(nu, x), j1 = bessel_j(nu + 1.0, x);
  const double d0 = nu / x * j0 - j1;
  const double d1 = j0 - (nu + 1.0) / x * j1;
  return -nu / (x * x) * j0 + nu / x * d0 - d1;
}

enum class ZeroKind { Function, Derivative };

namespace detail {

inline double mcmahon_guess(double nu, int m, ZeroKind kind) {
  const double mu = 4.0 * nu * nu;
  if (kind == ZeroKind::Function) {
    const double b = (m + 0.5 * nu - 0.25) * std::numbers::pi, e = 8.0 * b;
    return b - (mu - 1.0) / e - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e * e * e);
  }
  // J'_0 has a zero at the origin that the positive-zero count skips.
  const int mm = nu == 0.0 ? m + 1 : m;
  const double b = (mm + 0.5 * nu - 0.75) * std::numbers::pi, e = 8.0 * b;
  return b - (mu + 3.0) / e - 4.0 * (7.0 * mu * mu + 82.0 * mu - 9.0) / (3.0 * e * e * e);
}

}  // namespace detail

namespace detail {

/// m-th sign change of f scanning upward from `from` in steps of 0.1,
/// polished by Newton from `guess` (ignored when outside the bracket) with
/// bisection fallback.
template <class F, class DF>
double bracketed_zero(F f, DF df, double from, int m, double guess, const std::string& what) {
  const double step = 0.1;
  double a = from;
  double fa = f(a);
  const double limit = from + 2.0 * std::numbers::pi * (m + 2) + 20.0;
  int found = 0;
  while (a < limit) {
    const double b = a + step;
    const double fb = f(b);
    if (fb == 0.0 || (fa < 0) != (fb < 0)) {
      if (++found == m) {
        if (fb == 0.0) return b;
        double lo = a, hi = b, flo = fa;
        double x = guess;
        if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
        for (int it = 0; it < 200; ++it) {
          const double fx = f(x);
          if (fx == 0.0) return x;
          if ((fx < 0) == (flo < 0))
            lo = x, flo = fx;
          else
            hi = x;
          const double d = df(x);
          double nx = d != 0.0 ? x - fx / d : 0.5 * (lo + hi);
          if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
          if (std::abs(nx - x) <= 1e-15 * std::abs(x) || hi - lo <= 4e-16 * hi) return nx;
          x = nx;
        }
        throw ConvergenceError(what + ": refinement did not converge");
      }
    }
    a = b;
    fa = fb;
  }
  throw ConvergenceError(what + ": failed to bracket zero " + std::to_string(m));
}

}  // namespace detail

/// m-th positive zero of J_ν (kind Function) or J'_ν (kind Derivative).
/// Zeros are bracketed by a sign scan from a known lower bound, then
/// polished by Newton steps seeded with McMahon's expansion; steps leaving
/// the bracket fall back to bisection.
inline double bessel_zero(double nu, int m, ZeroKind kind) {
  if (m < 1) throw InvalidArgument("bessel_zero requires m >= 1");
  if (!(nu >= 0)) throw InvalidArgument("bessel_zero requires nu >= 0");
  auto f = [&](double x) { return kind == ZeroKind::Function ? bessel_j(nu, x) : bessel_j_prime(nu, x); };
  auto df = [&](double x) {
    if (kind == ZeroKind::Function) return bessel_j_prime(nu, x);
    return bessel_j_second(nu, x);
  };
  // j_{ν,1} > ν and j'_{ν,1} > sqrt(ν(ν+2)) > ν for ν > 0.
  return detail::bracketed_zero(f, df, nu > 0.0 ? nu : 0.1, m, detail::mcmahon_guess(nu, m, kind),
                                "bessel_zero(nu=" + std::to_string(nu) + ")");
}

/// m-th positive zero of d/dz [z^{(2−n)/2} J_p(z)], i.e. of
/// z·J'_p(z) + (1 − n/2)·J_p(z): the Neumann eigenvalue condition for the
/// ball profile r^{(2−n)/2} J_p(√λ r). For n = 2 these are the zeros of J'_p.
inline double ball_neumann_zero(int n, double p, int m) {
  if (n == 2) return bessel_zero(p, m, ZeroKind::Derivative);
  if (n != 3) throw InvalidArgument("ball_neumann_zero supports n in {2, 3}");
  if (m < 1) throw InvalidArgument("ball_neumann_zero requires m >= 1");
  const double c = 1.0 - 0.5 * n;
  auto f = [&](double z) { return z * bessel_j_prime(p, z) + c * bessel_j(p, z); };
  auto df = [&](double z) { return (1.0 + c) * bessel_j_prime(p, z) + z * bessel_j_second(p, z); };
  // Every positive zero exceeds sqrt(p² − (n−2)²/4) = sqrt(k(k+n−2)).
  const double from = std::max(0.1, std::sqrt(std::max(0.0, p * p - 0.25)));
  return detail::bracketed_zero(f, df, from, m, 0.0, "ball_neumann_zero");
}

/// Dimension J(k) of the space of degree-k spherical harmonics in ℝⁿ,
/// J(k) = (n+2k−2)(n+k−3)! / (k!(n−2)!), with k = 0 → 1 and (n=2, k ≥ 1) → 2.
inline int harmonic_dimension(int n, int k) {
  if (n != 2 && n != 3) throw InvalidArgument("harmonic_dimension supports n in {2, 3}");
  if (k < 0) throw InvalidArgument("harmonic degree must be >= 0");
  if (k == 0) return 1;
  if (n == 2) return 2;
  // (n+k−3)! / (k!(n−2)!) = C(n+k−3, k) / (n−2)
  std::uint64_t binom = 1;
  for (int i = 1; i <= n - 3; ++i) binom = binom * (k + i) / i;
  return static_cast<int>((n + 2 * k - 2) * binom / (n - 2));
}

struct HarmonicIndex {
  int n = 2;
  int k = 0;
  int j = 1;

  HarmonicIndex() = default;
  HarmonicIndex(int n_, int k_, int j_) : n(n_), k(k_), j(j_) {
    if (j < 1 || j > harmonic_dimension(n, k))
      throw InvalidArgument("harmonic index j=" + std::to_string(j) + " out of range for degree " +
                            std::to_string(k));
  }
};

/// Azimuthal order m and trigonometric kind of h^{(j)}_k: j = 1 is the
/// cos-type (m = k in 2-D, m = 0 in 3-D); in 3-D j = 2q is cos(qφ), j = 2q+1
/// is sin(qφ); in 2-D j = 2 is sin(kθ).
struct AzimuthalOrder {
  int m = 0;
  bool is_sin = false;
};

inline AzimuthalOrder azimuthal_order(const HarmonicIndex& h) {
  if (h.n == 2) return {h.k, h.j == 2};
  if (h.j == 1) return {0, false};
  return {h.j / 2, h.j % 2 == 1};
}

/// Fully normalized associated Legendre function (no Condon–Shortley
/// phase), scaled so that ∫_{S²} (P̄ · trig(mφ))² = 1 for the real harmonics.
inline double normalized_legendre(int k, int m, double z) {
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  double pmm = 1.0;
  for (int i = 1; i <= m; ++i) pmm *= (2.0 * i - 1.0) * s;
  double val;
  if (k == m) {
    val = pmm;
  } else {
    double p0 = pmm, p1 = z * (2.0 * m + 1.0) * pmm;
    for (int l = m + 2; l <= k; ++l) {
      const double p2 = ((2.0 * l - 1.0) * z * p1 - (l + m - 1.0) * p0) / (l - m);
      p0 = p1;
      p1 = p2;
    }
    val = p1;
  }
  // (k−m)!/(k+m)!
  double ratio = 1.0;
  for (int i = k - m + 1; i <= k + m; ++i) ratio /= i;
  double norm = std::sqrt((2.0 * k + 1.0) / (4.0 * std::numbers::pi) * ratio);
  if (m > 0) norm *= std::numbers::sqrt2;
  return norm * val;
}

/// Real L²(S^{n−1})-orthonormal spherical harmonic h^{(j)}_k at a unit vector.
inline double spherical_harmonic(const HarmonicIndex& h, const std::array<double, 3>& dir) {
  if (h.j < 1 || h.j > harmonic_dimension(h.n, h.k)) throw InvalidArgument("harmonic index out of range");
  double r2 = 0.0;
  for (int i = 0; i < h.n; ++i) r2 += dir[i] * dir[i];
  if (std::abs(std::sqrt(r2) - 1.0) > 1e-12) throw InvalidArgument("spherical_harmonic requires a unit direction");
  const AzimuthalOrder o = azimuthal_order(h);
  const double phi = std::atan2(dir[1], dir[0]);
  const double trig = o.is_sin ? std::sin(o.m * phi) : std::cos(o.m * phi);
  if (h.n == 2) {
    if (h.k == 0) return 1.0 / std::sqrt(2.0 * std::numbers::pi);
    return trig / std::sqrt(std::numbers::pi);
  }
  return normalized_legendre(h.k, o.m, dir[2]) * trig;
}

/// Left-hand side of the radial equation
///   ((r∂_r)² + (n−2)(r∂_r) − (k(n+k−2) − lam·r²)) g = 0
/// at g(r) = r^{(2−n)/2} J_p(√|lam| r). `lam` is the positive eigenvalue
/// of Δu = −lam·u; derivatives of J come from recurrences, not from
/// Bessel's equation, so the residual vanishes only for the right order p.
inline double radial_ode_residual(int n, int k, double p, double lam, double r) {
  if (!(r > 0)) throw InvalidArgument("radial_ode_residual requires r > 0");
  const double a = 0.5 * (2.0 - n), b = std::sqrt(std::abs(lam)), z = b * r;
  const double J = bessel_j(p, z), J1 = bessel_j_prime(p, z), J2 = bessel_j_second(p, z);
  const double ra = std::pow(r, a);
  const double g = ra * J;
  const double Dg = ra * (a * J + z * J1);
  const double D2g = ra * (a * a * J + (2.0 * a + 1.0) * z * J1 + z * z * J2);
  return D2g + (n - 2.0) * Dg - (k * (n + k - 2.0) - lam * r * r) * g;
}

}  // namespace heatbasis
