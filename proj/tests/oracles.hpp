#pragma once

// Independent reference values computed in 50-digit arithmetic.

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using Real = boost::multiprecision::cpp_bin_float_50;

// Power series of J_nu; fine for x <= 30 at this precision.
inline Real bessel_j(const Real& nu, const Real& x) {
  if (x == 0) return nu == 0 ? Real(1) : Real(0);
  const Real half = x / 2;
  Real term = pow(half, nu) / boost::math::tgamma(nu + 1);
  Real sum = term;
  const Real q = -half * half;
  for (int k = 1; k < 400; ++k) {
    term *= q / (Real(k) * (Real(k) + nu));
    sum += term;
    if (abs(term) < 1e-45 * (abs(sum) + 1e-30)) break;
  }
  return sum;
}

inline Real bessel_j_prime(const Real& nu, const Real& x) {
  if (nu == 0) return -bessel_j(1, x);
  return (bessel_j(nu - 1, x) - bessel_j(nu + 1, x)) / 2;
}

// Bisection for a sign change of f on [a, b].
template <class F>
double bisect(F f, double a, double b) {
  Real lo = a, hi = b;
  Real flo = f(lo);
  for (int i = 0; i < 200 && hi - lo > 1e-30; ++i) {
    const Real mid = (lo + hi) / 2;
    const Real fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return static_cast<double>((lo + hi) / 2);
}

// m-th sign change of f on (0, 60) by a fine scan followed by bisection.
template <class F>
double scan_zero(F f, int m) {
  const double h = 0.05;
  double a = h;
  Real fa = f(a);
  int found = 0;
  for (double b = a + h; b < 60.0; b += h) {
    const Real fb = f(b);
    if ((fa < 0) != (fb < 0) && ++found == m) return bisect(f, a, b);
    a = b;
    fa = fb;
  }
  return -1.0;
}

// m-th positive zero of J_nu (derivative = false) or J'_nu (true).
inline double bessel_zero(double nu, int m, bool derivative) {
  return scan_zero([&](const Real& x) { return derivative ? bessel_j_prime(nu, x) : bessel_j(nu, x); }, m);
}

}  // namespace oracle
