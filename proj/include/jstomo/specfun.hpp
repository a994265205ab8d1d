#pragma once

// Special functions feeding the tomographic kernels: factorials in log space,
// orthogonal polynomials by recurrence, Wigner d/D matrices, Clebsch-Gordan
// coefficients and Fock-basis displacement matrix elements.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "jstomo/half_int.hpp"

namespace jstomo::specfun {

using cplx = std::complex<double>;

inline double log_factorial(int n) {
  if (n < 0) throw std::domain_error("log_factorial: negative argument");
  return std::lgamma(static_cast<double>(n) + 1.0);
}

inline double factorial(int n) { return std::exp(log_factorial(n)); }

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k));
}

/// Associated Laguerre polynomial L_n^{(k)}(x) by the three-term recurrence.
/// Integer k >= -n is accepted; negative k is folded with
/// L_n^{(-m)}(x) = (-x)^m (n-m)!/n! L_{n-m}^{(m)}(x).
inline double assoc_laguerre(int n, int k, double x) {
  if (n < 0) throw std::domain_error("assoc_laguerre: n < 0");
  if (k < -n) throw std::domain_error("assoc_laguerre: k < -n");
  if (k < 0) {
    int m = -k;
    return std::pow(-x, m) *
           std::exp(log_factorial(n - m) - log_factorial(n)) *
           assoc_laguerre(n - m, m, x);
  }
  double lk = static_cast<double>(k);
  double p0 = 1.0;
  if (n == 0) return p0;
  double p1 = 1.0 + lk - x;
  for (int i = 1; i < n; ++i) {
    double p2 = ((2.0 * i + 1.0 + lk - x) * p1 - (i + lk) * p0) / (i + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

/// Physicists' Hermite polynomial H_r(x).
inline double hermite(int r, double x) {
  if (r < 0) throw std::domain_error("hermite: r < 0");
  double p0 = 1.0;
  if (r == 0) return p0;
  double p1 = 2.0 * x;
  for (int i = 1; i < r; ++i) {
    double p2 = 2.0 * x * p1 - 2.0 * i * p0;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

/// Jacobi polynomial P_n^{(a,b)}(x) by recurrence.
inline double jacobi(int n, int a, int b, double x) {
  if (n < 0) throw std::domain_error("jacobi: n < 0");
  double p0 = 1.0;
  if (n == 0) return p0;
  double p1 = 0.5 * (a - b + (a + b + 2.0) * x);
  for (int i = 1; i < n; ++i) {
    double c1 = 2.0 * (i + 1.0) * (i + a + b + 1.0) * (2.0 * i + a + b);
    double c2 = (2.0 * i + a + b + 1.0) * (a * a - b * b);
    double c3 = (2.0 * i + a + b) * (2.0 * i + a + b + 1.0) * (2.0 * i + a + b + 2.0);
    double c4 = 2.0 * (i + a) * (i + b) * (2.0 * i + a + b + 2.0);
    double p2 = ((c2 + c3 * x) * p1 - c4 * p0) / c1;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

/// Wigner small-d matrix element d^j_{m,m'}(beta).
///
/// The Jacobi-polynomial form is applied in the region m >= |m'|; the other
/// label combinations are folded in with
///   d^j_{m,m'} = (-1)^{m-m'} d^j_{-m,-m'}   and
///   d^j_{m,m'} = (-1)^{m-m'} d^j_{m',m}.
inline double wigner_small_d(HalfInt j, HalfInt m, HalfInt mp, double beta) {
  require_projection(j, m, "wigner_small_d");
  require_projection(j, mp, "wigner_small_d");
  int m2 = m.twice(), mp2 = mp.twice();
  double sign = 1.0;
  if (m2 + mp2 < 0) {
    sign *= ((m2 - mp2) / 2) % 2 == 0 ? 1.0 : -1.0;
    m2 = -m2;
    mp2 = -mp2;
  }
  if (m2 < mp2) {
    sign *= ((mp2 - m2) / 2) % 2 == 0 ? 1.0 : -1.0;
    std::swap(m2, mp2);
  }
  // now m2 >= |mp2|
  int a = (m2 - mp2) / 2;          // m - m'
  int b = (m2 + mp2) / 2;          // m + m'
  int n = (j.twice() - m2) / 2;    // j - m
  double lf = 0.5 * (log_factorial((j.twice() + m2) / 2) +
                     log_factorial((j.twice() - m2) / 2) -
                     log_factorial((j.twice() + mp2) / 2) -
                     log_factorial((j.twice() - mp2) / 2));
  double sb = std::sin(0.5 * beta), cb = std::cos(0.5 * beta);
  return sign * std::exp(lf) * std::pow(-sb, a) * std::pow(cb, b) *
         jacobi(n, a, b, std::cos(beta));
}

/// Full Wigner D-matrix element D^j_{m,m'}(Omega) = e^{-i m alpha} d^j_{m,m'}(beta) e^{-i m' gamma},
/// the matrix of R(Omega) = e^{-i alpha Sz} e^{-i beta Sy} e^{-i gamma Sz}.
inline cplx wigner_D(HalfInt j, HalfInt m, HalfInt mp, const EulerAngles& omega) {
  double d = wigner_small_d(j, m, mp, omega.beta);
  double phase = -(m.value() * omega.alpha + mp.value() * omega.gamma);
  return std::polar(d, phase);
}

/// Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M> in the Condon-Shortley
/// convention, evaluated by the Racah single-sum closed form with
/// log-factorial accumulation.
inline double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2,
                             HalfInt J, HalfInt M) {
  if (!valid_projection(j1, m1) || !valid_projection(j2, m2))
    throw std::invalid_argument("clebsch_gordan: invalid (j,m) pair");
  if (m1.twice() + m2.twice() != M.twice()) return 0.0;
  if (J.twice() < std::abs(j1.twice() - j2.twice()) ||
      J.twice() > j1.twice() + j2.twice())
    return 0.0;
  if ((j1.twice() + j2.twice() + J.twice()) % 2 != 0) return 0.0;
  if (!valid_projection(J, M)) return 0.0;

  // f(x) = log((x/2)!) for even doubled arguments
  auto f = [](int x2) {
    return log_factorial(x2 / 2);
  };
  int j12 = j1.twice(), j2_2 = j2.twice(), J2 = J.twice();
  int m1_2 = m1.twice(), m2_2 = m2.twice(), M2 = M.twice();

  double pref =
      0.5 * (std::log(J2 + 1.0) + f(j12 + j2_2 - J2) + f(j12 - j2_2 + J2) +
             f(-j12 + j2_2 + J2) - f(j12 + j2_2 + J2 + 2) + f(J2 + M2) +
             f(J2 - M2) + f(j12 - m1_2) + f(j12 + m1_2) + f(j2_2 - m2_2) +
             f(j2_2 + m2_2));

  int kmin = std::max({0, (j2_2 - J2 - m1_2) / 2, (j12 - J2 + m2_2) / 2});
  int kmax = std::min({(j12 + j2_2 - J2) / 2, (j12 - m1_2) / 2, (j2_2 + m2_2) / 2});
  double sum = 0.0;
  for (int k = kmin; k <= kmax; ++k) {
    double lt = log_factorial(k) + f(j12 + j2_2 - J2 - 2 * k) +
                f(j12 - m1_2 - 2 * k) + f(j2_2 + m2_2 - 2 * k) +
                f(J2 - j2_2 + m1_2 + 2 * k) + f(J2 - j12 - m2_2 + 2 * k);
    sum += (k % 2 == 0 ? 1.0 : -1.0) * std::exp(pref - lt);
  }
  return sum;
}

/// Displacement operator matrix element <np| D(beta) |n> with
/// D(beta) = exp(beta a^dag - beta^* a); log-factorial normalization.
inline cplx displacement_element(int np, int n, cplx beta) {
  if (np < 0 || n < 0) throw std::domain_error("displacement_element: negative index");
  double b2 = std::norm(beta);
  if (np >= n) {
    double lf = 0.5 * (log_factorial(n) - log_factorial(np));
    return std::exp(lf) * std::pow(beta, np - n) * std::exp(-0.5 * b2) *
           assoc_laguerre(n, np - n, b2);
  }
  double lf = 0.5 * (log_factorial(np) - log_factorial(n));
  return std::exp(lf) * std::pow(-std::conj(beta), n - np) * std::exp(-0.5 * b2) *
         assoc_laguerre(np, n - np, b2);
}

/// Normalized harmonic-oscillator eigenfunction psi_n(u), evaluated with the
/// normalized recurrence (no factorial overflow, Gaussian folded in).
inline double ho_wavefunction(int n, double u) {
  if (n < 0) throw std::domain_error("ho_wavefunction: n < 0");
  constexpr double pi_m14 = 0.7511255444649425;  // pi^{-1/4}
  double p0 = pi_m14 * std::exp(-0.5 * u * u);
  if (n == 0) return p0;
  double p1 = std::sqrt(2.0) * u * p0;
  for (int k = 1; k < n; ++k) {
    double p2 = std::sqrt(2.0 / (k + 1.0)) * u * p1 - std::sqrt(k / (k + 1.0)) * p0;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

}  // namespace jstomo::specfun
