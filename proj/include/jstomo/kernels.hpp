#pragma once

// Closed-form transition kernels between the tomographic representations.
// Every function here equals a trace of a quantizer against a lifted
// dequantizer; the truncated-space traces live in the test suite and the
// oracle module, never here.
//
// Conventions fixed by those traces (they deviate from some printed forms,
// see README):
//   * the Laguerre-product element M^{(j)} carries (-1)^{|m1-m2|} so that it
//     exactly equals the product of displacement matrix elements;
//   * Wigner-side kernels carry the sector parity (-1)^{2j} and the
//     calibrated per-mode quantizer constant 4;
//   * the photon dequantizer element is taken literally from
//     U_n(alpha) = D^dag(alpha) |n><n| D(alpha).

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "jstomo/half_int.hpp"
#include "jstomo/specfun.hpp"
#include "jstomo/tomography.hpp"

namespace jstomo::kernels {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

struct KernelParams {
  HalfInt j;
  HalfInt m;
  EulerAngles omega;
  std::array<double, 2> x{0.0, 0.0};
  std::array<double, 2> mu{1.0, 0.0};
  std::array<double, 2> nu{0.0, 1.0};
  std::array<cplx, 2> alpha{cplx(0.0), cplx(0.0)};
  std::array<int, 2> n{0, 0};
  double s_param = 0.5;

  /// xi_k = -(i/sqrt2)(mu_k + i nu_k)
  cplx xi(int k) const {
    return cplx(0.0, -1.0 / std::sqrt(2.0)) * cplx(mu[k], nu[k]);
  }
};

/// Laguerre-product building block: e^{(|xi1|^2+|xi2|^2)/2} times the product
/// of the two displacement matrix elements within the spin-j sector,
///   M^{(j)}_{m1,m2} = e^{...} <j+m1|D(xi1)|j+m2> <j-m1|D(xi2)|j-m2>.
inline cplx mj_element(HalfInt j, HalfInt m1, HalfInt m2, cplx xi1, cplx xi2) {
  int lo = std::min(m1.twice(), m2.twice());
  int hi = std::max(m1.twice(), m2.twice());
  int dlt = (hi - lo) / 2;
  int n1 = (j.twice() + lo) / 2;  // j + min
  int n2 = (j.twice() - hi) / 2;  // j - max
  double lf = 0.5 * (specfun::log_factorial(n1) + specfun::log_factorial(n2) -
                     specfun::log_factorial((j.twice() + hi) / 2) -
                     specfun::log_factorial((j.twice() - lo) / 2));
  cplx pw(1.0, 0.0);
  if (m2 > m1)
    pw = std::pow(std::conj(xi1) * xi2, dlt);
  else if (m1 > m2)
    pw = std::pow(xi1 * std::conj(xi2), dlt);
  double sign = dlt % 2 == 0 ? 1.0 : -1.0;
  return sign * std::exp(lf) * pw *
         specfun::assoc_laguerre(n1, dlt, std::norm(xi1)) *
         specfun::assoc_laguerre(n2, dlt, std::norm(xi2));
}

/// K_{W->omega} = Tr[ D_s(x,mu,nu) U_j(m,Omega) ].
inline cplx kernel_sympl_to_spin(const KernelParams& p) {
  cplx xi1 = p.xi(0), xi2 = p.xi(1);
  cplx pref = std::polar(1.0, p.x[0] + p.x[1]) / (4.0 * M_PI * M_PI) *
              std::exp(-0.5 * (std::norm(xi1) + std::norm(xi2)));
  cplx sum = 0.0;
  for_each_m(p.j, [&](HalfInt m1) {
    for_each_m(p.j, [&](HalfInt m2) {
      sum += std::conj(specfun::wigner_D(p.j, p.m, m2, p.omega)) *
             specfun::wigner_D(p.j, p.m, m1, p.omega) *
             mj_element(p.j, m1, m2, xi1, xi2);
    });
  });
  return pref * sum;
}

/// Tr[ Pi_{2j} D_s(x,mu,nu) ]: closed Laguerre-product sum.
inline cplx denom_trace_sympl(HalfInt j, std::array<double, 2> x,
                              std::array<double, 2> mu, std::array<double, 2> nu) {
  KernelParams p;
  p.mu = mu;
  p.nu = nu;
  cplx xi1 = p.xi(0), xi2 = p.xi(1);
  double sum = 0.0;
  for_each_m(j, [&](HalfInt m) {
    sum += specfun::assoc_laguerre((j.twice() + m.twice()) / 2, 0, std::norm(xi1)) *
           specfun::assoc_laguerre((j.twice() - m.twice()) / 2, 0, std::norm(xi2));
  });
  return std::polar(1.0, x[0] + x[1]) / (4.0 * M_PI * M_PI) *
         std::exp(-0.5 * (std::norm(xi1) + std::norm(xi2))) * sum;
}

namespace detail {
/// Hermite sum of the radially integrated Laguerre profile,
/// sum_s binom(n+D, n-s) H_{D+2s}(u) / (s! 2^s).
inline double hermite_sum(int n, int dlt, double u) {
  double acc = 0.0;
  for (int s = 0; s <= n; ++s) {
    double lb = specfun::log_factorial(n + dlt) - specfun::log_factorial(n - s) -
                specfun::log_factorial(dlt + s) - specfun::log_factorial(s) -
                s * std::log(2.0);
    acc += std::exp(lb) * specfun::hermite(dlt + 2 * s, u);
  }
  return acc;
}
}  // namespace detail

/// K_{omega->W} = Tr[ U_s(x,mu,nu) D_j(m,Omega) ]: the Gaussian-Hermite
/// closed form. Real for Hermitian pairs; returned as double.
inline double kernel_spin_to_sympl(const KernelParams& p,
                                   const tomo::SpinScheme& scheme) {
  cplx xi1 = p.xi(0), xi2 = p.xi(1);
  double r1 = std::abs(xi1), r2 = std::abs(xi2);
  if (r1 == 0.0 || r2 == 0.0)
    throw tomo::degenerate_frame_error("kernel_spin_to_sympl: |xi| = 0");
  Matrix q = scheme.quantizer(p.m, p.omega);
  HalfInt j = p.j;
  cplx tot = 0.0;
  for_each_m(j, [&](HalfInt m1) {
    for_each_m(j, [&](HalfInt m2) {
      int lo = std::min(m1.twice(), m2.twice());
      int hi = std::max(m1.twice(), m2.twice());
      int dlt = (hi - lo) / 2;
      int n1 = (j.twice() + lo) / 2;
      int n2 = (j.twice() - hi) / 2;
      double lf = 0.5 * (specfun::log_factorial(n1) + specfun::log_factorial(n2) -
                         specfun::log_factorial((j.twice() + hi) / 2) -
                         specfun::log_factorial((j.twice() - lo) / 2));
      cplx pw(1.0, 0.0);
      if (m2 > m1)
        pw = std::pow(std::conj(xi1) * xi2, dlt);
      else if (m1 > m2)
        pw = std::pow(xi1 * std::conj(xi2), dlt);
      double S1 = detail::hermite_sum(n1, dlt, p.x[0] / (std::sqrt(2.0) * r1));
      double S2 = detail::hermite_sum(n2, dlt, p.x[1] / (std::sqrt(2.0) * r2));
      tot += std::pow(0.5 / (r1 * r2), dlt + 1) *
             q(m_index(j, m2), m_index(j, m1)) * std::exp(lf) * pw * S1 * S2;
    });
  });
  cplx v = (1.0 / M_PI) *
           std::exp(-0.5 * (p.x[0] * p.x[0] / (r1 * r1) + p.x[1] * p.x[1] / (r2 * r2))) *
           tot;
  if (std::abs(v.imag()) > 1e-10)
    throw tomo::consistency_error("kernel_spin_to_sympl: imaginary residue");
  return v.real();
}

// ---------------------------------------------------------------------------
// Photon-number kernels
// ---------------------------------------------------------------------------

/// Sector matrix element of the two-mode photon dequantizer
/// U_n(alpha) = D^dag(alpha) |n><n| D(alpha) (per mode).
inline cplx photon_dequant_element(HalfInt j, HalfInt m1, HalfInt m2,
                                   std::array<int, 2> n, std::array<cplx, 2> alpha) {
  int a1 = (j.twice() + m1.twice()) / 2, b1 = (j.twice() + m2.twice()) / 2;
  int a2 = (j.twice() - m1.twice()) / 2, b2 = (j.twice() - m2.twice()) / 2;
  return specfun::displacement_element(a1, n[0], -alpha[0]) *
         specfun::displacement_element(n[0], b1, alpha[0]) *
         specfun::displacement_element(a2, n[1], -alpha[1]) *
         specfun::displacement_element(n[1], b2, alpha[1]);
}

/// Sector matrix element of the two-mode photon quantizer (geometric l-sums).
inline cplx photon_quant_element(HalfInt j, HalfInt m1, HalfInt m2,
                                 std::array<int, 2> n, std::array<cplx, 2> alpha,
                                 double s) {
  tomo::require_s_domain(s);
  double g = tomo::photon_g(s);
  int a1 = (j.twice() + m1.twice()) / 2, b1 = (j.twice() + m2.twice()) / 2;
  int a2 = (j.twice() - m1.twice()) / 2, b2 = (j.twice() - m2.twice()) / 2;
  cplx s1 = 0.0, s2 = 0.0;
  int L1 = tomo::photon_lsum_terms(s, n[0]);
  int L2 = tomo::photon_lsum_terms(s, n[1]);
  for (int l = 0; l < L1; ++l)
    s1 += std::pow(g, l - n[0]) * specfun::displacement_element(a1, l, -alpha[0]) *
          specfun::displacement_element(l, b1, alpha[0]);
  for (int l = 0; l < L2; ++l)
    s2 += std::pow(g, l - n[1]) * specfun::displacement_element(a2, l, -alpha[1]) *
          specfun::displacement_element(l, b2, alpha[1]);
  double pref = 16.0 / (M_PI * M_PI * (1.0 - s * s) * (1.0 - s * s));
  return pref * s1 * s2;
}

/// K_{omega->w} = Tr[ U_n(alpha) D_j(m,Omega) ].
inline cplx kernel_spin_to_photon(const KernelParams& p,
                                  const tomo::SpinScheme& scheme) {
  Matrix q = scheme.quantizer(p.m, p.omega);
  cplx tot = 0.0;
  for_each_m(p.j, [&](HalfInt m1) {
    for_each_m(p.j, [&](HalfInt m2) {
      tot += photon_dequant_element(p.j, m1, m2, p.n, p.alpha) *
             q(m_index(p.j, m2), m_index(p.j, m1));
    });
  });
  return tot;
}

/// K_{w->omega} = Tr[ D_n(alpha) U_j(m,Omega) ].
inline cplx kernel_photon_to_spin(const KernelParams& p) {
  cplx tot = 0.0;
  for_each_m(p.j, [&](HalfInt m1) {
    for_each_m(p.j, [&](HalfInt m2) {
      // U_{m2 m1}(m,Omega) = D*_{m,m2} D_{m,m1}
      cplx u = std::conj(specfun::wigner_D(p.j, p.m, m2, p.omega)) *
               specfun::wigner_D(p.j, p.m, m1, p.omega);
      tot += photon_quant_element(p.j, m1, m2, p.n, p.alpha, p.s_param) * u;
    });
  });
  return tot;
}

/// Tr[ Pi_{2j} D_n(alpha) ] via the Laguerre generating function.
inline double denom_trace_photon(HalfInt j, std::array<int, 2> n,
                                 std::array<cplx, 2> alpha, double s) {
  tomo::require_s_domain(s);
  double g = tomo::photon_g(s);
  double z1 = -(1.0 - g) * (1.0 - g) / g * std::norm(alpha[0]);
  double z2 = -(1.0 - g) * (1.0 - g) / g * std::norm(alpha[1]);
  double sum = 0.0;
  for_each_m(j, [&](HalfInt m) {
    sum += specfun::assoc_laguerre((j.twice() + m.twice()) / 2, 0, z1) *
           specfun::assoc_laguerre((j.twice() - m.twice()) / 2, 0, z2);
  });
  double pref = 16.0 / (M_PI * M_PI * (1.0 - s * s) * (1.0 - s * s));
  return pref * std::pow(g, j.twice() - n[0] - n[1]) *
         std::exp(-(1.0 - g) * (std::norm(alpha[0]) + std::norm(alpha[1]))) * sum;
}

// ---------------------------------------------------------------------------
// Wigner kernels
// ---------------------------------------------------------------------------

/// Sector element of the two-mode Wigner dequantizer (1/pi^2 convention).
/// The parity collapse leaves the sector sign (-1)^{2j}.
inline cplx wigner_dequant_element(HalfInt j, HalfInt m1, HalfInt m2,
                                   std::array<cplx, 2> alpha) {
  double par = j.twice() % 2 == 0 ? 1.0 : -1.0;
  int a1 = (j.twice() + m1.twice()) / 2, b1 = (j.twice() + m2.twice()) / 2;
  int a2 = (j.twice() - m1.twice()) / 2, b2 = (j.twice() - m2.twice()) / 2;
  return par / (M_PI * M_PI) *
         specfun::displacement_element(a1, b1, 2.0 * alpha[0]) *
         specfun::displacement_element(a2, b2, 2.0 * alpha[1]);
}

/// Sector element of the two-mode Wigner quantizer (calibrated constant 4
/// per mode).
inline cplx wigner_quant_element(HalfInt j, HalfInt m1, HalfInt m2,
                                 std::array<cplx, 2> alpha) {
  constexpr double c2 = tomo::kWignerQuantConst * tomo::kWignerQuantConst;
  double par = j.twice() % 2 == 0 ? 1.0 : -1.0;
  int a1 = (j.twice() + m1.twice()) / 2, b1 = (j.twice() + m2.twice()) / 2;
  int a2 = (j.twice() - m1.twice()) / 2, b2 = (j.twice() - m2.twice()) / 2;
  return c2 * par * specfun::displacement_element(a1, b1, 2.0 * alpha[0]) *
         specfun::displacement_element(a2, b2, 2.0 * alpha[1]);
}

/// K_{omega->Wg} = Tr[ U_w(alpha) D_j(m,Omega) ].
inline cplx kernel_spin_to_wigner(const KernelParams& p,
                                  const tomo::SpinScheme& scheme) {
  Matrix q = scheme.quantizer(p.m, p.omega);
  cplx tot = 0.0;
  for_each_m(p.j, [&](HalfInt m1) {
    for_each_m(p.j, [&](HalfInt m2) {
      tot += wigner_dequant_element(p.j, m1, m2, p.alpha) *
             q(m_index(p.j, m2), m_index(p.j, m1));
    });
  });
  return tot;
}

/// K_{Wg->omega} = Tr[ D_w(alpha) U_j(m,Omega) ].
inline cplx kernel_wigner_to_spin(const KernelParams& p) {
  cplx tot = 0.0;
  for_each_m(p.j, [&](HalfInt m1) {
    for_each_m(p.j, [&](HalfInt m2) {
      cplx u = std::conj(specfun::wigner_D(p.j, p.m, m2, p.omega)) *
               specfun::wigner_D(p.j, p.m, m1, p.omega);
      tot += wigner_quant_element(p.j, m1, m2, p.alpha) * u;
    });
  });
  return tot;
}

/// Tr[ Pi_{2j} D_w(alpha) ] = 16 (-1)^{2j} e^{-2(|a1|^2+|a2|^2)}
/// L^{(1)}_{2j}(4(|a1|^2+|a2|^2)).
inline double denom_trace_wigner(HalfInt j, std::array<cplx, 2> alpha) {
  constexpr double c2 = tomo::kWignerQuantConst * tomo::kWignerQuantConst;
  double par = j.twice() % 2 == 0 ? 1.0 : -1.0;
  double z = std::norm(alpha[0]) + std::norm(alpha[1]);
  return c2 * par * std::exp(-2.0 * z) *
         specfun::assoc_laguerre(j.twice(), 1, 4.0 * z);
}

// ---------------------------------------------------------------------------
// Symplectic <-> photon-number kernels (single mode, no sector restriction)
// ---------------------------------------------------------------------------

/// K_{W->w}(x,mu,nu,n,alpha) = Tr[ U_n(alpha) D_s(x,mu,nu) ]
///   = (1/2pi) e^{-(mu^2+nu^2)/4} e^{i(x + sqrt2 (mu Re a + nu Im a))}
///     L_n((mu^2+nu^2)/2).
inline cplx kernel_sympl_to_photon(double x, double mu, double nu, int n, cplx alpha) {
  double r2 = mu * mu + nu * nu;
  double phase = x + std::sqrt(2.0) * (mu * alpha.real() + nu * alpha.imag());
  return std::polar(1.0, phase) / (2.0 * M_PI) * std::exp(-0.25 * r2) *
         specfun::assoc_laguerre(n, 0, 0.5 * r2);
}

/// K_{w->W}(x,mu,nu,n,alpha) = Tr[ D_n(alpha) U_s(x,mu,nu) ]: shifted
/// Gaussian centered at -sqrt2 (mu Re a + nu Im a).
inline double kernel_photon_to_sympl(double x, double mu, double nu, int n,
                                     cplx alpha, double s) {
  tomo::require_s_domain(s);
  double r2 = mu * mu + nu * nu;
  if (r2 == 0.0)
    throw tomo::degenerate_frame_error("kernel_photon_to_sympl: mu = nu = 0");
  double g = tomo::photon_g(s);
  double xc = -std::sqrt(2.0) * (mu * alpha.real() + nu * alpha.imag());
  double pref = 2.0 / (std::pow(M_PI, 1.5) * (1.0 - s) * std::sqrt(s * r2));
  return pref * std::pow(g, -n) * std::exp(-(x - xc) * (x - xc) / (s * r2));
}

}  // namespace jstomo::kernels
