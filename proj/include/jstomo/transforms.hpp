#pragma once

// The six tomogram-to-tomogram transforms. Spin-side inputs are contracted
// against the quantizer over the exact Euler quadrature first (the kernels
// are linear in omega, so the (m, Omega)-sum commutes with the CV factors);
// CV-side inputs are contracted per mode against displacement-element
// structures, then normalized by the sector denominator.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "jstomo/half_int.hpp"
#include "jstomo/kernels.hpp"
#include "jstomo/quadrature.hpp"
#include "jstomo/specfun.hpp"
#include "jstomo/tomography.hpp"

namespace jstomo::transforms {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using tomo::OpticalTomogram;
using tomo::PhotonTomogram;
using tomo::RestrictedMeta;
using tomo::SpinTomogram;
using tomo::SymplecticTomogram;
using tomo::WignerGrid;

inline EulerQuadrature make_euler_quadrature(HalfInt j) {
  return EulerQuadrature::for_spin(j);
}

/// sum_g w_g sum_m omega[g][m] D(m, Omega_g): the quantizer contraction all
/// spin-to-CV transforms factor through. Equals the reconstructed spin
/// density matrix when the grid is exact.
inline Matrix contracted_quantizer(const SpinTomogram& tg) {
  tomo::SpinScheme scheme(tg.j);
  Matrix G = Matrix::Zero(scheme.dim(), scheme.dim());
  for (size_t g = 0; g < tg.grid.size(); ++g) {
    for_each_m(tg.j, [&](HalfInt m) {
      G += tg.grid.weights[g] * tg.values(static_cast<int>(g), m_index(tg.j, m)) *
           scheme.quantizer(m, tg.grid.nodes[g]);
    });
  }
  return G;
}

// ---------------------------------------------------------------------------
// spin -> CV (restricted tomograms, raw-block normalization by default)
// ---------------------------------------------------------------------------

/// W^{(2j)}(x1,x2 | mu, nu) = int dOmega sum_m omega K_{omega->W}.
inline SymplecticTomogram spin_to_symplectic(const SpinTomogram& tg,
                                             std::array<double, 2> mu,
                                             std::array<double, 2> nu,
                                             std::array<LineGrid, 2> xg,
                                             bool renormalize = false) {
  HalfInt j = tg.j;
  Matrix G = contracted_quantizer(tg);
  double weight = G.trace().real();
  kernels::KernelParams pp;
  pp.mu = mu;
  pp.nu = nu;
  cplx xi1 = pp.xi(0), xi2 = pp.xi(1);
  double r1 = std::abs(xi1), r2 = std::abs(xi2);
  if (r1 == 0.0 || r2 == 0.0)
    throw tomo::degenerate_frame_error("spin_to_symplectic: mu = nu = 0");

  SymplecticTomogram out;
  out.modes = 2;
  out.mu = mu;
  out.nu = nu;
  out.x = xg;
  out.values.assign(static_cast<size_t>(xg[0].n) * xg[1].n, 0.0);

  Eigen::VectorXd e1(xg[0].n), e2(xg[1].n);
  for (int i = 0; i < xg[0].n; ++i)
    e1(i) = std::exp(-0.5 * xg[0].point(i) * xg[0].point(i) / (r1 * r1));
  for (int i = 0; i < xg[1].n; ++i)
    e2(i) = std::exp(-0.5 * xg[1].point(i) * xg[1].point(i) / (r2 * r2));

  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(xg[0].n, xg[1].n);
  for_each_m(j, [&](HalfInt m1) {
    for_each_m(j, [&](HalfInt m2) {
      int lo = std::min(m1.twice(), m2.twice());
      int hi = std::max(m1.twice(), m2.twice());
      int dlt = (hi - lo) / 2;
      int n1 = (j.twice() + lo) / 2, n2 = (j.twice() - hi) / 2;
      double lf = 0.5 * (specfun::log_factorial(n1) + specfun::log_factorial(n2) -
                         specfun::log_factorial((j.twice() + hi) / 2) -
                         specfun::log_factorial((j.twice() - lo) / 2));
      cplx pw(1.0, 0.0);
      if (m2 > m1) pw = std::pow(std::conj(xi1) * xi2, dlt);
      else if (m1 > m2) pw = std::pow(xi1 * std::conj(xi2), dlt);
      cplx coef = (1.0 / M_PI) * std::pow(0.5 / (r1 * r2), dlt + 1) * std::exp(lf) *
                  pw * G(m_index(j, m2), m_index(j, m1));
      Eigen::VectorXd s1(xg[0].n), s2(xg[1].n);
      for (int i = 0; i < xg[0].n; ++i)
        s1(i) = kernels::detail::hermite_sum(n1, dlt, xg[0].point(i) / (std::sqrt(2.0) * r1)) * e1(i);
      for (int i = 0; i < xg[1].n; ++i)
        s2(i) = kernels::detail::hermite_sum(n2, dlt, xg[1].point(i) / (std::sqrt(2.0) * r2)) * e2(i);
      acc += coef * (s1 * s2.transpose()).cast<cplx>();
    });
  });
  double scale = renormalize ? 1.0 / weight : 1.0;
  for (int i1 = 0; i1 < xg[0].n; ++i1)
    for (int i2 = 0; i2 < xg[1].n; ++i2)
      out.values[out.index(i1, i2)] = scale * acc(i1, i2).real();
  int clamped = 0;
  tomo::detail::clamp_small_negatives(out.values, clamped);
  out.restricted = RestrictedMeta{j, renormalize, weight};
  return out;
}

/// w^{(2j)}_{n1,n2}(alpha1, alpha2) for all pairs with n1+n2 = 2j.
inline PhotonTomogram spin_to_photon(const SpinTomogram& tg,
                                     std::vector<cplx> alphas1,
                                     std::vector<cplx> alphas2,
                                     bool renormalize = false) {
  HalfInt j = tg.j;
  Matrix G = contracted_quantizer(tg);
  double weight = G.trace().real();
  PhotonTomogram out;
  out.modes = 2;
  out.alphas1 = std::move(alphas1);
  out.alphas2 = std::move(alphas2);
  for (int n1 = 0; n1 <= j.twice(); ++n1) out.n_pairs.push_back({n1, j.twice() - n1});
  out.values.resize(out.alpha_points(), out.n_pairs.size());
  double scale = renormalize ? 1.0 / weight : 1.0;
  for (size_t ia1 = 0; ia1 < out.alphas1.size(); ++ia1) {
    for (size_t ia2 = 0; ia2 < out.alphas2.size(); ++ia2) {
      std::array<cplx, 2> al{out.alphas1[ia1], out.alphas2[ia2]};
      size_t flat = ia1 * out.alphas2.size() + ia2;
      for (size_t k = 0; k < out.n_pairs.size(); ++k) {
        std::array<int, 2> nn{out.n_pairs[k].first, out.n_pairs[k].second};
        cplx v = 0.0;
        for_each_m(j, [&](HalfInt m1) {
          for_each_m(j, [&](HalfInt m2) {
            v += kernels::photon_dequant_element(j, m1, m2, nn, al) *
                 G(m_index(j, m2), m_index(j, m1));
          });
        });
        out.values(static_cast<int>(flat), static_cast<int>(k)) =
            std::max(scale * v.real(), 0.0);
      }
    }
  }
  out.restricted = RestrictedMeta{j, renormalize, weight};
  return out;
}

/// Restricted two-mode Wigner samples W^{(2j)}(alpha1, alpha2).
inline WignerGrid spin_to_wigner(const SpinTomogram& tg, const PlaneQuadrature& grid,
                                 bool renormalize = false) {
  HalfInt j = tg.j;
  Matrix G = contracted_quantizer(tg);
  double weight = G.trace().real();
  WignerGrid out;
  out.modes = 2;
  out.grid = {grid, grid};
  out.values.assign(grid.size() * grid.size(), 0.0);
  double scale = renormalize ? 1.0 / weight : 1.0;
  int dim = j.twice() + 1;
  // per-mode displacement-element tables, then rank-1 accumulation
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(grid.size(), grid.size());
  for_each_m(j, [&](HalfInt m1) {
    for_each_m(j, [&](HalfInt m2) {
      int a1 = (j.twice() + m1.twice()) / 2, b1 = (j.twice() + m2.twice()) / 2;
      int a2 = (j.twice() - m1.twice()) / 2, b2 = (j.twice() - m2.twice()) / 2;
      Eigen::VectorXcd t1(grid.size()), t2(grid.size());
      for (size_t p = 0; p < grid.size(); ++p) {
        t1(static_cast<int>(p)) = specfun::displacement_element(a1, b1, 2.0 * grid.nodes[p]);
        t2(static_cast<int>(p)) = specfun::displacement_element(a2, b2, 2.0 * grid.nodes[p]);
      }
      double par = j.twice() % 2 == 0 ? 1.0 : -1.0;
      cplx coef = par / (M_PI * M_PI) * G(m_index(j, m2), m_index(j, m1));
      acc += coef * (t1 * t2.transpose());
    });
  });
  for (size_t p1 = 0; p1 < grid.size(); ++p1)
    for (size_t p2 = 0; p2 < grid.size(); ++p2)
      out.values[p1 * grid.size() + p2] =
          scale * acc(static_cast<int>(p1), static_cast<int>(p2)).real();
  out.restricted = RestrictedMeta{j, renormalize, weight};
  (void)dim;
  return out;
}

// ---------------------------------------------------------------------------
// CV -> spin (normalized ratio transforms)
// ---------------------------------------------------------------------------

struct empty_denominator_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

/// omega_j(m, Omega) = sum_{m1,m2} B_{m1m2} U_{m2m1}(m,Omega) / tr(B),
/// where B is the estimated (unnormalized) sector block.
inline SpinTomogram spin_from_block(HalfInt j, const Matrix& B, double denom,
                                    const EulerQuadrature& grid) {
  if (std::abs(denom) < 1e-10)
    throw empty_denominator_error("CV->spin: empty sector denominator " +
                                  std::to_string(denom));
  tomo::SpinScheme scheme(j);
  SpinTomogram out;
  out.j = j;
  out.grid = grid;
  out.values.resize(grid.size(), scheme.dim());
  for (size_t g = 0; g < grid.size(); ++g) {
    for_each_m(j, [&](HalfInt m) {
      Matrix U = scheme.dequantizer(m, grid.nodes[g]);
      cplx num = 0.0;
      for (int a = 0; a < scheme.dim(); ++a)
        for (int b = 0; b < scheme.dim(); ++b) num += B(a, b) * U(b, a);
      out.values(static_cast<int>(g), m_index(j, m)) = num.real() / denom;
    });
  }
  return out;
}

}  // namespace detail

/// Spin tomogram from a two-mode optical tomogram table: the sector block of
/// the inverse-Radon quantizer integral, contracted with the rotated
/// projectors and normalized by the in-sector mass.
inline SpinTomogram symplectic_to_spin(const OpticalTomogram& opt, HalfInt j,
                                       const EulerQuadrature& grid) {
  if (opt.modes != 2)
    throw std::invalid_argument("symplectic_to_spin: two-mode optical table expected");
  int nmax = j.twice();
  Eigen::MatrixXcd G1 = tomo::detail::pattern_matrix(nmax, opt, 0);
  Eigen::MatrixXcd G2 = tomo::detail::pattern_matrix(nmax, opt, 1);
  size_t P1 = opt.points(0), P2 = opt.points(1);
  Eigen::MatrixXcd W(P1, P2);
  for (size_t p = 0; p < P1; ++p)
    for (size_t q = 0; q < P2; ++q)
      W(static_cast<int>(p), static_cast<int>(q)) = opt.values[p * P2 + q];
  Eigen::MatrixXcd T = G1 * W * G2.transpose();
  int dim = nmax + 1;
  Matrix B(dim, dim);
  for_each_m(j, [&](HalfInt m1) {
    for_each_m(j, [&](HalfInt m2) {
      int a1 = (j.twice() + m1.twice()) / 2, b1 = (j.twice() + m2.twice()) / 2;
      int a2 = (j.twice() - m1.twice()) / 2, b2 = (j.twice() - m2.twice()) / 2;
      B(m_index(j, m1), m_index(j, m2)) = T(a1 * dim + b1, a2 * dim + b2);
    });
  });
  return detail::spin_from_block(j, B, B.trace().real(), grid);
}

/// Spin tomogram from a two-mode photon tomogram sampled on a uniform
/// product alpha grid. `denom_full_sum` selects between the printed full
/// n-sum denominator and the restricted-sector sum; they coincide for
/// sector-restricted tables.
inline SpinTomogram photon_to_spin(const PhotonTomogram& w, HalfInt j, double s,
                                   const EulerQuadrature& grid,
                                   bool denom_full_sum = true) {
  if (w.modes != 2)
    throw std::invalid_argument("photon_to_spin: two-mode tomogram expected");
  if (!w.cell_weight)
    throw std::invalid_argument("photon_to_spin: tomogram lacks grid weights");
  tomo::require_s_domain(s);
  double g = tomo::photon_g(s);
  double pref = 16.0 / (M_PI * M_PI * (1.0 - s * s) * (1.0 - s * s));
  int dim = j.twice() + 1;
  size_t A1 = w.alphas1.size(), A2 = w.alphas2.size();

  // per-mode l-sum tables Q[(a,b), alpha-point] for sector indices a,b
  int L = tomo::photon_lsum_terms(s, j.twice());
  auto build_q = [&](const std::vector<cplx>& alphas, int n_of_pair) {
    (void)n_of_pair;
    Eigen::MatrixXcd Q(dim * dim, alphas.size());
    for (size_t ia = 0; ia < alphas.size(); ++ia) {
      Eigen::MatrixXcd Dm(dim, L);
      for (int a = 0; a < dim; ++a)
        for (int l = 0; l < L; ++l)
          Dm(a, l) = specfun::displacement_element(a, l, -alphas[ia]);
      // Q_ab = sum_l g^l <a|D(-al)|l><l|D(al)|b> ; <l|D(al)|b> = conj(<b|D(-al)|l>)
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
          cplx acc = 0.0;
          for (int l = 0; l < L; ++l)
            acc += std::pow(g, l) * Dm(a, l) * std::conj(Dm(b, l));
          Q(a * dim + b, static_cast<int>(ia)) = acc;
        }
    }
    return Q;
  };
  Eigen::MatrixXcd Q1 = build_q(w.alphas1, 0);
  Eigen::MatrixXcd Q2 = build_q(w.alphas2, 0);

  double w2 = *w.cell_weight * *w.cell_weight;
  Matrix B = Matrix::Zero(dim, dim);
  double denom_direct = 0.0;
  for (size_t k = 0; k < w.n_pairs.size(); ++k) {
    auto [n1, n2] = w.n_pairs[k];
    double gn = std::pow(g, -n1 - n2);
    // W_k as an A1 x A2 matrix
    Eigen::MatrixXcd Wk(A1, A2);
    for (size_t ia1 = 0; ia1 < A1; ++ia1)
      for (size_t ia2 = 0; ia2 < A2; ++ia2)
        Wk(static_cast<int>(ia1), static_cast<int>(ia2)) =
            w.values(static_cast<int>(ia1 * A2 + ia2), static_cast<int>(k));
    for_each_m(j, [&](HalfInt m1) {
      int a1 = (j.twice() + m1.twice()) / 2, a2 = (j.twice() - m1.twice()) / 2;
      for_each_m(j, [&](HalfInt m2) {
        int b1 = (j.twice() + m2.twice()) / 2, b2 = (j.twice() - m2.twice()) / 2;
        cplx v = (Q1.row(a1 * dim + b1) * Wk * Q2.row(a2 * dim + b2).transpose())(0, 0);
        B(m_index(j, m1), m_index(j, m2)) += pref * gn * w2 * v;
      });
    });
    if (denom_full_sum || n1 + n2 == j.twice()) {
      for (size_t ia1 = 0; ia1 < A1; ++ia1)
        for (size_t ia2 = 0; ia2 < A2; ++ia2)
          denom_direct += w2 * Wk(static_cast<int>(ia1), static_cast<int>(ia2)).real() *
                          kernels::denom_trace_photon(
                              j, {n1, n2}, {w.alphas1[ia1], w.alphas2[ia2]}, s);
    }
  }
  return detail::spin_from_block(j, B, denom_direct, grid);
}

/// Spin tomogram from two-mode Wigner samples.
inline SpinTomogram wigner_to_spin(const WignerGrid& wg, HalfInt j,
                                   const EulerQuadrature& grid) {
  if (wg.modes != 2)
    throw std::invalid_argument("wigner_to_spin: two-mode Wigner grid expected");
  const auto& g1 = wg.grid[0];
  const auto& g2 = wg.grid[1];
  int dim = j.twice() + 1;
  Eigen::MatrixXcd W(g1.size(), g2.size());
  for (size_t p1 = 0; p1 < g1.size(); ++p1)
    for (size_t p2 = 0; p2 < g2.size(); ++p2)
      W(static_cast<int>(p1), static_cast<int>(p2)) = wg.values[p1 * g2.size() + p2];
  double cw = g1.cell_weight * g2.cell_weight;
  double par = j.twice() % 2 == 0 ? 1.0 : -1.0;
  constexpr double c2 = tomo::kWignerQuantConst * tomo::kWignerQuantConst;
  Matrix B(dim, dim);
  Eigen::VectorXcd t1(g1.size()), t2(g2.size());
  for_each_m(j, [&](HalfInt m1) {
    for_each_m(j, [&](HalfInt m2) {
      int a1 = (j.twice() + m1.twice()) / 2, b1 = (j.twice() + m2.twice()) / 2;
      int a2 = (j.twice() - m1.twice()) / 2, b2 = (j.twice() - m2.twice()) / 2;
      for (size_t p = 0; p < g1.size(); ++p)
        t1(static_cast<int>(p)) = specfun::displacement_element(a1, b1, 2.0 * g1.nodes[p]);
      for (size_t p = 0; p < g2.size(); ++p)
        t2(static_cast<int>(p)) = specfun::displacement_element(a2, b2, 2.0 * g2.nodes[p]);
      B(m_index(j, m1), m_index(j, m2)) =
          c2 * par * cw * (t1.transpose() * W * t2)(0, 0);
    });
  });
  // denominator: int W(a) Tr[Pi D_w(a)] via the closed Laguerre form
  double denom = 0.0;
  for (size_t p1 = 0; p1 < g1.size(); ++p1)
    for (size_t p2 = 0; p2 < g2.size(); ++p2)
      denom += cw * W(static_cast<int>(p1), static_cast<int>(p2)).real() *
               kernels::denom_trace_wigner(j, {g1.nodes[p1], g2.nodes[p2]});
  return detail::spin_from_block(j, B, denom, grid);
}

// ---------------------------------------------------------------------------
// photon <-> symplectic (single mode, one-to-one)
// ---------------------------------------------------------------------------

/// W(x | mu, nu) = sum_n int d^2alpha w_n(alpha) K_{w->W}.
inline SymplecticTomogram photon_to_symplectic(const PhotonTomogram& w,
                                               double mu, double nu,
                                               LineGrid xg, double s) {
  if (w.modes != 1)
    throw std::invalid_argument("photon_to_symplectic: single-mode tomogram expected");
  if (!w.cell_weight)
    throw std::invalid_argument("photon_to_symplectic: tomogram lacks grid weights");
  tomo::require_s_domain(s);
  double r2 = mu * mu + nu * nu;
  if (r2 == 0.0)
    throw tomo::degenerate_frame_error("photon_to_symplectic: mu = nu = 0");
  double g = tomo::photon_g(s);
  double pref = 2.0 / (std::pow(M_PI, 1.5) * (1.0 - s) * std::sqrt(s * r2));
  SymplecticTomogram out;
  out.modes = 1;
  out.mu = {mu, 0.0};
  out.nu = {nu, 0.0};
  out.x = {xg, xg};
  out.values.assign(xg.n, 0.0);
  for (size_t ia = 0; ia < w.alphas1.size(); ++ia) {
    cplx al = w.alphas1[ia];
    long double cl = 0.0L;
    for (int n = 0; n <= w.n_max; ++n)
      cl += static_cast<long double>(w.values(static_cast<int>(ia), n)) *
            std::pow(static_cast<long double>(g), static_cast<long double>(-n));
    double c = static_cast<double>(cl) * pref * *w.cell_weight;
    double xc = -std::sqrt(2.0) * (mu * al.real() + nu * al.imag());
    for (int i = 0; i < xg.n; ++i) {
      double d = xg.point(i) - xc;
      out.values[i] += c * std::exp(-d * d / (s * r2));
    }
  }
  int clamped = 0;
  tomo::detail::clamp_small_negatives(out.values, clamped, -1e-6);
  return out;
}

/// w_n(alpha) = iiint W(x|mu,nu) K_{W->w} dx dmu dnu, evaluated in polar
/// (mu,nu)-coordinates against optical samples.
inline PhotonTomogram symplectic_to_photon(const OpticalTomogram& opt,
                                           std::vector<cplx> alphas, int n_max,
                                           int n_r = 256, double r_max = 12.0) {
  if (opt.modes != 1)
    throw std::invalid_argument("symplectic_to_photon: single-mode optical table expected");
  std::vector<double> rs(n_r), rw(n_r);
  {
    std::vector<double> xs, ws;
    gauss_legendre(n_r, xs, ws);
    for (int i = 0; i < n_r; ++i) {
      rs[i] = 0.5 * r_max * (xs[i] + 1.0);
      rw[i] = 0.5 * r_max * ws[i];
    }
  }
  int nth = opt.n_theta[0];
  const auto& xg = opt.x[0];
  // chi(r, theta) = int dy w(y, theta) e^{i r y}; thetas in [0, 2pi) via
  // the reflection w(y, theta + pi) = w(-y, theta).
  Eigen::MatrixXcd chi(2 * nth, n_r);
  for (int t = 0; t < nth; ++t) {
    for (int ir = 0; ir < n_r; ++ir) {
      cplx acc = 0.0, accr = 0.0;
      for (int iy = 0; iy < xg.n; ++iy) {
        cplx ph = std::polar(1.0, rs[ir] * xg.point(iy));
        double v = opt.values[opt.index1(t, iy)];
        acc += v * ph;
        accr += opt.values[opt.index1(t, xg.n - 1 - iy)] * ph;
      }
      chi(t, ir) = acc * xg.step;
      chi(nth + t, ir) = accr * xg.step;  // theta + pi sees w(-y, theta)
    }
  }
  PhotonTomogram out;
  out.modes = 1;
  out.alphas1 = std::move(alphas);
  out.n_max = n_max;
  out.values.resize(out.alphas1.size(), n_max + 1);
  double wtheta = M_PI / nth;
  for (size_t ia = 0; ia < out.alphas1.size(); ++ia) {
    cplx al = out.alphas1[ia];
    for (int n = 0; n <= n_max; ++n) {
      cplx acc = 0.0;
      for (int tt = 0; tt < 2 * nth; ++tt) {
        double th = M_PI * tt / nth;
        double proj = std::cos(th) * al.real() + std::sin(th) * al.imag();
        for (int ir = 0; ir < n_r; ++ir) {
          double r = rs[ir];
          double kern = rw[ir] * r * std::exp(-0.25 * r * r) *
                        specfun::assoc_laguerre(n, 0, 0.5 * r * r);
          acc += kern * std::polar(1.0, std::sqrt(2.0) * r * proj) * chi(tt, ir);
        }
      }
      acc *= wtheta / (2.0 * M_PI);
      out.values(static_cast<int>(ia), n) = std::max(acc.real(), 0.0);
    }
  }
  return out;
}

}  // namespace jstomo::transforms
