#pragma once

// Quadrature rules: Gauss-Legendre nodes, the SU(2) Euler-angle product rule
// (exact for Wigner D-products up to a known rank), and uniform complex-plane
// grids for Gaussian-enveloped integrands.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "jstomo/half_int.hpp"

namespace jstomo::transforms {

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * z * p1 - k * p2) / (k + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

/// Product rule for int dOmega = int_0^{2pi} dalpha int_0^pi sin(beta) dbeta
/// int_0^{2pi} dgamma: Gauss-Legendre in cos(beta), uniform in alpha and
/// gamma. Exact (to roundoff) for any product of D-functions whose total
/// rank stays within the stated bounds.
struct EulerQuadrature {
  std::vector<EulerAngles> nodes;
  std::vector<double> weights;
  int n_beta = 0, n_alpha = 0, n_gamma = 0;

  EulerQuadrature() = default;

  EulerQuadrature(int nb, int na, int ng) : n_beta(nb), n_alpha(na), n_gamma(ng) {
    std::vector<double> xs, ws;
    gauss_legendre(nb, xs, ws);
    nodes.reserve(static_cast<size_t>(nb) * na * ng);
    weights.reserve(nodes.capacity());
    double wa = 2.0 * M_PI / na, wg = 2.0 * M_PI / ng;
    for (int ib = 0; ib < nb; ++ib) {
      double beta = std::acos(xs[ib]);
      for (int ia = 0; ia < na; ++ia)
        for (int ig = 0; ig < ng; ++ig) {
          nodes.push_back({2.0 * M_PI * ia / na, beta, 2.0 * M_PI * ig / ng});
          weights.push_back(ws[ib] * wa * wg);
        }
    }
  }

  size_t size() const { return nodes.size(); }

  /// Smallest rule exact for all D-products of rank <= 2j that appear in
  /// the spin quantizer/dequantizer pairings: 2j+2 beta nodes, 4j+3
  /// uniform alpha/gamma nodes.
  static EulerQuadrature for_spin(HalfInt j) {
    return EulerQuadrature(j.twice() + 2, 2 * j.twice() + 3, 2 * j.twice() + 3);
  }
};

/// Uniform square grid on [-R, R]^2 read as complex alpha = x + iy, with
/// cell weight h^2. Suits integrands with Gaussian envelopes; the tail
/// bound exp(-c R^2) is the caller's responsibility.
struct PlaneQuadrature {
  std::vector<std::complex<double>> nodes;
  double cell_weight = 0.0;
  double radius = 0.0;
  double spacing = 0.0;
  int side = 0;

  PlaneQuadrature() = default;

  PlaneQuadrature(double R, double h) : radius(R), spacing(h) {
    side = 2 * static_cast<int>(std::round(R / h)) + 1;
    double lo = -h * ((side - 1) / 2);
    nodes.reserve(static_cast<size_t>(side) * side);
    for (int i = 0; i < side; ++i)
      for (int k = 0; k < side; ++k)
        nodes.push_back({lo + i * h, lo + k * h});
    cell_weight = h * h;
  }

  size_t size() const { return nodes.size(); }
};

/// Uniform 1-d grid [lo, hi] with step h (inclusive ends), trapezoid-free
/// plain Riemann weights; used for quadrature over tomogram x-axes.
struct LineGrid {
  double lo = 0.0, hi = 0.0, step = 0.0;
  int n = 0;

  LineGrid() = default;
  LineGrid(double lo_, double hi_, double step_) : lo(lo_), hi(hi_), step(step_) {
    n = static_cast<int>(std::round((hi_ - lo_) / step_)) + 1;
    hi = lo_ + (n - 1) * step_;
  }

  double point(int i) const { return lo + i * step; }
};

}  // namespace jstomo::transforms
