#pragma once

// Dequantizer/quantizer constructions and direct tomogram evaluation plus
// state reconstruction for the four representations: spin, symplectic,
// photon-number and Wigner.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "jstomo/half_int.hpp"
#include "jstomo/hilbert.hpp"
#include "jstomo/quadrature.hpp"
#include "jstomo/specfun.hpp"

namespace jstomo::tomo {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using hilbert::Basis;
using hilbert::BasisKind;
using hilbert::DensityMatrix;

struct degenerate_frame_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct consistency_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Spin representation
// ---------------------------------------------------------------------------

/// Irreducible tensor operator T^{(j)}_{LN} as a (2j+1)^2 matrix,
/// T_{LN} = sum_{m,m'} (-1)^{j-m'} <j,m; j,-m'|L,N> |j,m><j,m'|.
inline Matrix ito_matrix(HalfInt j, int L, int N) {
  int dim = j.twice() + 1;
  Matrix T = Matrix::Zero(dim, dim);
  for_each_m(j, [&](HalfInt m) {
    for_each_m(j, [&](HalfInt mp) {
      double cgv = specfun::clebsch_gordan(j, m, j, -mp, HalfInt::from_int(L),
                                           HalfInt::from_int(N));
      if (cgv == 0.0) return;
      double sgn = ((j.twice() - mp.twice()) / 2) % 2 == 0 ? 1.0 : -1.0;
      T(m_index(j, m), m_index(j, mp)) = sgn * cgv;
    });
  });
  return T;
}

/// Cached Clebsch-Gordan contractions for one j; builds dequantizer and
/// quantizer matrices for arbitrary Euler angles. Constructed once, then
/// safe for concurrent read-only use.
class SpinScheme {
 public:
  explicit SpinScheme(HalfInt j) : j_(j), dim_(j.twice() + 1) {
    int Lmax = j.twice();
    cg0_.resize(Lmax + 1, std::vector<double>(dim_));
    cgT_.resize(Lmax + 1);
    for (int L = 0; L <= Lmax; ++L) {
      for_each_m(j_, [&](HalfInt m) {
        cg0_[L][m_index(j_, m)] =
            specfun::clebsch_gordan(j_, m, j_, -m, HalfInt::from_int(L), HalfInt(0));
      });
      cgT_[L].resize(2 * L + 1, Matrix::Zero(dim_, dim_));
      for (int M = -L; M <= L; ++M) cgT_[L][M + L] = ito_matrix(j_, L, M);
    }
  }

  HalfInt j() const { return j_; }
  int dim() const { return dim_; }

  /// U(m,Omega) = R^dag |j,m><j,m| R; entries U_{m2,m1} = D*_{m,m2} D_{m,m1}.
  Matrix dequantizer(HalfInt m, const EulerAngles& om) const {
    require_projection(j_, m, "spin dequantizer");
    Eigen::VectorXcd row(dim_);
    for_each_m(j_, [&](HalfInt mc) {
      row(m_index(j_, mc)) = specfun::wigner_D(j_, m, mc, om);
    });
    return row.conjugate() * row.transpose();
  }

  /// D(m,Omega) = sum_L (2L+1)/(8 pi^2) sum_M C_{L,M}(m,Omega) T_{LM} with
  /// C_{L,M} = (-1)^{j-m} <j,m; j,-m|L,0> D^{(L)*}_{0,M}(Omega).
  Matrix quantizer(HalfInt m, const EulerAngles& om) const {
    require_projection(j_, m, "spin quantizer");
    Matrix D = Matrix::Zero(dim_, dim_);
    double msign = ((j_.twice() - m.twice()) / 2) % 2 == 0 ? 1.0 : -1.0;
    for (int L = 0; L <= j_.twice(); ++L) {
      double c0 = cg0_[L][m_index(j_, m)];
      if (c0 == 0.0) continue;
      double cl = (2.0 * L + 1.0) / (8.0 * M_PI * M_PI);
      for (int M = -L; M <= L; ++M) {
        cplx dlm = std::conj(specfun::wigner_D(HalfInt::from_int(L), HalfInt(0),
                                               HalfInt::from_int(M), om));
        D += (msign * c0 * cl) * dlm * cgT_[L][M + L];
      }
    }
    return D;
  }

 private:
  HalfInt j_;
  int dim_;
  std::vector<std::vector<double>> cg0_;
  std::vector<std::vector<Matrix>> cgT_;
};

struct RestrictedMeta {
  HalfInt j;
  bool renormalized = false;
  double sector_weight = 1.0;
};

struct SpinTomogram {
  HalfInt j;
  transforms::EulerQuadrature grid;
  Eigen::MatrixXd values;  // [grid point, m-index (descending)]
  std::optional<RestrictedMeta> restricted;
};

/// omega_j(m, Omega_g) = Tr[rho U(m, Omega_g)] over the quadrature grid.
inline SpinTomogram spin_tomogram(const DensityMatrix& rho,
                                  const transforms::EulerQuadrature& grid) {
  if (rho.basis().kind != BasisKind::SpinJ)
    throw std::invalid_argument("spin_tomogram: expected a spin state");
  HalfInt j = rho.basis().j;
  SpinScheme scheme(j);
  SpinTomogram out;
  out.j = j;
  out.grid = grid;
  out.values.resize(grid.size(), scheme.dim());
  for (size_t g = 0; g < grid.size(); ++g) {
    for_each_m(j, [&](HalfInt m) {
      cplx v = (rho.data() * scheme.dequantizer(m, grid.nodes[g])).trace();
      if (std::abs(v.imag()) > 1e-9)
        throw consistency_error("spin_tomogram: imaginary residue " +
                                std::to_string(v.imag()));
      out.values(static_cast<int>(g), m_index(j, m)) = v.real();
    });
  }
  return out;
}

/// rho = sum_m sum_g w_g omega(m, Omega_g) D(m, Omega_g); exact whenever the
/// grid integrates rank <= 4j D-products.
inline DensityMatrix reconstruct_spin(const SpinTomogram& tg) {
  SpinScheme scheme(tg.j);
  Matrix rho = Matrix::Zero(scheme.dim(), scheme.dim());
  for (size_t g = 0; g < tg.grid.size(); ++g) {
    for_each_m(tg.j, [&](HalfInt m) {
      rho += tg.grid.weights[g] * tg.values(static_cast<int>(g), m_index(tg.j, m)) *
             scheme.quantizer(m, tg.grid.nodes[g]);
    });
  }
  hilbert::RepairReport rep;
  DensityMatrix out = DensityMatrix::repair(Basis::spin(tg.j), rho, rep);
  if (rep.trace_defect > 1e-10 || rep.hermiticity_defect > 1e-10)
    throw consistency_error("reconstruct_spin: quadrature not exact for this grid");
  return out;
}

// ---------------------------------------------------------------------------
// Symplectic representation
// ---------------------------------------------------------------------------

/// <x; mu, nu | n> via polar reduction: with r = |(mu,nu)| and
/// theta = atan2(nu, mu), equals e^{-i n theta} psi_n(x/r) / sqrt(r).
inline cplx symplectic_dequantizer_overlap(int n, double x, double mu, double nu) {
  double r2 = mu * mu + nu * nu;
  if (r2 == 0.0) throw degenerate_frame_error("symplectic overlap: mu = nu = 0");
  double r = std::sqrt(r2);
  double theta = std::atan2(nu, mu);
  return std::polar(specfun::ho_wavefunction(n, x / r) / std::sqrt(r), -n * theta);
}

struct SymplecticTomogram {
  int modes = 1;
  std::array<double, 2> mu{1.0, 1.0}, nu{0.0, 0.0};
  std::array<transforms::LineGrid, 2> x;
  std::vector<double> values;  // row-major over (x1 [, x2])
  std::optional<RestrictedMeta> restricted;

  size_t index(int i1, int i2 = 0) const {
    return modes == 1 ? static_cast<size_t>(i1)
                      : static_cast<size_t>(i1) * x[1].n + i2;
  }
};

namespace detail {
inline void clamp_small_negatives(std::vector<double>& v, int& clamped,
                                  double floor_tol = -1e-8) {
  clamped = 0;
  for (double& t : v) {
    if (t < 0.0) {
      if (t < floor_tol)
        throw consistency_error("tomogram value below negativity tolerance: " +
                                std::to_string(t));
      t = 0.0;
      ++clamped;
    }
  }
}
}  // namespace detail

/// W(x|mu,nu) = <x;mu,nu| rho |x;mu,nu> evaluated over the x-grid; for
/// two-mode states the overlap is a per-mode product.
inline SymplecticTomogram symplectic_tomogram(const DensityMatrix& rho,
                                              std::array<double, 2> mu,
                                              std::array<double, 2> nu,
                                              std::array<transforms::LineGrid, 2> xg) {
  SymplecticTomogram out;
  out.mu = mu;
  out.nu = nu;
  out.x = xg;
  if (rho.basis().kind == BasisKind::Fock1) {
    out.modes = 1;
    int N = rho.basis().cutoff;
    out.values.resize(xg[0].n);
    Eigen::VectorXcd o(N + 1);
    for (int i = 0; i < xg[0].n; ++i) {
      for (int n = 0; n <= N; ++n)
        o(n) = symplectic_dequantizer_overlap(n, xg[0].point(i), mu[0], nu[0]);
      out.values[i] = std::real((o.transpose() * rho.data() * o.conjugate())(0, 0));
    }
  } else if (rho.basis().kind == BasisKind::Fock2) {
    out.modes = 2;
    int N = rho.basis().cutoff;
    out.values.assign(static_cast<size_t>(xg[0].n) * xg[1].n, 0.0);
    // rank factorization: W = sum_r lambda_r |amp_r|^2 with
    // amp_r = O1^T Psi_r O2 per mode-overlap tables
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.data());
    Eigen::MatrixXcd O1(N + 1, xg[0].n), O2(N + 1, xg[1].n);
    for (int i = 0; i < xg[0].n; ++i)
      for (int n = 0; n <= N; ++n)
        O1(n, i) = symplectic_dequantizer_overlap(n, xg[0].point(i), mu[0], nu[0]);
    for (int i = 0; i < xg[1].n; ++i)
      for (int n = 0; n <= N; ++n)
        O2(n, i) = symplectic_dequantizer_overlap(n, xg[1].point(i), mu[1], nu[1]);
    for (int r = 0; r < rho.dim(); ++r) {
      double lam = es.eigenvalues()(r);
      if (std::abs(lam) < 1e-15) continue;
      Eigen::MatrixXcd Psi(N + 1, N + 1);
      for (int n1 = 0; n1 <= N; ++n1)
        for (int n2 = 0; n2 <= N; ++n2)
          Psi(n1, n2) = es.eigenvectors()(rho.basis().fock2_index(n1, n2), r);
      Eigen::MatrixXcd amp = O1.transpose() * Psi * O2;
      for (int i1 = 0; i1 < xg[0].n; ++i1)
        for (int i2 = 0; i2 < xg[1].n; ++i2)
          out.values[out.index(i1, i2)] += lam * std::norm(amp(i1, i2));
    }
  } else {
    throw std::invalid_argument("symplectic_tomogram: expected a Fock state");
  }
  int clamped = 0;
  detail::clamp_small_negatives(out.values, clamped);
  return out;
}

/// Optical tomogram w(y, theta) = W(y | cos theta, sin theta) sampled on a
/// uniform theta grid over [0, pi) and a uniform y grid; the reconstruction
/// input format. Two-mode tables are stored row-major over
/// ((t1, y1), (t2, y2)).
struct OpticalTomogram {
  int modes = 1;
  std::array<transforms::LineGrid, 2> x;
  std::array<int, 2> n_theta{0, 0};
  std::vector<double> values;

  double theta(int mode, int t) const { return M_PI * t / n_theta[mode]; }
  size_t points(int mode) const {
    return static_cast<size_t>(n_theta[mode]) * x[mode].n;
  }
  size_t index1(int t, int iy) const {
    return static_cast<size_t>(t) * x[0].n + iy;
  }
};

inline OpticalTomogram optical_tomogram(const DensityMatrix& rho,
                                        transforms::LineGrid xg, int n_theta) {
  OpticalTomogram out;
  out.x = {xg, xg};
  out.n_theta = {n_theta, n_theta};
  int N = rho.basis().cutoff;
  if (rho.basis().kind == BasisKind::Fock1) {
    out.modes = 1;
    out.values.resize(out.points(0));
    for (int t = 0; t < n_theta; ++t) {
      double th = out.theta(0, t);
      auto slice = symplectic_tomogram(rho, {std::cos(th), 0.0}, {std::sin(th), 0.0},
                                       {xg, xg});
      for (int iy = 0; iy < xg.n; ++iy) out.values[out.index1(t, iy)] = slice.values[iy];
    }
  } else if (rho.basis().kind == BasisKind::Fock2) {
    out.modes = 2;
    size_t P1 = out.points(0), P2 = out.points(1);
    out.values.assign(P1 * P2, 0.0);
    // per-mode overlap tables over the (theta, y) product, then rank sum
    auto otable = [&](int mode) {
      Eigen::MatrixXcd O(N + 1, out.points(mode));
      for (int t = 0; t < out.n_theta[mode]; ++t) {
        double th = out.theta(mode, t);
        for (int iy = 0; iy < out.x[mode].n; ++iy)
          for (int n = 0; n <= N; ++n)
            O(n, static_cast<int>(t * out.x[mode].n + iy)) =
                symplectic_dequantizer_overlap(n, out.x[mode].point(iy),
                                               std::cos(th), std::sin(th));
      }
      return O;
    };
    Eigen::MatrixXcd O1 = otable(0), O2 = otable(1);
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.data());
    for (int r = 0; r < rho.dim(); ++r) {
      double lam = es.eigenvalues()(r);
      if (std::abs(lam) < 1e-15) continue;
      Eigen::MatrixXcd Psi(N + 1, N + 1);
      for (int n1 = 0; n1 <= N; ++n1)
        for (int n2 = 0; n2 <= N; ++n2)
          Psi(n1, n2) = es.eigenvectors()(rho.basis().fock2_index(n1, n2), r);
      Eigen::MatrixXcd amp = O1.transpose() * Psi * O2;
      for (size_t p1 = 0; p1 < P1; ++p1)
        for (size_t p2 = 0; p2 < P2; ++p2)
          out.values[p1 * P2 + p2] +=
              lam * std::norm(amp(static_cast<int>(p1), static_cast<int>(p2)));
    }
  } else {
    throw std::invalid_argument("optical_tomogram: expected a Fock state");
  }
  return out;
}

namespace detail {

/// Radial pattern integrals I_{Delta,k}(y) = int_0^inf r^{Delta+1}
/// e^{-(1/4+eps) r^2} L_k^{(Delta)}(r^2/2) e^{i r y} dr, evaluated on a
/// Gauss-Legendre rule, with Richardson extrapolation of the damping
/// window eps -> 0 over {1e-2, 3e-3, 1e-3}.
class RadialPattern {
 public:
  RadialPattern(int nmax, const std::vector<double>& ys, int n_r = 384,
                double r_max = 12.0)
      : nmax_(nmax), ys_(ys) {
    std::vector<double> xs, ws;
    transforms::gauss_legendre(n_r, xs, ws);
    rs_.resize(n_r);
    ws_.resize(n_r);
    for (int i = 0; i < n_r; ++i) {
      rs_[i] = 0.5 * r_max * (xs[i] + 1.0);
      ws_[i] = 0.5 * r_max * ws[i];
    }
    static constexpr std::array<double, 3> eps = {1e-2, 3e-3, 1e-3};
    table_.resize(static_cast<size_t>(nmax + 1) * (nmax + 1));
    std::vector<cplx> acc[3];
    for (int dlt = 0; dlt <= nmax; ++dlt) {
      for (int k = 0; k + dlt <= nmax; ++k) {
        for (auto& a : acc) a.assign(ys.size(), 0.0);
        for (size_t ir = 0; ir < rs_.size(); ++ir) {
          double r = rs_[ir];
          double prof = ws_[ir] * std::pow(r, dlt + 1) *
                        specfun::assoc_laguerre(k, dlt, 0.5 * r * r);
          double damp[3];
          for (int e = 0; e < 3; ++e)
            damp[e] = prof * std::exp(-(0.25 + eps[e]) * r * r);
          for (size_t iy = 0; iy < ys.size(); ++iy) {
            cplx ph = std::polar(1.0, r * ys[iy]);
            for (int e = 0; e < 3; ++e) acc[e][iy] += damp[e] * ph;
          }
        }
        auto& cell = table_[static_cast<size_t>(dlt) * (nmax + 1) + k];
        cell.resize(ys.size());
        // quadratic extrapolation to eps = 0
        for (size_t iy = 0; iy < ys.size(); ++iy) {
          cplx v = 0.0;
          for (int i = 0; i < 3; ++i) {
            double li = 1.0;
            for (int m = 0; m < 3; ++m)
              if (m != i) li *= (0.0 - eps[m]) / (eps[i] - eps[m]);
            v += li * acc[i][iy];
          }
          cell[iy] = v;
        }
      }
    }
  }

  const std::vector<cplx>& profile(int dlt, int k) const {
    return table_[static_cast<size_t>(dlt) * (nmax_ + 1) + k];
  }

 private:
  int nmax_;
  std::vector<double> ys_;
  std::vector<double> rs_, ws_;
  std::vector<std::vector<cplx>> table_;
};

/// Per-mode pattern matrix G[(a,b), (t,y)] with
/// G_ab(y, theta) = (2 pi)^{-1} (-i/sqrt2)^Delta s_ab e^{i(a-b)theta} I_{Delta,min}(y),
/// so that <a|rho|b> = sum over samples of w * G. Theta runs over [0, 2pi);
/// the [pi, 2pi) half-turn sees the same data at reflected y and is folded
/// into the matrix, so callers contract against the raw table once.
inline Eigen::MatrixXcd pattern_matrix(int nmax, const OpticalTomogram& opt, int mode) {
  const auto& xg = opt.x[mode];
  int nth = opt.n_theta[mode];
  std::vector<double> ys(xg.n);
  for (int i = 0; i < xg.n; ++i) ys[i] = xg.point(i);
  RadialPattern rad(nmax, ys);
  int dim = nmax + 1;
  Eigen::MatrixXcd G(dim * dim, opt.points(mode));
  double wtheta = M_PI / nth;
  double wy = xg.step;
  for (int a = 0; a <= nmax; ++a) {
    for (int b = 0; b <= nmax; ++b) {
      int dlt = std::abs(a - b), k = std::min(a, b);
      double s_ab = std::exp(0.5 * (specfun::log_factorial(k) -
                                    specfun::log_factorial(std::max(a, b))));
      cplx pref = std::pow(cplx(0.0, -1.0) / std::sqrt(2.0), dlt) * s_ab *
                  (wtheta * wy) / (2.0 * M_PI);
      const auto& prof = rad.profile(dlt, k);
      for (int t = 0; t < nth; ++t) {
        cplx ph = pref * std::polar(1.0, (a - b) * opt.theta(mode, t));
        // theta + pi: extra (-1)^{a-b} phase, data value taken at -y
        cplx ph2 = ph * ((a - b) % 2 == 0 ? 1.0 : -1.0);
        for (int iy = 0; iy < xg.n; ++iy)
          G(a * dim + b, t * xg.n + iy) =
              ph * prof[iy] + ph2 * prof[xg.n - 1 - iy];
      }
    }
  }
  return G;
}

}  // namespace detail

/// Inverse Radon reconstruction of a single-mode state from optical tomogram
/// samples via Fock-basis pattern functions.
inline DensityMatrix reconstruct_from_symplectic(const OpticalTomogram& opt,
                                                 int cutoff,
                                                 hilbert::RepairReport* report = nullptr) {
  if (opt.modes != 1)
    throw std::invalid_argument("reconstruct_from_symplectic: single-mode input expected");
  Eigen::MatrixXcd G = detail::pattern_matrix(cutoff, opt, 0);
  size_t P = opt.points(0);
  Eigen::VectorXd w(P);
  for (size_t p = 0; p < P; ++p) w(static_cast<int>(p)) = opt.values[p];
  Eigen::VectorXcd rhov = G * w;
  int dim = cutoff + 1;
  Matrix raw(dim, dim);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) raw(a, b) = rhov(a * dim + b);
  hilbert::RepairReport rep;
  DensityMatrix rho = DensityMatrix::repair(Basis::fock1(cutoff), raw, rep);
  if (report) *report = rep;
  return rho;
}

/// Two-mode analog used by the stepwise composition pipeline.
inline DensityMatrix reconstruct_from_symplectic2(const OpticalTomogram& opt,
                                                  int cutoff,
                                                  hilbert::RepairReport* report = nullptr) {
  if (opt.modes != 2)
    throw std::invalid_argument("reconstruct_from_symplectic2: two-mode input expected");
  Eigen::MatrixXcd G1 = detail::pattern_matrix(cutoff, opt, 0);
  Eigen::MatrixXcd G2 = detail::pattern_matrix(cutoff, opt, 1);
  size_t P1 = opt.points(0), P2 = opt.points(1);
  Eigen::MatrixXcd W(P1, P2);
  for (size_t p = 0; p < P1; ++p)
    for (size_t q = 0; q < P2; ++q)
      W(static_cast<int>(p), static_cast<int>(q)) = opt.values[p * P2 + q];
  Eigen::MatrixXcd T = G1 * W * G2.transpose();  // [(a1 b1), (a2 b2)]
  int dim = cutoff + 1;
  Basis b2 = Basis::fock2(cutoff);
  Matrix raw(b2.dim(), b2.dim());
  for (int a1 = 0; a1 < dim; ++a1)
    for (int b1 = 0; b1 < dim; ++b1)
      for (int a2 = 0; a2 < dim; ++a2)
        for (int b_2 = 0; b_2 < dim; ++b_2)
          raw(b2.fock2_index(a1, a2), b2.fock2_index(b1, b_2)) =
              T(a1 * dim + b1, a2 * dim + b_2);
  hilbert::RepairReport rep;
  DensityMatrix rho = DensityMatrix::repair(b2, raw, rep);
  if (report) *report = rep;
  return rho;
}

// ---------------------------------------------------------------------------
// Photon-number representation
// ---------------------------------------------------------------------------

struct PhotonTomogram {
  int modes = 1;
  std::vector<cplx> alphas1, alphas2;  // per-mode grids (product for modes=2)
  int n_max = 0;                       // one-mode: columns are n = 0..n_max
  std::vector<std::pair<int, int>> n_pairs;  // two-mode column labels
  Eigen::MatrixXd values;              // [alpha point, n column]
  double tail_bound = 0.0;
  std::optional<RestrictedMeta> restricted;
  std::optional<double> cell_weight;   // set when alphas form a uniform grid

  size_t alpha_points() const {
    return modes == 1 ? alphas1.size() : alphas1.size() * alphas2.size();
  }
  cplx alpha(int mode, size_t flat) const {
    if (modes == 1) return alphas1[flat];
    return mode == 0 ? alphas1[flat / alphas2.size()] : alphas2[flat % alphas2.size()];
  }
};

/// w_n(alpha) = <n| D(alpha) rho D^dag(alpha) |n> for a single-mode state.
inline PhotonTomogram photon_tomogram(const DensityMatrix& rho,
                                      std::vector<cplx> alphas, int n_max) {
  if (rho.basis().kind != BasisKind::Fock1)
    throw std::invalid_argument("photon_tomogram: expected a single-mode state");
  int N = rho.basis().cutoff;
  PhotonTomogram out;
  out.modes = 1;
  out.alphas1 = std::move(alphas);
  out.n_max = n_max;
  out.values.resize(out.alphas1.size(), n_max + 1);
  Eigen::VectorXcd row(N + 1);
  for (size_t ia = 0; ia < out.alphas1.size(); ++ia) {
    cplx al = out.alphas1[ia];
    double colsum = 0.0;
    for (int n = 0; n <= n_max; ++n) {
      for (int b = 0; b <= N; ++b) row(b) = specfun::displacement_element(n, b, al);
      double v = std::real((row.transpose() * rho.data() * row.conjugate())(0, 0));
      out.values(static_cast<int>(ia), n) = std::max(v, 0.0);
      colsum += v;
    }
    out.tail_bound = std::max(out.tail_bound, 1.0 - colsum);
  }
  if (out.tail_bound > 1e-6)
    throw consistency_error("photon_tomogram: truncation tail " +
                            std::to_string(out.tail_bound));
  return out;
}

/// Two-mode photon tomogram on a product alpha grid, columns restricted to
/// the listed n-pairs (all pairs with n1,n2 <= n_max when empty).
inline PhotonTomogram photon_tomogram2(const DensityMatrix& rho,
                                       std::vector<cplx> alphas1,
                                       std::vector<cplx> alphas2,
                                       std::vector<std::pair<int, int>> n_pairs) {
  if (rho.basis().kind != BasisKind::Fock2)
    throw std::invalid_argument("photon_tomogram2: expected a two-mode state");
  int N = rho.basis().cutoff;
  PhotonTomogram out;
  out.modes = 2;
  out.alphas1 = std::move(alphas1);
  out.alphas2 = std::move(alphas2);
  out.n_pairs = std::move(n_pairs);
  int nmax = 0;
  for (auto& [n1, n2] : out.n_pairs) nmax = std::max({nmax, n1, n2});
  out.values.setZero(out.alpha_points(), out.n_pairs.size());
  // w_n(alpha) = sum_r lambda_r |amp_r|^2, amp_r[n1,n2] = T1 Psi_r T2^T with
  // T[n, a] = <n|D(alpha)|a> per mode
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.data());
  std::vector<Eigen::MatrixXcd> Psi;
  std::vector<double> lam;
  for (int r = 0; r < rho.dim(); ++r) {
    if (std::abs(es.eigenvalues()(r)) < 1e-15) continue;
    lam.push_back(es.eigenvalues()(r));
    Eigen::MatrixXcd P(N + 1, N + 1);
    for (int a1 = 0; a1 <= N; ++a1)
      for (int a2 = 0; a2 <= N; ++a2)
        P(a1, a2) = es.eigenvectors()(rho.basis().fock2_index(a1, a2), r);
    Psi.push_back(std::move(P));
  }
  auto ttable = [&](const std::vector<cplx>& als) {
    std::vector<Eigen::MatrixXcd> T(als.size());
    for (size_t ia = 0; ia < als.size(); ++ia) {
      T[ia].resize(nmax + 1, N + 1);
      for (int n = 0; n <= nmax; ++n)
        for (int a = 0; a <= N; ++a)
          T[ia](n, a) = specfun::displacement_element(n, a, als[ia]);
    }
    return T;
  };
  std::vector<Eigen::MatrixXcd> T1 = ttable(out.alphas1), T2 = ttable(out.alphas2);
  for (size_t ia1 = 0; ia1 < out.alphas1.size(); ++ia1) {
    std::vector<Eigen::MatrixXcd> half(lam.size());
    for (size_t r = 0; r < lam.size(); ++r) half[r] = T1[ia1] * Psi[r];
    for (size_t ia2 = 0; ia2 < out.alphas2.size(); ++ia2) {
      size_t flat = ia1 * out.alphas2.size() + ia2;
      for (size_t r = 0; r < lam.size(); ++r) {
        Eigen::MatrixXcd amp = half[r] * T2[ia2].transpose();
        for (size_t k = 0; k < out.n_pairs.size(); ++k)
          out.values(static_cast<int>(flat), static_cast<int>(k)) +=
              lam[r] * std::norm(amp(out.n_pairs[k].first, out.n_pairs[k].second));
      }
    }
  }
  return out;
}

inline double photon_g(double s) { return (s - 1.0) / (s + 1.0); }

inline void require_s_domain(double s) {
  if (!(s > 0.0 && s < 1.0))
    throw std::domain_error("ordering parameter s must lie in (0,1) for a "
                            "convergent quantizer series");
}

inline int photon_lsum_terms(double s, int n) {
  // geometric tail |g|^{L-n} < 1e-14
  double g = std::abs(photon_g(s));
  return n + static_cast<int>(std::ceil(std::log(1e-14) / std::log(g))) + 1;
}

/// Single-mode photon quantizer matrix <a| D_n(alpha) |b> on a truncated
/// space, via the geometric l-sum D_n = c D(-alpha) g^{n\hat - n} D^dag(-alpha).
inline Matrix photon_quantizer_matrix(int n, cplx alpha, double s, int cutoff) {
  require_s_domain(s);
  double g = photon_g(s);
  int L = photon_lsum_terms(s, n);
  int dim = cutoff + 1;
  Eigen::MatrixXcd Dm(dim, L);
  for (int a = 0; a < dim; ++a)
    for (int l = 0; l < L; ++l)
      Dm(a, l) = specfun::displacement_element(a, l, -alpha);
  Eigen::VectorXcd gpow(L);
  for (int l = 0; l < L; ++l) gpow(l) = std::pow(g, l - n);
  double pref = 4.0 / (M_PI * (1.0 - s * s));
  return pref * (Dm * gpow.asDiagonal() * Dm.adjoint());
}

/// rho = sum_n int d^2alpha w_n(alpha) D_n(alpha) on a uniform alpha grid.
inline DensityMatrix reconstruct_from_photon(const PhotonTomogram& w, double s,
                                             int cutoff,
                                             hilbert::RepairReport* report = nullptr) {
  require_s_domain(s);
  if (!w.cell_weight)
    throw std::invalid_argument("reconstruct_from_photon: tomogram lacks grid weights");
  double g = photon_g(s);
  double pref = 4.0 / (M_PI * (1.0 - s * s));
  int dim = cutoff + 1;
  if (w.modes == 1) {
    Matrix acc = Matrix::Zero(dim, dim);
    int L = photon_lsum_terms(s, 0);
    Eigen::MatrixXcd Dm(dim, L);
    Eigen::VectorXcd gpow(L);
    for (int l = 0; l < L; ++l) gpow(l) = std::pow(g, l);
    for (size_t ia = 0; ia < w.alphas1.size(); ++ia) {
      cplx al = w.alphas1[ia];
      // alternating g^{-n} sum: extended precision against cancellation
      long double cl = 0.0L;
      for (int n = 0; n <= w.n_max; ++n)
        cl += static_cast<long double>(w.values(static_cast<int>(ia), n)) *
              std::pow(static_cast<long double>(g), static_cast<long double>(-n));
      double c = static_cast<double>(cl);
      for (int a = 0; a < dim; ++a)
        for (int l = 0; l < L; ++l)
          Dm(a, l) = specfun::displacement_element(a, l, -al);
      acc += (c * pref * *w.cell_weight) * (Dm * gpow.asDiagonal() * Dm.adjoint());
    }
    hilbert::RepairReport rep;
    DensityMatrix rho = DensityMatrix::repair(Basis::fock1(cutoff), acc, rep);
    if (report) *report = rep;
    return rho;
  }
  // two-mode: accumulate K(a1) kron [sum_{a2} c(a1,a2) K(a2)]
  Basis b2 = Basis::fock2(cutoff);
  Matrix acc = Matrix::Zero(b2.dim(), b2.dim());
  int L = photon_lsum_terms(s, 0);
  Eigen::VectorXcd gpow(L);
  for (int l = 0; l < L; ++l) gpow(l) = std::pow(g, l);
  size_t A1 = w.alphas1.size(), A2 = w.alphas2.size();
  std::vector<Matrix> K2(A2);
  Eigen::MatrixXcd Dm(dim, L);
  for (size_t ia2 = 0; ia2 < A2; ++ia2) {
    for (int a = 0; a < dim; ++a)
      for (int l = 0; l < L; ++l)
        Dm(a, l) = specfun::displacement_element(a, l, -w.alphas2[ia2]);
    K2[ia2] = pref * (Dm * gpow.asDiagonal() * Dm.adjoint());
  }
  for (size_t ia1 = 0; ia1 < A1; ++ia1) {
    Matrix inner = Matrix::Zero(dim, dim);
    for (size_t ia2 = 0; ia2 < A2; ++ia2) {
      size_t flat = ia1 * A2 + ia2;
      long double cl = 0.0L;
      for (size_t k = 0; k < w.n_pairs.size(); ++k)
        cl += static_cast<long double>(
                  w.values(static_cast<int>(flat), static_cast<int>(k))) *
              std::pow(static_cast<long double>(g),
                       static_cast<long double>(-w.n_pairs[k].first -
                                                w.n_pairs[k].second));
      inner += static_cast<double>(cl) * K2[ia2];
    }
    for (int a = 0; a < dim; ++a)
      for (int l = 0; l < L; ++l)
        Dm(a, l) = specfun::displacement_element(a, l, -w.alphas1[ia1]);
    Matrix K1 = pref * (Dm * gpow.asDiagonal() * Dm.adjoint());
    Matrix kr(b2.dim(), b2.dim());
    for (int a1 = 0; a1 < dim; ++a1)
      for (int b1 = 0; b1 < dim; ++b1)
        kr.block(a1 * dim, b1 * dim, dim, dim) = K1(a1, b1) * inner;
    acc += *w.cell_weight * *w.cell_weight * kr;
  }
  hilbert::RepairReport rep;
  DensityMatrix rho = DensityMatrix::repair(b2, acc, rep);
  if (report) *report = rep;
  return rho;
}

// ---------------------------------------------------------------------------
// Wigner function
// ---------------------------------------------------------------------------

/// Per-mode Wigner convention: dequantizer U(alpha) = (1/pi) D(2 alpha) P.
/// The dual quantizer is D(alpha) = 4 D(2 alpha) P; the paper-style constant
/// 2 fails the round-trip identity and the calibrated value 4 is used
/// throughout (see README).
inline constexpr double kWignerQuantConst = 4.0;

struct WignerGrid {
  int modes = 1;
  std::array<transforms::PlaneQuadrature, 2> grid;
  std::vector<double> values;  // row-major over (alpha1 [, alpha2])
  std::optional<RestrictedMeta> restricted;
};

/// W(alpha) = (1/pi) Tr[rho D(2 alpha) P] per mode.
inline WignerGrid wigner_function(const DensityMatrix& rho,
                                  const transforms::PlaneQuadrature& grid) {
  WignerGrid out;
  out.grid = {grid, grid};
  int N = rho.basis().cutoff;
  if (rho.basis().kind == BasisKind::Fock1) {
    out.modes = 1;
    out.values.resize(grid.size());
    for (size_t ia = 0; ia < grid.size(); ++ia) {
      // Tr[rho D(2a) P] = sum_{ab} rho_ab (-1)^a <b|D(2a)|a>
      cplx tb = 0.0;
      for (int a = 0; a <= N; ++a)
        for (int b = 0; b <= N; ++b)
          tb += rho(a, b) * (a % 2 == 0 ? 1.0 : -1.0) *
                specfun::displacement_element(b, a, 2.0 * grid.nodes[ia]);
      out.values[ia] = std::real(tb) / M_PI;
    }
  } else if (rho.basis().kind == BasisKind::Fock2) {
    out.modes = 2;
    out.values.resize(grid.size() * grid.size());
    int dim = N + 1;
    Eigen::MatrixXcd M1(dim, dim), M2(dim, dim);
    for (size_t i1 = 0; i1 < grid.size(); ++i1) {
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
          M1(a, b) = (a % 2 == 0 ? 1.0 : -1.0) *
                     specfun::displacement_element(b, a, 2.0 * grid.nodes[i1]);
      for (size_t i2 = 0; i2 < grid.size(); ++i2) {
        for (int a = 0; a < dim; ++a)
          for (int b = 0; b < dim; ++b)
            M2(a, b) = (a % 2 == 0 ? 1.0 : -1.0) *
                       specfun::displacement_element(b, a, 2.0 * grid.nodes[i2]);
        cplx tb = 0.0;
        for (int a1 = 0; a1 < dim; ++a1)
          for (int b1 = 0; b1 < dim; ++b1)
            for (int a2 = 0; a2 < dim; ++a2)
              for (int b_2 = 0; b_2 < dim; ++b_2)
                tb += rho(rho.basis().fock2_index(a1, a2),
                          rho.basis().fock2_index(b1, b_2)) *
                      M1(a1, b1) * M2(a2, b_2);
        out.values[i1 * grid.size() + i2] = std::real(tb) / (M_PI * M_PI);
      }
    }
  } else {
    throw std::invalid_argument("wigner_function: expected a Fock state");
  }
  return out;
}

/// rho = int W(alpha) [4 D(2 alpha) P] d^2 alpha (per mode).
inline DensityMatrix reconstruct_from_wigner(const WignerGrid& wg, int cutoff,
                                             hilbert::RepairReport* report = nullptr,
                                             double trace_tol = 1e-2) {
  int dim = cutoff + 1;
  auto dpar = [&](cplx alpha) {
    Matrix m(dim, dim);
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b)
        m(a, b) = kWignerQuantConst * (b % 2 == 0 ? 1.0 : -1.0) *
                  specfun::displacement_element(a, b, 2.0 * alpha);
    return m;
  };
  hilbert::RepairReport rep;
  if (wg.modes == 1) {
    const auto& g = wg.grid[0];
    Matrix acc = Matrix::Zero(dim, dim);
    for (size_t ia = 0; ia < g.size(); ++ia)
      acc += (wg.values[ia] * g.cell_weight) * dpar(g.nodes[ia]);
    if (std::abs(acc.trace().real() - 1.0) > trace_tol)
      throw consistency_error("reconstruct_from_wigner: trace deviation " +
                              std::to_string(std::abs(acc.trace().real() - 1.0)));
    DensityMatrix rho = DensityMatrix::repair(Basis::fock1(cutoff), acc, rep);
    if (report) *report = rep;
    return rho;
  }
  const auto& g1 = wg.grid[0];
  const auto& g2 = wg.grid[1];
  std::vector<Matrix> K2(g2.size());
  for (size_t i = 0; i < g2.size(); ++i) K2[i] = dpar(g2.nodes[i]);
  Basis b2 = Basis::fock2(cutoff);
  Matrix acc = Matrix::Zero(b2.dim(), b2.dim());
  for (size_t i1 = 0; i1 < g1.size(); ++i1) {
    Matrix inner = Matrix::Zero(dim, dim);
    for (size_t i2 = 0; i2 < g2.size(); ++i2)
      inner += wg.values[i1 * g2.size() + i2] * K2[i2];
    Matrix K1 = dpar(g1.nodes[i1]);
    for (int a1 = 0; a1 < dim; ++a1)
      for (int b1 = 0; b1 < dim; ++b1)
        acc.block(a1 * dim, b1 * dim, dim, dim) +=
            (g1.cell_weight * g2.cell_weight) * K1(a1, b1) * inner;
  }
  if (std::abs(acc.trace().real() - 1.0) > trace_tol)
    throw consistency_error("reconstruct_from_wigner: trace deviation " +
                            std::to_string(std::abs(acc.trace().real() - 1.0)));
  DensityMatrix rho = DensityMatrix::repair(b2, acc, rep);
  if (report) *report = rep;
  return rho;
}

}  // namespace jstomo::tomo
