#pragma once

// Brute-force verification: every kernel-based transform is recomputed as a
// stepwise composition through density matrices (reconstruct / JS-project /
// re-tomograph) and compared pointwise. This module never evaluates the
// closed-form kernels; the transforms never touch the JS projection. The two
// routes agreeing is the executable form of the one-to-one correspondence
// diagram.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "jstomo/hilbert.hpp"
#include "jstomo/tomography.hpp"
#include "jstomo/transforms.hpp"

namespace jstomo::oracle {

using hilbert::DensityMatrix;
using tomo::OpticalTomogram;
using tomo::PhotonTomogram;
using tomo::SpinTomogram;
using tomo::SymplecticTomogram;
using tomo::WignerGrid;

struct Offender {
  std::string point;
  double got = 0.0, want = 0.0;
};

struct VerificationReport {
  std::string transform;
  std::string state_id;
  std::string grid_summary;
  double max_abs_err = 0.0;
  double max_rel_err = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::vector<Offender> worst;  // at most 10, largest first

  void finish() { pass = max_abs_err <= tolerance; }
};

namespace detail {

inline void compare_point(VerificationReport& rep, const std::string& label,
                          double got, double want) {
  double abs_err = std::abs(got - want);
  double scale = std::max(std::abs(want), 1e-30);
  rep.max_abs_err = std::max(rep.max_abs_err, abs_err);
  rep.max_rel_err = std::max(rep.max_rel_err, abs_err / scale);
  if (rep.worst.size() < 10 ||
      abs_err > std::abs(rep.worst.back().got - rep.worst.back().want)) {
    rep.worst.push_back({label, got, want});
    std::sort(rep.worst.begin(), rep.worst.end(), [](const Offender& a, const Offender& b) {
      return std::abs(a.got - a.want) > std::abs(b.got - b.want);
    });
    if (rep.worst.size() > 10) rep.worst.resize(10);
  }
}

}  // namespace detail

/// Options shared by the oracle pipelines; sized for desk-scale runs.
struct OracleOptions {
  double s_param = 0.5;
  // two-mode photon / Wigner alpha grids (per mode)
  double plane_radius = 2.6;
  double plane_step = 0.325;
  // full-table depth for photon tomograms: per-mode max and joint cut
  int photon_nmax = 24;
  int photon_nsum = 30;
  // optical tables for the inverse-Radon paths
  double x_range = 7.0;
  double x_step = 0.1;
  int n_theta = 12;
  // spin-to-CV comparison grids
  double fig_x_min = -5.0, fig_x_max = 5.0, fig_x_step = 0.1;
};

/// Index of test states used by verify_all.
struct StateSpec {
  std::string id;
  hilbert::SpinSuperposition state;
};

inline std::vector<StateSpec> standard_states(std::uint64_t seed, int random_per_j = 5) {
  std::vector<StateSpec> out;
  out.push_back({"paper-j1/2", hilbert::make_paper_state(hilbert::PaperState::j_half)});
  out.push_back({"paper-j1", hilbert::make_paper_state(hilbert::PaperState::j_one)});
  out.push_back({"paper-j3/2", hilbert::make_paper_state(hilbert::PaperState::j_three_half)});
  for (int tw = 1; tw <= 3; ++tw) {
    for (int k = 0; k < random_per_j; ++k) {
      HalfInt j(tw);
      std::ostringstream id;
      id << "random-j" << j.str() << "-" << k;
      out.push_back({id.str(), hilbert::random_spin_state(j, seed + 100 * tw + k)});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Per-direction verifications
// ---------------------------------------------------------------------------

inline VerificationReport verify_spin_to_symplectic(const StateSpec& st,
                                                    const OracleOptions& opt,
                                                    double tol) {
  VerificationReport rep;
  rep.transform = "spin_to_symplectic";
  rep.state_id = st.id;
  rep.tolerance = tol;
  HalfInt j = st.state.j;
  DensityMatrix rho = st.state.density();
  auto grid = transforms::make_euler_quadrature(j);
  SpinTomogram om = tomo::spin_tomogram(rho, grid);
  transforms::LineGrid xg(opt.fig_x_min, opt.fig_x_max, opt.fig_x_step);
  std::array<double, 2> mu{1.0, 1.0}, nu{1.0, 1.0};
  SymplecticTomogram got = transforms::spin_to_symplectic(om, mu, nu, {xg, xg});
  DensityMatrix rho2 = hilbert::js_inverse(rho, j.twice());
  SymplecticTomogram want = tomo::symplectic_tomogram(rho2, mu, nu, {xg, xg});
  std::ostringstream gs;
  gs << "x in [" << xg.lo << "," << xg.hi << "] step " << xg.step << ", mu=nu=1";
  rep.grid_summary = gs.str();
  for (int i1 = 0; i1 < xg.n; ++i1)
    for (int i2 = 0; i2 < xg.n; ++i2) {
      std::ostringstream lbl;
      lbl << "x=(" << xg.point(i1) << "," << xg.point(i2) << ")";
      detail::compare_point(rep, lbl.str(), got.values[got.index(i1, i2)],
                            want.values[want.index(i1, i2)]);
    }
  rep.finish();
  return rep;
}

inline VerificationReport verify_spin_to_photon(const StateSpec& st,
                                                const OracleOptions& opt,
                                                double tol,
                                                std::vector<double> alphas = {0.0, 0.5, 1.0, 1.5}) {
  VerificationReport rep;
  rep.transform = "spin_to_photon";
  rep.state_id = st.id;
  rep.tolerance = tol;
  (void)opt;
  HalfInt j = st.state.j;
  DensityMatrix rho = st.state.density();
  auto grid = transforms::make_euler_quadrature(j);
  SpinTomogram om = tomo::spin_tomogram(rho, grid);
  std::vector<std::complex<double>> als(alphas.begin(), alphas.end());
  PhotonTomogram got = transforms::spin_to_photon(om, als, als);
  // oracle: embed and take the genuine two-mode photon tomogram on the
  // sector pairs; a sector state displaced by alpha needs headroom, but the
  // restricted tomogram only reads n1+n2 = 2j columns.
  int cutoff = j.twice();
  DensityMatrix rho2 = hilbert::js_inverse(rho, cutoff);
  std::vector<std::pair<int, int>> pairs;
  for (int n1 = 0; n1 <= j.twice(); ++n1) pairs.push_back({n1, j.twice() - n1});
  PhotonTomogram want = tomo::photon_tomogram2(rho2, als, als, pairs);
  rep.grid_summary = "alpha1=alpha2 in {0,0.5,1.0,1.5}, n1+n2=2j";
  for (size_t ia = 0; ia < als.size(); ++ia)
    for (size_t ib = 0; ib < als.size(); ++ib)
      for (size_t k = 0; k < pairs.size(); ++k) {
        std::ostringstream lbl;
        lbl << "alpha=(" << als[ia].real() << "," << als[ib].real() << ") n=("
            << pairs[k].first << "," << pairs[k].second << ")";
        size_t flat = ia * als.size() + ib;
        detail::compare_point(rep, lbl.str(),
                              got.values(static_cast<int>(flat), static_cast<int>(k)),
                              want.values(static_cast<int>(flat), static_cast<int>(k)));
      }
  rep.finish();
  return rep;
}

inline VerificationReport verify_spin_to_wigner(const StateSpec& st,
                                                const OracleOptions& opt, double tol) {
  VerificationReport rep;
  rep.transform = "spin_to_wigner";
  rep.state_id = st.id;
  rep.tolerance = tol;
  HalfInt j = st.state.j;
  DensityMatrix rho = st.state.density();
  auto grid = transforms::make_euler_quadrature(j);
  SpinTomogram om = tomo::spin_tomogram(rho, grid);
  transforms::PlaneQuadrature pg(1.5, 0.25);
  WignerGrid got = transforms::spin_to_wigner(om, pg);
  DensityMatrix rho2 = hilbert::js_inverse(rho, j.twice());
  WignerGrid want = tomo::wigner_function(rho2, pg);
  rep.grid_summary = "alpha per mode on [-1.5,1.5]^2 step 0.25";
  for (size_t p = 0; p < got.values.size(); ++p)
    detail::compare_point(rep, "point " + std::to_string(p), got.values[p],
                          want.values[p]);
  rep.finish();
  return rep;
}

inline VerificationReport verify_symplectic_to_spin(const StateSpec& st,
                                                    const OracleOptions& opt,
                                                    double tol) {
  VerificationReport rep;
  rep.transform = "symplectic_to_spin";
  rep.state_id = st.id;
  rep.tolerance = tol;
  HalfInt j = st.state.j;
  DensityMatrix rho = st.state.density();
  DensityMatrix rho2 = hilbert::js_inverse(rho, j.twice());
  transforms::LineGrid xg(-opt.x_range, opt.x_range, opt.x_step);
  OpticalTomogram w = tomo::optical_tomogram(rho2, xg, opt.n_theta);
  auto grid = transforms::make_euler_quadrature(j);
  SpinTomogram got = transforms::symplectic_to_spin(w, j, grid);
  // stepwise composition: inverse Radon -> JS projection -> spin tomogram
  DensityMatrix rec = tomo::reconstruct_from_symplectic2(w, j.twice());
  SpinTomogram want = tomo::spin_tomogram(hilbert::js_forward(rec, j), grid);
  std::ostringstream gs;
  gs << "optical table x [" << -opt.x_range << "," << opt.x_range << "] step "
     << opt.x_step << ", " << opt.n_theta << " angles/mode";
  rep.grid_summary = gs.str();
  for (size_t g = 0; g < grid.size(); ++g)
    for (int mi = 0; mi < got.values.cols(); ++mi)
      detail::compare_point(rep, "node " + std::to_string(g) + " m-idx " + std::to_string(mi),
                            got.values(static_cast<int>(g), mi),
                            want.values(static_cast<int>(g), mi));
  rep.finish();
  return rep;
}

/// Two-mode photon table deep enough for the alternating quantizer sums:
/// per-mode depth photon_nmax with the joint cut n1+n2 <= photon_nsum.
inline PhotonTomogram full_photon_table(const DensityMatrix& rho2, HalfInt j,
                                        const OracleOptions& opt) {
  (void)j;
  transforms::PlaneQuadrature pg(opt.plane_radius, opt.plane_step);
  std::vector<std::pair<int, int>> pairs;
  for (int n1 = 0; n1 <= opt.photon_nmax; ++n1)
    for (int n2 = 0; n2 <= opt.photon_nmax && n1 + n2 <= opt.photon_nsum; ++n2)
      pairs.push_back({n1, n2});
  PhotonTomogram w = tomo::photon_tomogram2(rho2, pg.nodes, pg.nodes, pairs);
  w.cell_weight = pg.cell_weight;
  return w;
}

inline VerificationReport verify_photon_to_spin(const StateSpec& st,
                                                const OracleOptions& opt, double tol) {
  VerificationReport rep;
  rep.transform = "photon_to_spin";
  rep.state_id = st.id;
  rep.tolerance = tol;
  HalfInt j = st.state.j;
  DensityMatrix rho = st.state.density();
  DensityMatrix rho2 = hilbert::js_inverse(rho, j.twice());
  PhotonTomogram w = full_photon_table(rho2, j, opt);
  auto grid = transforms::make_euler_quadrature(j);
  SpinTomogram got = transforms::photon_to_spin(w, j, opt.s_param, grid);
  DensityMatrix rec = tomo::reconstruct_from_photon(w, opt.s_param, j.twice());
  SpinTomogram want = tomo::spin_tomogram(hilbert::js_forward(rec, j), grid);
  std::ostringstream gs;
  gs << "alpha grid R=" << opt.plane_radius << " h=" << opt.plane_step
     << " per mode, s=" << opt.s_param;
  rep.grid_summary = gs.str();
  for (size_t g = 0; g < grid.size(); ++g)
    for (int mi = 0; mi < got.values.cols(); ++mi)
      detail::compare_point(rep, "node " + std::to_string(g) + " m-idx " + std::to_string(mi),
                            got.values(static_cast<int>(g), mi),
                            want.values(static_cast<int>(g), mi));
  rep.finish();
  return rep;
}

inline VerificationReport verify_wigner_to_spin(const StateSpec& st,
                                                const OracleOptions& opt, double tol) {
  VerificationReport rep;
  rep.transform = "wigner_to_spin";
  rep.state_id = st.id;
  rep.tolerance = tol;
  HalfInt j = st.state.j;
  DensityMatrix rho = st.state.density();
  DensityMatrix rho2 = hilbert::js_inverse(rho, j.twice());
  transforms::PlaneQuadrature pg(opt.plane_radius, opt.plane_step);
  WignerGrid wg = tomo::wigner_function(rho2, pg);
  auto grid = transforms::make_euler_quadrature(j);
  SpinTomogram got = transforms::wigner_to_spin(wg, j, grid);
  DensityMatrix rec = tomo::reconstruct_from_wigner(wg, j.twice());
  SpinTomogram want = tomo::spin_tomogram(hilbert::js_forward(rec, j), grid);
  std::ostringstream gs;
  gs << "Wigner grid R=" << opt.plane_radius << " h=" << opt.plane_step << " per mode";
  rep.grid_summary = gs.str();
  for (size_t g = 0; g < grid.size(); ++g)
    for (int mi = 0; mi < got.values.cols(); ++mi)
      detail::compare_point(rep, "node " + std::to_string(g) + " m-idx " + std::to_string(mi),
                            got.values(static_cast<int>(g), mi),
                            want.values(static_cast<int>(g), mi));
  rep.finish();
  return rep;
}

inline VerificationReport verify_photon_to_symplectic(const DensityMatrix& rho,
                                                      const std::string& id,
                                                      const OracleOptions& opt,
                                                      double tol) {
  VerificationReport rep;
  rep.transform = "photon_to_symplectic";
  rep.state_id = id;
  rep.tolerance = tol;
  transforms::PlaneQuadrature pg(4.0, 0.1);
  int nmax = 38;
  PhotonTomogram w = tomo::photon_tomogram(rho, pg.nodes, nmax);
  w.cell_weight = pg.cell_weight;
  transforms::LineGrid xg(-6.0, 6.0, 0.05);
  double mu = 1.0, nu = 0.0;
  SymplecticTomogram got = transforms::photon_to_symplectic(w, mu, nu, xg, opt.s_param);
  SymplecticTomogram want = tomo::symplectic_tomogram(rho, {mu, 0.0}, {nu, 0.0}, {xg, xg});
  rep.grid_summary = "alpha R=4 h=0.1, x [-6,6] step 0.05, (mu,nu)=(1,0)";
  for (int i = 0; i < xg.n; ++i)
    detail::compare_point(rep, "x=" + std::to_string(xg.point(i)), got.values[i],
                          want.values[i]);
  rep.finish();
  return rep;
}

inline VerificationReport verify_symplectic_to_photon(const DensityMatrix& rho,
                                                      const std::string& id,
                                                      const OracleOptions& opt,
                                                      double tol) {
  VerificationReport rep;
  rep.transform = "symplectic_to_photon";
  rep.state_id = id;
  rep.tolerance = tol;
  (void)opt;
  transforms::LineGrid xg(-8.0, 8.0, 0.02);
  OpticalTomogram w = tomo::optical_tomogram(rho, xg, 24);
  std::vector<std::complex<double>> als{{0.0, 0.0}, {0.5, 0.0}, {0.3, -0.4}, {1.0, 0.5}};
  int nmax = 8;
  PhotonTomogram got = transforms::symplectic_to_photon(w, als, nmax);
  PhotonTomogram want = tomo::photon_tomogram(rho, als, nmax);
  rep.grid_summary = "optical x [-8,8] step 0.02, 24 angles";
  for (size_t ia = 0; ia < als.size(); ++ia)
    for (int n = 0; n <= nmax; ++n) {
      std::ostringstream lbl;
      lbl << "alpha=(" << als[ia].real() << "," << als[ia].imag() << ") n=" << n;
      detail::compare_point(rep, lbl.str(), got.values(static_cast<int>(ia), n),
                            want.values(static_cast<int>(ia), n));
    }
  rep.finish();
  return rep;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

struct ToleranceProfile {
  double spin_to_cv = 1e-6;     // exact Euler quadrature directions
  double cv_to_spin = 1e-4;     // quadrature-limited directions
  double photon_sympl = 1e-4;   // one-to-one CV pair
  double scale = 1.0;           // global multiplier (0 forces all to fail)

  double get(const std::string& transform) const {
    double base = transform.rfind("spin_to_", 0) == 0 ? spin_to_cv
                  : (transform == "photon_to_symplectic" ||
                     transform == "symplectic_to_photon")
                      ? photon_sympl
                      : cv_to_spin;
    return base * scale;
  }
};

inline std::vector<VerificationReport> verify_all(std::uint64_t seed,
                                                  const ToleranceProfile& prof,
                                                  const OracleOptions& opt = {},
                                                  int random_per_j = 5) {
  std::vector<VerificationReport> out;
  auto states = standard_states(seed, random_per_j);
  for (const auto& st : states) {
    out.push_back(verify_spin_to_symplectic(st, opt, prof.get("spin_to_symplectic")));
    out.push_back(verify_spin_to_photon(st, opt, prof.get("spin_to_photon")));
    out.push_back(verify_spin_to_wigner(st, opt, prof.get("spin_to_wigner")));
    out.push_back(verify_symplectic_to_spin(st, opt, prof.get("symplectic_to_spin")));
    out.push_back(verify_photon_to_spin(st, opt, prof.get("photon_to_spin")));
    out.push_back(verify_wigner_to_spin(st, opt, prof.get("wigner_to_spin")));
  }
  for (int n = 0; n <= 1; ++n) {
    DensityMatrix rho = hilbert::fock_state(n, 24);
    std::string id = n == 0 ? "vacuum" : "fock-1";
    out.push_back(verify_photon_to_symplectic(rho, id, opt, prof.get("photon_to_symplectic")));
    out.push_back(verify_symplectic_to_photon(rho, id, opt, prof.get("symplectic_to_photon")));
  }
  return out;
}

}  // namespace jstomo::oracle
