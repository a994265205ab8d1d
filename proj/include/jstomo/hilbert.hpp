#pragma once

// Finite and truncated-Fock state spaces, density matrices, and the
// Jordan-Schwinger sector projection / relabeling map.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "jstomo/half_int.hpp"

namespace jstomo::hilbert {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct empty_sector_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class BasisKind { SpinJ, Fock1, Fock2 };

/// Basis descriptor. SpinJ orders projections descending (m = +j first);
/// Fock2 orders pairs (n1, n2) lexicographically, index = n1*(N+1)+n2.
struct Basis {
  BasisKind kind = BasisKind::Fock1;
  HalfInt j;        // SpinJ only
  int cutoff = 0;   // Fock1/Fock2: max occupation per mode

  static Basis spin(HalfInt j) { return Basis{BasisKind::SpinJ, j, 0}; }
  static Basis fock1(int cutoff) { return Basis{BasisKind::Fock1, HalfInt(0), cutoff}; }
  static Basis fock2(int cutoff) { return Basis{BasisKind::Fock2, HalfInt(0), cutoff}; }

  int dim() const {
    switch (kind) {
      case BasisKind::SpinJ: return j.twice() + 1;
      case BasisKind::Fock1: return cutoff + 1;
      case BasisKind::Fock2: return (cutoff + 1) * (cutoff + 1);
    }
    return 0;
  }

  int fock2_index(int n1, int n2) const {
    if (n1 < 0 || n2 < 0 || n1 > cutoff || n2 > cutoff)
      throw std::out_of_range("fock2_index: occupation beyond cutoff");
    return n1 * (cutoff + 1) + n2;
  }

  bool operator==(const Basis& o) const {
    return kind == o.kind && j == o.j && cutoff == o.cutoff;
  }
};

struct RepairReport {
  double hermiticity_defect = 0.0;
  double trace_defect = 0.0;
  double min_eigenvalue = 0.0;
  int clipped = 0;
};

/// Density matrix over an indexed basis. Immutable after construction;
/// the constructor validates Hermiticity, unit trace and approximate
/// positivity unless `validate` is off (reconstruction routines repair
/// and report instead of hiding their quadrature noise).
class DensityMatrix {
 public:
  static constexpr double kHermTol = 1e-12;
  static constexpr double kTraceTol = 1e-12;
  static constexpr double kPsdTol = -1e-10;

  DensityMatrix(Basis basis, Matrix data, bool validate = true)
      : basis_(basis), data_(std::move(data)) {
    if (data_.rows() != basis_.dim() || data_.cols() != basis_.dim())
      throw std::invalid_argument("DensityMatrix: dimension mismatch");
    if (validate) check();
  }

  const Basis& basis() const { return basis_; }
  const Matrix& data() const { return data_; }
  int dim() const { return basis_.dim(); }

  cplx operator()(int a, int b) const { return data_(a, b); }

  static DensityMatrix pure(Basis basis, const Vector& psi) {
    Vector v = psi / psi.norm();
    return DensityMatrix(basis, v * v.adjoint());
  }

  void check() const {
    double h = (data_ - data_.adjoint()).cwiseAbs().maxCoeff();
    if (h > kHermTol)
      throw std::invalid_argument("DensityMatrix: Hermiticity defect " + std::to_string(h));
    double t = std::abs(data_.trace() - 1.0);
    if (t > kTraceTol)
      throw std::invalid_argument("DensityMatrix: trace defect " + std::to_string(t));
    Eigen::SelfAdjointEigenSolver<Matrix> es(data_, Eigen::EigenvaluesOnly);
    double mn = es.eigenvalues().minCoeff();
    if (mn < kPsdTol)
      throw std::invalid_argument("DensityMatrix: negative eigenvalue " + std::to_string(mn));
  }

  /// Hermitize, renormalize the trace and (optionally) clip negative
  /// eigenvalues; the defects are reported, not silently absorbed.
  static DensityMatrix repair(Basis basis, const Matrix& raw, RepairReport& rep,
                              bool clip_negative = false) {
    Matrix h = 0.5 * (raw + raw.adjoint());
    rep.hermiticity_defect = (raw - raw.adjoint()).cwiseAbs().maxCoeff();
    double tr = h.trace().real();
    rep.trace_defect = std::abs(tr - 1.0);
    h /= tr;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    rep.min_eigenvalue = es.eigenvalues().minCoeff();
    rep.clipped = 0;
    if (clip_negative && rep.min_eigenvalue < 0.0) {
      Eigen::VectorXd ev = es.eigenvalues();
      for (int i = 0; i < ev.size(); ++i)
        if (ev(i) < 0.0) { ev(i) = 0.0; ++rep.clipped; }
      ev /= ev.sum();
      h = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    }
    return DensityMatrix(basis, std::move(h), false);
  }

 private:
  Basis basis_;
  Matrix data_;
};

inline double fidelity_pure(const Vector& psi, const DensityMatrix& rho) {
  return std::real((psi.adjoint() * rho.data() * psi)(0, 0)) / psi.squaredNorm();
}

/// Uhlmann fidelity F(rho, sigma) = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
inline double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.data());
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  Matrix sq = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
  Matrix inner = sq * sigma.data() * sq;
  Eigen::SelfAdjointEigenSolver<Matrix> es2(inner);
  double s = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return s * s;
}

// ---------------------------------------------------------------------------
// Jordan-Schwinger relabeling
// ---------------------------------------------------------------------------

struct TwoModeIndex {
  int n1 = 0, n2 = 0;
};

/// (n1, n2) -> (j, m) = ((n1+n2)/2, (n1-n2)/2).
inline std::pair<HalfInt, HalfInt> js_relabel(TwoModeIndex idx) {
  return {HalfInt(idx.n1 + idx.n2), HalfInt(idx.n1 - idx.n2)};
}

struct SectorBlock {
  Matrix block;   // (2j+1)^2, m-descending ordering
  double weight;  // Tr[Pi_{2j} rho]
};

/// Projects a two-mode state onto the total-excitation sector n1+n2 = 2j and
/// returns the unnormalized block together with its weight.
inline SectorBlock project_sector(const DensityMatrix& rho2, HalfInt j) {
  if (rho2.basis().kind != BasisKind::Fock2)
    throw std::invalid_argument("project_sector: expected a two-mode state");
  if (rho2.basis().cutoff < j.twice())
    throw std::invalid_argument("project_sector: cutoff smaller than 2j");
  int dim = j.twice() + 1;
  std::vector<int> idx(dim);
  for_each_m(j, [&](HalfInt m) {
    int n1 = (j.twice() + m.twice()) / 2;
    int n2 = (j.twice() - m.twice()) / 2;
    idx[m_index(j, m)] = rho2.basis().fock2_index(n1, n2);
  });
  Matrix block(dim, dim);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) block(a, b) = rho2(idx[a], idx[b]);
  double weight = block.trace().real();
  return {std::move(block), weight};
}

/// JS forward map: project, renormalize, relabel to a spin-j density matrix.
/// `validate` is off when the input carries reconstruction noise that must
/// stay visible instead of failing the PSD check.
inline DensityMatrix js_forward(const DensityMatrix& rho2, HalfInt j,
                                bool validate = true) {
  SectorBlock sec = project_sector(rho2, j);
  if (sec.weight < 1e-14)
    throw empty_sector_error("js_forward: empty sector 2j=" + std::to_string(j.twice()));
  return DensityMatrix(Basis::spin(j), sec.block / sec.weight, validate);
}

/// JS inverse: embed a spin-j density matrix as a two-mode state supported
/// exactly on the sector n1+n2 = 2j.
inline DensityMatrix js_inverse(const DensityMatrix& rho_j, int cutoff) {
  if (rho_j.basis().kind != BasisKind::SpinJ)
    throw std::invalid_argument("js_inverse: expected a spin state");
  HalfInt j = rho_j.basis().j;
  if (cutoff < j.twice())
    throw std::invalid_argument("js_inverse: cutoff smaller than 2j");
  Basis b2 = Basis::fock2(cutoff);
  int dim = j.twice() + 1;
  std::vector<int> idx(dim);
  for_each_m(j, [&](HalfInt m) {
    idx[m_index(j, m)] = b2.fock2_index((j.twice() + m.twice()) / 2,
                                        (j.twice() - m.twice()) / 2);
  });
  Matrix out = Matrix::Zero(b2.dim(), b2.dim());
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) out(idx[a], idx[b]) = rho_j(a, b);
  return DensityMatrix(b2, std::move(out));
}

// ---------------------------------------------------------------------------
// Test states
// ---------------------------------------------------------------------------

/// Spin superposition |psi> = sum_m a_m |j,m>; amplitudes stored m-descending.
struct SpinSuperposition {
  HalfInt j;
  Vector amplitudes;      // index 0 is m = +j
  double renorm = 1.0;    // factor applied to reach unit norm

  cplx amplitude(HalfInt m) const { return amplitudes(m_index(j, m)); }
  DensityMatrix density() const {
    return DensityMatrix::pure(Basis::spin(j), amplitudes);
  }
};

enum class PaperState { j_half, j_one, j_three_half };

/// The three fixed superposition states used for the reference pipelines,
/// printed to three decimals and renormalized to unit norm.
inline SpinSuperposition make_paper_state(PaperState which) {
  SpinSuperposition st;
  auto set = [&](HalfInt j, std::vector<cplx> asc) {
    // `asc` lists a_m for m = -j..+j; storage is descending.
    st.j = j;
    st.amplitudes = Vector(asc.size());
    for (size_t i = 0; i < asc.size(); ++i)
      st.amplitudes(static_cast<int>(asc.size() - 1 - i)) = asc[i];
  };
  switch (which) {
    case PaperState::j_half:
      set(HalfInt(1), {{0.011, -0.443}, {-0.871, -0.211}});
      break;
    case PaperState::j_one:
      set(HalfInt(2), {{-0.272, 0.105}, {0.274, 0.252}, {-0.876, 0.096}});
      break;
    case PaperState::j_three_half:
      set(HalfInt(3), {{0.166, 0.812}, {0.144, -0.187}, {0.182, -0.109}, {-0.055, -0.457}});
      break;
  }
  double nrm = st.amplitudes.norm();
  st.renorm = 1.0 / nrm;
  st.amplitudes /= nrm;
  return st;
}

/// Deterministic pseudo-random spin superposition: complex standard-normal
/// amplitudes from a seeded splitmix/Box-Muller stream, normalized.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : state_(seed) {}

  double uniform() {  // in (0,1)
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z = z ^ (z >> 31);
    return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    if (have_) { have_ = false; return spare_; }
    double u1 = uniform(), u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    have_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

  cplx cnormal() { double re = normal(); double im = normal(); return {re, im}; }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_ = false;
};

inline SpinSuperposition random_spin_state(HalfInt j, std::uint64_t seed) {
  GaussianStream g(seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(j.twice()));
  SpinSuperposition st;
  st.j = j;
  st.amplitudes = Vector(j.twice() + 1);
  for (int i = 0; i <= j.twice(); ++i) st.amplitudes(i) = g.cnormal();
  double nrm = st.amplitudes.norm();
  st.renorm = 1.0 / nrm;
  st.amplitudes /= nrm;
  return st;
}

/// Fock states and coherent states on a truncated single-mode space.
inline DensityMatrix fock_state(int n, int cutoff) {
  Basis b = Basis::fock1(cutoff);
  if (n > cutoff) throw std::invalid_argument("fock_state: n beyond cutoff");
  Vector v = Vector::Zero(b.dim());
  v(n) = 1.0;
  return DensityMatrix::pure(b, v);
}

inline Vector coherent_amplitudes(cplx gamma, int cutoff) {
  Vector v(cutoff + 1);
  double lg = -0.5 * std::norm(gamma);
  for (int n = 0; n <= cutoff; ++n) {
    v(n) = std::exp(cplx(lg, 0.0)) * std::pow(gamma, n) /
           std::sqrt(std::exp(std::lgamma(n + 1.0)));
  }
  return v;
}

inline DensityMatrix coherent_state(cplx gamma, int cutoff) {
  Vector v = coherent_amplitudes(gamma, cutoff);
  double tail = 1.0 - v.squaredNorm();
  if (tail > 1e-10)
    throw std::invalid_argument("coherent_state: cutoff too small, tail " + std::to_string(tail));
  return DensityMatrix::pure(Basis::fock1(cutoff), v);
}

}  // namespace jstomo::hilbert
