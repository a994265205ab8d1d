#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "jstomo/hilbert.hpp"

using namespace jstomo;
using namespace jstomo::hilbert;
using cplx = std::complex<double>;
using Catch::Approx;

TEST_CASE("js_relabel arithmetic") {
  auto [j, m] = js_relabel({1, 0});
  CHECK(j == HalfInt(1));
  CHECK(m == HalfInt(1));
  auto [j0, m0] = js_relabel({0, 0});
  CHECK(j0 == HalfInt(0));
  CHECK(m0 == HalfInt(0));
  auto [j2, m2] = js_relabel({2, 1});
  CHECK(j2 == HalfInt(3));
  CHECK(m2 == HalfInt(1));
}

TEST_CASE("project_sector: pure |1,1>, cross-sector superposition, empty sector") {
  Basis b2 = Basis::fock2(3);
  // |1,1><1,1| lives in the j=1 sector at m=0
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(b2.dim());
  v(b2.fock2_index(1, 1)) = 1.0;
  DensityMatrix rho = DensityMatrix::pure(b2, v);
  auto sec = project_sector(rho, HalfInt(2));
  CHECK(sec.weight == Approx(1.0));
  CHECK(std::abs(sec.block(1, 1) - 1.0) < 1e-14);  // m = 0 is index 1 of (+1, 0, -1)
  CHECK(std::abs(sec.block(0, 0)) < 1e-14);

  // (|0,0> + |1,1|)/sqrt(2): weight 1/2 in the n=2 sector, block at m=0
  Eigen::VectorXcd u = Eigen::VectorXcd::Zero(b2.dim());
  u(b2.fock2_index(0, 0)) = 1.0 / std::sqrt(2.0);
  u(b2.fock2_index(1, 1)) = 1.0 / std::sqrt(2.0);
  DensityMatrix mix = DensityMatrix::pure(b2, u);
  auto sec2 = project_sector(mix, HalfInt(2));
  CHECK(sec2.weight == Approx(0.5));
  CHECK(std::abs(sec2.block(1, 1) - 0.5) < 1e-14);

  // vacuum has no weight in the j=1/2 sector
  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(b2.dim());
  w(b2.fock2_index(0, 0)) = 1.0;
  DensityMatrix vac = DensityMatrix::pure(b2, w);
  CHECK_THROWS_AS(js_forward(vac, HalfInt(1)), empty_sector_error);
}

TEST_CASE("js_forward / js_inverse round trips") {
  // |1/2, 1/2> embeds to |1,0>
  Eigen::VectorXcd psi(2);
  psi << 1.0, 0.0;
  DensityMatrix rsp = DensityMatrix::pure(Basis::spin(HalfInt(1)), psi);
  DensityMatrix emb = js_inverse(rsp, 2);
  Basis b2 = Basis::fock2(2);
  CHECK(std::abs(emb(b2.fock2_index(1, 0), b2.fock2_index(1, 0)) - 1.0) < 1e-14);
  DensityMatrix back = js_forward(emb, HalfInt(1));
  CHECK((back.data() - rsp.data()).cwiseAbs().maxCoeff() < 1e-14);

  // maximally mixed spin-1/2 -> (|1,0><1,0| + |0,1><0,1|)/2
  DensityMatrix mm(Basis::spin(HalfInt(1)), Eigen::MatrixXcd::Identity(2, 2) * 0.5);
  DensityMatrix emb2 = js_inverse(mm, 3);
  Basis b3 = Basis::fock2(3);
  CHECK(std::abs(emb2(b3.fock2_index(1, 0), b3.fock2_index(1, 0)) - 0.5) < 1e-14);
  CHECK(std::abs(emb2(b3.fock2_index(0, 1), b3.fock2_index(0, 1)) - 0.5) < 1e-14);

  // paper state j=1/2 is rank-1 on span{|0,1>, |1,0>}
  auto st = make_paper_state(PaperState::j_half);
  DensityMatrix emb3 = js_inverse(st.density(), 4);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(emb3.data());
  int rank = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > 1e-12) ++rank;
  CHECK(rank == 1);
}

TEST_CASE("js round trip identity on random states, all j <= 3/2") {
  for (int tw = 1; tw <= 3; ++tw) {
    for (int k = 0; k < 5; ++k) {
      auto st = random_spin_state(HalfInt(tw), 50 + k);
      DensityMatrix rho = st.density();
      DensityMatrix back = js_forward(js_inverse(rho, tw + 2), HalfInt(tw));
      CHECK((back.data() - rho.data()).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("js_inverse output vanishes between different sectors") {
  auto st = random_spin_state(HalfInt(2), 99);
  DensityMatrix emb = js_inverse(st.density(), 4);
  Basis b = Basis::fock2(4);
  for (int n1 = 0; n1 <= 4; ++n1)
    for (int n2 = 0; n2 <= 4; ++n2)
      for (int n1p = 0; n1p <= 4; ++n1p)
        for (int n2p = 0; n2p <= 4; ++n2p)
          if (n1 + n2 != 2 || n1p + n2p != 2)
            CHECK(std::abs(emb(b.fock2_index(n1, n2), b.fock2_index(n1p, n2p))) == 0.0);
}

TEST_CASE("sector weights sum to one for sector-supported states") {
  auto st = make_paper_state(PaperState::j_one);
  DensityMatrix emb = js_inverse(st.density(), 4);
  double total = 0.0;
  for (int tw = 0; tw <= 4; ++tw) {  // sectors addressable at this cutoff
    auto sec = project_sector(emb, HalfInt(tw));
    total += sec.weight;
  }
  CHECK(total == Approx(1.0).epsilon(1e-13));
}

TEST_CASE("paper states: printed amplitudes, unit norm after renormalization") {
  auto h = make_paper_state(PaperState::j_half);
  CHECK(h.j == HalfInt(1));
  CHECK(h.amplitudes.norm() == Approx(1.0).epsilon(1e-14));
  // amplitudes proportional to the printed values
  cplx am = h.amplitude(HalfInt(-1)), ap = h.amplitude(HalfInt(1));
  cplx ratio = am / ap;
  cplx want = cplx(0.011, -0.443) / cplx(-0.871, -0.211);
  CHECK(std::abs(ratio - want) < 1e-12);
  CHECK(std::abs(am * h.amplitudes.norm() / h.renorm * h.renorm -
                 am) < 1e-15);  // renorm bookkeeping is consistent

  auto o = make_paper_state(PaperState::j_one);
  CHECK(o.j == HalfInt(2));
  CHECK(std::abs(o.amplitude(HalfInt(-2)) / o.renorm - cplx(-0.272, 0.105)) < 1e-12);
  CHECK(std::abs(o.amplitude(HalfInt(0)) / o.renorm - cplx(0.274, 0.252)) < 1e-12);
  CHECK(std::abs(o.amplitude(HalfInt(2)) / o.renorm - cplx(-0.876, 0.096)) < 1e-12);

  auto t = make_paper_state(PaperState::j_three_half);
  CHECK(t.j == HalfInt(3));
  CHECK(t.amplitudes.size() == 4);
  CHECK(std::abs(t.amplitude(HalfInt(-3)) / t.renorm - cplx(0.166, 0.812)) < 1e-12);
  CHECK(std::abs(t.amplitude(HalfInt(3)) / t.renorm - cplx(-0.055, -0.457)) < 1e-12);
}

TEST_CASE("random states: determinism and unit norm") {
  for (int seed = 0; seed < 1000; seed += 13) {
    auto a = random_spin_state(HalfInt(3), seed);
    auto b = random_spin_state(HalfInt(3), seed);
    CHECK((a.amplitudes - b.amplitudes).norm() == 0.0);
    CHECK(std::abs(a.amplitudes.norm() - 1.0) < 1e-14);
  }
  auto a = random_spin_state(HalfInt(3), 1);
  auto b = random_spin_state(HalfInt(3), 2);
  CHECK((a.amplitudes - b.amplitudes).norm() > 1e-3);
}

TEST_CASE("random states: isotropy sanity via moment statistics") {
  // mean of |a_m|^2 should be 1/(2j+1) for every m, and the empirical
  // distribution should not prefer any component under a basis rotation.
  HalfInt j(2);
  int dim = 3, nsamp = 4000;
  Eigen::VectorXd mom = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd momrot = Eigen::VectorXd::Zero(dim);
  // fixed unitary rotation (Fourier matrix)
  Eigen::MatrixXcd F(dim, dim);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      F(a, b) = std::polar(1.0 / std::sqrt(3.0), 2.0 * M_PI * a * b / 3.0);
  for (int s = 0; s < nsamp; ++s) {
    auto st = random_spin_state(j, 10000 + s);
    Eigen::VectorXcd rot = F * st.amplitudes;
    for (int i = 0; i < dim; ++i) {
      mom(i) += std::norm(st.amplitudes(i)) / nsamp;
      momrot(i) += std::norm(rot(i)) / nsamp;
    }
  }
  for (int i = 0; i < dim; ++i) {
    CHECK(mom(i) == Approx(1.0 / 3.0).margin(0.02));
    CHECK(momrot(i) == Approx(1.0 / 3.0).margin(0.02));
  }
}

TEST_CASE("DensityMatrix invariants enforced") {
  Eigen::MatrixXcd bad(2, 2);
  bad << 1.0, 0.5, 0.2, 0.0;  // not Hermitian
  CHECK_THROWS(DensityMatrix(Basis::spin(HalfInt(1)), bad));
  Eigen::MatrixXcd bad2(2, 2);
  bad2 << 0.9, 0.0, 0.0, 0.0;  // trace != 1
  CHECK_THROWS(DensityMatrix(Basis::spin(HalfInt(1)), bad2));
  Eigen::MatrixXcd bad3(2, 2);
  bad3 << 1.5, 0.0, 0.0, -0.5;  // negative eigenvalue
  CHECK_THROWS(DensityMatrix(Basis::spin(HalfInt(1)), bad3));

  hilbert::RepairReport rep;
  DensityMatrix fixed = DensityMatrix::repair(Basis::spin(HalfInt(1)), bad3, rep, true);
  CHECK(rep.clipped == 1);
  CHECK(fixed.data()(0, 0).real() == Approx(1.0));
}

TEST_CASE("coherent state amplitudes and tail") {
  cplx gamma(0.8, -0.3);
  DensityMatrix rho = coherent_state(gamma, 24);
  // <n|gamma> amplitudes Poissonian
  CHECK(std::abs(rho(0, 0).real() - std::exp(-std::norm(gamma))) < 1e-12);
  CHECK_THROWS(coherent_state(cplx(4.0, 0.0), 6));
}
