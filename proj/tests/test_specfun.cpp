#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "jstomo/quadrature.hpp"
#include "jstomo/specfun.hpp"
#include "oracle_ops.hpp"

using namespace jstomo;
using specfun::cplx;
using Catch::Approx;

namespace {

// alternating-series Laguerre in quad precision; successive terms generated
// by the exact ratio t_{l+1}/t_l = -x (n-l) / ((l+1)(k+l+1)) so the only
// rounding is in the final cancellation, well inside float128 headroom.
double laguerre_series(int n, int k, double x) {
  __float128 term = 1.0Q;
  for (int i = 1; i <= k; ++i) term *= static_cast<__float128>(n + i) / i;  // binom(n+k, n)
  __float128 acc = term;
  for (int l = 0; l < n; ++l) {
    term *= -static_cast<__float128>(x) * (n - l) /
            (static_cast<__float128>(l + 1) * (k + l + 1));
    acc += term;
  }
  return static_cast<double>(acc);
}

// Hermite from the explicit coefficient table H_n(x) = n! sum (-1)^m (2x)^{n-2m} / (m! (n-2m)!)
double hermite_table(int n, double x) {
  double acc = 0.0;
  for (int m = 0; 2 * m <= n; ++m) {
    double lb = specfun::log_factorial(n) - specfun::log_factorial(m) -
                specfun::log_factorial(n - 2 * m);
    acc += (m % 2 == 0 ? 1.0 : -1.0) * std::exp(lb) * std::pow(2.0 * x, n - 2 * m);
  }
  return acc;
}

// Jacobi via the hypergeometric finite sum, accumulated in quad precision
double jacobi_sum(int n, int a, int b, double x) {
  __float128 acc = 0.0Q;
  __float128 lo = 0.5Q * (static_cast<__float128>(x) - 1.0Q);
  __float128 hi = 0.5Q * (static_cast<__float128>(x) + 1.0Q);
  for (int s = 0; s <= n; ++s) {
    __float128 c = 1.0Q;
    for (int i = 0; i < n - s; ++i) c *= static_cast<__float128>(n + a - i) / (n - s - i);
    for (int i = 0; i < s; ++i) c *= static_cast<__float128>(n + b - i) / (s - i);
    __float128 t = c;
    for (int i = 0; i < s; ++i) t *= lo;
    for (int i = 0; i < n - s; ++i) t *= hi;
    acc += t;
  }
  return static_cast<double>(acc);
}

}  // namespace

TEST_CASE("associated Laguerre: base cases and series oracle") {
  CHECK(specfun::assoc_laguerre(5, 3, 0.0) == Approx(56.0));  // binom(8,5)
  CHECK(specfun::assoc_laguerre(0, 0, 7.3) == Approx(1.0));
  CHECK(specfun::assoc_laguerre(2, 1, 1.0) ==
        Approx(laguerre_series(2, 1, 1.0)).epsilon(1e-12));
  CHECK_THROWS(specfun::assoc_laguerre(-1, 0, 1.0));

  std::mt19937_64 rng(311);
  std::uniform_real_distribution<double> ux(-50.0, 50.0);
  for (int t = 0; t < 200; ++t) {
    int n = static_cast<int>(rng() % 31);
    int k = static_cast<int>(rng() % 5);
    double x = ux(rng);
    double got = specfun::assoc_laguerre(n, k, x);
    double want = laguerre_series(n, k, x);
    CHECK(got == Approx(want).epsilon(1e-10).margin(1e-14));
  }
}

TEST_CASE("associated Laguerre: negative superscript fold") {
  // L_n^{(-m)}(x) = (-x)^m (n-m)!/n! L_{n-m}^{(m)}(x)
  double got = specfun::assoc_laguerre(4, -2, 1.7);
  double want = std::pow(-1.7, 2) * (specfun::factorial(2) / specfun::factorial(4)) *
                specfun::assoc_laguerre(2, 2, 1.7);
  CHECK(got == Approx(want).epsilon(1e-12));
}

TEST_CASE("Hermite polynomials vs coefficient table") {
  CHECK(specfun::hermite(0, 3.1) == Approx(1.0));
  CHECK(specfun::hermite(1, 0.5) == Approx(1.0));
  CHECK(specfun::hermite(6, 1.3) == Approx(hermite_table(6, 1.3)).epsilon(1e-12));
  CHECK_THROWS(specfun::hermite(-2, 0.0));
  for (int r = 0; r <= 15; ++r)
    for (double x : {-2.4, -0.3, 0.9, 3.7})
      CHECK(specfun::hermite(r, x) == Approx(hermite_table(r, x)).epsilon(1e-11));
}

TEST_CASE("Jacobi polynomials vs hypergeometric sum") {
  CHECK(specfun::jacobi(0, 2, 5, 0.3) == Approx(1.0));
  CHECK(specfun::jacobi(1, 0, 0, 0.42) == Approx(0.42));  // Legendre P1
  CHECK(specfun::jacobi(3, 1, 2, 0.2) == Approx(jacobi_sum(3, 1, 2, 0.2)).epsilon(1e-12));
  CHECK_THROWS(specfun::jacobi(-1, 0, 0, 0.0));
  for (int n = 0; n <= 8; ++n)
    for (int a = 0; a <= 3; ++a)
      for (int b = 0; b <= 3; ++b)
        CHECK(specfun::jacobi(n, a, b, -0.37) ==
              Approx(jacobi_sum(n, a, b, -0.37)).epsilon(1e-11).margin(5e-13));
}

TEST_CASE("Wigner small-d: identity, half-spin, spin-1 forms") {
  CHECK(specfun::wigner_small_d(HalfInt(3), HalfInt(1), HalfInt(1), 0.0) == Approx(1.0));
  CHECK(specfun::wigner_small_d(HalfInt(3), HalfInt(3), HalfInt(1), 0.0) ==
        Approx(0.0).margin(1e-15));
  for (double beta : {0.17, 0.9, 2.3}) {
    CHECK(specfun::wigner_small_d(HalfInt(1), HalfInt(1), HalfInt(1), beta) ==
          Approx(std::cos(beta / 2)).epsilon(1e-13));
    CHECK(specfun::wigner_small_d(HalfInt(2), HalfInt(0), HalfInt(0), beta) ==
          Approx(std::cos(beta)).epsilon(1e-13));
  }
}

TEST_CASE("Wigner small-d matches exp(-i beta Sy) for j <= 5/2") {
  for (int tw = 1; tw <= 5; ++tw) {
    HalfInt j(tw);
    for (double beta : {0.23, 1.17, 2.94}) {
      Eigen::MatrixXcd R =
          oracle_ops::rotation(j, {0.0, beta, 0.0});
      for_each_m(j, [&](HalfInt m) {
        for_each_m(j, [&](HalfInt mp) {
          double want = R(m_index(j, m), m_index(j, mp)).real();
          CHECK(specfun::wigner_small_d(j, m, mp, beta) ==
                Approx(want).margin(1e-12));
        });
      });
    }
  }
}

TEST_CASE("Wigner small-d unitarity to 1e-12") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ub(0.0, M_PI);
  for (int tw = 1; tw <= 5; ++tw) {
    HalfInt j(tw);
    int dim = tw + 1;
    for (int t = 0; t < 20; ++t) {
      double beta = ub(rng);
      Eigen::MatrixXd d(dim, dim);
      for_each_m(j, [&](HalfInt m) {
        for_each_m(j, [&](HalfInt mp) {
          d(m_index(j, m), m_index(j, mp)) = specfun::wigner_small_d(j, m, mp, beta);
        });
      });
      Eigen::MatrixXd gram = d * d.transpose();
      CHECK((gram - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("Wigner D: identity, row unitarity, full rotation oracle") {
  HalfInt j(3);
  EulerAngles zero{};
  for_each_m(j, [&](HalfInt m) {
    for_each_m(j, [&](HalfInt mp) {
      cplx v = specfun::wigner_D(j, m, mp, zero);
      CHECK(std::abs(v - (m == mp ? 1.0 : 0.0)) < 1e-14);
    });
  });
  EulerAngles om{1.1, 0.7, 2.5};
  Eigen::MatrixXcd R = oracle_ops::rotation(j, om);
  for_each_m(j, [&](HalfInt m) {
    double rowsum = 0.0;
    for_each_m(j, [&](HalfInt mp) {
      cplx v = specfun::wigner_D(j, m, mp, om);
      CHECK(std::abs(v - R(m_index(j, m), m_index(j, mp))) < 1e-12);
      rowsum += std::norm(v);
    });
    CHECK(rowsum == Approx(1.0).epsilon(1e-12));
  });
}

TEST_CASE("Haar orthogonality of D-functions under the product rule") {
  // int dOmega D^{(L)*}_{m k'} D^{(L)}_{m k} = 8 pi^2/(2L+1) delta_{k k'}
  for (int tw : {1, 2, 3}) {
    HalfInt j(tw);
    auto quad = transforms::EulerQuadrature::for_spin(j);
    for_each_m(j, [&](HalfInt m) {
      for_each_m(j, [&](HalfInt k) {
        for_each_m(j, [&](HalfInt kp) {
          cplx acc = 0.0;
          for (size_t g = 0; g < quad.size(); ++g)
            acc += quad.weights[g] *
                   std::conj(specfun::wigner_D(j, m, kp, quad.nodes[g])) *
                   specfun::wigner_D(j, m, k, quad.nodes[g]);
          double want = k == kp ? 8.0 * M_PI * M_PI / (tw + 1.0) : 0.0;
          CHECK(std::abs(acc - want) < 1e-10);
        });
      });
    });
  }
}

TEST_CASE("Clebsch-Gordan: values, selection rule, orthonormality") {
  CHECK(specfun::clebsch_gordan(HalfInt(1), HalfInt(1), HalfInt(1), HalfInt(-1),
                                HalfInt(2), HalfInt(0)) ==
        Approx(1.0 / std::sqrt(2.0)).epsilon(1e-13));
  CHECK(specfun::clebsch_gordan(HalfInt(1), HalfInt(1), HalfInt(1), HalfInt(1),
                                HalfInt(2), HalfInt(0)) == 0.0);

  // column orthonormality for all j1, j2 <= 3/2
  for (int tw1 = 1; tw1 <= 3; ++tw1) {
    for (int tw2 = 1; tw2 <= 3; ++tw2) {
      HalfInt j1(tw1), j2(tw2);
      for (int J2 = std::abs(tw1 - tw2); J2 <= tw1 + tw2; J2 += 2) {
        for (int Jp2 = std::abs(tw1 - tw2); Jp2 <= tw1 + tw2; Jp2 += 2) {
          for (int M2 = -std::min(J2, Jp2); M2 <= std::min(J2, Jp2); M2 += 2) {
            double acc = 0.0;
            for (int m1 = -tw1; m1 <= tw1; m1 += 2) {
              int m2 = M2 - m1;
              if (std::abs(m2) > tw2) continue;
              acc += specfun::clebsch_gordan(j1, HalfInt(m1), j2, HalfInt(m2),
                                             HalfInt(J2), HalfInt(M2)) *
                     specfun::clebsch_gordan(j1, HalfInt(m1), j2, HalfInt(m2),
                                             HalfInt(Jp2), HalfInt(M2));
            }
            CHECK(acc == Approx(J2 == Jp2 ? 1.0 : 0.0).margin(1e-10));
          }
        }
      }
    }
  }
}

TEST_CASE("Clebsch-Gordan completeness for j1, j2 <= 3/2") {
  for (int tw = 1; tw <= 3; ++tw) {
    HalfInt j1(tw), j2(tw);
    for (int m1 = -tw; m1 <= tw; m1 += 2)
      for (int m1p = -tw; m1p <= tw; m1p += 2)
        for (int m2 = -tw; m2 <= tw; m2 += 2)
          for (int m2p = -tw; m2p <= tw; m2p += 2) {
            double acc = 0.0;
            for (int J2 = 0; J2 <= 2 * tw; J2 += 2)
              for (int M2 = -J2; M2 <= J2; M2 += 2)
                acc += specfun::clebsch_gordan(j1, HalfInt(m1), j2, HalfInt(m2),
                                               HalfInt(J2), HalfInt(M2)) *
                       specfun::clebsch_gordan(j1, HalfInt(m1p), j2, HalfInt(m2p),
                                               HalfInt(J2), HalfInt(M2));
            double want = (m1 == m1p && m2 == m2p) ? 1.0 : 0.0;
            CHECK(acc == Approx(want).margin(1e-10));
          }
  }
}

TEST_CASE("displacement element: closed values and expm oracle") {
  cplx beta(0.6, -0.4);
  CHECK(std::abs(specfun::displacement_element(0, 0, beta) -
                 std::exp(-0.5 * std::norm(beta))) < 1e-14);
  CHECK(std::abs(specfun::displacement_element(1, 0, beta) -
                 beta * std::exp(-0.5 * std::norm(beta))) < 1e-14);

  int cutoff = 40;
  for (cplx b : {cplx(0.3, 0.2), cplx(-1.1, 0.7), cplx(2.0, -1.5)}) {
    Eigen::MatrixXcd D = oracle_ops::displacement_exp(b, cutoff);
    for (int np = 0; np < 7; ++np)
      for (int n = 0; n < 7; ++n)
        CHECK(std::abs(D(np, n) - specfun::displacement_element(np, n, b)) < 1e-12);
  }
}

TEST_CASE("displacement unitarity: truncated column sums reach 1") {
  for (cplx b : {cplx(0.8, 0.3), cplx(-1.2, 1.4)}) {
    for (int n : {0, 2, 5}) {
      double b2 = std::norm(b);
      int N = static_cast<int>(std::ceil(b2 + 10.0 * std::sqrt(b2 + 1.0))) + n;
      double acc = 0.0;
      for (int np = 0; np <= N; ++np)
        acc += std::norm(specfun::displacement_element(np, n, b));
      CHECK(std::abs(acc - 1.0) < 1e-9);
      for (int np = N + 1; np <= N + 6; ++np)
        acc += std::norm(specfun::displacement_element(np, n, b));
      CHECK(std::abs(acc - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("displacement composition D(b) D(-b) = 1 through a truncated sum") {
  cplx b(0.9, -0.5);
  double b2 = std::norm(b);
  for (int a = 0; a <= 3; ++a)
    for (int c = 0; c <= 3; ++c) {
      int N = static_cast<int>(std::ceil(b2 + 10.0 * std::sqrt(b2 + 1.0))) + 4;
      cplx acc = 0.0;
      for (int l = 0; l <= N; ++l)
        acc += specfun::displacement_element(a, l, b) *
               specfun::displacement_element(l, c, -b);
      CHECK(std::abs(acc - (a == c ? 1.0 : 0.0)) < 1e-9);
    }
}

TEST_CASE("harmonic oscillator wavefunction: normalization and values") {
  // psi_0(x) = pi^{-1/4} e^{-x^2/2}
  CHECK(specfun::ho_wavefunction(0, 0.7) ==
        Approx(std::pow(M_PI, -0.25) * std::exp(-0.245)).epsilon(1e-13));
  // grid normalization for a few n
  for (int n : {0, 1, 5, 12}) {
    double acc = 0.0;
    for (double x = -12.0; x <= 12.0; x += 0.01)
      acc += specfun::ho_wavefunction(n, x) * specfun::ho_wavefunction(n, x) * 0.01;
    CHECK(acc == Approx(1.0).epsilon(1e-9));
  }
}
