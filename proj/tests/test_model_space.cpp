// Model space construction, kernels, conjugation, projection.  Oracles:
// closed-form bases for monomial products, exact kernel values, and dual
// construction routes that must agree.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "mslab/generators.hpp"
#include "mslab/model_space.hpp"

using namespace mslab;

namespace {

const double kSqrt2 = std::sqrt(2.0);

BlaschkeProduct theta_half() { return BlaschkeProduct(1.0, {{0.0, 1}, {0.5, 1}}); }

std::vector<cplx> circle_samples(int count, double radius) {
  std::vector<cplx> out;
  for (int k = 0; k < count; ++k) {
    const double t = 2.0 * std::numbers::pi * k / count;
    out.emplace_back(radius * std::cos(t), radius * std::sin(t));
  }
  return out;
}

}  // namespace

TEST_CASE("monomial inner functions produce the monomial basis") {
  const ModelSpace m2 = tm_basis(BlaschkeProduct(1.0, {{0.0, 2}}));
  const ModelSpace m4 = tm_basis(BlaschkeProduct(1.0, {{0.0, 4}}));
  for (const cplx& z : circle_samples(8, 0.7)) {
    CHECK(std::abs(m2.basis_fn(0).eval(z) - cplx(1.0)) < 1e-14);
    CHECK(std::abs(m2.basis_fn(1).eval(z) - z) < 1e-14);
    for (int k = 0; k < 4; ++k)
      CHECK(std::abs(m4.basis_fn(k).eval(z) - std::pow(z, k)) < 1e-13);
  }
}

TEST_CASE("degree-2 basis with one free zero matches the closed form") {
  const cplx a(0.3, -0.2);
  const ModelSpace ms = tm_basis(BlaschkeProduct(1.0, {{0.0, 1}, {a, 1}}), {0.0, a});
  const double s = std::sqrt(1.0 - std::norm(a));
  for (const cplx& z : circle_samples(8, 0.8)) {
    CHECK(std::abs(ms.basis_fn(0).eval(z) - cplx(1.0)) < 1e-14);
    CHECK(std::abs(ms.basis_fn(1).eval(z) - s * z / (1.0 - std::conj(a) * z)) < 1e-13);
  }
}

TEST_CASE("a custom zero order must be a permutation of the zeros") {
  const BlaschkeProduct th(1.0, {{0.0, 1}, {0.5, 1}});
  CHECK_THROWS_AS(tm_basis(th, std::vector<cplx>{0.0, 0.4}), ConfigError);
  CHECK_THROWS_AS(tm_basis(th, std::vector<cplx>{0.0}), ConfigError);
  CHECK_NOTHROW(tm_basis(th, std::vector<cplx>{0.5, 0.0}));
}

TEST_CASE("random bases up to degree 12 are orthonormal") {
  std::mt19937_64 rng(90210);
  for (int deg : {1, 3, 6, 9, 12}) {
    const ModelSpace ms = tm_basis(random_blaschke(rng, deg, 1));
    const auto g = inner_product_matrix(ms.basis(), ms.basis());
    const double resid =
        (g - Eigen::MatrixXcd::Identity(deg, deg)).cwiseAbs().maxCoeff();
    CHECK(resid < 1e-9);
  }
}

TEST_CASE("kernel at the origin is the constant one") {
  const ModelSpace ms = tm_basis(theta_half());
  const ModelVector k0 = reproducing_kernel(ms, 0.0);
  CHECK(std::abs(k0(0) - cplx(1.0)) < 1e-14);
  CHECK(std::abs(k0(1)) < 1e-14);
  const RationalFn f = reproducing_kernel_fn(ms, 0.0);
  for (const cplx& z : circle_samples(8, 0.9)) CHECK(std::abs(f.eval(z) - cplx(1.0)) < 1e-13);
}

TEST_CASE("kernel of the square map at one half") {
  const ModelSpace ms = tm_basis(BlaschkeProduct(1.0, {{0.0, 2}}));
  const ModelVector k = reproducing_kernel(ms, 0.5);
  CHECK(std::abs(k(0) - cplx(1.0)) < 1e-14);
  CHECK(std::abs(k(1) - cplx(0.5)) < 1e-14);
}

TEST_CASE("kernel self-reproduction value") {
  std::mt19937_64 rng(5150);
  const ModelSpace ms = tm_basis(random_blaschke(rng, 4, 1));
  for (const cplx lambda : {cplx(0.3, 0.2), cplx(-0.5, 0.1), cplx(0.0, -0.6)}) {
    const ModelVector k = reproducing_kernel(ms, lambda);
    const double want = (1.0 - std::norm(ms.theta().eval(lambda))) / (1.0 - std::norm(lambda));
    CHECK(std::abs(k.squaredNorm() - want) < 1e-10);
  }
}

TEST_CASE("rational kernel form reproduces basis values under quadrature") {
  std::mt19937_64 rng(31337);
  const ModelSpace ms = tm_basis(random_blaschke(rng, 5, 2));
  for (const cplx& lambda : circle_samples(8, 0.55)) {
    const RationalFn k = reproducing_kernel_fn(ms, lambda);
    for (const auto& e : ms.basis()) {
      const cplx got = boundary_inner_product(e, k);
      CHECK(std::abs(got - e.eval(lambda)) < 1e-9);
    }
  }
}

TEST_CASE("random members are reproduced by the kernel") {
  std::mt19937_64 rng(2024);
  const ModelSpace ms = tm_basis(random_blaschke(rng, 6, 1));
  for (int trial = 0; trial < 16; ++trial) {
    const ModelVector c = random_model_vector(rng, ms.dim());
    const RationalFn f = to_function(ms, c);
    const cplx lambda = random_disk_point(rng, 0.7);
    const cplx ip = boundary_inner_product(f, reproducing_kernel_fn(ms, lambda));
    CHECK(std::abs(ip - f.eval(lambda)) < 1e-9 * (1.0 + std::abs(ip)));
  }
}

TEST_CASE("kernel rejects points outside the open disk") {
  const ModelSpace ms = tm_basis(theta_half());
  CHECK_THROWS_AS(reproducing_kernel(ms, cplx(1.0, 0.0)), LambdaNotInDisk);
  CHECK_THROWS_AS(reproducing_kernel_fn(ms, cplx(0.8, 0.8)), LambdaNotInDisk);
  CHECK_THROWS_AS(kernel_conjugate(ms, cplx(1.2, 0.0)), LambdaNotInDisk);
}

TEST_CASE("linear combinations round-trip through to_function") {
  std::mt19937_64 rng(444);
  const ModelSpace ms = tm_basis(random_blaschke(rng, 5, 1));
  const ModelVector c = random_model_vector(rng, ms.dim());
  const RationalFn f = to_function(ms, c);
  for (const cplx& z : circle_samples(12, 0.85))
    CHECK(std::abs(f.eval(z) - eval_vector(ms, c, z)) < 1e-11);
  const ModelVector back = project(ms, f);
  CHECK((back - c).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("conjugation sends one to theta over z") {
  const ModelSpace ms = tm_basis(theta_half());
  const ModelVector one = reproducing_kernel(ms, 0.0);
  const ModelVector img = ms.apply_conjugation(one);
  const RationalFn g = to_function(ms, img);
  for (const cplx& z : circle_samples(8, 0.8))
    CHECK(std::abs(g.eval(z) - ms.theta().eval(z) / z) < 1e-10);
}

TEST_CASE("conjugation of the monomial basis flips coefficients") {
  const ModelSpace ms = tm_basis(BlaschkeProduct(1.0, {{0.0, 4}}));
  for (int k = 0; k < 4; ++k) {
    ModelVector ek = ModelVector::Zero(4);
    ek(k) = 1.0;
    const ModelVector img = ms.apply_conjugation(ek);
    for (int i = 0; i < 4; ++i) {
      const double want = (i == 3 - k) ? 1.0 : 0.0;
      CHECK(std::abs(img(i) - cplx(want)) < 1e-10);
    }
  }
}

TEST_CASE("conjugation is an isometric involution") {
  std::mt19937_64 rng(8675309);
  const ModelSpace ms = tm_basis(random_blaschke(rng, 6, 2, true));
  for (int trial = 0; trial < 32; ++trial) {
    const ModelVector f = random_model_vector(rng, ms.dim());
    const ModelVector g = random_model_vector(rng, ms.dim());
    const ModelVector cf = ms.apply_conjugation(f);
    const ModelVector cg = ms.apply_conjugation(g);
    CHECK((ms.apply_conjugation(cf) - f).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(std::abs(cf.squaredNorm() - f.squaredNorm()) < 1e-9);
    // <Cf, Cg> = <g, f>
    CHECK(std::abs(cg.dot(cf) - f.dot(g)) < 1e-9);
  }
}

TEST_CASE("conjugate kernel: matrix route equals divided-difference route") {
  std::mt19937_64 rng(1123581321);
  const ModelSpace ms = tm_basis(random_blaschke(rng, 5, 1, true));
  for (int trial = 0; trial < 8; ++trial) {
    const cplx lambda = random_disk_point(rng, 0.75);
    const ModelVector via_matrix = kernel_conjugate(ms, lambda);
    const ModelVector via_formula = project(ms, kernel_conjugate_fn(ms, lambda));
    CHECK((via_matrix - via_formula).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("conjugate kernel at a level-set point divides out the level") {
  // theta(a) = -1/3 at a = (1 + i sqrt 2)/3, so the divided difference is
  // (theta(z) + 1/3)/(z - a).
  const ModelSpace ms = tm_basis(theta_half());
  const cplx a(1.0 / 3.0, kSqrt2 / 3.0);
  REQUIRE(std::abs(ms.theta().eval(a) - cplx(-1.0 / 3.0)) < 1e-12);
  const RationalFn g = kernel_conjugate_fn(ms, a);
  for (const cplx& z : circle_samples(8, 0.9)) {
    const cplx want = (ms.theta().eval(z) + 1.0 / 3.0) / (z - a);
    CHECK(std::abs(g.eval(z) - want) < 1e-10);
  }
}

TEST_CASE("second derivative kernel of the cube map") {
  const ModelSpace ms = tm_basis(BlaschkeProduct(1.0, {{0.0, 3}}));
  const RationalFn k = derivative_kernel_fn(ms, 0.0, 2);
  for (const cplx& z : circle_samples(8, 0.8))
    CHECK(std::abs(k.eval(z) - 2.0 * z * z) < 1e-12);
  const ModelVector c = derivative_kernel(ms, 0.0, 2);
  CHECK(std::abs(c(0)) < 1e-10);
  CHECK(std::abs(c(1)) < 1e-10);
  CHECK(std::abs(c(2) - cplx(2.0)) < 1e-10);
}

TEST_CASE("derivative kernel extracts derivatives at a critical point") {
  std::mt19937_64 rng(99);
  const double kSqrt3 = std::sqrt(3.0);
  const ModelSpace ms = tm_basis(theta_half());
  const cplx lambda = 2.0 - kSqrt3;
  const RationalFn k1 = derivative_kernel_fn(ms, lambda, 1);
  for (int trial = 0; trial < 8; ++trial) {
    const ModelVector c = random_model_vector(rng, ms.dim());
    const RationalFn f = to_function(ms, c);
    const cplx got = boundary_inner_product(f, k1);
    const cplx want = f.derivatives_at(lambda, 1)[1];
    CHECK(std::abs(got - want) < 1e-8 * (1.0 + std::abs(want)));
  }
}

TEST_CASE("order zero derivative kernel is the reproducing kernel") {
  std::mt19937_64 rng(7);
  const ModelSpace ms = tm_basis(random_blaschke(rng, 4, 1));
  const cplx lambda(0.2, -0.4);
  const ModelVector a = derivative_kernel(ms, lambda, 0);
  const ModelVector b = reproducing_kernel(ms, lambda);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("derivative kernel refuses orders beyond the critical multiplicity") {
  const ModelSpace sq = tm_basis(BlaschkeProduct(1.0, {{0.0, 2}}));
  CHECK_THROWS_AS(derivative_kernel_fn(sq, cplx(0.3, 0.0), 1), MultiplicityPreconditionFailed);
  const ModelSpace ms = tm_basis(theta_half());
  CHECK_THROWS_AS(derivative_kernel_fn(ms, 2.0 - std::sqrt(3.0), 2),
                  MultiplicityPreconditionFailed);
}

TEST_CASE("projection annihilates multiples of the inner function") {
  std::mt19937_64 rng(314159);
  const ModelSpace ms = tm_basis(random_blaschke(rng, 4, 1, true));
  const RationalFn g(ComplexPoly({1.0, cplx(0.5, 0.25)}), ComplexPoly({1.0, -1.0 / 3.0}));
  const RationalFn f = ms.theta().to_rational() * g;
  CHECK(project(ms, f).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("projection is the identity on members, sampled across the disk") {
  std::mt19937_64 rng(2718);
  const ModelSpace ms = tm_basis(random_blaschke(rng, 5, 2));
  const ModelVector c = random_model_vector(rng, ms.dim());
  const RationalFn f = to_function(ms, c);
  const ModelVector p = project(ms, f);
  const RationalFn back = to_function(ms, p);
  for (int k = 0; k < 32; ++k) {
    const cplx z = random_disk_point(rng, 0.95);
    CHECK(std::abs(back.eval(z) - f.eval(z)) < 1e-9);
  }
  CHECK_THROWS_AS(project(ms, RationalFn(ComplexPoly::constant(1.0), ComplexPoly({1.0, -1.0}))),
                  PoleOnCircle);
}

TEST_CASE("coordinate blocks of the two standard decompositions are orthogonal") {
  std::mt19937_64 rng(161803);
  const BlaschkeProduct th = random_blaschke(rng, 4, 1, true);
  const ModelSpace ms = tm_basis(th);
  const ModelSpace sub = tm_basis(th.divide_by_z());
  const int n = ms.dim();

  // K_theta = K_z (+) z K_{theta/z}: constants against shifted submembers.
  Eigen::MatrixXcd first(n, 1);
  first.col(0) = project(ms, RationalFn(ComplexPoly::constant(1.0)));
  Eigen::MatrixXcd shifted(n, n - 1);
  for (int k = 0; k < n - 1; ++k)
    shifted.col(k) = project(ms, RationalFn::z() * sub.basis_fn(k));
  CHECK((first.adjoint() * shifted).cwiseAbs().maxCoeff() < 1e-9);
  Eigen::MatrixXcd joint(n, n);
  joint << first, shifted;
  CHECK(joint.colPivHouseholderQr().rank() == n);

  // K_theta = K_{theta/z} (+) C theta/z: submembers against the flipped unit.
  Eigen::MatrixXcd last(n, 1);
  last.col(0) = project(ms, sub.theta().to_rational());
  Eigen::MatrixXcd lower(n, n - 1);
  for (int k = 0; k < n - 1; ++k) lower.col(k) = project(ms, sub.basis_fn(k));
  CHECK((last.adjoint() * lower).cwiseAbs().maxCoeff() < 1e-9);
  Eigen::MatrixXcd joint2(n, n);
  joint2 << lower, last;
  CHECK(joint2.colPivHouseholderQr().rank() == n);
}
