// Operator matrices: generic symbol quadrature vs closed forms, the published
// example matrices in their original bases, defect and cyclicity structure,
// and the four kernel-image identities.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "mslab/generators.hpp"
#include "mslab/operators.hpp"

using namespace mslab;

namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kSqrt6 = std::sqrt(6.0);

BlaschkeProduct theta_half() { return BlaschkeProduct(1.0, {{0.0, 1}, {0.5, 1}}); }

RationalFn h_half() {
  return RationalFn(ComplexPoly({2.0 / kSqrt6, 1.0 / kSqrt6, -1.0 / kSqrt6}));
}

RationalFn cauchy(const cplx& a) {
  // 1/(1 - conj(a) z)
  return RationalFn(ComplexPoly::constant(1.0), ComplexPoly({1.0, -std::conj(a)}));
}

}  // namespace

TEST_CASE("constant symbol gives the identity") {
  std::mt19937_64 rng(1001);
  const ModelSpace ms = tm_basis(random_blaschke(rng, 4, 1, true));
  const OperatorMatrix a = tto_matrix(ms, BoundarySymbol::analytic(RationalFn(ComplexPoly::constant(1.0))));
  CHECK((a - OperatorMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("shift symbol equals the dedicated shift construction") {
  std::mt19937_64 rng(1002);
  const ModelSpace ms = tm_basis(random_blaschke(rng, 5, 2));
  const OperatorMatrix via_symbol = tto_matrix(ms, BoundarySymbol::analytic(RationalFn::z()));
  const OperatorMatrix direct = shift_matrix(ms);
  CHECK((via_symbol - direct).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("monomial shift matrix has the expected jordan structure") {
  const ModelSpace ms = tm_basis(BlaschkeProduct(1.0, {{0.0, 4}}));
  const OperatorMatrix s = shift_matrix(ms);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double want = (i == j + 1) ? 1.0 : 0.0;
      CHECK(std::abs(s(i, j) - cplx(want)) < 1e-10);
    }
}

TEST_CASE("symbols from the annihilator act as zero") {
  std::mt19937_64 rng(1003);
  const ModelSpace ms = tm_basis(random_blaschke(rng, 4, 1, true));
  const RationalFn th = ms.theta().to_rational();
  const OperatorMatrix a = tto_matrix(ms, BoundarySymbol::analytic(th * RationalFn::z()));
  CHECK(a.cwiseAbs().maxCoeff() < 1e-9);

  CHECK(zero_symbol_check(ms, RationalFn(ComplexPoly::constant(1.0)), RationalFn()) < 1e-9);
  CHECK(zero_symbol_check(ms, RationalFn(ComplexPoly({2.0, 1.0})),
                          RationalFn(ComplexPoly({0.0, 3.0}))) < 1e-9);
  CHECK(zero_symbol_check(ms, RationalFn(), RationalFn()) < 1e-9);
}

TEST_CASE("rank-one perturbation with v = 0 is the plain shift") {
  std::mt19937_64 rng(1004);
  const ModelSpace ms = tm_basis(random_blaschke(rng, 4, 2));
  CHECK((av_matrix(ms, 0.0) - shift_matrix(ms)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("closed form agrees with the weighted-symbol quadrature route") {
  std::mt19937_64 rng(1005);
  for (int n : {2, 3, 4}) {
    const NearlySpace ns = random_nearly_space(rng, n);
    const BoundarySymbol wz =
        BoundarySymbol::analytic(RationalFn::z()).weighted_by_modulus_sq(ns.h());
    const OperatorMatrix via_symbol = tto_matrix(ns.space(), wz);
    const OperatorMatrix closed = av_matrix(ns.space(), ns.v());
    CHECK((via_symbol - closed).cwiseAbs().maxCoeff() < 1e-8);

    const OperatorMatrix via_conj = tto_matrix(ns.space(), wz.conjugated());
    CHECK((via_conj - bv_matrix(ns.space(), ns.v())).cwiseAbs().maxCoeff() < 1e-8);

    // Weighted constant symbol: the isometry statement in operator form.
    const BoundarySymbol w1 = BoundarySymbol::analytic(RationalFn(ComplexPoly::constant(1.0)))
                                  .weighted_by_modulus_sq(ns.h());
    CHECK((tto_matrix(ns.space(), w1) - OperatorMatrix::Identity(n, n)).cwiseAbs().maxCoeff() <
          1e-8);
  }
}

TEST_CASE("construction guards reject bad inputs") {
  const ModelSpace no_origin = tm_basis(BlaschkeProduct(1.0, {{0.5, 1}}));
  CHECK_THROWS_AS(av_matrix(no_origin, 0.25), ThetaNotVanishingAtZero);
  const ModelSpace ms = tm_basis(theta_half());
  CHECK_THROWS_AS(av_matrix(ms, cplx(1.0, 0.0)), VNotInDisk);
  CHECK_THROWS_AS(tto_matrix(ms, BoundarySymbol::analytic(
                                     RationalFn(ComplexPoly::constant(1.0), ComplexPoly({1.0, -1.0})))),
                  PoleOnCircle);
}

TEST_CASE("degree-2 matrix in the cauchy-kernel basis") {
  const cplx a(0.4, 0.3);
  const BlaschkeProduct th(1.0, {{0.0, 1}, {a, 1}});
  const ModelSpace ms = tm_basis(th);
  const std::vector<RationalFn> basis = {cauchy(a), RationalFn::z() * cauchy(a)};
  for (const cplx v : {cplx(-0.25, 0.15), cplx(0.3, 0.0), cplx(0.0, -0.45)}) {
    const Eigen::MatrixXcd m = matrix_in_basis(ms, av_matrix(ms, v), basis);
    CHECK(std::abs(m(0, 0)) < 1e-8);
    CHECK(std::abs(m(0, 1) - v) < 1e-8);
    CHECK(std::abs(m(1, 0) - cplx(1.0)) < 1e-8);
    CHECK(std::abs(m(1, 1) - (a - v * std::conj(a))) < 1e-8);
  }
}

TEST_CASE("degree-3 matrix with a double origin zero in the mixed basis") {
  const cplx a(0.4, 0.3);
  const BlaschkeProduct th(1.0, {{0.0, 2}, {a, 1}});
  const ModelSpace ms = tm_basis(th);
  const std::vector<RationalFn> basis = {RationalFn(ComplexPoly::constant(1.0)),
                                         RationalFn::z() * cauchy(a),
                                         RationalFn(ComplexPoly::monomial(2)) * cauchy(a)};
  const cplx v(-0.25, 0.15);
  const Eigen::MatrixXcd m = matrix_in_basis(ms, av_matrix(ms, v), basis);
  Eigen::MatrixXcd want(3, 3);
  want << 0.0, 0.0, v, 1.0, 0.0, 0.0, -std::conj(a), 1.0, a;
  CHECK((m - want).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("degree-3 matrix with a squared zero in the mixed basis") {
  const cplx a(0.4, 0.3);
  const BlaschkeProduct th(1.0, {{0.0, 1}, {a, 2}});
  const ModelSpace ms = tm_basis(th);
  const RationalFn c = cauchy(a);
  const std::vector<RationalFn> basis = {c, RationalFn::z() * c,
                                         RationalFn::z() * RationalFn(ComplexPoly({-a, 1.0})) * c * c};
  const cplx v(-0.25, 0.15);
  const Eigen::MatrixXcd m = matrix_in_basis(ms, av_matrix(ms, v), basis);
  Eigen::MatrixXcd want(3, 3);
  want << 0.0, -std::conj(a) * v, v,
      1.0, a + std::conj(a) * std::conj(a) * v, -std::conj(a) * v,
      0.0, 1.0 - std::norm(a), a;
  CHECK((m - want).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("change of basis preserves spectral data") {
  std::mt19937_64 rng(1006);
  const ModelSpace ms = tm_basis(random_blaschke(rng, 4, 1));
  const cplx v(0.2, -0.35);
  const OperatorMatrix op = av_matrix(ms, v);

  const Eigen::MatrixXcd same = matrix_in_basis(ms, op, ms.basis());
  CHECK((same - op).cwiseAbs().maxCoeff() < 1e-9);

  std::vector<RationalFn> basis;
  for (int j = 0; j < ms.dim(); ++j)
    basis.push_back(to_function(ms, random_model_vector(rng, ms.dim())));
  const Eigen::MatrixXcd m = matrix_in_basis(ms, op, basis);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> e1(op), e2(m);
  std::vector<cplx> s1, s2;
  for (int k = 0; k < ms.dim(); ++k) {
    s1.push_back(e1.eigenvalues()(k));
    s2.push_back(e2.eigenvalues()(k));
  }
  const auto lt = [](const cplx& x, const cplx& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  };
  std::sort(s1.begin(), s1.end(), lt);
  std::sort(s2.begin(), s2.end(), lt);
  for (int k = 0; k < ms.dim(); ++k) CHECK(std::abs(s1[static_cast<size_t>(k)] - s2[static_cast<size_t>(k)]) < 1e-7);
  CHECK(std::abs(m.trace() - op.trace()) < 1e-8);

  const std::vector<RationalFn> short_basis = {ms.basis_fn(0)};
  CHECK_THROWS_AS(matrix_in_basis(ms, op, short_basis), DimensionMismatch);
  const std::vector<RationalFn> dependent = {ms.basis_fn(0), ms.basis_fn(0), ms.basis_fn(1),
                                             ms.basis_fn(2)};
  CHECK_THROWS_AS(matrix_in_basis(ms, op, dependent), SingularGram);
}

TEST_CASE("adjoint matrix convention pairs with conjugated basis evaluations") {
  // In any basis F with matrix [A] for A_v, the vector w_j = conj(f_j(lambda))
  // satisfies ([A]^H - conj(lambda) I) w = 0 exactly when theta(lambda) = v.
  std::mt19937_64 rng(1007);
  const ModelSpace ms = tm_basis(random_blaschke(rng, 3, 1, true));
  const cplx lambda = random_disk_point(rng, 0.6);
  const cplx v = ms.theta().eval(lambda);
  const OperatorMatrix op = av_matrix(ms, v);

  std::vector<RationalFn> basis;
  for (int j = 0; j < ms.dim(); ++j)
    basis.push_back(to_function(ms, random_model_vector(rng, ms.dim())));
  const Eigen::MatrixXcd m = matrix_in_basis(ms, op, basis);
  Eigen::VectorXcd w(ms.dim());
  for (int j = 0; j < ms.dim(); ++j) w(j) = std::conj(basis[static_cast<size_t>(j)].eval(lambda));
  CHECK(((m.adjoint() - std::conj(lambda) * Eigen::MatrixXcd::Identity(ms.dim(), ms.dim())) * w)
            .norm() < 1e-8);
}

TEST_CASE("compressed shift of the polynomial example has the predicted spectrum") {
  const NearlySpace ns = make_nearly_space(h_half(), theta_half());
  const OperatorMatrix m = compressed_shift_M(ns);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m);
  std::vector<cplx> eig = {es.eigenvalues()(0), es.eigenvalues()(1)};
  if (eig[0].imag() > eig[1].imag()) std::swap(eig[0], eig[1]);
  CHECK(std::abs(eig[0] - cplx(1.0 / 3.0, -kSqrt2 / 3.0)) < 1e-8);
  CHECK(std::abs(eig[1] - cplx(1.0 / 3.0, kSqrt2 / 3.0)) < 1e-8);
}

TEST_CASE("compressed shift matches direct quadrature on the h-basis") {
  std::mt19937_64 rng(1008);
  const NearlySpace ns = random_nearly_space(rng, 3);
  const OperatorMatrix m = compressed_shift_M(ns);
  std::vector<RationalFn> lifted;
  for (const auto& f : ns.h_basis()) lifted.push_back(RationalFn::z() * f);
  const OperatorMatrix direct = inner_product_matrix(lifted, ns.h_basis()).transpose();
  CHECK((m - direct).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("defect operators are scaled rank-one projections") {
  std::mt19937_64 rng(1009);
  const ModelSpace ms = tm_basis(random_blaschke(rng, 4, 1, true));
  for (const cplx v : {cplx(0.0, 0.0), cplx(-1.0 / 3.0, 0.0), cplx(0.6, -0.55)}) {
    const DefectOperators d = defect_operators(ms, v);
    CHECK(d.rank_a == 1);
    CHECK(d.rank_b == 1);
    const double s = std::sqrt(1.0 - std::norm(v));
    CHECK(std::abs(d.sv_a - s) < 1e-8);
    CHECK(std::abs(d.sv_b - s) < 1e-8);
    const ModelVector one = reproducing_kernel(ms, 0.0);
    const ModelVector flip = ms.apply_conjugation(one);
    CHECK((d.da - s * flip * flip.adjoint()).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((d.db - s * one * one.adjoint()).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("defect norm tracks the level value up to the boundary") {
  const ModelSpace ms = tm_basis(theta_half());
  const cplx v(0.99, 0.0);
  const DefectOperators d = defect_operators(ms, v);
  CHECK(std::abs(d.sv_a - std::sqrt(1.0 - 0.99 * 0.99)) < 1e-8);
}

TEST_CASE("defect of the plain shift on monomials") {
  const ModelSpace ms = tm_basis(BlaschkeProduct(1.0, {{0.0, 2}}));
  const DefectOperators d = defect_operators(ms, 0.0);
  // I - S*S kills everything except the top monomial z = theta/z.
  Eigen::MatrixXcd want(2, 2);
  want << 0.0, 0.0, 0.0, 1.0;
  CHECK((d.da - want).cwiseAbs().maxCoeff() < 1e-10);
  want << 1.0, 0.0, 0.0, 0.0;
  CHECK((d.db - want).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("both distinguished vectors are cyclic when v is nonzero") {
  const ModelSpace z4 = tm_basis(BlaschkeProduct(1.0, {{0.0, 4}}));
  const CyclicityReport r4 = cyclicity_check(z4, cplx(0.3, 0.4));
  CHECK(r4.a_from_one == 4);
  CHECK(r4.a_from_flip == 4);
  CHECK(r4.b_from_one == 4);
  CHECK(r4.b_from_flip == 4);

  const NearlySpace ns = make_nearly_space(h_half(), theta_half());
  const CyclicityReport re = cyclicity_check(ns.space(), ns.v());
  CHECK(re.a_from_one == 2);
  CHECK(re.a_from_flip == 2);
  CHECK(re.b_from_one == 2);
  CHECK(re.b_from_flip == 2);
}

TEST_CASE("with v = 0 only the all-v cyclic pairs survive") {
  const ModelSpace ms = tm_basis(BlaschkeProduct(1.0, {{0.0, 2}}));
  const CyclicityReport r = cyclicity_check(ms, 0.0);
  CHECK(r.a_from_one == 2);
  CHECK(r.b_from_flip == 2);
  // B_0 1 = 0 and A_0(theta/z) = 0, so the cross pairs collapse.
  CHECK(r.b_from_one == 1);
  CHECK(r.a_from_flip == 1);
}

TEST_CASE("kernel images at the origin") {
  std::mt19937_64 rng(1010);
  const ModelSpace ms = tm_basis(random_blaschke(rng, 4, 1, true));
  const cplx v(0.25, -0.4);
  const auto res = kernel_action_check(ms, v, 0.0, false);
  REQUIRE(res.size() == 2);
  CHECK(res[0] < 1e-8);
  CHECK(res[1] < 1e-8);
  CHECK_THROWS_AS(kernel_action_check(ms, v, 0.0, true), WZero);

  // B_v 1 = conj(v) theta/z and A_v(theta/z) = v, spelled out directly.
  const ModelVector one = reproducing_kernel(ms, 0.0);
  const ModelVector flip = ms.apply_conjugation(one);
  CHECK((bv_matrix(ms, v) * one - std::conj(v) * flip).norm() < 1e-10);
  CHECK((av_matrix(ms, v) * flip - v * one).norm() < 1e-10);
}

TEST_CASE("all four kernel identities hold at random points") {
  std::mt19937_64 rng(1011);
  for (int n : {2, 4, 6}) {
    const ModelSpace ms = tm_basis(random_blaschke(rng, n, 1, true));
    for (int trial = 0; trial < 3; ++trial) {
      cplx w = random_disk_point(rng, 0.7);
      if (std::abs(w) < 0.05) w += cplx(0.1, 0.0);
      const cplx v = random_disk_point(rng, 0.9);
      const auto res = kernel_action_check(ms, v, w);
      REQUIRE(res.size() == 4);
      for (double r : res) CHECK(r < 1e-8);
    }
  }
}

TEST_CASE("the perturbation acts as plain multiplication on the sub-space block") {
  std::mt19937_64 rng(1012);
  const ModelSpace ms = tm_basis(random_blaschke(rng, 5, 1, true));
  const ModelSpace sub = tm_basis(ms.theta().divide_by_z());
  const OperatorMatrix a = av_matrix(ms, cplx(0.4, 0.2));
  for (const auto& e : sub.basis()) {
    const ModelVector c = project(ms, e);
    const ModelVector want = project(ms, RationalFn::z() * e);
    CHECK((a * c - want).norm() < 1e-9);
  }
}

TEST_CASE("conjugation symmetry swaps a symbol with its conjugate") {
  const NearlySpace ns = make_nearly_space(h_half(), theta_half());
  CHECK(d_symmetry_check(ns, BoundarySymbol::analytic(RationalFn::z())) < 1e-8);
  CHECK(d_symmetry_check(ns, BoundarySymbol::analytic(RationalFn(ComplexPoly::constant(2.5)))) <
        1e-10);
  const BoundarySymbol self_adj =
      BoundarySymbol::analytic(RationalFn::z()) + BoundarySymbol::conjugate_of(RationalFn::z());
  CHECK(d_symmetry_check(ns, self_adj) < 1e-8);

  std::mt19937_64 rng(1013);
  const NearlySpace rns = random_nearly_space(rng, 3);
  CHECK(d_symmetry_check(rns, BoundarySymbol::analytic(RationalFn::z())) < 1e-8);
}

TEST_CASE("kernels of compressed operators have defect at most one") {
  const NearlySpace ns = make_nearly_space(h_half(), theta_half());

  // Invertible operator: trivial kernel.
  const auto trivial = kernel_defect_check(ns, BoundarySymbol::analytic(
                                                   RationalFn(ComplexPoly::constant(1.0))));
  CHECK(trivial.kernel_dim == 0);
  CHECK(trivial.defect == 0);

  // Symbol z - lambda with lambda an eigenvalue: kernel is the eigenspace.
  const cplx lambda(1.0 / 3.0, kSqrt2 / 3.0);
  const BoundarySymbol shifted = BoundarySymbol::analytic(
      RationalFn(ComplexPoly({-lambda, 1.0})));
  const auto eig = kernel_defect_check(ns, shifted);
  CHECK(eig.kernel_dim == 1);
  CHECK(eig.defect <= 1);

  // Zero symbol: the kernel is everything and stays nearly invariant.
  const auto full = kernel_defect_check(ns, BoundarySymbol::analytic(RationalFn()));
  CHECK(full.kernel_dim == 2);
  CHECK(full.defect <= 1);

  std::mt19937_64 rng(1014);
  const NearlySpace rns = random_nearly_space(rng, 4);
  const auto rnd = kernel_defect_check(
      rns, BoundarySymbol::analytic(RationalFn(ComplexPoly({cplx(0.2, 0.1), 1.0}))));
  CHECK(rnd.defect <= 1);
}

TEST_CASE("quartic monomial adjoint matrix is the companion of its level set") {
  std::mt19937_64 rng(1015);
  const ModelSpace ms = tm_basis(BlaschkeProduct(1.0, {{0.0, 4}}));
  for (int trial = 0; trial < 3; ++trial) {
    const cplx alpha = random_disk_point(rng, 0.9);
    const OperatorMatrix b = bv_matrix(ms, std::conj(alpha));
    Eigen::MatrixXcd want = Eigen::MatrixXcd::Zero(4, 4);
    want(0, 1) = want(1, 2) = want(2, 3) = 1.0;
    want(3, 0) = alpha;
    CHECK((b - want).cwiseAbs().maxCoeff() < 1e-10);
    const Eigen::MatrixXcd b4 = b * b * b * b;
    CHECK((b4 - alpha * Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-9);
  }
}
