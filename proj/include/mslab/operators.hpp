// Truncated Toeplitz operator matrices on K_theta and, through the unitary
// identification f -> h f, on M = h K_theta.  Column j of every matrix holds
// the image of basis vector j in TM coordinates.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "mslab/blaschke.hpp"
#include "mslab/errors.hpp"
#include "mslab/model_space.hpp"
#include "mslab/nearly_invariant.hpp"
#include "mslab/options.hpp"
#include "mslab/quadrature.hpp"
#include "mslab/symbol.hpp"

namespace mslab {

using OperatorMatrix = Eigen::MatrixXcd;

namespace detail {

inline int numerical_rank(const Eigen::MatrixXcd& m, double rel_tol = 1e-8) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (int k = 0; k < sv.size(); ++k)
    if (sv(k) > rel_tol * sv(0)) ++rank;
  return rank;
}

// Solves g x = b for Hermitian positive definite g, rejecting condition
// numbers at or beyond 1e10.
inline Eigen::MatrixXcd gram_solve(const Eigen::MatrixXcd& g, const Eigen::MatrixXcd& b,
                                   const char* what) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo <= 0.0 || hi / lo >= 1e10)
    throw SingularGram(std::string(what) + ": Gram condition " +
                       std::to_string(lo > 0.0 ? hi / lo : -1.0));
  return es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
         es.eigenvectors().adjoint() * b;
}

}  // namespace detail

// Generic truncated Toeplitz matrix: entries (i,j) = <sigma e_j, e_i>.
inline OperatorMatrix tto_matrix(const ModelSpace& ms, const BoundarySymbol& sigma,
                                 const NumericOptions& opts = default_options()) {
  sigma.require_pole_free_on_circle();
  const int n = ms.dim();
  OperatorMatrix a = OperatorMatrix::Zero(n, n);
  for (const auto& term : sigma.terms()) {
    std::vector<RationalFn> left, right;
    left.reserve(static_cast<size_t>(n));
    right.reserve(static_cast<size_t>(n));
    for (const auto& e : ms.basis()) {
      left.push_back(term.analytic * e);
      right.push_back(term.conjugate * e);
    }
    a += inner_product_matrix(left, right, opts).transpose();
  }
  return a;
}

// Compressed shift S_theta: projection of multiplication by z.
inline OperatorMatrix shift_matrix(const ModelSpace& ms,
                                   const NumericOptions& opts = default_options()) {
  std::vector<RationalFn> shifted;
  shifted.reserve(static_cast<size_t>(ms.dim()));
  for (const auto& e : ms.basis()) shifted.push_back(RationalFn::z() * e);
  return inner_product_matrix(shifted, ms.basis(), opts).transpose();
}

namespace detail {

inline void require_av_inputs(const ModelSpace& ms, const cplx& v) {
  if (std::abs(v) >= 1.0 - 1e-10) throw VNotInDisk("|v| = " + std::to_string(std::abs(v)));
  // v = 0 is the plain compressed shift, defined for every symbol; the
  // rank-one correction direction theta/z only exists when theta(0) = 0.
  if (v != cplx(0.0) && ms.theta().origin_mult() < 1)
    throw ThetaNotVanishingAtZero("rank-one shift perturbation needs theta(0) = 0");
}

}  // namespace detail

// A_v = S_theta + v (1 (x) theta/z): the closed form of A_{|h|^2 z}^theta,
// which depends on h only through v = <theta h, h>.
inline OperatorMatrix av_matrix(const ModelSpace& ms, const cplx& v,
                                const NumericOptions& opts = default_options()) {
  detail::require_av_inputs(ms, v);
  if (v == cplx(0.0)) return shift_matrix(ms, opts);
  const ModelVector one = reproducing_kernel(ms, 0.0);
  const ModelVector flip = ms.apply_conjugation(one);  // theta/z
  return shift_matrix(ms, opts) + v * one * flip.adjoint();
}

inline OperatorMatrix bv_matrix(const ModelSpace& ms, const cplx& v,
                                const NumericOptions& opts = default_options()) {
  return av_matrix(ms, v, opts).adjoint();
}

// Matrix of the operator in a caller-supplied (possibly non-orthonormal)
// basis of K_theta, by solving the normal equations Gram C = X* A X.
inline Eigen::MatrixXcd matrix_in_basis(const ModelSpace& ms, const OperatorMatrix& op,
                                        const std::vector<RationalFn>& basis,
                                        const NumericOptions& opts = default_options()) {
  const int n = ms.dim();
  if (static_cast<int>(basis.size()) != n)
    throw DimensionMismatch("basis size " + std::to_string(basis.size()) + " != dimension " +
                            std::to_string(n));
  if (op.rows() != n || op.cols() != n)
    throw DimensionMismatch("operator matrix does not match the space dimension");
  const Eigen::MatrixXcd x = inner_product_matrix(basis, ms.basis(), opts).transpose();
  return detail::gram_solve(x.adjoint() * x, x.adjoint() * op * x, "matrix_in_basis");
}

// A_z^M in the orthonormal basis {h e_k} of M; under the unitary M_h this is
// the same matrix as A_v on K_theta.
inline OperatorMatrix compressed_shift_M(const NearlySpace& ns,
                                         const NumericOptions& opts = default_options()) {
  return av_matrix(ns.space(), ns.v(), opts);
}

struct DefectOperators {
  OperatorMatrix da;  // sqrt(I - B_v A_v), supported on C theta/z
  OperatorMatrix db;  // sqrt(I - A_v B_v), supported on C 1
  int rank_a = 0;
  int rank_b = 0;
  double sv_a = 0.0;  // largest singular value of each root
  double sv_b = 0.0;
};

namespace detail {

// Eigenvalues at quadrature-noise level must be treated as exact zeros: the
// square root would otherwise amplify noise eps into sqrt(eps)-sized fake
// singular values.  Inputs here are uniformly bounded by 1, so the floor is
// absolute.
inline OperatorMatrix hermitian_sqrt(const Eigen::MatrixXcd& m, double floor = 1e-11) {
  const Eigen::MatrixXcd sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sym);
  Eigen::VectorXd lam = es.eigenvalues();
  for (int k = 0; k < lam.size(); ++k) lam(k) = lam(k) <= floor ? 0.0 : std::sqrt(lam(k));
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace detail

inline DefectOperators defect_operators(const ModelSpace& ms, const cplx& v,
                                        const NumericOptions& opts = default_options()) {
  const OperatorMatrix a = av_matrix(ms, v, opts);
  const OperatorMatrix b = a.adjoint();
  const int n = ms.dim();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  DefectOperators out;
  out.da = detail::hermitian_sqrt(id - b * a);
  out.db = detail::hermitian_sqrt(id - a * b);
  out.rank_a = detail::numerical_rank(out.da);
  out.rank_b = detail::numerical_rank(out.db);
  Eigen::JacobiSVD<Eigen::MatrixXcd> sa(out.da), sb(out.db);
  out.sv_a = sa.singularValues().size() ? sa.singularValues()(0) : 0.0;
  out.sv_b = sb.singularValues().size() ? sb.singularValues()(0) : 0.0;
  return out;
}

// Residual of D A_sigma^M D = A_{conj(sigma)}^M with D = M_h C M_h*.  In TM
// coordinates D acts as the conjugation matrix on conjugated coefficients, so
// the left side is M_C conj(A) conj(M_C).
inline double d_symmetry_check(const NearlySpace& ns, const BoundarySymbol& sigma,
                               const NumericOptions& opts = default_options()) {
  const BoundarySymbol weighted = sigma.weighted_by_modulus_sq(ns.h());
  const OperatorMatrix a = tto_matrix(ns.space(), weighted, opts);
  const OperatorMatrix a_conj = tto_matrix(ns.space(), weighted.conjugated(), opts);
  const Eigen::MatrixXcd& mc = ns.space().conjugation_matrix();
  return (mc * a.conjugate() * mc.conjugate() - a_conj).norm();
}

// Symbols in theta H^2 + conj(theta H^2) act as zero on K_theta; returns the
// matrix norm of the operator with symbol theta p + conj(theta q).
inline double zero_symbol_check(const ModelSpace& ms, const RationalFn& p, const RationalFn& q,
                                const NumericOptions& opts = default_options()) {
  const RationalFn th = ms.theta().to_rational();
  const BoundarySymbol sigma =
      BoundarySymbol::analytic(th * p) + BoundarySymbol::conjugate_of(th * q);
  return tto_matrix(ms, sigma, opts).norm();
}

struct KernelDefectReport {
  int kernel_dim = 0;
  int defect = 0;
};

// Kernels of A_sigma^M are nearly backward-shift-invariant with defect at most
// one: for kernel members vanishing at 0, the backward shift leaves the kernel
// only along (at most) one common direction.
inline KernelDefectReport kernel_defect_check(const NearlySpace& ns, const BoundarySymbol& sigma,
                                              const NumericOptions& opts = default_options()) {
  const ModelSpace& ms = ns.space();
  const int n = ms.dim();
  const OperatorMatrix a = tto_matrix(ms, sigma.weighted_by_modulus_sq(ns.h()), opts);

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  Eigen::MatrixXcd null_basis;
  if (smax < 1e-12) {
    null_basis = Eigen::MatrixXcd::Identity(n, n);
  } else {
    int kdim = 0;
    for (int k = 0; k < sv.size(); ++k)
      if (sv(k) < 1e-8 * smax) ++kdim;
    null_basis = svd.matrixV().rightCols(kdim);
  }
  KernelDefectReport out;
  out.kernel_dim = static_cast<int>(null_basis.cols());
  if (out.kernel_dim == 0) return out;

  // Coefficients of members of the kernel vanishing at the origin: h(0) > 0,
  // so F = h g vanishes at 0 exactly when g does.
  const ModelVector one = reproducing_kernel(ms, 0.0);
  const Eigen::RowVectorXcd at_zero = one.adjoint() * null_basis;
  Eigen::MatrixXcd sub;
  if (at_zero.norm() < 1e-12) {
    sub = null_basis;
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXcd> row_svd(at_zero, Eigen::ComputeFullV);
    sub = null_basis * row_svd.matrixV().rightCols(null_basis.cols() - 1);
  }
  if (sub.cols() == 0) return out;

  Eigen::MatrixXcd residuals(n, sub.cols());
  for (int j = 0; j < sub.cols(); ++j) {
    const RationalFn g = to_function(ms, sub.col(j));
    double rem = 0.0;
    const ComplexPoly down = g.num().deflated(0.0, &rem);
    if (rem > 1e-7 * (1.0 + g.num().max_abs_coeff()))
      throw InternalCheckFailed("kernel member fails to vanish at the origin");
    const ModelVector shifted = project(ms, RationalFn(down, g.den()), opts);
    residuals.col(j) = shifted - null_basis * (null_basis.adjoint() * shifted);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> rsvd(residuals);
  int defect = 0;
  for (int k = 0; k < rsvd.singularValues().size(); ++k)
    if (rsvd.singularValues()(k) > 1e-8) ++defect;
  out.defect = defect;
  if (defect > 1)
    throw InternalCheckFailed("kernel defect " + std::to_string(defect) + " exceeds one");
  return out;
}

struct CyclicityReport {
  int a_from_one = 0;
  int a_from_flip = 0;
  int b_from_one = 0;
  int b_from_flip = 0;
};

namespace detail {

inline int krylov_rank(const OperatorMatrix& a, const ModelVector& x) {
  const int n = static_cast<int>(a.rows());
  Eigen::MatrixXcd k(n, n);
  ModelVector cur = x;
  for (int j = 0; j < n; ++j) {
    k.col(j) = cur;
    cur = a * cur;
  }
  return numerical_rank(k);
}

}  // namespace detail

// Both 1 and theta/z generate the whole space under A_v and under B_v.
inline CyclicityReport cyclicity_check(const ModelSpace& ms, const cplx& v,
                                       const NumericOptions& opts = default_options()) {
  const OperatorMatrix a = av_matrix(ms, v, opts);
  const OperatorMatrix b = a.adjoint();
  const ModelVector one = reproducing_kernel(ms, 0.0);
  const ModelVector flip = ms.apply_conjugation(one);
  CyclicityReport out;
  out.a_from_one = detail::krylov_rank(a, one);
  out.a_from_flip = detail::krylov_rank(a, flip);
  out.b_from_one = detail::krylov_rank(b, one);
  out.b_from_flip = detail::krylov_rank(b, flip);
  return out;
}

// Residuals of the four kernel-image identities
//   B_v k_w          = conj(v) theta/z + conj(w) k_w'
//   A_v ~k_w         = v 1 + w z ~k_w'
//   A_v k_w  (w != 0)= v conj(theta(w))/conj(w) 1 + z k_w'
//   B_v ~k_w (w != 0)= (theta(w)/w) conj(v) theta/z + ~k_w'
// where primes live in the sub-model-space K_{theta/z} embedded in K_theta.
inline std::vector<double> kernel_action_check(const ModelSpace& ms, const cplx& v,
                                               const cplx& w, bool include_b = true,
                                               const NumericOptions& opts = default_options()) {
  detail::require_av_inputs(ms, v);
  detail::require_in_disk(w);
  if (include_b && std::abs(w) < 1e-12)
    throw WZero("the second identity pair requires w != 0");

  const OperatorMatrix a = av_matrix(ms, v, opts);
  const OperatorMatrix b = a.adjoint();
  const ModelVector one = reproducing_kernel(ms, 0.0);
  const ModelVector flip = ms.apply_conjugation(one);
  const ModelVector kw = reproducing_kernel(ms, w);
  const ModelVector kw_t = ms.apply_conjugation(kw);

  // Sub-space kernels; a degree-1 theta has trivial K_{theta/z}.
  ModelVector sub_k = ModelVector::Zero(ms.dim());
  ModelVector sub_k_t = ModelVector::Zero(ms.dim());
  ModelVector z_sub_k = ModelVector::Zero(ms.dim());
  ModelVector z_sub_k_t = ModelVector::Zero(ms.dim());
  if (ms.theta().degree() >= 2) {
    const ModelSpace sub = tm_basis(ms.theta().divide_by_z(), opts);
    const RationalFn skf = reproducing_kernel_fn(sub, w);
    const RationalFn skt = kernel_conjugate_fn(sub, w);
    sub_k = project(ms, skf, opts);
    sub_k_t = project(ms, skt, opts);
    z_sub_k = project(ms, RationalFn::z() * skf, opts);
    z_sub_k_t = project(ms, RationalFn::z() * skt, opts);
  }

  std::vector<double> out;
  out.push_back((b * kw - (std::conj(v) * flip + std::conj(w) * sub_k)).norm());
  out.push_back((a * kw_t - (v * one + w * z_sub_k_t)).norm());
  if (include_b) {
    const cplx tw = ms.theta().eval(w);
    out.push_back((a * kw - (v * std::conj(tw) / std::conj(w) * one + z_sub_k)).norm());
    out.push_back((b * kw_t - (tw / w * std::conj(v) * flip + sub_k_t)).norm());
  }
  return out;
}

}  // namespace mslab
