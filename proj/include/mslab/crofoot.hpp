#pragma once
// The unitary multiplier between the model spaces of theta and of its disk
// automorphism image theta_v = (theta - v)/(1 - conj(v) theta), the scalar
// characteristic function of the perturbed shift, the intertwining identity,
// and the complete invariant-subspace lattice pulled back to h K_theta.
//
// Identities used throughout: 1 + conj(v) theta_v = (1 - |v|^2)/(1 - conj(v) theta),
// so the inverse multiplier sqrt(1-|v|^2)/(1 + conj(v) theta_v) equals
// (1 - conj(v) theta)/sqrt(1-|v|^2), which is the form computed here.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include <mslab/blaschke.hpp>
#include <mslab/model_space.hpp>
#include <mslab/nearly_invariant.hpp>
#include <mslab/operators.hpp>

namespace mslab {

namespace detail {

// The two spaces must be a matched pair: ms_v carries the automorphism image
// of ms's symbol. Checked pointwise, which catches swapped or stale spaces.
inline void require_shift_pair(const ModelSpace& ms, const ModelSpace& ms_v, const cplx& v) {
  if (ms.dim() != ms_v.dim())
    throw DimensionMismatch("paired model spaces must have equal dimension");
  for (int k = 0; k < 8; ++k) {
    const cplx z = std::polar(0.35 + 0.06 * k, 0.8 * k + 0.2);
    const cplx t = ms.theta().eval(z);
    const cplx want = (t - v) / (1.0 - std::conj(v) * t);
    if (std::abs(ms_v.theta().eval(z) - want) >= 1e-8)
      throw ConfigError("second space does not carry the shifted symbol for this v");
  }
}

}  // namespace detail

// Coordinates of the unitary multiplier f -> sqrt(1-|v|^2)/(1 - conj(v) theta) f
// from K_theta onto K_theta_v: column k holds the target-basis coordinates of
// the image of e_k. Unitarity is verified before returning.
inline OperatorMatrix crofoot_matrix(const ModelSpace& ms, const ModelSpace& ms_v, const cplx& v,
                                     const NumericOptions& opts = default_options()) {
  if (std::abs(v) >= 1.0 - 1e-10) throw VNotInDisk("|v| = " + std::to_string(std::abs(v)));
  detail::require_shift_pair(ms, ms_v, v);
  const RationalFn th = ms.theta().to_rational();
  const double s = std::sqrt(1.0 - std::norm(v));
  const RationalFn factor(cplx(s) * th.den(), th.den() - std::conj(v) * th.num());
  std::vector<RationalFn> images;
  for (int k = 0; k < ms.dim(); ++k) images.push_back(factor * ms.basis_fn(k));
  const OperatorMatrix j = inner_product_matrix(images, ms_v.basis(), opts).transpose();
  const double unit = (j.adjoint() * j - OperatorMatrix::Identity(ms.dim(), ms.dim())).norm();
  if (unit >= 1e-8)
    throw InternalCheckFailed("multiplier matrix is not unitary: residual " + std::to_string(unit));
  return j;
}

inline OperatorMatrix crofoot_matrix(const ModelSpace& ms, const cplx& v,
                                     const NumericOptions& opts = default_options()) {
  if (std::abs(v) >= 1.0 - 1e-10) throw VNotInDisk("|v| = " + std::to_string(std::abs(v)));
  return crofoot_matrix(ms, tm_basis(frostman_shift(ms.theta(), v, opts), opts), v, opts);
}

// Coordinates of the inverse multiplier g -> (1 - conj(v) theta)/sqrt(1-|v|^2) g
// from K_theta_v back onto K_theta. The composition with the forward matrix is
// verified to be the identity, and the two functional forms of the multiplier
// are compared pointwise on a disk circuit.
inline OperatorMatrix crofoot_inverse(const ModelSpace& ms, const ModelSpace& ms_v, const cplx& v,
                                      const NumericOptions& opts = default_options()) {
  if (std::abs(v) >= 1.0 - 1e-10) throw VNotInDisk("|v| = " + std::to_string(std::abs(v)));
  detail::require_shift_pair(ms, ms_v, v);
  const RationalFn th = ms.theta().to_rational();
  const double s = std::sqrt(1.0 - std::norm(v));
  const RationalFn factor(th.den() - std::conj(v) * th.num(), cplx(s) * th.den());
  for (int k = 0; k < 32; ++k) {
    const cplx z = std::polar(0.15 + 0.75 * (k % 8) / 8.0, 2.0 * std::numbers::pi * k / 32.0);
    const cplx other = s / (1.0 + std::conj(v) * ms_v.theta().eval(z));
    if (std::abs(factor.eval(z) - other) >= 1e-9)
      throw InternalCheckFailed("the two inverse-multiplier forms disagree on the disk");
  }
  std::vector<RationalFn> images;
  for (int k = 0; k < ms_v.dim(); ++k) images.push_back(factor * ms_v.basis_fn(k));
  const OperatorMatrix jinv = inner_product_matrix(images, ms.basis(), opts).transpose();
  const OperatorMatrix j = crofoot_matrix(ms, ms_v, v, opts);
  const double comp = (j * jinv - OperatorMatrix::Identity(ms.dim(), ms.dim())).norm();
  if (comp >= 1e-8)
    throw InternalCheckFailed("multiplier composition is not the identity: residual " +
                              std::to_string(comp));
  return jinv;
}

// Scalar characteristic value theta_v(lambda), computed from the automorphism
// formula and cross-checked against the shifted product evaluation.
inline cplx characteristic_function(const NearlySpace& ns, const cplx& lambda,
                                    const NumericOptions& opts = default_options()) {
  detail::require_in_disk(lambda);
  const cplx t = ns.space().theta().eval(lambda);
  const cplx direct = (t - ns.v()) / (1.0 - std::conj(ns.v()) * t);
  const cplx shifted = frostman_shift(ns.space().theta(), ns.v(), opts).eval(lambda);
  if (std::abs(direct - shifted) >= 1e-9)
    throw InternalCheckFailed("characteristic value disagrees with the shifted product");
  return direct;
}

// Residual of the intertwining identity J A_v = S_shifted J: the perturbed
// shift is carried to the plain compressed shift of the shifted symbol.
inline double intertwining_check(const NearlySpace& ns,
                                 const NumericOptions& opts = default_options()) {
  const ModelSpace& ms = ns.space();
  const ModelSpace ms_v = tm_basis(frostman_shift(ms.theta(), ns.v(), opts), opts);
  const OperatorMatrix j = crofoot_matrix(ms, ms_v, ns.v(), opts);
  const OperatorMatrix a = av_matrix(ms, ns.v(), opts);
  const OperatorMatrix s = av_matrix(ms_v, 0.0, opts);
  return (j * a - s * j).norm();
}

struct InvariantSubspace {
  BlaschkeProduct phi;                  // divisor of the shifted symbol
  int dim = 0;                          // codimension of K_phi in K_theta_v
  std::vector<RationalFn> basis_fns;    // orthonormal functions spanning the subspace of h K_theta
  Eigen::MatrixXcd basis_coeffs;        // their coordinates in the h e_k basis, one column each
  double residual = 0.0;                // invariance residual of the coefficient projection
};

namespace detail {

inline bool blaschke_divides(const BlaschkeProduct& a, const BlaschkeProduct& b) {
  for (const auto& za : a.zeros()) {
    bool found = false;
    for (const auto& zb : b.zeros())
      if (std::abs(za.point - zb.point) < 1e-12 && zb.mult >= za.mult) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

inline bool zero_list_less(const BlaschkeProduct& a, const BlaschkeProduct& b) {
  const auto za = a.zero_list(), zb = b.zero_list();
  if (za.size() != zb.size()) return za.size() < zb.size();
  for (size_t i = 0; i < za.size(); ++i) {
    if (cplx_less(za[i], zb[i])) return true;
    if (cplx_less(zb[i], za[i])) return false;
  }
  return false;
}

}  // namespace detail

// Complete lattice of invariant subspaces: one per divisor phi of the shifted
// symbol, realized as phi times the model space of the cofactor, carried back
// through the inverse multiplier and then multiplied by h. Orthonormality of
// each basis, the invariance residual, the lattice count, and the
// divisibility-to-containment order are all verified before returning.
inline std::vector<InvariantSubspace> invariant_subspace_lattice(
    const NearlySpace& ns, const NumericOptions& opts = default_options()) {
  const ModelSpace& ms = ns.space();
  const int n = ms.dim();
  const RationalFn th = ms.theta().to_rational();
  const cplx v = ns.v();
  const double s = std::sqrt(1.0 - std::norm(v));
  const BlaschkeProduct theta_v = frostman_shift(ms.theta(), v, opts);
  const RationalFn jinv_factor(th.den() - std::conj(v) * th.num(), cplx(s) * th.den());
  const OperatorMatrix a = av_matrix(ms, v, opts);
  const OperatorMatrix identity = OperatorMatrix::Identity(n, n);

  std::vector<InvariantSubspace> out;
  for (const auto& choice : divisor_choice_vectors(theta_v)) {
    const BlaschkeProduct phi = divisor_from_choice(theta_v, choice);
    const BlaschkeProduct cofactor = complement_from_choice(theta_v, choice);
    const int d = cofactor.degree();

    std::vector<RationalFn> fs;
    Eigen::MatrixXcd q(n, d);
    if (d > 0) {
      const ModelSpace ms_co = tm_basis(cofactor, opts);
      const RationalFn phi_fn = phi.to_rational();
      for (int k = 0; k < d; ++k) fs.push_back(jinv_factor * (phi_fn * ms_co.basis_fn(k)));
      q = inner_product_matrix(fs, ms.basis(), opts).transpose();
      const double ortho = (q.adjoint() * q - OperatorMatrix::Identity(d, d)).norm();
      if (ortho >= 1e-8)
        throw InternalCheckFailed("lattice basis is not orthonormal: residual " +
                                  std::to_string(ortho));
    }

    InvariantSubspace sub{phi, d, {}, q, 0.0};
    if (d > 0) {
      sub.residual = ((identity - q * q.adjoint()) * (a * q)).norm();
      if (sub.residual >= 1e-8)
        throw InternalCheckFailed("lattice member fails invariance: residual " +
                                  std::to_string(sub.residual));
      for (const auto& f : fs) sub.basis_fns.push_back(ns.h() * f);
    }
    out.push_back(std::move(sub));
  }

  int expected = 1;
  for (const auto& zr : theta_v.zeros()) expected *= zr.mult + 1;
  if (static_cast<int>(out.size()) != expected)
    throw InternalCheckFailed("lattice count does not match the divisor count");

  std::sort(out.begin(), out.end(), [](const InvariantSubspace& x, const InvariantSubspace& y) {
    if (x.dim != y.dim) return x.dim < y.dim;
    return detail::zero_list_less(x.phi, y.phi);
  });

  // Containment must mirror reverse divisibility: a larger divisor cuts a
  // smaller subspace.
  for (const auto& big : out)
    for (const auto& small : out) {
      if (!detail::blaschke_divides(big.phi, small.phi)) continue;
      if (small.dim == 0) continue;
      const Eigen::MatrixXcd& qb = big.basis_coeffs;
      const double fit = (small.basis_coeffs - qb * (qb.adjoint() * small.basis_coeffs)).norm();
      if (fit >= 1e-8)
        throw InternalCheckFailed("divisibility order violates subspace containment");
    }
  return out;
}

// Two-sided invariance test for a candidate g K_phi in Hitt form: the first
// residual is the negative-frequency energy of theta conj(g phi) on the
// circle, the second the distance of (B_v g)/g from K_phi. Both vanish
// exactly when g K_phi is invariant for the adjoint.
inline std::pair<double, double> hitt_invariance_check(const NearlySpace& ns, const RationalFn& g,
                                                       const BlaschkeProduct& phi,
                                                       const NumericOptions& opts = default_options()) {
  const ModelSpace& ms = ns.space();
  if (phi.origin_mult() < 1)
    throw PhiNotVanishingAtZero("the inner divisor must vanish at the origin");
  for (const auto& [r, m] : poly_roots(g.num(), opts))
    if (std::abs(std::abs(r) - 1.0) < 1e-6)
      throw GVanishesOnCircle("division by g is unstable with a zero on the circle");

  const ModelVector xg = project(ms, g, opts);
  const RationalFn back = to_function(ms, xg);
  const RationalFn mismatch = g - back;
  const double gnorm = std::sqrt(std::max(0.0, boundary_inner_product(g, g, opts).real()));
  const double mnorm =
      std::sqrt(std::max(0.0, boundary_inner_product(mismatch, mismatch, opts).real()));
  if (mnorm >= 1e-8 * std::max(1.0, gnorm))
    throw GNotInModelSpace("projection residual " + std::to_string(mnorm));

  const RationalFn th = ms.theta().to_rational();
  const RationalFn gphi = g * phi.to_rational();
  std::vector<RationalFn> probes;
  for (int k = 1; k <= 64; ++k) probes.push_back(th * RationalFn(ComplexPoly::monomial(k)));
  const double neg_energy = inner_product_matrix(probes, {gphi}, opts).col(0).norm();

  const ModelVector yg = bv_matrix(ms, ns.v(), opts) * xg;
  const RationalFn bg = to_function(ms, yg);
  const RationalFn ratio(bg.num() * g.den(), bg.den() * g.num());
  const ModelSpace ms_phi = tm_basis(phi, opts);
  const RationalFn proj = to_function(ms_phi, project(ms_phi, ratio, opts));
  const RationalFn rdiff = ratio - proj;
  const double dist =
      std::sqrt(std::max(0.0, boundary_inner_product(rdiff, rdiff, opts).real()));
  return {neg_energy, dist};
}

}  // namespace mslab
