// Nearly backward-shift-invariant subspaces M = h K_theta: h is the extremal
// function of M (h(0) > 0, unit norm, multiplication by h isometric on
// K_theta) and v = <theta h, h> is the scalar that parametrizes every
// compression studied here.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "mslab/errors.hpp"
#include "mslab/model_space.hpp"
#include "mslab/options.hpp"
#include "mslab/quadrature.hpp"
#include "mslab/rational.hpp"

namespace mslab {

class NearlySpace {
 public:
  const RationalFn& h() const { return h_; }
  const ModelSpace& space() const { return ms_; }
  const cplx& v() const { return v_; }
  int dim() const { return ms_.dim(); }
  // Orthonormal basis {h e_k} of M itself.
  const std::vector<RationalFn>& h_basis() const { return h_basis_; }

 private:
  NearlySpace(RationalFn h, ModelSpace ms, cplx v, std::vector<RationalFn> hb)
      : h_(std::move(h)), ms_(std::move(ms)), v_(v), h_basis_(std::move(hb)) {}

  friend NearlySpace make_nearly_space(const RationalFn&, ModelSpace, const NumericOptions&);

  RationalFn h_;
  ModelSpace ms_;
  cplx v_;
  std::vector<RationalFn> h_basis_;
};

// Solves for the projection of the constant 1 onto span{fs} and normalizes it
// into the extremal function: Gram x = c with c_i = conj(f_i(0)), k = sum x_j f_j,
// h = k/sqrt(k(0)).  Returns h together with the solved coordinates.
inline std::pair<RationalFn, std::vector<cplx>> extremal_from_span(
    const std::vector<RationalFn>& fs, const NumericOptions& opts = default_options()) {
  if (fs.empty()) throw ConfigError("extremal problem over an empty span");
  const int n = static_cast<int>(fs.size());
  double max_at_origin = 0.0;
  Eigen::VectorXcd c(n);
  for (int i = 0; i < n; ++i) {
    const cplx f0 = fs[static_cast<size_t>(i)].eval(0.0);
    c(i) = std::conj(f0);
    max_at_origin = std::max(max_at_origin, std::abs(f0));
  }
  if (max_at_origin < 1e-12)
    throw AllVanishAtOrigin("every generator vanishes at the origin");

  const Eigen::MatrixXcd g = inner_product_matrix(fs, fs, opts);
  // Row i of the normal equations is <sum x_j f_j, f_i> = <1, f_i>.
  const Eigen::MatrixXcd a = g.conjugate();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo <= 0.0 || hi / lo >= 1e10)
    throw SingularGram("generator Gram condition " +
                       std::to_string(lo > 0.0 ? hi / lo : -1.0));
  const Eigen::VectorXcd x = es.eigenvectors() *
                             es.eigenvalues().cwiseInverse().asDiagonal() *
                             es.eigenvectors().adjoint() * c;

  RationalFn k = fs[0] * x(0);
  for (int j = 1; j < n; ++j) k = k + fs[static_cast<size_t>(j)] * x(j);
  const cplx k0 = k.eval(0.0);
  if (k0.real() < 1e-12)
    throw AllVanishAtOrigin("projection of 1 vanishes at the origin");
  RationalFn h = k * cplx(1.0 / std::sqrt(k0.real()));
  std::vector<cplx> coords(x.data(), x.data() + n);
  return {std::move(h), std::move(coords)};
}

inline NearlySpace make_nearly_space(const RationalFn& h, ModelSpace ms,
                                     const NumericOptions& opts = default_options()) {
  if (ms.theta().origin_mult() < 1)
    throw ThetaNotVanishingAtZero("inner factor must vanish at the origin");
  if (h.has_pole_in_closed_disk())
    throw PoleInDisk("extremal function must be analytic on the closed disk");

  const cplx h0 = h.eval(0.0);
  if (std::abs(h0.imag()) > 1e-9 || h0.real() <= 0.0)
    throw NotNormalized("h(0) must be real and positive, got " + std::to_string(h0.real()) +
                        " + " + std::to_string(h0.imag()) + "i");
  const double nrm = boundary_norm(h, opts);
  if (std::abs(nrm - 1.0) > 1e-9)
    throw NotNormalized("boundary norm of h is " + std::to_string(nrm));

  std::vector<RationalFn> hb;
  hb.reserve(static_cast<size_t>(ms.dim()));
  for (const auto& e : ms.basis()) hb.push_back(h * e);
  const Eigen::MatrixXcd g = inner_product_matrix(hb, hb, opts);
  const double iso =
      (g - Eigen::MatrixXcd::Identity(ms.dim(), ms.dim())).cwiseAbs().maxCoeff();
  if (iso >= 1e-8)
    throw NotIsometric("multiplication by h distorts the Gram by " + std::to_string(iso));

  const cplx v = boundary_inner_product(ms.theta().to_rational() * h, h, opts);
  if (std::abs(v) >= 1.0 - 1e-10)
    throw ClarkBoundary("|<theta h, h>| = " + std::to_string(std::abs(v)));

  return NearlySpace(h, std::move(ms), v, std::move(hb));
}

inline NearlySpace make_nearly_space(const RationalFn& h, const BlaschkeProduct& theta,
                                     const NumericOptions& opts = default_options()) {
  return make_nearly_space(h, tm_basis(theta, opts), opts);
}

// A subspace realizing a prescribed level value. The reciprocal-affine
// multiplier h = sqrt(1-|v|^2)/(1 - conj(v) theta) multiplies K_theta
// isometrically, and the weighted mean of theta telescopes term by term to
// exactly v. Every |v| < 1 is reachable this way, which no extremal-from-span
// construction guarantees.
inline NearlySpace nearly_space_for_level(const BlaschkeProduct& theta, const cplx& v,
                                          const NumericOptions& opts = default_options()) {
  if (std::abs(v) >= 1.0 - 1e-10)
    throw VNotInDisk("prescribed level value must lie strictly inside the unit disk");
  const RationalFn th = theta.to_rational();
  const double s = std::sqrt(1.0 - std::norm(v));
  const RationalFn h(th.den() * cplx(s), th.den() - std::conj(v) * th.num());
  return make_nearly_space(h, theta, opts);
}

// Reproducing kernel of M: conj(h(lambda)) h(z) k_lambda^theta(z).
inline RationalFn m_reproducing_kernel(const NearlySpace& ns, const cplx& lambda) {
  detail::require_in_disk(lambda);
  return reproducing_kernel_fn(ns.space(), lambda) * ns.h() *
         std::conj(ns.h().eval(lambda));
}

// P_M f = h P_theta(conj(h) f).  The projection coefficients reduce to inner
// products against the orthonormal M basis: <conj(h) f, e_k> = <f, h e_k>.
inline RationalFn project_M(const NearlySpace& ns, const RationalFn& f,
                            const NumericOptions& opts = default_options()) {
  if (!f.pole_free_on_circle()) throw PoleOnCircle("projection input has a pole on the circle");
  const Eigen::MatrixXcd row = inner_product_matrix({f}, ns.h_basis(), opts);
  const ModelVector c = row.row(0).transpose();
  return ns.h() * to_function(ns.space(), c);
}

// Coefficients of P_theta(conj(h) f) in the TM basis, the coordinate form of
// project_M without the final multiplication by h.
inline ModelVector project_M_coeffs(const NearlySpace& ns, const RationalFn& f,
                                    const NumericOptions& opts = default_options()) {
  if (!f.pole_free_on_circle()) throw PoleOnCircle("projection input has a pole on the circle");
  const Eigen::MatrixXcd row = inner_product_matrix({f}, ns.h_basis(), opts);
  return row.row(0).transpose();
}

}  // namespace mslab
