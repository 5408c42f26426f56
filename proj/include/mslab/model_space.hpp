// Finite-dimensional model space K_theta = H^2 (-) theta H^2 carried by an
// orthonormal Takenaka-Malmquist basis.  The basis depends on the chosen
// ordering of the zeros of theta, so that ordering is fixed at construction
// and persisted; coefficient vectors are meaningless without it.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "mslab/blaschke.hpp"
#include "mslab/errors.hpp"
#include "mslab/options.hpp"
#include "mslab/poly.hpp"
#include "mslab/quadrature.hpp"
#include "mslab/rational.hpp"

namespace mslab {

using ModelVector = Eigen::VectorXcd;

class ModelSpace {
 public:
  // Basis functions are built over the zero order a_1..a_n:
  //   e_k = sqrt(1-|a_k|^2)/(1-conj(a_k)z) * prod_{j<k} (z-a_j)/(1-conj(a_j)z)
  // so that span{e_1..e_k} is the model space of the degree-k prefix.
  static ModelSpace build(const BlaschkeProduct& theta, std::vector<cplx> zero_order,
                          const NumericOptions& opts = default_options()) {
    if (theta.degree() < 1) throw ConfigError("model space requires degree >= 1");
    require_permutation_of_zeros(theta, zero_order);

    std::vector<RationalFn> basis;
    basis.reserve(zero_order.size());
    ComplexPoly prefix_num = ComplexPoly::constant(1.0);
    ComplexPoly prefix_den = ComplexPoly::constant(1.0);
    for (const cplx& a : zero_order) {
      const double s = std::sqrt(1.0 - std::norm(a));
      basis.emplace_back(prefix_num * cplx(s), prefix_den * ComplexPoly({1.0, -std::conj(a)}));
      prefix_num = prefix_num * ComplexPoly({-a, 1.0});
      prefix_den = prefix_den * ComplexPoly({1.0, -std::conj(a)});
    }

    ModelSpace ms(theta, std::move(zero_order), std::move(basis));
    ms.validate_gram(opts);
    ms.build_conjugation(opts);
    return ms;
  }

  int dim() const { return static_cast<int>(basis_.size()); }
  const BlaschkeProduct& theta() const { return theta_; }
  const std::vector<cplx>& zero_order() const { return order_; }
  const std::vector<RationalFn>& basis() const { return basis_; }
  const RationalFn& basis_fn(int k) const { return basis_[static_cast<size_t>(k)]; }
  const Eigen::MatrixXcd& conjugation_matrix() const { return conj_matrix_; }

  // C f = theta * conj(z f) on the circle.  Antilinear: the matrix acts on
  // conjugated coefficients and is never composed as if it were linear.
  ModelVector apply_conjugation(const ModelVector& coeffs) const {
    if (coeffs.size() != dim()) throw DimensionMismatch("conjugation: coefficient length mismatch");
    return conj_matrix_ * coeffs.conjugate();
  }

 private:
  ModelSpace(BlaschkeProduct theta, std::vector<cplx> order, std::vector<RationalFn> basis)
      : theta_(std::move(theta)), order_(std::move(order)), basis_(std::move(basis)) {}

  static void require_permutation_of_zeros(const BlaschkeProduct& theta,
                                           const std::vector<cplx>& order) {
    std::vector<cplx> want = theta.zero_list();
    std::vector<cplx> got = order;
    const auto lt = [](const cplx& x, const cplx& y) {
      if (x.real() != y.real()) return x.real() < y.real();
      return x.imag() < y.imag();
    };
    std::sort(got.begin(), got.end(), lt);
    std::sort(want.begin(), want.end(), lt);
    if (got.size() != want.size()) throw ConfigError("zero order length != degree");
    for (size_t i = 0; i < got.size(); ++i)
      if (std::abs(got[i] - want[i]) > 1e-12)
        throw ConfigError("zero order is not a permutation of the zeros");
  }

  void validate_gram(const NumericOptions& opts) const {
    const Eigen::MatrixXcd g = inner_product_matrix(basis_, basis_, opts);
    const double resid =
        (g - Eigen::MatrixXcd::Identity(dim(), dim())).cwiseAbs().maxCoeff();
    if (resid >= opts.verify_tol)
      throw InternalCheckFailed("basis Gram deviates from identity by " + std::to_string(resid));
  }

  // (M_C)_{ik} = <C e_k, e_i> = <theta, z e_k e_i>; symmetric in (i,k).
  void build_conjugation(const NumericOptions& opts) {
    const int n = dim();
    const RationalFn th = theta_.to_rational();
    std::vector<RationalFn> prods;
    prods.reserve(static_cast<size_t>(n) * (n + 1) / 2);
    for (int i = 0; i < n; ++i)
      for (int k = i; k < n; ++k)
        prods.push_back(RationalFn::z() * basis_[static_cast<size_t>(i)] *
                        basis_[static_cast<size_t>(k)]);
    const Eigen::MatrixXcd row = inner_product_matrix({th}, prods, opts);
    conj_matrix_.resize(n, n);
    int idx = 0;
    for (int i = 0; i < n; ++i)
      for (int k = i; k < n; ++k, ++idx) conj_matrix_(i, k) = conj_matrix_(k, i) = row(0, idx);
    const double resid =
        (conj_matrix_ * conj_matrix_.conjugate() - Eigen::MatrixXcd::Identity(n, n))
            .cwiseAbs()
            .maxCoeff();
    if (resid >= opts.verify_tol)
      throw InternalCheckFailed("conjugation fails to square to identity: " +
                                std::to_string(resid));
  }

  BlaschkeProduct theta_;
  std::vector<cplx> order_;
  std::vector<RationalFn> basis_;
  Eigen::MatrixXcd conj_matrix_;
};

// Origin zeros first (so e_1 = 1 whenever theta(0) = 0), then the remaining
// zeros in canonical order.
inline std::vector<cplx> default_zero_order(const BlaschkeProduct& theta) {
  std::vector<cplx> order;
  order.reserve(static_cast<size_t>(theta.degree()));
  for (int k = 0; k < theta.origin_mult(); ++k) order.push_back(0.0);
  for (const auto& z : theta.zeros())
    if (std::abs(z.point) != 0.0)
      for (int k = 0; k < z.mult; ++k) order.push_back(z.point);
  return order;
}

inline ModelSpace tm_basis(const BlaschkeProduct& theta, const std::vector<cplx>& zero_order,
                           const NumericOptions& opts = default_options()) {
  return ModelSpace::build(theta, zero_order, opts);
}

inline ModelSpace tm_basis(const BlaschkeProduct& theta,
                           const NumericOptions& opts = default_options()) {
  return ModelSpace::build(theta, default_zero_order(theta), opts);
}

namespace detail {

inline void require_in_disk(const cplx& lambda) {
  if (std::abs(lambda) >= 1.0 - 1e-10) throw LambdaNotInDisk("|lambda| >= 1 - 1e-10");
}

inline ComplexPoly poly_pow(const ComplexPoly& p, int e) {
  ComplexPoly out = ComplexPoly::constant(1.0);
  for (int k = 0; k < e; ++k) out = out * p;
  return out;
}

}  // namespace detail

// Coefficients of the reproducing kernel are exact: <k_lambda, e_k> =
// conj(e_k(lambda)).
inline ModelVector reproducing_kernel(const ModelSpace& ms, const cplx& lambda) {
  detail::require_in_disk(lambda);
  ModelVector c(ms.dim());
  for (int k = 0; k < ms.dim(); ++k)
    c(k) = std::conj(ms.basis_fn(k).eval(lambda));
  return c;
}

// Closed form (1 - conj(theta(lambda)) theta(z))/(1 - conj(lambda) z), with the
// spurious pole at 1/conj(lambda) removed by synthetic division so every pole
// of the result lies outside the closed disk.
inline RationalFn reproducing_kernel_fn(const ModelSpace& ms, const cplx& lambda) {
  detail::require_in_disk(lambda);
  const RationalFn th = ms.theta().to_rational();
  const cplx tl = ms.theta().eval(lambda);
  ComplexPoly num = th.den() - th.num() * std::conj(tl);
  if (std::abs(lambda) < 1e-14) return RationalFn(num, th.den());
  if (std::abs(tl) < 1e-14)
    return RationalFn(ComplexPoly::constant(1.0),
                      ComplexPoly({1.0, -std::conj(lambda)}));
  const cplx pole = 1.0 / std::conj(lambda);
  double rem = 0.0;
  ComplexPoly reduced = num.deflated(pole, &rem);
  if (rem > 1e-8 * (1.0 + num.max_abs_coeff()))
    throw InternalCheckFailed("kernel numerator fails to cancel the off-disk pole");
  return RationalFn(reduced * (-1.0 / std::conj(lambda)), th.den());
}

// Conjugate kernel via the conjugation matrix acting on the plain kernel.
inline ModelVector kernel_conjugate(const ModelSpace& ms, const cplx& lambda) {
  return ms.apply_conjugation(reproducing_kernel(ms, lambda));
}

// Same object by its analytic formula (theta(z) - theta(lambda))/(z - lambda),
// the divided difference of theta at lambda.
inline RationalFn kernel_conjugate_fn(const ModelSpace& ms, const cplx& lambda) {
  detail::require_in_disk(lambda);
  const RationalFn th = ms.theta().to_rational();
  const cplx tl = ms.theta().eval(lambda);
  ComplexPoly num = th.num() - th.den() * tl;
  double rem = 0.0;
  ComplexPoly reduced = num.deflated(lambda, &rem);
  if (rem > 1e-8 * (1.0 + num.max_abs_coeff()))
    throw InternalCheckFailed("divided difference fails to cancel at lambda");
  return RationalFn(reduced, th.den());
}

// n-th derivative evaluation kernel n! z^n (1 - conj(v) theta)/(1-conj(lambda)z)^{n+1}
// with v = theta(lambda).  Valid only when lambda is a zero of theta' of order
// at least n, which is checked numerically and enforced.
inline RationalFn derivative_kernel_fn(const ModelSpace& ms, const cplx& lambda, int order) {
  detail::require_in_disk(lambda);
  if (order < 0) throw ConfigError("derivative order must be >= 0");
  const RationalFn th = ms.theta().to_rational();
  const auto ders = th.derivatives_at(lambda, order);
  for (int k = 1; k <= order; ++k)
    if (std::abs(ders[static_cast<size_t>(k)]) > 1e-8)
      throw MultiplicityPreconditionFailed(
          "theta^(" + std::to_string(k) + ")(lambda) = " +
          std::to_string(std::abs(ders[static_cast<size_t>(k)])) + " is not ~0");
  const cplx v = ders[0];
  double fact = 1.0;
  for (int k = 2; k <= order; ++k) fact *= k;
  const ComplexPoly num = ComplexPoly::monomial(order, fact) *
                          (th.den() - th.num() * std::conj(v));
  const ComplexPoly den =
      th.den() * detail::poly_pow(ComplexPoly({1.0, -std::conj(lambda)}), order + 1);
  return RationalFn(num, den);
}

inline ModelVector project(const ModelSpace& ms, const RationalFn& f,
                           const NumericOptions& opts = default_options()) {
  if (!f.pole_free_on_circle()) throw PoleOnCircle("projection input has a pole on the circle");
  const Eigen::MatrixXcd row = inner_product_matrix({f}, ms.basis(), opts);
  return row.row(0).transpose();
}

inline ModelVector derivative_kernel(const ModelSpace& ms, const cplx& lambda, int order,
                                     const NumericOptions& opts = default_options()) {
  return project(ms, derivative_kernel_fn(ms, lambda, order), opts);
}

// Linear combination of basis functions as a single rational over the full
// denominator prod (1 - conj(a_j) z).  Stored basis denominators are monic, so
// each term must be rescaled by the leading coefficient of the product-form
// denominator it was normalized away from.
inline RationalFn to_function(const ModelSpace& ms, const ModelVector& coeffs) {
  if (coeffs.size() != ms.dim()) throw DimensionMismatch("coefficient length != dim");
  const auto& order = ms.zero_order();
  const size_t n = order.size();
  std::vector<ComplexPoly> den_prefix(n + 1, ComplexPoly::constant(1.0));
  for (size_t j = 0; j < n; ++j)
    den_prefix[j + 1] = den_prefix[j] * ComplexPoly({1.0, -std::conj(order[j])});
  ComplexPoly num;  // zero
  for (int k = 0; k < ms.dim(); ++k) {
    ComplexPoly tail = ComplexPoly::constant(1.0);
    for (size_t j = static_cast<size_t>(k) + 1; j < n; ++j)
      tail = tail * ComplexPoly({1.0, -std::conj(order[j])});
    const cplx scale = coeffs(k) * den_prefix[static_cast<size_t>(k) + 1].leading();
    num = num + ms.basis_fn(k).num() * tail * scale;
  }
  return RationalFn(num, den_prefix[n]);
}

inline cplx eval_vector(const ModelSpace& ms, const ModelVector& coeffs, const cplx& z) {
  if (coeffs.size() != ms.dim()) throw DimensionMismatch("coefficient length != dim");
  cplx s = 0.0;
  for (int k = 0; k < ms.dim(); ++k) s += coeffs(k) * ms.basis_fn(k).eval(z);
  return s;
}

}  // namespace mslab
