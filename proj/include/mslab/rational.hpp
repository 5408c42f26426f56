#pragma once

// Rational functions num/den with a monic denominator as the canonical form.
// Arithmetic never cancels common factors; helpers that need a cancellation
// (kernel constructions) deflate explicitly at a known root instead.

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "mslab/errors.hpp"
#include "mslab/poly.hpp"

namespace mslab {

class RationalFn {
 public:
  RationalFn() : num_(), den_(ComplexPoly::constant(1.0)) {}
  RationalFn(ComplexPoly num, ComplexPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw ZeroPolynomial("rational function with zero denominator");
    const cplx lead = den_.leading();
    num_ = (cplx(1.0) / lead) * num_;
    den_ = (cplx(1.0) / lead) * den_;
  }
  explicit RationalFn(const ComplexPoly& p) : num_(p), den_(ComplexPoly::constant(1.0)) {}
  static RationalFn constant(cplx a) { return RationalFn(ComplexPoly::constant(a)); }
  static RationalFn z() { return RationalFn(ComplexPoly::monomial(1)); }

  const ComplexPoly& num() const { return num_; }
  const ComplexPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }

  cplx eval(cplx zv) const { return num_.eval(zv) / den_.eval(zv); }

  RationalFn derivative() const {
    return RationalFn(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
  }

  friend RationalFn operator*(const RationalFn& a, const RationalFn& b) {
    return RationalFn(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RationalFn operator*(cplx s, const RationalFn& a) {
    return RationalFn(s * a.num_, a.den_);
  }
  friend RationalFn operator*(const RationalFn& a, cplx s) { return s * a; }
  friend RationalFn operator+(const RationalFn& a, const RationalFn& b) {
    return RationalFn(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFn operator-(const RationalFn& a, const RationalFn& b) {
    return RationalFn(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  RationalFn operator-() const { return RationalFn(-num_, den_); }

  std::vector<cplx> poles(const NumericOptions& opts = default_options()) const {
    std::vector<cplx> out;
    if (den_.degree() < 1) return out;
    for (const auto& [r, m] : poly_roots(den_, opts))
      for (int k = 0; k < m; ++k) out.push_back(r);
    return out;
  }

  // Smallest distance from a denominator root to the unit circle; +inf when
  // the denominator is constant.
  double pole_circle_distance(const NumericOptions& opts = default_options()) const {
    double d = std::numeric_limits<double>::infinity();
    for (cplx p : poles(opts)) d = std::min(d, std::abs(std::abs(p) - 1.0));
    return d;
  }

  bool pole_free_on_circle(double tol = 1e-8,
                           const NumericOptions& opts = default_options()) const {
    return pole_circle_distance(opts) > tol;
  }

  bool has_pole_in_closed_disk(double tol = 1e-10,
                               const NumericOptions& opts = default_options()) const {
    for (cplx p : poles(opts))
      if (std::abs(p) <= 1.0 + tol) return true;
    return false;
  }

  // First k+1 derivatives at a regular point, via Taylor recentering of both
  // polynomials and a truncated series division. Avoids the degree blow-up of
  // symbolic quotient-rule differentiation.
  std::vector<cplx> derivatives_at(cplx z0, int k) const {
    std::vector<cplx> a = num_.shifted_coeffs(z0);
    std::vector<cplx> b = den_.shifted_coeffs(z0);
    a.resize(static_cast<size_t>(k) + 1, 0.0);
    b.resize(static_cast<size_t>(k) + 1, 0.0);
    if (std::abs(b[0]) < 1e-14 * (1.0 + den_.max_abs_coeff()))
      throw NearPole("derivative evaluation at or next to a pole");
    std::vector<cplx> c(static_cast<size_t>(k) + 1, 0.0);
    for (int j = 0; j <= k; ++j) {
      cplx acc = a[static_cast<size_t>(j)];
      for (int i = 0; i < j; ++i) acc -= c[static_cast<size_t>(i)] * b[static_cast<size_t>(j - i)];
      c[static_cast<size_t>(j)] = acc / b[0];
    }
    double fact = 1.0;
    for (int j = 0; j <= k; ++j) {
      c[static_cast<size_t>(j)] *= fact;
      fact *= static_cast<double>(j + 1);
    }
    return c;  // c[j] = f^(j)(z0)
  }

 private:
  ComplexPoly num_;
  ComplexPoly den_;
};

// Taylor coefficients of num/den at the origin by long division. A pole
// strictly inside or on the closed unit disk is flagged, not fatal: callers
// that need H^2 semantics decide what to do with it.
inline std::vector<cplx> taylor_coeffs(const RationalFn& f, int count,
                                       bool* pole_in_disk = nullptr,
                                       const NumericOptions& opts = default_options()) {
  const ComplexPoly& num = f.num();
  const ComplexPoly& den = f.den();
  if (std::abs(den.coeff(0)) < 1e-13 * (1.0 + den.max_abs_coeff()))
    throw PoleAtOrigin("denominator vanishes at the origin");
  if (pole_in_disk != nullptr) *pole_in_disk = f.has_pole_in_closed_disk(1e-10, opts);
  std::vector<cplx> c(static_cast<size_t>(count), 0.0);
  const cplx d0 = den.coeff(0);
  for (int k = 0; k < count; ++k) {
    cplx acc = num.coeff(k);
    for (int j = 1; j <= k && j <= den.degree(); ++j)
      acc -= den.coeff(j) * c[static_cast<size_t>(k - j)];
    c[static_cast<size_t>(k)] = acc / d0;
  }
  return c;
}

}  // namespace mslab
