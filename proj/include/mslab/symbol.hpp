#pragma once

// Boundary symbols: finite sums of f_i(t) * conj(g_i(t)) on the unit circle,
// with every f_i, g_i rational and pole-free near the circle. This closes the
// symbol class under conjugation, which plain rational functions do not.

#include <utility>
#include <vector>

#include "mslab/errors.hpp"
#include "mslab/rational.hpp"

namespace mslab {

struct SymbolTerm {
  RationalFn analytic;   // f_i
  RationalFn conjugate;  // g_i, entering as conj(g_i(t))
};

class BoundarySymbol {
 public:
  BoundarySymbol() = default;
  explicit BoundarySymbol(RationalFn f) { terms_.push_back({std::move(f), RationalFn::constant(1.0)}); }
  explicit BoundarySymbol(std::vector<SymbolTerm> terms) : terms_(std::move(terms)) {}

  static BoundarySymbol analytic(RationalFn f) { return BoundarySymbol(std::move(f)); }
  static BoundarySymbol conjugate_of(RationalFn g) {
    BoundarySymbol s;
    s.terms_.push_back({RationalFn::constant(1.0), std::move(g)});
    return s;
  }

  const std::vector<SymbolTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  // conj of the whole symbol: swap the roles in every term.
  BoundarySymbol conjugated() const {
    BoundarySymbol s;
    for (const auto& t : terms_) s.terms_.push_back({t.conjugate, t.analytic});
    return s;
  }

  // Symbol times |h|^2: each term picks up h on both sides.
  BoundarySymbol weighted_by_modulus_sq(const RationalFn& h) const {
    BoundarySymbol s;
    for (const auto& t : terms_) s.terms_.push_back({t.analytic * h, t.conjugate * h});
    return s;
  }

  BoundarySymbol scaled(cplx a) const {
    BoundarySymbol s;
    for (const auto& t : terms_) s.terms_.push_back({a * t.analytic, t.conjugate});
    return s;
  }

  friend BoundarySymbol operator+(const BoundarySymbol& a, const BoundarySymbol& b) {
    BoundarySymbol s;
    s.terms_ = a.terms_;
    s.terms_.insert(s.terms_.end(), b.terms_.begin(), b.terms_.end());
    return s;
  }

  cplx eval(cplx z) const {
    cplx acc = 0.0;
    for (const auto& t : terms_) acc += t.analytic.eval(z) * std::conj(t.conjugate.eval(z));
    return acc;
  }

  void require_pole_free_on_circle(double tol = 1e-8,
                                   const NumericOptions& opts = default_options()) const {
    for (const auto& t : terms_) {
      if (!t.analytic.pole_free_on_circle(tol, opts) || !t.conjugate.pole_free_on_circle(tol, opts))
        throw PoleOnCircle("boundary symbol has a pole within tolerance of the unit circle");
    }
  }

 private:
  std::vector<SymbolTerm> terms_;
};

}  // namespace mslab
