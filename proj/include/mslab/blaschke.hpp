#pragma once

// Finite Blaschke products: a unimodular constant times a multiset of zeros
// strictly inside the unit disk. The factored form is kept as the source of
// truth; polynomial num/den forms are derived on demand.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "mslab/errors.hpp"
#include "mslab/quadrature.hpp"
#include "mslab/rational.hpp"

namespace mslab {

struct BlaschkeZero {
  cplx point;
  int mult = 1;
};

namespace detail {

// Tolerant canonical order: points are compared component-wise with a slack
// that absorbs last-ulp noise, so conjugate pairs computed from perturbed
// inputs always sort the same way.
inline bool cplx_less(cplx a, cplx b) {
  if (std::abs(a.real() - b.real()) > 1e-10) return a.real() < b.real();
  if (std::abs(a.imag() - b.imag()) > 1e-10) return a.imag() < b.imag();
  return false;
}

}  // namespace detail

class BlaschkeProduct {
 public:
  // Degree 0 (empty zero multiset) is allowed: it is the constant divisor and
  // shows up as a quotient. Spaces built on top require degree >= 1 themselves.
  explicit BlaschkeProduct(cplx constant = 1.0, std::vector<BlaschkeZero> zeros = {})
      : constant_(constant) {
    const double cm = std::abs(constant_);
    if (std::abs(cm - 1.0) > 1e-12)
      throw ConfigError("blaschke constant is not unimodular");
    constant_ /= cm;
    for (auto& zr : zeros) {
      if (zr.mult <= 0) throw ConfigError("blaschke zero with nonpositive multiplicity");
      if (std::abs(zr.point) <= 1e-10) zr.point = 0.0;  // snap to an exact origin zero
      if (std::abs(zr.point) >= 1.0 - 1e-10)
        throw ConfigError("blaschke zero not strictly inside the unit disk");
    }
    std::sort(zeros.begin(), zeros.end(),
              [](const BlaschkeZero& a, const BlaschkeZero& b) {
                return detail::cplx_less(a.point, b.point);
              });
    for (const auto& zr : zeros) {
      if (!zeros_.empty() && std::abs(zeros_.back().point - zr.point) <= 1e-12)
        zeros_.back().mult += zr.mult;
      else
        zeros_.push_back(zr);
    }
  }

  cplx constant() const { return constant_; }
  const std::vector<BlaschkeZero>& zeros() const { return zeros_; }
  int degree() const {
    int d = 0;
    for (const auto& zr : zeros_) d += zr.mult;
    return d;
  }
  int origin_mult() const {
    for (const auto& zr : zeros_)
      if (zr.point == cplx(0.0)) return zr.mult;
    return 0;
  }
  bool vanishes_at_zero() const { return origin_mult() > 0; }

  // Zeros expanded with repetition, canonical order.
  std::vector<cplx> zero_list() const {
    std::vector<cplx> out;
    for (const auto& zr : zeros_)
      for (int k = 0; k < zr.mult; ++k) out.push_back(zr.point);
    return out;
  }

  cplx eval(cplx z) const {
    cplx acc = constant_;
    for (const auto& zr : zeros_) {
      const cplx dnm = 1.0 - std::conj(zr.point) * z;
      if (std::abs(dnm) <= 1e-12)
        throw NearPole("blaschke evaluation at a reflected pole");
      const cplx factor = (z - zr.point) / dnm;
      for (int k = 0; k < zr.mult; ++k) acc *= factor;
    }
    return acc;
  }

  RationalFn to_rational() const {
    ComplexPoly num = ComplexPoly::constant(constant_);
    ComplexPoly den = ComplexPoly::constant(1.0);
    for (const auto& zr : zeros_)
      for (int k = 0; k < zr.mult; ++k) {
        num = num * ComplexPoly({-zr.point, 1.0});
        if (zr.point != cplx(0.0)) den = den * ComplexPoly({1.0, -std::conj(zr.point)});
      }
    return RationalFn(num, den);
  }

  // Remove one origin zero: the quotient by the factor z.
  BlaschkeProduct divide_by_z() const {
    if (!vanishes_at_zero())
      throw ThetaNotVanishingAtZero("quotient by z requires a zero at the origin");
    std::vector<BlaschkeZero> zs;
    for (const auto& zr : zeros_) {
      BlaschkeZero copy = zr;
      if (copy.point == cplx(0.0)) copy.mult -= 1;
      if (copy.mult > 0) zs.push_back(copy);
    }
    return BlaschkeProduct(constant_, std::move(zs));
  }

  BlaschkeProduct with_constant(cplx c) const {
    return BlaschkeProduct(c, zeros_);
  }

 private:
  cplx constant_;
  std::vector<BlaschkeZero> zeros_;  // canonical order, distinct points
};

// In-disk solutions of theta(z) = v with clustered multiplicities. All roots
// of num - v*den lie in the open disk when |v| < 1 (Rouche against num), so
// the multiplicity sum must equal the degree.
inline std::vector<std::pair<cplx, int>> solve_theta_eq(
    const BlaschkeProduct& theta, cplx v, const NumericOptions& opts = default_options()) {
  if (std::abs(v) >= 1.0 - 1e-10)
    throw VNotInDisk("level value v must lie strictly inside the unit disk");
  const RationalFn th = theta.to_rational();
  const ComplexPoly target = th.num() - v * th.den();
  auto roots = poly_roots(target, opts);
  std::vector<std::pair<cplx, int>> inside;
  int total = 0;
  for (const auto& [r, m] : roots) {
    if (std::abs(r) < 1.0 + 1e-8) {
      inside.emplace_back(r, m);
      total += m;
    }
  }
  if (total != theta.degree())
    throw InternalCheckFailed("level-set multiplicities do not sum to the degree");
  return inside;
}

// (theta - v) / (1 - conj(v) theta) as a Blaschke product of the same degree.
inline BlaschkeProduct frostman_shift(const BlaschkeProduct& theta, cplx v,
                                      const NumericOptions& opts = default_options()) {
  if (std::abs(v) >= 1.0 - 1e-10)
    throw VNotInDisk("frostman shift parameter must lie strictly inside the unit disk");
  auto roots = solve_theta_eq(theta, v, opts);
  std::vector<BlaschkeZero> zs;
  for (const auto& [r, m] : roots) zs.push_back({r, m});
  // Recover the unimodular constant from a probe point away from the zeros.
  const std::vector<cplx> probes = {0.0, 0.5, -0.5, cplx(0.0, 0.5), cplx(0.0, -0.5),
                                    0.25, cplx(0.3, 0.2)};
  for (cplx z0 : probes) {
    cplx prod = 1.0;
    bool usable = true;
    for (const auto& zr : zs) {
      const cplx f = (z0 - zr.point) / (1.0 - std::conj(zr.point) * z0);
      if (std::abs(f) < 1e-3) {
        usable = false;
        break;
      }
      for (int k = 0; k < zr.mult; ++k) prod *= f;
    }
    if (!usable) continue;
    const cplx tv = theta.eval(z0);
    const cplx target = (tv - v) / (1.0 - std::conj(v) * tv);
    const cplx c = target / prod;
    if (std::abs(std::abs(c) - 1.0) > 1e-8)
      throw InternalCheckFailed("frostman shift constant is not unimodular");
    return BlaschkeProduct(c / std::abs(c), std::move(zs));
  }
  throw InternalCheckFailed("no usable probe point for the frostman shift constant");
}

// All sub-multisets of the zero set, as constant-1 products, ordered by degree
// then lexicographically on the expanded zero list. Count: prod (mult_i + 1).
// divisor_choice_vectors returns the aligned per-distinct-zero counts.
inline std::vector<std::vector<int>> divisor_choice_vectors(const BlaschkeProduct& theta) {
  const auto& zs = theta.zeros();
  std::vector<std::vector<int>> out;
  std::vector<int> choice(zs.size(), 0);
  while (true) {
    out.push_back(choice);
    size_t k = 0;
    while (k < zs.size()) {
      if (choice[k] < zs[k].mult) {
        ++choice[k];
        std::fill(choice.begin(), choice.begin() + static_cast<long>(k), 0);
        break;
      }
      ++k;
    }
    if (k == zs.size()) break;
  }
  auto expanded = [&](const std::vector<int>& ch) {
    std::vector<cplx> e;
    for (size_t i = 0; i < ch.size(); ++i)
      for (int j = 0; j < ch[i]; ++j) e.push_back(zs[i].point);
    return e;
  };
  std::sort(out.begin(), out.end(), [&](const std::vector<int>& a, const std::vector<int>& b) {
    const auto ea = expanded(a), eb = expanded(b);
    if (ea.size() != eb.size()) return ea.size() < eb.size();
    for (size_t i = 0; i < ea.size(); ++i) {
      if (detail::cplx_less(ea[i], eb[i])) return true;
      if (detail::cplx_less(eb[i], ea[i])) return false;
    }
    return false;
  });
  return out;
}

inline BlaschkeProduct divisor_from_choice(const BlaschkeProduct& theta,
                                           const std::vector<int>& choice) {
  const auto& zs = theta.zeros();
  std::vector<BlaschkeZero> sel;
  for (size_t i = 0; i < zs.size(); ++i)
    if (choice[i] > 0) sel.push_back({zs[i].point, choice[i]});
  return BlaschkeProduct(1.0, std::move(sel));
}

inline BlaschkeProduct complement_from_choice(const BlaschkeProduct& theta,
                                              const std::vector<int>& choice) {
  const auto& zs = theta.zeros();
  std::vector<BlaschkeZero> sel;
  for (size_t i = 0; i < zs.size(); ++i)
    if (zs[i].mult - choice[i] > 0) sel.push_back({zs[i].point, zs[i].mult - choice[i]});
  return BlaschkeProduct(1.0, std::move(sel));
}

inline std::vector<BlaschkeProduct> divisors(const BlaschkeProduct& theta) {
  std::vector<BlaschkeProduct> out;
  for (const auto& ch : divisor_choice_vectors(theta))
    out.push_back(divisor_from_choice(theta, ch));
  return out;
}

struct SpectrumSet {
  std::vector<cplx> disk_points;  // distinct zeros of theta
  bool circle_part_empty = true;
  std::string note;
};

// For a finite product the boundary part is structurally empty: the function
// extends analytically across the whole circle.
inline SpectrumSet spectrum_set(const BlaschkeProduct& theta) {
  SpectrumSet s;
  for (const auto& zr : theta.zeros()) s.disk_points.push_back(zr.point);
  s.circle_part_empty = true;
  s.note = "circle part empty by structure: finite products are analytic across the boundary";
  return s;
}

// In-disk zeros of the derivative, an exploration helper for level-set geometry.
inline std::vector<std::pair<cplx, int>> critical_points(
    const BlaschkeProduct& theta, const NumericOptions& opts = default_options()) {
  const RationalFn d = theta.to_rational().derivative();
  std::vector<std::pair<cplx, int>> out;
  if (d.num().degree() < 1) return out;
  for (const auto& [r, m] : poly_roots(d.num(), opts))
    if (std::abs(r) < 1.0) out.emplace_back(r, m);
  return out;
}

}  // namespace mslab
