// Deterministic random instances for property tests and verification
// batteries.  All draws resample on degenerate geometry, so a fixed seed
// yields a reproducible instance stream.
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "mslab/blaschke.hpp"
#include "mslab/errors.hpp"
#include "mslab/nearly_invariant.hpp"
#include "mslab/options.hpp"
#include "mslab/poly.hpp"
#include "mslab/rational.hpp"

namespace mslab {

inline cplx random_disk_point(std::mt19937_64& rng, double rmax) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = rmax * std::sqrt(unit(rng));
  const double t = 2.0 * std::numbers::pi * unit(rng);
  return cplx(r * std::cos(t), r * std::sin(t));
}

inline cplx random_unimodular(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double t = 2.0 * std::numbers::pi * unit(rng);
  return cplx(std::cos(t), std::sin(t));
}

// Degree-n product with at least origin_mult zeros at 0 and the rest drawn
// from |z| <= 0.8, where quadrature converges comfortably.
inline BlaschkeProduct random_blaschke(std::mt19937_64& rng, int degree, int origin_mult = 1,
                                       bool random_constant = false) {
  if (degree < origin_mult) throw ConfigError("degree below requested origin multiplicity");
  std::vector<BlaschkeZero> zeros;
  if (origin_mult > 0) zeros.push_back({0.0, origin_mult});
  for (int k = origin_mult; k < degree; ++k) {
    cplx a = random_disk_point(rng, 0.8);
    if (std::abs(a) < 0.05) a += cplx(0.1, 0.0);
    zeros.push_back({a, 1});
  }
  const cplx c = random_constant ? random_unimodular(rng) : cplx(1.0);
  return BlaschkeProduct(c, zeros);
}

// Random member of the model space, built from random TM coefficients.
inline ModelVector random_model_vector(std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  ModelVector c(dim);
  for (int k = 0; k < dim; ++k) c(k) = cplx(coef(rng), coef(rng));
  return c;
}

// Random nearly backward-shift-invariant space of dimension n.  Construction:
// M = u K_{z^n} for a polynomial u with zeros outside the closed disk.  The
// extremal solve gives h = u q with a polynomial q whose zeros Hitt's theorem
// forces outside the closed disk; reflecting those zeros into the disk yields
// the inner factor theta with M = h K_theta, which is then fully validated.
inline NearlySpace random_nearly_space(std::mt19937_64& rng, int n,
                                       const NumericOptions& opts = default_options()) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> u_deg_dist(0, 2);
  for (int attempt = 0; attempt < 64; ++attempt) {
    ComplexPoly u = ComplexPoly::constant(1.0);
    const int du = u_deg_dist(rng);
    for (int j = 0; j < du; ++j) {
      const double r = 1.4 + 2.0 * unit(rng);
      const double t = 2.0 * std::numbers::pi * unit(rng);
      const cplx w(r * std::cos(t), r * std::sin(t));
      u = u * ComplexPoly({1.0, -1.0 / w});
    }
    std::vector<RationalFn> fs;
    fs.reserve(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) fs.emplace_back(u * ComplexPoly::monomial(k));

    try {
      auto [h, x] = extremal_from_span(fs, opts);
      const ComplexPoly q{x};
      const int m = q.degree();
      if (m < 0) continue;
      std::vector<BlaschkeZero> zeros;
      if (n - m > 0) zeros.push_back({0.0, n - m});
      bool ok = true;
      if (m > 0) {
        for (const auto& [root, mult] : poly_roots(q, opts)) {
          if (std::abs(root) <= 1.0 + 1e-8) {
            ok = false;
            break;
          }
          zeros.push_back({1.0 / std::conj(root), mult});
        }
      }
      if (!ok) continue;
      return make_nearly_space(h, BlaschkeProduct(1.0, zeros), opts);
    } catch (const Error&) {
      continue;
    }
  }
  throw InternalCheckFailed("random nearly-invariant instance generation kept degenerating");
}

}  // namespace mslab
