#pragma once

// Boundary inner products on the unit circle by uniform trapezoid sums with
// adaptive node doubling. For integrands analytic in an annulus around the
// circle (all rationals here are, once poles are checked) the trapezoid rule
// converges geometrically, so the doubling test is a sound error estimate.
//
// <f, g> = (1/2pi) int_0^{2pi} f(e^it) conj(g(e^it)) dt.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "mslab/errors.hpp"
#include "mslab/symbol.hpp"

namespace mslab {

namespace detail {

inline std::vector<cplx> circle_nodes(int count, bool odd_half) {
  // odd_half: the count new nodes interleaving an existing count-node grid.
  std::vector<cplx> nodes(static_cast<size_t>(count));
  const double step = 2.0 * std::numbers::pi / static_cast<double>(count);
  const double offset = odd_half ? 0.5 * step : 0.0;
  for (int k = 0; k < count; ++k) {
    const double t = step * static_cast<double>(k) + offset;
    nodes[static_cast<size_t>(k)] = cplx(std::cos(t), std::sin(t));
  }
  return nodes;
}

inline bool entry_converged(cplx prev, cplx curr, double target) {
  return std::abs(curr - prev) <= target * (1.0 + std::abs(curr));
}

}  // namespace detail

// Mean of a scalar integrand over the circle, adaptively refined.
inline cplx adaptive_circle_mean(const std::function<cplx(cplx)>& integrand,
                                 const NumericOptions& opts = default_options()) {
  int nodes = opts.quad_min_nodes;
  cplx sum = 0.0;
  for (cplx z : detail::circle_nodes(nodes, false)) sum += integrand(z);
  cplx prev = sum / static_cast<double>(nodes);
  while (nodes < opts.quad_max_nodes) {
    cplx add = 0.0;
    for (cplx z : detail::circle_nodes(nodes, true)) add += integrand(z);
    sum += add;
    nodes *= 2;
    const cplx curr = sum / static_cast<double>(nodes);
    if (detail::entry_converged(prev, curr, opts.quad_target)) return curr;
    prev = curr;
  }
  throw QuadratureDivergence("circle quadrature did not converge within the node cap");
}

namespace detail {

inline Eigen::MatrixXcd sample_matrix(const std::vector<RationalFn>& fns,
                                      const std::vector<cplx>& nodes) {
  Eigen::MatrixXcd S(static_cast<Eigen::Index>(fns.size()),
                     static_cast<Eigen::Index>(nodes.size()));
  for (size_t i = 0; i < fns.size(); ++i)
    for (size_t k = 0; k < nodes.size(); ++k)
      S(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = fns[i].eval(nodes[k]);
  return S;
}

}  // namespace detail

// M(i, j) = <fs[i], gs[j]>, all entries refined together on a shared grid.
inline Eigen::MatrixXcd inner_product_matrix(const std::vector<RationalFn>& fs,
                                             const std::vector<RationalFn>& gs,
                                             const NumericOptions& opts = default_options()) {
  const auto p = static_cast<Eigen::Index>(fs.size());
  const auto q = static_cast<Eigen::Index>(gs.size());
  if (p == 0 || q == 0) return Eigen::MatrixXcd::Zero(p, q);
  for (const auto& f : fs)
    if (!f.pole_free_on_circle(1e-8, opts))
      throw PoleOnCircle("inner product operand has a pole within tolerance of the circle");
  for (const auto& g : gs)
    if (!g.pole_free_on_circle(1e-8, opts))
      throw PoleOnCircle("inner product operand has a pole within tolerance of the circle");

  int nodes = opts.quad_min_nodes;
  auto grid = detail::circle_nodes(nodes, false);
  Eigen::MatrixXcd sum = detail::sample_matrix(fs, grid) * detail::sample_matrix(gs, grid).adjoint();
  Eigen::MatrixXcd prev = sum / static_cast<double>(nodes);
  while (nodes < opts.quad_max_nodes) {
    grid = detail::circle_nodes(nodes, true);
    sum += detail::sample_matrix(fs, grid) * detail::sample_matrix(gs, grid).adjoint();
    nodes *= 2;
    Eigen::MatrixXcd curr = sum / static_cast<double>(nodes);
    bool ok = true;
    for (Eigen::Index i = 0; i < p && ok; ++i)
      for (Eigen::Index j = 0; j < q && ok; ++j)
        ok = detail::entry_converged(prev(i, j), curr(i, j), opts.quad_target);
    if (ok) return curr;
    prev = std::move(curr);
  }
  throw QuadratureDivergence("circle quadrature did not converge within the node cap");
}

inline cplx boundary_inner_product(const RationalFn& f, const RationalFn& g,
                                   const NumericOptions& opts = default_options()) {
  return inner_product_matrix({f}, {g}, opts)(0, 0);
}

inline cplx boundary_inner_product(const BoundarySymbol& f, const RationalFn& g,
                                   const NumericOptions& opts = default_options()) {
  f.require_pole_free_on_circle(1e-8, opts);
  if (!g.pole_free_on_circle(1e-8, opts))
    throw PoleOnCircle("inner product operand has a pole within tolerance of the circle");
  return adaptive_circle_mean(
      [&](cplx z) { return f.eval(z) * std::conj(g.eval(z)); }, opts);
}

inline double boundary_norm(const RationalFn& f,
                            const NumericOptions& opts = default_options()) {
  const double n2 = boundary_inner_product(f, f, opts).real();
  return std::sqrt(std::max(0.0, n2));
}

}  // namespace mslab
