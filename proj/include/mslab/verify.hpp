#pragma once
// One-call verification battery over a configured space: every structural
// invariant the library promises, reported as named pass/fail rows with the
// measured residual. The CLI prints these; tests pin them down.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <mslab/crofoot.hpp>
#include <mslab/nearly_invariant.hpp>
#include <mslab/operators.hpp>
#include <mslab/symbol.hpp>

namespace mslab {

struct CheckResult {
  std::string name;
  bool passed = false;
  double residual = 0.0;
};

// Runs the full invariant suite on one space. Rank-style checks report the
// deviation from the expected integer as their residual; all residual-style
// checks compare against opts.verify_tol.
inline std::vector<CheckResult> verification_battery(const NearlySpace& ns, std::uint64_t seed,
                                                     const NumericOptions& opts = default_options()) {
  const ModelSpace& ms = ns.space();
  const int n = ms.dim();
  const cplx v = ns.v();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const double tol = opts.verify_tol;
  std::vector<CheckResult> out;
  auto push = [&out, tol](const std::string& name, double residual) {
    out.push_back({name, residual < tol, residual});
  };

  push("tm-basis-orthonormality", (inner_product_matrix(ms.basis(), ms.basis(), opts) - id).norm());

  const Eigen::MatrixXcd& mc = ms.conjugation_matrix();
  push("conjugation-involution", (mc * mc.conjugate() - id).norm());

  push("extremal-multiplier-isometry",
       (inner_product_matrix(ns.h_basis(), ns.h_basis(), opts) - id).norm());

  const BoundarySymbol sym_z = BoundarySymbol::analytic(RationalFn::z());
  const BoundarySymbol sym_real =
      BoundarySymbol::analytic(RationalFn::z()) + BoundarySymbol::conjugate_of(RationalFn::z());
  push("d-symmetry-analytic", d_symmetry_check(ns, sym_z, opts));
  push("d-symmetry-real-part", d_symmetry_check(ns, sym_real, opts));

  push("shift-intertwining", intertwining_check(ns, opts));

  const DefectOperators defects = defect_operators(ms, v, opts);
  const double sv_expected = std::sqrt(1.0 - std::norm(v));
  out.push_back({"defect-rank-forward",
                 defects.rank_a == 1 && std::abs(defects.sv_a - sv_expected) < 1e-6,
                 std::abs(defects.sv_a - sv_expected)});
  out.push_back({"defect-rank-adjoint",
                 defects.rank_b == 1 && std::abs(defects.sv_b - sv_expected) < 1e-6,
                 std::abs(defects.sv_b - sv_expected)});

  const CyclicityReport cyc = cyclicity_check(ms, v, opts);
  const int worst = std::max({std::abs(cyc.a_from_one - n), std::abs(cyc.a_from_flip - n),
                              std::abs(cyc.b_from_one - n), std::abs(cyc.b_from_flip - n)});
  out.push_back({"generator-cyclicity", worst == 0, static_cast<double>(worst)});

  // Seeded sample point for the kernel-image identities, kept away from 0 so
  // all four identities apply.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(0.2, 0.7), angle(0.0, 2.0 * std::numbers::pi);
  const cplx w = std::polar(radius(rng), angle(rng));
  double kw_worst = 0.0;
  for (double r : kernel_action_check(ms, v, w, true, opts)) kw_worst = std::max(kw_worst, r);
  push("kernel-image-identities", kw_worst);

  double lattice_worst = 0.0;
  for (const auto& sub : invariant_subspace_lattice(ns, opts))
    lattice_worst = std::max(lattice_worst, sub.residual);
  push("lattice-invariance", lattice_worst);

  return out;
}

inline bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.passed) return false;
  return true;
}

}  // namespace mslab
