#pragma once
// Eigenvalue loci of the level-set family: for each v on a polar grid, the
// roots of theta(lambda) = v inside the disk. Output is RFC-4180 CSV with a
// header row; rows walk each angular ray outward so consecutive blocks of one
// ray continue the same root branches, paired by nearest neighbor.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include <mslab/blaschke.hpp>

namespace mslab {

struct SweepResult {
  std::string csv;
  std::vector<std::string> warnings;  // near-collisions where branch pairing is unreliable
};

namespace detail {

inline std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline void csv_row(std::string& out, const cplx& v, const cplx& lambda, int mult) {
  out += csv_number(v.real());
  out += ',';
  out += csv_number(v.imag());
  out += ',';
  out += csv_number(lambda.real());
  out += ',';
  out += csv_number(lambda.imag());
  out += ',';
  out += std::to_string(mult);
  out += "\r\n";
}

// Reorders cur so entry k continues prev's branch k where possible; extra
// branches born from a split are appended in their canonical order.
inline std::vector<std::pair<cplx, int>> pair_branches(
    const std::vector<std::pair<cplx, int>>& prev, const std::vector<std::pair<cplx, int>>& cur) {
  std::vector<bool> used(cur.size(), false);
  std::vector<std::pair<cplx, int>> out;
  for (const auto& p : prev) {
    int best = -1;
    double best_d = 0.0;
    for (size_t k = 0; k < cur.size(); ++k) {
      if (used[k]) continue;
      const double d = std::abs(cur[k].first - p.first);
      if (best < 0 || d < best_d) {
        best = static_cast<int>(k);
        best_d = d;
      }
    }
    if (best >= 0) {
      used[static_cast<size_t>(best)] = true;
      out.push_back(cur[static_cast<size_t>(best)]);
    }
  }
  for (size_t k = 0; k < cur.size(); ++k)
    if (!used[k]) out.push_back(cur[k]);
  return out;
}

}  // namespace detail

inline SweepResult sweep_loci(const BlaschkeProduct& theta, int radial, int angular,
                              const NumericOptions& opts = default_options()) {
  if (radial < 1 || angular < 1) throw ConfigError("sweep grid counts must be positive");
  const long total = static_cast<long>(radial) * static_cast<long>(angular) + 1;
  if (total > 1000000L)
    throw GridTooLarge("sweep grid has " + std::to_string(total) + " points, limit 1000000");

  SweepResult result;
  result.csv = "v_re,v_im,lambda_re,lambda_im,mult\r\n";

  const auto origin_roots = solve_theta_eq(theta, 0.0, opts);
  for (const auto& [root, mult] : origin_roots) detail::csv_row(result.csv, 0.0, root, mult);

  const double collision_radius = 2.0 * opts.cluster_tol;
  for (int j = 0; j < angular; ++j) {
    const double phase = 2.0 * std::numbers::pi * j / angular;
    std::vector<std::pair<cplx, int>> prev = origin_roots;
    for (int i = 0; i < radial; ++i) {
      const double r = 0.9 * (i + 1) / radial;
      const cplx v = std::polar(r, phase);
      const auto ordered = detail::pair_branches(prev, solve_theta_eq(theta, v, opts));
      for (size_t a = 0; a < ordered.size(); ++a)
        for (size_t b = a + 1; b < ordered.size(); ++b)
          if (std::abs(ordered[a].first - ordered[b].first) < collision_radius)
            result.warnings.push_back(
                "near-collision at v = (" + detail::csv_number(v.real()) + ", " +
                detail::csv_number(v.imag()) + "): branch pairing unreliable");
      for (const auto& [root, mult] : ordered) detail::csv_row(result.csv, v, root, mult);
      prev = ordered;
    }
  }
  return result;
}

}  // namespace mslab
