#pragma once

// Dense complex polynomials in ascending coefficient order, plus root finding
// through a balanced companion-matrix eigendecomposition with relative
// cluster recovery of multiple roots.

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numeric>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mslab/errors.hpp"
#include "mslab/options.hpp"

namespace mslab {

class ComplexPoly {
 public:
  ComplexPoly() = default;
  ComplexPoly(std::initializer_list<cplx> coeffs) : c_(coeffs) { normalize(); }
  explicit ComplexPoly(std::vector<cplx> coeffs) : c_(std::move(coeffs)) { normalize(); }

  static ComplexPoly zero() { return ComplexPoly(); }
  static ComplexPoly constant(cplx a) { return ComplexPoly({a}); }
  static ComplexPoly monomial(int n, cplx a = 1.0) {
    std::vector<cplx> v(static_cast<size_t>(n) + 1, 0.0);
    v.back() = a;
    return ComplexPoly(std::move(v));
  }
  // Product of (z - r) over the given roots.
  static ComplexPoly from_roots(const std::vector<cplx>& roots, cplx lead = 1.0) {
    ComplexPoly p = constant(lead);
    for (cplx r : roots) p = p * ComplexPoly({-r, 1.0});
    return p;
  }

  const std::vector<cplx>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  // Degree of the zero polynomial is reported as -1.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  cplx leading() const { return c_.empty() ? cplx(0.0) : c_.back(); }
  cplx coeff(int k) const {
    return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[static_cast<size_t>(k)] : cplx(0.0);
  }
  double max_abs_coeff() const {
    double m = 0.0;
    for (cplx a : c_) m = std::max(m, std::abs(a));
    return m;
  }

  cplx eval(cplx z) const {
    cplx acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  ComplexPoly derivative() const {
    if (c_.size() <= 1) return ComplexPoly();
    std::vector<cplx> d(c_.size() - 1);
    for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
    return ComplexPoly(std::move(d));
  }

  ComplexPoly conjugated() const {
    std::vector<cplx> d(c_.size());
    for (size_t k = 0; k < c_.size(); ++k) d[k] = std::conj(c_[k]);
    return ComplexPoly(std::move(d));
  }

  // z^deg * p(1/z), coefficient reversal.
  ComplexPoly reversed() const {
    std::vector<cplx> d(c_.rbegin(), c_.rend());
    return ComplexPoly(std::move(d));
  }

  // Coefficients of p(lambda + u) in u: exact Taylor recentering by repeated
  // synthetic division. After pass j, a[j] holds p^(j)(lambda)/j!.
  std::vector<cplx> shifted_coeffs(cplx lambda) const {
    std::vector<cplx> a(c_);
    const size_t n = a.size();
    for (size_t j = 0; j < n; ++j)
      for (size_t k = n - 1; k-- > j;) a[k] += lambda * a[k + 1];
    return a;
  }

  // Quotient of division by (z - root); the remainder magnitude is returned
  // through *remainder when requested instead of being asserted here.
  ComplexPoly deflated(cplx root, double* remainder = nullptr) const {
    if (c_.size() <= 1) {
      if (remainder != nullptr) *remainder = c_.empty() ? 0.0 : std::abs(c_[0]);
      return ComplexPoly();
    }
    std::vector<cplx> q(c_.size() - 1);
    cplx carry = c_.back();
    for (size_t k = c_.size() - 1; k-- > 0;) {
      q[k] = carry;
      carry = c_[k] + carry * root;
    }
    if (remainder != nullptr) *remainder = std::abs(carry);
    return ComplexPoly(std::move(q));
  }

  friend ComplexPoly operator+(const ComplexPoly& a, const ComplexPoly& b) {
    std::vector<cplx> d(std::max(a.c_.size(), b.c_.size()), 0.0);
    for (size_t k = 0; k < a.c_.size(); ++k) d[k] += a.c_[k];
    for (size_t k = 0; k < b.c_.size(); ++k) d[k] += b.c_[k];
    return ComplexPoly(std::move(d));
  }
  friend ComplexPoly operator-(const ComplexPoly& a, const ComplexPoly& b) {
    std::vector<cplx> d(std::max(a.c_.size(), b.c_.size()), 0.0);
    for (size_t k = 0; k < a.c_.size(); ++k) d[k] += a.c_[k];
    for (size_t k = 0; k < b.c_.size(); ++k) d[k] -= b.c_[k];
    return ComplexPoly(std::move(d));
  }
  friend ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b) {
    if (a.is_zero() || b.is_zero()) return ComplexPoly();
    std::vector<cplx> d(a.c_.size() + b.c_.size() - 1, 0.0);
    for (size_t i = 0; i < a.c_.size(); ++i)
      for (size_t j = 0; j < b.c_.size(); ++j) d[i + j] += a.c_[i] * b.c_[j];
    return ComplexPoly(std::move(d));
  }
  friend ComplexPoly operator*(cplx s, const ComplexPoly& a) {
    std::vector<cplx> d(a.c_);
    for (auto& x : d) x *= s;
    return ComplexPoly(std::move(d));
  }
  friend ComplexPoly operator*(const ComplexPoly& a, cplx s) { return s * a; }
  ComplexPoly operator-() const { return cplx(-1.0) * *this; }

 private:
  void normalize() {
    double m = 0.0;
    for (cplx a : c_) m = std::max(m, std::abs(a));
    if (m == 0.0) {
      c_.clear();
      return;
    }
    // Leading coefficients below the noise floor are arithmetic debris and
    // would otherwise poison monic normalization and companion matrices.
    const double floor = 1e-13 * m;
    while (!c_.empty() && std::abs(c_.back()) <= floor) c_.pop_back();
  }

  std::vector<cplx> c_;  // ascending, empty means the zero polynomial
};

namespace detail {

// Parlett-Reinsch balancing: diagonal similarity with powers of two until row
// and column norms agree. Eigen's eigensolvers do not balance on their own.
inline void balance_in_place(Eigen::MatrixXcd& A) {
  const int n = static_cast<int>(A.rows());
  const double radix = 2.0;
  bool converged = false;
  int sweeps = 0;
  while (!converged && sweeps++ < 50) {
    converged = true;
    for (int i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(A(j, i));
        r += std::abs(A(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double f = 1.0;
      const double s = c + r;
      while (c < r / radix) {
        c *= radix;
        r /= radix;
        f *= radix;
      }
      while (c >= r * radix) {
        c /= radix;
        r *= radix;
        f /= radix;
      }
      if ((c + r) < 0.95 * s && f != 1.0) {
        converged = false;
        A.col(i) *= f;
        A.row(i) /= f;
      }
    }
  }
}

inline std::vector<cplx> raw_poly_roots(const ComplexPoly& p) {
  const int deg = p.degree();
  std::vector<cplx> roots;
  if (deg <= 0) return roots;
  const cplx lead = p.leading();
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) C(i, deg - 1) = -p.coeff(i) / lead;
  balance_in_place(C);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, /*computeEigenvectors=*/false);
  roots.reserve(static_cast<size_t>(deg));
  for (int i = 0; i < deg; ++i) roots.push_back(es.eigenvalues()(i));
  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

inline std::vector<std::pair<cplx, int>> cluster_roots(const std::vector<cplx>& raw,
                                                       const NumericOptions& opts) {
  const int m = static_cast<int>(raw.size());
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const double tol = opts.cluster_tol * (1.0 + std::max(std::abs(raw[i]), std::abs(raw[j])));
      if (std::abs(raw[i] - raw[j]) <= tol) {
        int a = find(i), b = find(j);
        if (a != b) parent[a] = b;
      }
    }
  std::vector<std::pair<cplx, int>> out;
  std::vector<bool> seen(m, false);
  for (int i = 0; i < m; ++i) {
    const int r = find(i);
    if (seen[r]) continue;
    seen[r] = true;
    cplx sum = 0.0;
    int count = 0;
    for (int j = 0; j < m; ++j)
      if (find(j) == r) {
        sum += raw[j];
        ++count;
      }
    out.emplace_back(sum / static_cast<double>(count), count);
  }
  return out;
}

inline ComplexPoly monic(const ComplexPoly& p) { return p * (cplx(1.0) / p.leading()); }

// Long division: returns quotient and remainder with deg rem < deg divisor.
inline std::pair<ComplexPoly, ComplexPoly> poly_divmod(const ComplexPoly& a,
                                                       const ComplexPoly& b) {
  const int da = a.degree(), db = b.degree();
  if (da < db) return {ComplexPoly(), a};
  std::vector<cplx> rem(static_cast<size_t>(da) + 1);
  for (int i = 0; i <= da; ++i) rem[static_cast<size_t>(i)] = a.coeff(i);
  std::vector<cplx> quot(static_cast<size_t>(da - db) + 1, cplx(0.0));
  const cplx lead = b.coeff(db);
  for (int k = da - db; k >= 0; --k) {
    const cplx q = rem[static_cast<size_t>(k + db)] / lead;
    quot[static_cast<size_t>(k)] = q;
    for (int j = 0; j <= db; ++j) rem[static_cast<size_t>(k + j)] -= q * b.coeff(j);
  }
  rem.resize(static_cast<size_t>(std::max(db, 1)));
  return {ComplexPoly(std::move(quot)), ComplexPoly(std::move(rem))};
}

// Monic gcd by a truncated Euclidean remainder sequence, with both operands
// rescaled to unit max coefficient so the cutoffs are scale free. A negligible
// second operand means the pair is generated by the first alone.
inline ComplexPoly gcd_numeric(ComplexPoly a, ComplexPoly b, double trunc_tol = 1e-13,
                               double zero_tol = 1e-12) {
  if (a.is_zero() && b.is_zero()) return ComplexPoly::constant(1.0);
  if (a.degree() < b.degree()) std::swap(a, b);
  if (b.is_zero() || b.max_abs_coeff() <= zero_tol * a.max_abs_coeff())
    return a.degree() == 0 ? ComplexPoly::constant(1.0) : monic(a);
  a = a * cplx(1.0 / a.max_abs_coeff());
  b = b * cplx(1.0 / b.max_abs_coeff());
  while (true) {
    const ComplexPoly r = poly_divmod(a, b).second;
    if (r.is_zero() || r.max_abs_coeff() <= trunc_tol)
      return b.degree() == 0 ? ComplexPoly::constant(1.0) : monic(b);
    a = b;
    b = r * cplx(1.0 / r.max_abs_coeff());
  }
}

// Repeated-root structure by square-free decomposition: a gcd with the
// derivative plus the standard multiplicity-peeling recurrence. A k-fold root
// stays a single well-conditioned root of its square-free factor, where raw
// companion eigenvalues would scatter by roughly eps^(1/k). Every division is
// remainder-checked and the product of the factors must reproduce the input;
// any failure returns an empty list and the caller falls back to clustering.
inline std::vector<std::pair<cplx, int>> multiplicity_structure(const ComplexPoly& p,
                                                                const NumericOptions& opts) {
  const ComplexPoly pu = p * cplx(1.0 / p.max_abs_coeff());
  const ComplexPoly g0 = gcd_numeric(pu, pu.derivative());
  if (g0.degree() < 1) return {};
  const auto dw = poly_divmod(pu, g0);
  const auto dy = poly_divmod(pu.derivative(), g0);
  if (dw.second.max_abs_coeff() > 1e-8) return {};
  if (dy.second.max_abs_coeff() > 1e-8 * std::max(1.0, pu.derivative().max_abs_coeff())) return {};

  ComplexPoly w = dw.first;
  ComplexPoly y = dy.first;
  std::vector<ComplexPoly> factors;  // factors[i] collects the roots of multiplicity i+1
  for (int round = 0; round <= pu.degree() && w.degree() >= 1; ++round) {
    const ComplexPoly z = y - w.derivative();
    ComplexPoly f;
    if (z.is_zero() ||
        z.max_abs_coeff() <= 1e-11 * std::max({1.0, y.max_abs_coeff(), w.max_abs_coeff()}))
      f = monic(w);
    else
      f = gcd_numeric(w, z);
    factors.push_back(f);
    if (f.degree() >= 1) {
      const auto fw = poly_divmod(w, f);
      const auto fy = poly_divmod(z, f);
      if (fw.second.max_abs_coeff() > 1e-8 * std::max(1.0, w.max_abs_coeff())) return {};
      if (fy.second.max_abs_coeff() > 1e-8 * std::max(1.0, z.max_abs_coeff())) return {};
      w = fw.first;
      y = fy.first;
    } else {
      y = z;
    }
  }
  if (w.degree() >= 1) return {};

  ComplexPoly rec = ComplexPoly::constant(1.0);
  for (size_t i = 0; i < factors.size(); ++i)
    for (size_t k = 0; k <= i; ++k) rec = rec * factors[i];
  if (rec.degree() != pu.degree()) return {};
  rec = rec * (pu.leading() / rec.leading());
  if ((rec - pu).max_abs_coeff() > 1e-7) return {};

  std::vector<std::pair<cplx, int>> out;
  for (size_t i = 0; i < factors.size(); ++i) {
    if (factors[i].degree() < 1) continue;
    for (const auto& [r, m] : cluster_roots(raw_poly_roots(factors[i]), opts)) {
      if (m != 1) return {};
      out.emplace_back(r, static_cast<int>(i) + 1);
    }
  }
  return out;
}

}  // namespace detail

// Roots with multiplicities. Square-free structure recovery runs first, since
// it keeps high-order roots exact; when the input has no verified repeated
// structure, companion eigenvalues are merged by single-linkage clustering at
// relative radius cluster_tol, cluster centroid reported.
inline std::vector<std::pair<cplx, int>> poly_roots(
    const ComplexPoly& p, const NumericOptions& opts = default_options()) {
  if (p.is_zero()) throw ZeroPolynomial("cannot take roots of the zero polynomial");
  std::vector<std::pair<cplx, int>> out;
  if (p.degree() >= 2) out = detail::multiplicity_structure(p, opts);
  if (out.empty() && p.degree() >= 1)
    out = detail::cluster_roots(detail::raw_poly_roots(p), opts);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first.real() != b.first.real()) return a.first.real() < b.first.real();
    return a.first.imag() < b.first.imag();
  });
  return out;
}

}  // namespace mslab
