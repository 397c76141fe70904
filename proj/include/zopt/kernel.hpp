#pragma once

#include <vector>

namespace zopt {

/// Hölder order bookkeeping: `ell` is the largest integer strictly below
/// `beta` (so beta=2 -> ell=1, beta=3 -> ell=2, beta=4 -> ell=3).
struct SmoothnessOrder {
  double beta = 2.0;
  int ell = 1;
};

/// Validates beta (finite, >= 2) and computes the strict floor.
SmoothnessOrder smoothness_order(double beta);

// Polynomial weight function K on [-1,1] for the randomized two-point
// gradient estimator. All moments are taken against the U[-1,1] law of the
// perturbation variable r that the estimator actually samples:
//
//   E[r K(r)] = 1,  E[r^j K(r)] = 0 for j = 0, 2, ..., ell,
//   kappa = E[K^2(r)],  kappa_beta = E[|r|^beta |K(r)|].
//
// kappa and kappa_beta are the variance and bias constants entering the
// step-size and perturbation schedules.
class Kernel {
 public:
  /// Wraps explicit monomial coefficients (c[k] multiplies u^k). Computes
  /// kappa / kappa_beta but does not enforce the moment conditions; use
  /// build_kernel() for a certified kernel.
  Kernel(SmoothnessOrder order, std::vector<double> coeffs);

  double operator()(double u) const;

  const SmoothnessOrder& order() const { return order_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  double kappa() const { return kappa_; }
  double kappa_beta() const { return kappa_beta_; }

 private:
  SmoothnessOrder order_;
  std::vector<double> coeffs_;
  double kappa_ = 0.0;
  double kappa_beta_ = 0.0;
};

/// Constructs the canonical kernel for the given Hölder order as
/// K(u) = sum_{m<=ell} q_m'(0) q_m(u) with q_m the Legendre polynomials
/// orthonormal under the U[-1,1] law. Only odd m contribute, so K is odd and
/// the same polynomial serves every beta with equal ell. All moment
/// invariants are verified to 1e-10 before returning.
Kernel build_kernel(double beta);

/// E[u^j K(u)], u ~ U[-1,1]; exact for polynomial integrands (Gauss-Legendre
/// of sufficient order). Total over any kernel, including degenerate ones.
double kernel_moment(const Kernel& k, int j);

/// E[K^2(u)], exact for polynomials.
double compute_kappa(const Kernel& k);

/// E[|u|^beta |K(u)|]. |K| has kinks at the roots of K, so the domain is
/// split at the roots (isolated by sign-change bisection) before applying
/// high-order Gauss-Legendre on each smooth piece. Relative accuracy ~1e-10.
double compute_kappa_beta(const Kernel& k, double beta);

/// n-point Gauss-Legendre rule on [-1,1] (nodes ascending). Cached per n.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const QuadratureRule& gauss_legendre(int n);

}  // namespace zopt
