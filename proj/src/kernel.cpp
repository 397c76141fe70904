#include "zopt/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace zopt {

namespace {

double eval_poly(const std::vector<double>& c, double u) {
  double v = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) v = v * u + c[k];
  return v;
}

// Monomial coefficients of the classical Legendre polynomial P_m via the
// recurrence (m+1) P_{m+1} = (2m+1) u P_m - m P_{m-1}.
std::vector<std::vector<double>> legendre_coeffs(int max_m) {
  std::vector<std::vector<double>> p(max_m + 1);
  p[0] = {1.0};
  if (max_m >= 1) p[1] = {0.0, 1.0};
  for (int m = 1; m < max_m; ++m) {
    std::vector<double> next(m + 2, 0.0);
    for (int k = 0; k <= m; ++k) next[k + 1] += (2.0 * m + 1.0) * p[m][k] / (m + 1.0);
    for (std::size_t k = 0; k < p[m - 1].size(); ++k) next[k] -= m * p[m - 1][k] / (m + 1.0);
    p[m + 1] = std::move(next);
  }
  return p;
}

// Roots of the polynomial inside (-1, 1), ascending. Sign-change scan on a
// fine grid followed by bisection to ~1e-14.
std::vector<double> poly_roots(const std::vector<double>& coeffs) {
  constexpr int kScan = 8192;
  std::vector<double> roots;
  double prev_u = -1.0;
  double prev_v = eval_poly(coeffs, prev_u);
  for (int i = 1; i <= kScan; ++i) {
    const double u = -1.0 + 2.0 * i / kScan;
    const double v = eval_poly(coeffs, u);
    if (v == 0.0) {
      if (u < 1.0) roots.push_back(u);
    } else if (prev_v != 0.0 && std::signbit(prev_v) != std::signbit(v)) {
      double lo = prev_u, hi = u, flo = prev_v;
      for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = eval_poly(coeffs, mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if (std::signbit(fm) == std::signbit(flo)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_u = u;
    prev_v = v;
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-13; }),
              roots.end());
  return roots;
}

double abs_moment_integral(const std::vector<double>& coeffs, double beta);

}  // namespace

SmoothnessOrder smoothness_order(double beta) {
  if (!std::isfinite(beta)) throw std::invalid_argument("smoothness_order: beta must be finite");
  if (beta < 2.0) throw std::invalid_argument("smoothness_order: beta must be >= 2");
  // Largest integer strictly less than beta.
  int ell = static_cast<int>(std::floor(beta));
  if (static_cast<double>(ell) == beta) --ell;
  return {beta, ell};
}

const QuadratureRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  static std::map<int, QuadratureRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  // Newton iteration on P_n from the usual cosine initial guesses.
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = -p1 / pp;
      z += dz;
      if (std::abs(dz) < std::numeric_limits<double>::epsilon()) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

Kernel::Kernel(SmoothnessOrder order, std::vector<double> coeffs)
    : order_(order), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw std::invalid_argument("Kernel: empty coefficient list");
  for (double c : coeffs_)
    if (!std::isfinite(c)) throw std::invalid_argument("Kernel: non-finite coefficient");
  kappa_ = compute_kappa(*this);
  kappa_beta_ = abs_moment_integral(coeffs_, order_.beta);
}

double Kernel::operator()(double u) const { return eval_poly(coeffs_, u); }

Kernel build_kernel(double beta) {
  const SmoothnessOrder order = smoothness_order(beta);
  const auto legendre = legendre_coeffs(order.ell);

  // q_m = sqrt(2m+1) P_m is orthonormal under the U[-1,1] law, so
  // K = sum q_m'(0) q_m has monomial coefficients sum (2m+1) P_m'(0) P_m.
  // P_m'(0) vanishes for even m, hence only odd terms survive and K is odd.
  std::vector<double> coeffs(order.ell + 1, 0.0);
  for (int m = 1; m <= order.ell; m += 2) {
    const double deriv0 = legendre[m][1];
    for (std::size_t k = 0; k < legendre[m].size(); ++k)
      coeffs[k] += (2.0 * m + 1.0) * deriv0 * legendre[m][k];
  }

  Kernel k(order, std::move(coeffs));

  constexpr double kTol = 1e-10;
  for (int j = 0; j <= order.ell; ++j) {
    const double want = (j == 1) ? 1.0 : 0.0;
    if (std::abs(kernel_moment(k, j) - want) > kTol)
      throw std::logic_error("build_kernel: moment condition violated at j=" + std::to_string(j));
  }
  if (!(k.kappa() > 0.0) || !std::isfinite(k.kappa()) || !(k.kappa_beta() > 0.0) ||
      !std::isfinite(k.kappa_beta()))
    throw std::logic_error("build_kernel: degenerate moment constants");
  return k;
}

double kernel_moment(const Kernel& k, int j) {
  if (j < 0) throw std::invalid_argument("kernel_moment: j must be >= 0");
  const int degree = j + static_cast<int>(k.coeffs().size()) - 1;
  const QuadratureRule& rule = gauss_legendre(degree / 2 + 2);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double u = rule.nodes[i];
    s += rule.weights[i] * std::pow(u, j) * k(u);
  }
  return 0.5 * s;  // density of the uniform law on [-1,1]
}

double compute_kappa(const Kernel& k) {
  const int degree = 2 * (static_cast<int>(k.coeffs().size()) - 1);
  const int ell = std::max(k.order().ell, 1);
  const QuadratureRule& rule = gauss_legendre(std::max(degree / 2 + 2, ell + 2));
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double v = k(rule.nodes[i]);
    s += rule.weights[i] * v * v;
  }
  return 0.5 * s;
}

namespace {

// E[|u|^beta |K(u)|] over u ~ U[-1,1]. The domain is cut at the roots of K
// and at 0; the integrand is smooth inside each piece. Pieces whose endpoint
// touches 0 are subdivided geometrically because |u|^beta is not analytic
// there for fractional beta.
double abs_moment_integral(const std::vector<double>& coeffs, double beta) {
  const auto integrand = [&coeffs, beta](double u) {
    return std::pow(std::abs(u), beta) * std::abs(eval_poly(coeffs, u));
  };
  const QuadratureRule& rule = gauss_legendre(32);
  const auto piece = [&](double a, double b) {
    const double mid = 0.5 * (a + b), rad = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      s += rule.weights[i] * integrand(mid + rad * rule.nodes[i]);
    return rad * s;
  };

  std::vector<double> cuts = poly_roots(coeffs);
  cuts.push_back(-1.0);
  cuts.push_back(0.0);
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-13; }),
             cuts.end());

  double total = 0.0;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double a = cuts[p], b = cuts[p + 1];
    if (b - a < 1e-14) continue;
    if (a == 0.0 || b == 0.0) {
      // refine toward the zero endpoint
      const double len = b - a;
      const double anchor = (a == 0.0) ? a : b;
      const double other = (a == 0.0) ? b : a;
      double inner = anchor;
      for (int lvl = 40; lvl >= 0; --lvl) {
        const double outer = anchor + (other - anchor) * std::pow(0.5, lvl);
        if (std::abs(outer - inner) > 0.0)
          total += piece(std::min(inner, outer), std::max(inner, outer));
        inner = outer;
      }
      (void)len;
    } else {
      total += piece(a, b);
    }
  }
  return 0.5 * total;
}

}  // namespace

double compute_kappa_beta(const Kernel& k, double beta) {
  if (!std::isfinite(beta) || beta < 2.0)
    throw std::invalid_argument("compute_kappa_beta: beta must be finite and >= 2");
  return abs_moment_integral(k.coeffs(), beta);
}

}  // namespace zopt
