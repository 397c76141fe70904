#include "zopt/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "zopt/kernel.hpp"
#include "zopt/rng.hpp"

namespace zopt {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kHalfPi = 1.57079632679489661923;
}  // namespace

// ---------------------------------------------------------------------------
// Component1D

Component1D Component1D::quadratic(double a, double c) {
  if (!(a > 0.0)) throw std::invalid_argument("quadratic: requires a > 0");
  return {Family::quadratic, a, c};
}

Component1D Component1D::quad_sine(double a, double c) {
  if (!(a > 0.0)) throw std::invalid_argument("quad-sine: requires a > 0");
  if (!(c >= 0.0) || !(c < a)) throw std::invalid_argument("quad-sine: requires 0 <= c < a");
  return {Family::quad_sine, a, c};
}

Component1D Component1D::quad_sin2(double s) {
  if (!(s > 0.0)) throw std::invalid_argument("quad-sin2: requires s > 0");
  return {Family::quad_sin2, s, 0.0};
}

Component1D Component1D::linear(double b) { return {Family::linear, b, 0.0}; }
Component1D Component1D::sine(double amp) { return {Family::sine, amp, 0.0}; }
Component1D Component1D::zero() { return {Family::zero, 0.0, 0.0}; }

double Component1D::value(double x) const {
  switch (family_) {
    case Family::quadratic: {
      const double y = x - p1_;
      return 0.5 * p0_ * y * y;
    }
    case Family::quad_sine:
      return 0.5 * p0_ * x * x + p1_ * std::sin(x);
    case Family::quad_sin2: {
      const double s = std::sin(x);
      return p0_ * x * x + 3.0 * s * s;
    }
    case Family::linear:
      return p0_ * x;
    case Family::sine:
      return p0_ * std::sin(x);
    case Family::zero:
      return 0.0;
  }
  return 0.0;
}

double Component1D::derivative(int m, double x) const {
  if (m < 1) throw std::invalid_argument("Component1D::derivative: m must be >= 1");
  switch (family_) {
    case Family::quadratic:
      if (m == 1) return p0_ * (x - p1_);
      if (m == 2) return p0_;
      return 0.0;
    case Family::quad_sine: {
      // sin^(m)(x) = sin(x + m pi/2)
      const double trig = p1_ * std::sin(x + m * kHalfPi);
      if (m == 1) return p0_ * x + trig;
      if (m == 2) return p0_ + trig;
      return trig;
    }
    case Family::quad_sin2: {
      // 3 sin^2 x = 1.5 - 1.5 cos 2x; (cos 2x)^(m) = 2^m cos(2x + m pi/2)
      const double trig = -1.5 * std::pow(2.0, m) * std::cos(2.0 * x + m * kHalfPi);
      if (m == 1) return 2.0 * p0_ * x + trig;
      if (m == 2) return 2.0 * p0_ + trig;
      return trig;
    }
    case Family::linear:
      return m == 1 ? p0_ : 0.0;
    case Family::sine:
      return p0_ * std::sin(x + m * kHalfPi);
    case Family::zero:
      return 0.0;
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// AdditiveObjective

AdditiveObjective::AdditiveObjective(std::vector<Component1D> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw std::invalid_argument("AdditiveObjective: needs d >= 1");
}

double AdditiveObjective::value(const Vec& x) const {
  check_dim(x, components_.size(), "AdditiveObjective::value");
  double s = 0.0;
  for (std::size_t j = 0; j < components_.size(); ++j) s += components_[j].value(x[j]);
  return s;
}

Vec AdditiveObjective::gradient(const Vec& x) const {
  check_dim(x, components_.size(), "AdditiveObjective::gradient");
  Vec g(x.size());
  for (std::size_t j = 0; j < components_.size(); ++j) g[j] = components_[j].derivative(1, x[j]);
  return g;
}

// ---------------------------------------------------------------------------
// NoiseModel

NoiseModel NoiseModel::none() { return {Type::none, 0.0}; }

NoiseModel NoiseModel::gaussian(double sigma) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("gaussian noise: sigma must be >= 0");
  return {Type::gaussian, sigma};
}

NoiseModel NoiseModel::uniform(double bound) {
  if (!(bound >= 0.0)) throw std::invalid_argument("uniform noise: bound must be >= 0");
  return {Type::uniform, bound};
}

NoiseModel NoiseModel::adversarial(double sigma) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("adversarial noise: sigma must be >= 0");
  return {Type::adversarial, sigma};
}

double NoiseModel::sigma2() const {
  switch (type_) {
    case Type::none:
      return 0.0;
    case Type::gaussian:
      return param_ * param_;
    case Type::uniform:
      return param_ * param_ / 3.0;
    case Type::adversarial:
      return param_ * param_;
  }
  return 0.0;
}

double NoiseModel::draw(std::uint64_t seed, std::int64_t t, QuerySide side) const {
  const std::uint64_t tag = (side == QuerySide::plus) ? kTagNoisePlus : kTagNoiseMinus;
  switch (type_) {
    case Type::none:
      return 0.0;
    case Type::gaussian:
      return param_ * standard_normal(subkey(subkey(seed, tag), static_cast<std::uint64_t>(t)));
    case Type::uniform:
      return param_ *
             uniform_pm1(subkey(subkey(subkey(seed, tag), static_cast<std::uint64_t>(t)), 0));
    case Type::adversarial:
      // Deterministic, non-zero-mean, dependent across rounds; only the
      // second-moment bound holds.
      return (side == QuerySide::plus) ? param_ * std::sin(7.0 * static_cast<double>(t))
                                       : param_ * std::cos(11.0 * static_cast<double>(t));
  }
  return 0.0;
}

std::string NoiseModel::describe() const {
  switch (type_) {
    case Type::none:
      return "none";
    case Type::gaussian:
      return "gaussian(sigma=" + std::to_string(param_) + ")";
    case Type::uniform:
      return "uniform(b=" + std::to_string(param_) + ")";
    case Type::adversarial:
      return "adversarial(sigma=" + std::to_string(param_) + ")";
  }
  return "?";
}

double query_noisy(const AdditiveObjective& obj, const NoiseModel& noise, const Vec& x,
                   std::int64_t t, QuerySide side, std::uint64_t seed) {
  if (t < 1) throw std::invalid_argument("query_noisy: t must be >= 1");
  return obj.value(x) + noise.draw(seed, t, side);
}

// ---------------------------------------------------------------------------
// Certificates

namespace {

// min over [-10,10] of f'^2 / (2 f) for one quad_sin2 component (f >= 0 with
// f(0) = 0 = min). Coarse grid plus ternary refinement; deterministic.
double quad_sin2_pl_modulus(const Component1D& comp) {
  const double lo = -10.0, hi = 10.0;
  const int n = 20001;
  const auto ratio = [&comp](double x) {
    const double f = comp.value(x);
    if (f < 1e-12) return std::numeric_limits<double>::infinity();
    const double g = comp.derivative(1, x);
    return g * g / (2.0 * f);
  };
  int best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double x = lo + (hi - lo) * i / (n - 1);
    const double r = ratio(x);
    if (r < best_val) {
      best_val = r;
      best = i;
    }
  }
  double a = lo + (hi - lo) * std::max(best - 1, 0) / (n - 1);
  double b = lo + (hi - lo) * std::min(best + 1, n - 1) / (n - 1);
  for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
    const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
    if (ratio(m1) < ratio(m2))
      b = m2;
    else
      a = m1;
  }
  return std::min(best_val, ratio(0.5 * (a + b)));
}

// Root of a x + c cos x (the quad_sine gradient); Newton from 0, globally
// convergent since the second derivative is bounded below by a - c > 0.
double quad_sine_minimizer(double a, double c) {
  double x = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double g = a * x + c * std::cos(x);
    if (std::abs(g) < 1e-15) break;
    x -= g / (a - c * std::sin(x));
  }
  return x;
}

// Certified Hölder constant for one component at the given order. Tight at
// beta in {2,3}; for fractional beta in (2,3) a global analytic bound from
// the |z-x| <= 1 / > 1 case split. Quadratic remainders vanish for ell >= 2,
// where any positive constant certifies; a/2 is stored by convention.
double component_holder(const Component1D& comp, double beta) {
  const bool integer3 = (beta == 3.0);
  const bool base = (beta == 2.0);
  switch (comp.family()) {
    case Component1D::Family::quadratic:
      return 0.5 * comp.param0();
    case Component1D::Family::quad_sine: {
      const double a = comp.param0(), c = comp.param1();
      if (base) return 0.5 * (a + c);
      if (beta > 3.0)
        throw std::invalid_argument("certificate: quad-sine supports beta in [2,3] only");
      if (integer3) return c > 0.0 ? c / 6.0 : 0.5 * a;
      return c > 0.0 ? 3.5 * c : 0.5 * a;
    }
    case Component1D::Family::quad_sin2: {
      const double s = comp.param0();
      if (base) return s + 3.0;
      if (beta > 3.0)
        throw std::invalid_argument("certificate: quad-sin2 supports beta in [2,3] only");
      return integer3 ? 2.0 : 9.0;
    }
    case Component1D::Family::sine: {
      const double amp = std::abs(comp.param0());
      if (base) return 0.5 * amp;
      if (beta > 3.0) throw std::invalid_argument("certificate: sine supports beta in [2,3] only");
      return integer3 ? amp / 6.0 : 3.5 * amp;
    }
    case Component1D::Family::linear:
    case Component1D::Family::zero:
      return 0.0;
  }
  return 0.0;
}

}  // namespace

ObjectiveCertificate build_certificate(const AdditiveObjective& obj, double beta) {
  if (!std::isfinite(beta) || beta < 2.0)
    throw std::invalid_argument("build_certificate: beta must be finite and >= 2");
  const auto& comps = obj.components();
  const auto family = comps.front().family();
  for (const auto& c : comps)
    if (c.family() != family)
      throw std::invalid_argument("build_certificate: mixed component families");

  ObjectiveCertificate cert;
  cert.beta = beta;
  cert.minimizer.resize(comps.size());

  switch (family) {
    case Component1D::Family::quadratic: {
      cert.kind = ObjectiveCertificate::Kind::strongly_convex;
      cert.alpha = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < comps.size(); ++j) {
        cert.alpha = std::min(cert.alpha, comps[j].param0());
        cert.lbar = std::max(cert.lbar, comps[j].param0());
        cert.minimizer[j] = comps[j].param1();
      }
      cert.f_min = 0.0;
      break;
    }
    case Component1D::Family::quad_sine: {
      cert.kind = ObjectiveCertificate::Kind::strongly_convex;
      cert.alpha = std::numeric_limits<double>::infinity();
      cert.f_min = 0.0;
      for (std::size_t j = 0; j < comps.size(); ++j) {
        const double a = comps[j].param0(), c = comps[j].param1();
        cert.alpha = std::min(cert.alpha, a - c);
        cert.lbar = std::max(cert.lbar, a + c);
        cert.minimizer[j] = quad_sine_minimizer(a, c);
        cert.f_min += comps[j].value(cert.minimizer[j]);
      }
      break;
    }
    case Component1D::Family::quad_sin2: {
      cert.kind = ObjectiveCertificate::Kind::pl;
      cert.alpha = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < comps.size(); ++j) {
        cert.alpha = std::min(cert.alpha, quad_sin2_pl_modulus(comps[j]));
        cert.lbar = std::max(cert.lbar, 2.0 * comps[j].param0() + 6.0);
        cert.minimizer[j] = 0.0;
      }
      cert.alpha *= 1.0 - 1e-6;  // grid value shaved for robustness
      cert.f_min = 0.0;
      break;
    }
    default:
      throw std::invalid_argument("build_certificate: diagnostic families carry no certificate");
  }

  for (const auto& c : comps) cert.holder = std::max(cert.holder, component_holder(c, beta));
  return cert;
}

double grad_sup_on_box(const AdditiveObjective& obj, const Vec& lo, const Vec& hi) {
  check_dim(lo, obj.components().size(), "grad_sup_on_box lo");
  check_dim(hi, obj.components().size(), "grad_sup_on_box hi");
  const int n = 20001;
  double sum_sq = 0.0;
  for (std::size_t j = 0; j < obj.components().size(); ++j) {
    if (!(lo[j] <= hi[j])) throw std::invalid_argument("grad_sup_on_box: lo > hi");
    double sup = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = lo[j] + (hi[j] - lo[j]) * i / (n - 1);
      sup = std::max(sup, std::abs(obj.components()[j].derivative(1, x)));
    }
    sum_sq += sup * sup;
  }
  return std::sqrt(sum_sq) * (1.0 + 1e-6);
}

// ---------------------------------------------------------------------------
// Verification

HolderCheck verify_holder(const Component1D& comp, double beta, double holder_l, double lo,
                          double hi, int n_grid) {
  if (n_grid < 2) throw std::invalid_argument("verify_holder: n_grid must be >= 2");
  const int ell = smoothness_order(beta).ell;

  HolderCheck out;
  out.pass = true;
  std::vector<double> fact(ell + 1, 1.0);
  for (int m = 1; m <= ell; ++m) fact[m] = fact[m - 1] * m;

  std::vector<double> deriv(ell + 1, 0.0);
  for (int i = 0; i < n_grid; ++i) {
    const double x = lo + (hi - lo) * i / (n_grid - 1);
    for (int m = 1; m <= ell; ++m) deriv[m] = comp.derivative(m, x);
    const double fx = comp.value(x);
    for (int k = 0; k < n_grid; ++k) {
      const double z = lo + (hi - lo) * k / (n_grid - 1);
      const double delta = z - x;
      if (delta == 0.0) continue;  // remainder identically 0
      double taylor = fx;
      double pow_delta = 1.0;
      for (int m = 1; m <= ell; ++m) {
        pow_delta *= delta;
        taylor += deriv[m] * pow_delta / fact[m];
      }
      const double ratio = std::abs(comp.value(z) - taylor) / std::pow(std::abs(delta), beta);
      if (ratio > out.worst_ratio) {
        out.worst_ratio = ratio;
        out.worst_x = x;
        out.worst_z = z;
      }
    }
  }
  out.pass = out.worst_ratio <= holder_l * (1.0 + 1e-6);
  return out;
}

PlCheck verify_pl(const AdditiveObjective& obj, double alpha, double f_min, double lo, double hi,
                  int n_grid) {
  if (n_grid < 2) throw std::invalid_argument("verify_pl: n_grid must be >= 2");
  const int d = obj.dim();

  PlCheck out;
  out.worst_ratio = std::numeric_limits<double>::infinity();
  std::vector<int> idx(d, 0);
  Vec x(d);
  const double scale = std::max(1.0, std::abs(f_min));
  while (true) {
    for (int j = 0; j < d; ++j) x[j] = lo + (hi - lo) * idx[j] / (n_grid - 1);
    const double gap = obj.value(x) - f_min;
    if (gap > 1e-12 * scale) {
      const double ratio = norm_sq(obj.gradient(x)) / (2.0 * gap);
      if (ratio < out.worst_ratio) {
        out.worst_ratio = ratio;
        out.worst_point = x;
      }
    }
    int j = 0;
    while (j < d && ++idx[j] == n_grid) idx[j++] = 0;
    if (j == d) break;
  }
  out.pass = out.worst_ratio >= alpha * (1.0 - 1e-9);
  return out;
}

ScCheck verify_sc(const AdditiveObjective& obj, double alpha, double lo, double hi, int n_pairs,
                  std::uint64_t seed) {
  if (n_pairs < 1) throw std::invalid_argument("verify_sc: n_pairs must be >= 1");
  const int d = obj.dim();

  ScCheck out;
  out.worst_violation = -std::numeric_limits<double>::infinity();
  Vec x(d), y(d);
  for (int p = 0; p < n_pairs; ++p) {
    const std::uint64_t key = subkey(subkey(seed, kTagPairs), static_cast<std::uint64_t>(p));
    for (int j = 0; j < d; ++j) {
      x[j] = lo + (hi - lo) * u01(subkey(key, 2 * j));
      y[j] = lo + (hi - lo) * u01(subkey(key, 2 * j + 1));
    }
    Vec diff(d);
    for (int j = 0; j < d; ++j) diff[j] = x[j] - y[j];
    const double lhs = obj.value(x) - obj.value(y);
    const double rhs = dot(obj.gradient(x), diff) - 0.5 * alpha * norm_sq(diff);
    out.worst_violation = std::max(out.worst_violation, lhs - rhs);
  }
  out.pass = out.worst_violation <= 1e-9;
  return out;
}

// ---------------------------------------------------------------------------
// Registry

namespace {

std::map<std::string, double> parse_params(const std::string& spec, const std::string& id) {
  std::map<std::string, double> out;
  std::size_t pos = 0;
  while (pos < spec.size()) {
    std::size_t comma = spec.find(',', pos);
    if (comma == std::string::npos) comma = spec.size();
    const std::string item = spec.substr(pos, comma - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::invalid_argument("objective id '" + id + "': malformed parameter '" + item + "'");
    try {
      std::size_t used = 0;
      const double v = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing characters");
      out[item.substr(0, eq)] = v;
    } catch (const std::exception&) {
      throw std::invalid_argument("objective id '" + id + "': bad numeric value in '" + item +
                                  "'");
    }
    pos = comma + 1;
  }
  return out;
}

double take(std::map<std::string, double>& params, const std::string& key, const std::string& id,
            const double* fallback = nullptr) {
  auto it = params.find(key);
  if (it == params.end()) {
    if (fallback) return *fallback;
    throw std::invalid_argument("objective id '" + id + "': missing parameter '" + key + "'");
  }
  const double v = it->second;
  params.erase(it);
  return v;
}

}  // namespace

AdditiveObjective make_objective(const std::string& id, int d) {
  if (d < 1) throw std::invalid_argument("make_objective: d must be >= 1");
  const std::size_t colon = id.find(':');
  const std::string family = id.substr(0, colon);
  auto params = (colon == std::string::npos) ? std::map<std::string, double>{}
                                             : parse_params(id.substr(colon + 1), id);

  Component1D proto = Component1D::zero();
  const double zero_default = 0.0, one_default = 1.0;
  if (family == "quadratic") {
    const double a = take(params, "a", id);
    const double c = take(params, "c", id, &zero_default);
    proto = Component1D::quadratic(a, c);
  } else if (family == "quad-sine") {
    const double a = take(params, "a", id);
    const double c = take(params, "c", id, &zero_default);
    proto = Component1D::quad_sine(a, c);
  } else if (family == "quad-sin2") {
    proto = Component1D::quad_sin2(take(params, "s", id));
  } else if (family == "linear") {
    proto = Component1D::linear(take(params, "b", id, &one_default));
  } else if (family == "sine") {
    proto = Component1D::sine(take(params, "amp", id, &one_default));
  } else if (family == "zero") {
    proto = Component1D::zero();
  } else {
    throw std::invalid_argument("make_objective: unknown family '" + family + "'");
  }
  if (!params.empty())
    throw std::invalid_argument("objective id '" + id + "': unknown parameter '" +
                                params.begin()->first + "'");

  return AdditiveObjective(std::vector<Component1D>(d, proto));
}

}  // namespace zopt
