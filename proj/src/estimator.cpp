#include "zopt/estimator.hpp"

#include <cmath>
#include <stdexcept>

#include "zopt/rng.hpp"

namespace zopt {

namespace {
constexpr double kMinPerturbation = 1e-8;
}

Vec sample_direction(std::uint64_t seed, std::int64_t t, int d) {
  if (d < 1) throw std::invalid_argument("sample_direction: d must be >= 1");
  const std::uint64_t key = subkey(subkey(seed, kTagDirection), static_cast<std::uint64_t>(t));
  Vec r(d);
  for (int j = 0; j < d; ++j) r[j] = uniform_pm1(subkey(key, static_cast<std::uint64_t>(j)));
  return r;
}

Vec estimate_gradient(const Oracle& oracle, const Vec& x, double h, const Kernel& kernel,
                      const Vec& direction, double noise_plus, double noise_minus) {
  if (!(h > 0.0)) throw std::invalid_argument("estimate_gradient: h must be > 0");
  check_dim(direction, x.size(), "estimate_gradient direction");
  h = std::max(h, kMinPerturbation);

  const std::size_t d = x.size();
  Vec probe(d);
  for (std::size_t j = 0; j < d; ++j) probe[j] = x[j] + h * direction[j];
  const double y_plus = oracle(probe) + noise_plus;
  for (std::size_t j = 0; j < d; ++j) probe[j] = x[j] - h * direction[j];
  const double y_minus = oracle(probe) + noise_minus;
  if (!std::isfinite(y_plus) || !std::isfinite(y_minus))
    throw std::runtime_error("estimate_gradient: non-finite oracle output");

  const double scale = (y_plus - y_minus) / (2.0 * h);
  Vec g(d);
  for (std::size_t j = 0; j < d; ++j) g[j] = scale * kernel(direction[j]);
  return g;
}

BiasEstimate mc_bias(const AdditiveObjective& obj, const Vec& x, double h, const Kernel& kernel,
                     std::int64_t n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("mc_bias: n_samples must be >= 1");
  const int d = obj.dim();
  check_dim(x, d, "mc_bias x");
  const Oracle oracle = [&obj](const Vec& z) { return obj.value(z); };

  Vec mean(d, 0.0), m2(d, 0.0);
  for (std::int64_t i = 1; i <= n_samples; ++i) {
    const Vec dir = sample_direction(seed, i, d);
    const Vec g = estimate_gradient(oracle, x, h, kernel, dir, 0.0, 0.0);
    for (int j = 0; j < d; ++j) {
      const double delta = g[j] - mean[j];
      mean[j] += delta / static_cast<double>(i);
      m2[j] += delta * (g[j] - mean[j]);
    }
  }

  BiasEstimate out;
  out.n = n_samples;
  out.bias = obj.gradient(x);
  out.se.assign(d, 0.0);
  for (int j = 0; j < d; ++j) {
    out.bias[j] = mean[j] - out.bias[j];
    if (n_samples > 1)
      out.se[j] = std::sqrt(m2[j] / (static_cast<double>(n_samples - 1) *
                                     static_cast<double>(n_samples)));
  }
  return out;
}

SecondMomentEstimate mc_second_moment(const AdditiveObjective& obj, const Vec& x, double h,
                                      const Kernel& kernel, const NoiseModel& noise,
                                      std::int64_t n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("mc_second_moment: n_samples must be >= 1");
  const int d = obj.dim();
  check_dim(x, d, "mc_second_moment x");
  const Oracle oracle = [&obj](const Vec& z) { return obj.value(z); };

  double mean = 0.0, m2 = 0.0;
  for (std::int64_t i = 1; i <= n_samples; ++i) {
    const Vec dir = sample_direction(seed, i, d);
    const double xi_plus = noise.draw(seed, i, QuerySide::plus);
    const double xi_minus = noise.draw(seed, i, QuerySide::minus);
    const Vec g = estimate_gradient(oracle, x, h, kernel, dir, xi_plus, xi_minus);
    const double v = norm_sq(g);
    const double delta = v - mean;
    mean += delta / static_cast<double>(i);
    m2 += delta * (v - mean);
  }

  SecondMomentEstimate out;
  out.n = n_samples;
  out.mean = mean;
  if (n_samples > 1)
    out.se = std::sqrt(m2 / (static_cast<double>(n_samples - 1) * static_cast<double>(n_samples)));
  return out;
}

}  // namespace zopt
