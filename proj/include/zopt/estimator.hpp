#pragma once

#include <cstdint>
#include <functional>

#include "zopt/kernel.hpp"
#include "zopt/objectives.hpp"
#include "zopt/vec.hpp"

namespace zopt {

using Oracle = std::function<double(const Vec&)>;

/// d independent components uniform on [-1,1], reproducibly derived from
/// (seed, t, coordinate). Rejects d <= 0.
Vec sample_direction(std::uint64_t seed, std::int64_t t, int d);

/// Randomized two-point gradient estimate from one symmetric query pair:
///
///   g_j = (y+ - y-) / (2h) * K(r_j),  y± = f(x ± h r) + xi±.
///
/// Consumes exactly two oracle evaluations. h is floored at 1e-8 to avoid
/// catastrophic cancellation in the divided difference; h <= 0 and non-finite
/// oracle outputs are rejected.
Vec estimate_gradient(const Oracle& oracle, const Vec& x, double h, const Kernel& kernel,
                      const Vec& direction, double noise_plus, double noise_minus);

/// Monte-Carlo estimate of E[g] - grad f(x) over n_samples fresh directions
/// with a noise-free oracle (zero-mean noise contributes no bias, and
/// removing it tightens the MC error). Componentwise standard errors of the
/// mean are reported alongside.
struct BiasEstimate {
  Vec bias;
  Vec se;
  std::int64_t n = 0;
};
BiasEstimate mc_bias(const AdditiveObjective& obj, const Vec& x, double h, const Kernel& kernel,
                     std::int64_t n_samples, std::uint64_t seed);

/// Monte-Carlo estimate of E[||g||^2] with the given noise model active.
struct SecondMomentEstimate {
  double mean = 0.0;
  double se = 0.0;
  std::int64_t n = 0;
};
SecondMomentEstimate mc_second_moment(const AdditiveObjective& obj, const Vec& x, double h,
                                      const Kernel& kernel, const NoiseModel& noise,
                                      std::int64_t n_samples, std::uint64_t seed);

}  // namespace zopt
