#include "zopt/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace zopt {

namespace {
constexpr double kDivergenceGuard = 1e12;
constexpr double kMinPerturbation = 1e-8;
}  // namespace

// ---------------------------------------------------------------------------
// FeasibleSet

FeasibleSet FeasibleSet::whole_space() { return {Type::whole_space, {}, {}, 0.0}; }

FeasibleSet FeasibleSet::ball(Vec center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("FeasibleSet::ball: radius must be > 0");
  if (center.empty()) throw std::invalid_argument("FeasibleSet::ball: empty center");
  return {Type::ball, std::move(center), {}, radius};
}

FeasibleSet FeasibleSet::box(Vec lo, Vec hi) {
  if (lo.empty() || lo.size() != hi.size())
    throw std::invalid_argument("FeasibleSet::box: corner dimensions disagree");
  for (std::size_t j = 0; j < lo.size(); ++j)
    if (!(lo[j] <= hi[j])) throw std::invalid_argument("FeasibleSet::box: requires lo <= hi");
  return {Type::box, std::move(lo), std::move(hi), 0.0};
}

Vec FeasibleSet::project(const Vec& p) const {
  switch (type_) {
    case Type::whole_space:
      return p;
    case Type::ball: {
      check_dim(p, a_.size(), "FeasibleSet::project");
      Vec out(p.size());
      double dist_sq = 0.0;
      for (std::size_t j = 0; j < p.size(); ++j) {
        out[j] = p[j] - a_[j];
        dist_sq += out[j] * out[j];
      }
      const double dist = std::sqrt(dist_sq);
      const double scale = dist > radius_ ? radius_ / dist : 1.0;
      for (std::size_t j = 0; j < p.size(); ++j) out[j] = a_[j] + scale * out[j];
      return out;
    }
    case Type::box: {
      check_dim(p, a_.size(), "FeasibleSet::project");
      Vec out(p.size());
      for (std::size_t j = 0; j < p.size(); ++j) out[j] = std::clamp(p[j], a_[j], b_[j]);
      return out;
    }
  }
  return p;
}

bool FeasibleSet::contains(const Vec& p, double tol) const {
  switch (type_) {
    case Type::whole_space:
      return true;
    case Type::ball: {
      check_dim(p, a_.size(), "FeasibleSet::contains");
      double dist_sq = 0.0;
      for (std::size_t j = 0; j < p.size(); ++j) {
        const double d = p[j] - a_[j];
        dist_sq += d * d;
      }
      return std::sqrt(dist_sq) <= radius_ + tol;
    }
    case Type::box: {
      check_dim(p, a_.size(), "FeasibleSet::contains");
      for (std::size_t j = 0; j < p.size(); ++j)
        if (p[j] < a_[j] - tol || p[j] > b_[j] + tol) return false;
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Schedules

void ScheduleParams::validate() const {
  const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(alpha) || !positive(lbar) || !positive(holder) || !positive(kappa) ||
      !positive(kappa_beta) || !positive(h_multiplier))
    throw std::invalid_argument("ScheduleParams: alpha, lbar, holder, kappa, kappa_beta and "
                                "h_multiplier must be positive and finite");
  if (!std::isfinite(beta) || beta < 2.0)
    throw std::invalid_argument("ScheduleParams: beta must be >= 2");
  if (!positive(sigma2))
    throw std::invalid_argument(
        "ScheduleParams: sigma2 must be > 0 (pass a synthetic floor for noiseless studies)");
  if (dim < 1) throw std::invalid_argument("ScheduleParams: dim must be >= 1");
  if (horizon < 1) throw std::invalid_argument("ScheduleParams: horizon must be >= 1");
}

StepSizes pl_schedule(std::int64_t t, const ScheduleParams& p) {
  p.validate();
  if (t < 1 || t > p.horizon) throw std::invalid_argument("pl_schedule: t out of [1, T]");

  const double cap = 1.0 / (18.0 * p.lbar * p.dim * p.kappa);
  const double decaying = 4.0 / (p.alpha * static_cast<double>(t));
  const bool decay_branch = decaying <= cap;

  const double prefactor =
      std::pow(3.0 * p.lbar / p.alpha * p.kappa * p.sigma2 / (p.holder * p.holder * p.kappa_beta * p.kappa_beta),
               1.0 / (2.0 * p.beta));
  const double scale = decay_branch ? static_cast<double>(t) : static_cast<double>(p.horizon);

  StepSizes s;
  s.eta = decay_branch ? decaying : cap;
  s.h = std::max(p.h_multiplier * prefactor * std::pow(scale, -1.0 / (2.0 * p.beta)),
                 kMinPerturbation);
  return s;
}

StepSizes sc_schedule(std::int64_t t, const ScheduleParams& p) {
  p.validate();
  if (t < 1 || t > p.horizon) throw std::invalid_argument("sc_schedule: t out of [1, T]");

  StepSizes s;
  s.eta = 4.0 / (p.alpha * (static_cast<double>(t) + 1.0));
  s.h = std::max(p.h_multiplier *
                     std::pow(1.5 * p.kappa * p.sigma2 /
                                  (static_cast<double>(t) * p.kappa_beta * p.kappa_beta * p.holder * p.holder),
                              1.0 / (2.0 * p.beta)),
                 kMinPerturbation);
  return s;
}

Vec descent_step(const Vec& x, const Vec& g, double eta, const FeasibleSet& set) {
  if (!(eta > 0.0)) throw std::invalid_argument("descent_step: eta must be > 0");
  check_dim(g, x.size(), "descent_step gradient");
  Vec moved(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) moved[j] = x[j] - eta * g[j];
  return set.project(moved);
}

Vec weighted_average(const std::vector<Vec>& iterates) {
  if (iterates.empty()) throw std::invalid_argument("weighted_average: empty iterate list");
  const double t_max = static_cast<double>(iterates.size());
  Vec avg(iterates.front().size(), 0.0);
  for (std::size_t t = 0; t < iterates.size(); ++t) {
    check_dim(iterates[t], avg.size(), "weighted_average iterate");
    const double w = static_cast<double>(t + 1);
    for (std::size_t j = 0; j < avg.size(); ++j) avg[j] += w * iterates[t][j];
  }
  const double scale = 2.0 / (t_max * (t_max + 1.0));
  for (double& v : avg) v *= scale;
  return avg;
}

// ---------------------------------------------------------------------------
// Drivers

namespace {

Trajectory run_driver(const AdditiveObjective& obj, const NoiseModel& noise, const Kernel& kernel,
                      const ScheduleParams& params, const FeasibleSet& set, const Vec& x1,
                      std::uint64_t seed, bool strongly_convex) {
  params.validate();
  const int d = obj.dim();
  check_dim(x1, d, "driver x1");
  if (params.dim != d) throw std::invalid_argument("driver: params.dim disagrees with objective");
  if (!all_finite(x1)) throw std::invalid_argument("driver: non-finite start");

  Trajectory traj;
  traj.iterates.reserve(static_cast<std::size_t>(params.horizon));

  Vec x = x1;
  Vec probe(d);
  for (std::int64_t t = 1; t <= params.horizon; ++t) {
    traj.iterates.push_back(x);
    if (norm(x) > kDivergenceGuard) {
      traj.aborted = true;
      break;
    }
    const StepSizes s = strongly_convex ? sc_schedule(t, params) : pl_schedule(t, params);
    const Vec dir = sample_direction(seed, t, d);

    for (int j = 0; j < d; ++j) probe[j] = x[j] + s.h * dir[j];
    const double y_plus = query_noisy(obj, noise, probe, t, QuerySide::plus, seed);
    for (int j = 0; j < d; ++j) probe[j] = x[j] - s.h * dir[j];
    const double y_minus = query_noisy(obj, noise, probe, t, QuerySide::minus, seed);
    traj.queries_used += 2;

    if (!std::isfinite(y_plus) || !std::isfinite(y_minus)) {
      traj.aborted = true;
      break;
    }
    const double scale = (y_plus - y_minus) / (2.0 * s.h);
    Vec g(d);
    for (int j = 0; j < d; ++j) g[j] = scale * kernel(dir[j]);

    x = descent_step(x, g, s.eta, set);
  }

  traj.final_point = traj.iterates.back();
  if (strongly_convex && !traj.aborted) traj.weighted = weighted_average(traj.iterates);
  return traj;
}

}  // namespace

Trajectory run_pl(const AdditiveObjective& obj, const NoiseModel& noise, const Kernel& kernel,
                  const ScheduleParams& params, const Vec& x1, std::uint64_t seed) {
  return run_driver(obj, noise, kernel, params, FeasibleSet::whole_space(), x1, seed, false);
}

Trajectory run_sc(const AdditiveObjective& obj, const NoiseModel& noise, const Kernel& kernel,
                  const ScheduleParams& params, const FeasibleSet& set, const Vec& x1,
                  std::uint64_t seed) {
  if (!set.contains(x1)) throw std::invalid_argument("run_sc: x1 outside the feasible set");
  return run_driver(obj, noise, kernel, params, set, x1, seed, true);
}

}  // namespace zopt
