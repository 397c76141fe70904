#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "zopt/estimator.hpp"
#include "zopt/kernel.hpp"
#include "zopt/objectives.hpp"
#include "zopt/vec.hpp"

namespace zopt {

/// Closed convex feasible region: the whole space, a Euclidean ball, or a
/// coordinate box. Projection is the exact Euclidean one in each case.
class FeasibleSet {
 public:
  enum class Type { whole_space, ball, box };

  static FeasibleSet whole_space();
  static FeasibleSet ball(Vec center, double radius);
  static FeasibleSet box(Vec lo, Vec hi);

  Vec project(const Vec& p) const;
  bool contains(const Vec& p, double tol = 1e-12) const;
  /// True for ball/box (compact); the strongly convex driver requires this.
  bool bounded() const { return type_ != Type::whole_space; }
  Type type() const { return type_; }

  const Vec& center() const { return a_; }
  double radius() const { return radius_; }
  const Vec& lower() const { return a_; }
  const Vec& upper() const { return b_; }

 private:
  FeasibleSet(Type t, Vec a, Vec b, double r) : type_(t), a_(std::move(a)), b_(std::move(b)), radius_(r) {}
  Type type_;
  Vec a_, b_;       // ball center / box corners
  double radius_ = 0.0;
};

/// Inputs to the step-size / perturbation schedules. All constants are taken
/// as known from the objective certificate and noise declaration; sigma2 = 0
/// is rejected (the schedules presuppose noise — pass a synthetic floor such
/// as 1e-6 for noiseless studies).
struct ScheduleParams {
  double alpha = 0.0;       // PL / strong convexity modulus
  double lbar = 0.0;        // gradient Lipschitz constant
  double holder = 0.0;      // Hölder constant L at `beta`
  double beta = 2.0;        // Hölder order
  double sigma2 = 0.0;      // noise second-moment bound, > 0
  int dim = 0;              // d
  std::int64_t horizon = 0; // T
  double kappa = 0.0;       // kernel square moment E[K^2]
  double kappa_beta = 0.0;  // kernel absolute moment E[|u|^beta |K|]
  double h_multiplier = 1.0;

  void validate() const;
};

struct StepSizes {
  double eta = 0.0;
  double h = 0.0;
};

/// PL driver schedule: eta_t = min(4/(alpha t), 1/(18 Lbar d kappa)), and
/// h_t = (3 Lbar kappa sigma^2 / (alpha L^2 kappa_beta^2))^{1/(2 beta)} times
/// t^{-1/(2 beta)} on the decaying branch or T^{-1/(2 beta)} while the cap is
/// active; ties resolve to the decaying branch.
StepSizes pl_schedule(std::int64_t t, const ScheduleParams& p);

/// Strongly convex driver schedule: eta_t = 4/(alpha (t+1)) and
/// h_t = (3 kappa sigma^2 / (2 t kappa_beta^2 L^2))^{1/(2 beta)}.
StepSizes sc_schedule(std::int64_t t, const ScheduleParams& p);

/// One projected update x <- Proj(x - eta g).
Vec descent_step(const Vec& x, const Vec& g, double eta, const FeasibleSet& set);

/// 2/(T(T+1)) * sum_t t x_t over the stored iterates.
Vec weighted_average(const std::vector<Vec>& iterates);

struct Trajectory {
  std::vector<Vec> iterates;       // x_1 .. x_T (query points)
  std::int64_t queries_used = 0;   // exactly 2T on normal completion
  Vec final_point;                 // x_T
  std::optional<Vec> weighted;     // populated by the SC driver
  bool aborted = false;            // divergence guard tripped
};

/// Unconstrained PL driver: T rounds of two-point queries and plain descent
/// steps. Aborts (flagged, not thrown) if an iterate norm exceeds 1e12.
Trajectory run_pl(const AdditiveObjective& obj, const NoiseModel& noise, const Kernel& kernel,
                  const ScheduleParams& params, const Vec& x1, std::uint64_t seed);

/// Projected driver for the strongly convex case; every iterate stays in the
/// set and the t-weighted average is populated. x1 must be feasible.
Trajectory run_sc(const AdditiveObjective& obj, const NoiseModel& noise, const Kernel& kernel,
                  const ScheduleParams& params, const FeasibleSet& set, const Vec& x1,
                  std::uint64_t seed);

}  // namespace zopt
