#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zopt/vec.hpp"

namespace zopt {

// One-dimensional component families. The first three are the certified
// test zoo; linear / sine / zero are diagnostic-only (estimator checks) and
// carry no optimizer certificate.
//
//   quadratic  (a/2)(x-c)^2          a > 0
//   quad_sine  (a/2)x^2 + c sin x    0 <= c < a   (strongly convex)
//   quad_sin2  s x^2 + 3 sin^2 x     s > 0        (PL; nonconvex for s < 3)
//   linear     b x
//   sine       amp sin x
//   zero       0
class Component1D {
 public:
  enum class Family { quadratic, quad_sine, quad_sin2, linear, sine, zero };

  static Component1D quadratic(double a, double c);
  static Component1D quad_sine(double a, double c);
  static Component1D quad_sin2(double s);
  static Component1D linear(double b);
  static Component1D sine(double amp);
  static Component1D zero();

  double value(double x) const;
  /// m-th derivative, m >= 1, exact and analytic for every family.
  double derivative(int m, double x) const;

  Family family() const { return family_; }
  double param0() const { return p0_; }
  double param1() const { return p1_; }

 private:
  Component1D(Family f, double p0, double p1) : family_(f), p0_(p0), p1_(p1) {}
  Family family_;
  double p0_ = 0.0;
  double p1_ = 0.0;
};

/// f(x) = sum_j f_j(x_j). Components are immutable after construction.
class AdditiveObjective {
 public:
  explicit AdditiveObjective(std::vector<Component1D> components);

  int dim() const { return static_cast<int>(components_.size()); }
  double value(const Vec& x) const;
  /// Analytic gradient; diagnostics only, never consumed by the drivers.
  Vec gradient(const Vec& x) const;
  const std::vector<Component1D>& components() const { return components_; }

 private:
  std::vector<Component1D> components_;
};

// --------------------------------------------------------------------------
// Noise models. The declared second-moment bound sigma2() is what the
// schedules consume; the adversarial variant is deterministic in (t, side)
// (non-zero-mean, dependent across rounds) and exercises the weakest
// admissible noise contract.
enum class QuerySide { plus, minus };

class NoiseModel {
 public:
  enum class Type { none, gaussian, uniform, adversarial };

  static NoiseModel none();
  static NoiseModel gaussian(double sigma);
  static NoiseModel uniform(double bound);        // uniform on [-b, b]
  static NoiseModel adversarial(double sigma);    // sigma*sin(7t) / sigma*cos(11t)

  Type type() const { return type_; }
  double param() const { return param_; }
  /// Declared bound on E[xi^2]: 0, sigma^2, b^2/3, sigma^2 respectively.
  double sigma2() const;
  double draw(std::uint64_t seed, std::int64_t t, QuerySide side) const;
  std::string describe() const;

 private:
  NoiseModel(Type t, double p) : type_(t), param_(p) {}
  Type type_;
  double param_ = 0.0;
};

/// One noisy query y = f(x) + xi at round t.
double query_noisy(const AdditiveObjective& obj, const NoiseModel& noise, const Vec& x,
                   std::int64_t t, QuerySide side, std::uint64_t seed);

// --------------------------------------------------------------------------
// Certified constants for an objective at a declared Hölder order.
struct ObjectiveCertificate {
  enum class Kind { pl, strongly_convex };
  Kind kind = Kind::pl;
  double alpha = 0.0;   // PL / strong convexity modulus
  double lbar = 0.0;    // gradient Lipschitz constant
  double holder = 0.0;  // Hölder constant L for `beta`
  double beta = 2.0;
  double f_min = 0.0;
  Vec minimizer;
  double grad_bound = 0.0;  // sup ||grad f|| over the (inflated) feasible set; 0 if unconstrained
};

/// Derives the certificate for a zoo objective (throws for diagnostic
/// families). Transcendental families support beta in [2, 3]; quadratics any
/// beta >= 2. PL moduli for quad_sin2 come from a deterministic grid search
/// over [-10, 10] with local refinement.
ObjectiveCertificate build_certificate(const AdditiveObjective& obj, double beta);

/// sup ||grad f|| over the coordinate box [lo, hi] via dense 1-d grids,
/// combined as sqrt(sum_j sup_j^2) (exact for boxes, conservative otherwise).
double grad_sup_on_box(const AdditiveObjective& obj, const Vec& lo, const Vec& hi);

// --------------------------------------------------------------------------
// Numeric verification of the certificate constants.
struct HolderCheck {
  bool pass = false;
  double worst_ratio = 0.0;  // max over the grid of |remainder| / |z-x|^beta
  double worst_x = 0.0;
  double worst_z = 0.0;
};
HolderCheck verify_holder(const Component1D& comp, double beta, double holder_l, double lo,
                          double hi, int n_grid);

struct PlCheck {
  bool pass = false;
  double worst_ratio = 0.0;  // min over the grid of ||grad f||^2 / (2 (f - f*))
  Vec worst_point;
};
PlCheck verify_pl(const AdditiveObjective& obj, double alpha, double f_min, double lo, double hi,
                  int n_grid);

struct ScCheck {
  bool pass = false;
  double worst_violation = 0.0;  // max over pairs of lhs - rhs (<= tol passes)
};
ScCheck verify_sc(const AdditiveObjective& obj, double alpha, double lo, double hi, int n_pairs,
                  std::uint64_t seed);

// --------------------------------------------------------------------------
// Zoo registry. Ids look like "quadratic:a=2,c=1", "quad-sine:a=1,c=0.5",
// "quad-sin2:s=1", plus the diagnostic "linear:b=1", "sine:amp=1", "zero".
// All d components share the parsed parameters.
AdditiveObjective make_objective(const std::string& id, int d);

}  // namespace zopt
