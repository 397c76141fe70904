#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "zopt/objectives.hpp"
#include "zopt/optimizer.hpp"
#include "zopt/vec.hpp"

namespace zopt {

enum class Driver { pl, sc };

std::string driver_name(Driver d);

/// One experiment grid: seeded replications over the T values of a single
/// (driver, objective, d, beta, noise) cell family. Loaded from a JSON
/// document; see configs/ for the schema by example.
struct ExperimentConfig {
  Driver driver = Driver::pl;
  std::string objective_id;
  int d = 1;
  double beta = 2.0;
  std::vector<std::int64_t> t_values;
  int replications = 1;
  std::uint64_t seed = 0;
  NoiseModel noise = NoiseModel::none();
  double h_multiplier = 1.0;
  double sigma2_floor = 0.0;  // schedule sigma2 = max(noise.sigma2(), floor)
  FeasibleSet set = FeasibleSet::whole_space();
  Vec x1;

  void validate() const;
};

ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig config_from_file(const std::string& path);

struct ExperimentRecord {
  std::string driver;
  std::string objective;
  int d = 0;
  double beta = 0.0;
  std::int64_t horizon = 0;
  int replication = 0;
  std::uint64_t seed = 0;  // derived cell seed
  double error = 0.0;      // f(reported point) - f*
  std::int64_t queries = 0;
  double wall_ms = 0.0;
  bool aborted = false;
};

/// Per-cell seed: subkey chain over (seed, kTagCellSeed, T, replication).
std::uint64_t derive_cell_seed(std::uint64_t seed, std::int64_t horizon, int replication);

/// Runs every (T, replication) cell sequentially in canonical order. Output
/// is deterministic for a fixed config up to the wall_ms column.
std::vector<ExperimentRecord> run_grid(const ExperimentConfig& config);

/// OLS of log(median error per T) against log T. Nonpositive medians are
/// clamped to 1e-16 before the log and flagged.
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double target = 0.0;  // -(beta-1)/beta
  bool clamped = false;
};
RateFit fit_rate(const std::vector<ExperimentRecord>& records, double beta);

/// CSV with header driver,objective,d,beta,T,replication,seed,error,queries,
/// wall_ms,aborted; 17 significant digits so numeric fields round-trip
/// bit-exactly. Fields containing commas or quotes are double-quoted.
void emit_csv(const std::vector<ExperimentRecord>& records, std::ostream& os);
void emit_csv_file(const std::vector<ExperimentRecord>& records, const std::string& path);
std::vector<ExperimentRecord> read_csv(std::istream& is);
std::vector<ExperimentRecord> read_csv_file(const std::string& path);

/// Monte-Carlo verification of the estimator bias and second-moment bounds
/// over a fixed grid of (objective, x, h, noise) cells. A cell passes when
/// the measurement is below its bound plus 3 standard errors.
struct LemmaCell {
  std::string kind;       // "bias" or "second-moment"
  std::string objective;
  int d = 0;
  double beta = 0.0;
  double h = 0.0;
  double sigma = 0.0;
  double measured = 0.0;
  double bound = 0.0;
  double se = 0.0;
  bool pass = false;
};
struct LemmaReport {
  std::vector<LemmaCell> cells;
  bool pass = false;
};
LemmaReport verify_lemmas(std::int64_t n_samples, std::uint64_t seed);

}  // namespace zopt
