#include "zopt/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "zopt/estimator.hpp"
#include "zopt/kernel.hpp"
#include "zopt/rng.hpp"

namespace zopt {

using nlohmann::json;

std::string driver_name(Driver d) { return d == Driver::pl ? "pl" : "sc"; }

// ---------------------------------------------------------------------------
// Config

namespace {

Vec broadcast(const json& node, int d, const std::string& what) {
  Vec out;
  if (node.is_number()) {
    out.assign(d, node.get<double>());
  } else if (node.is_array()) {
    out = node.get<Vec>();
    if (static_cast<int>(out.size()) != d)
      throw std::invalid_argument("config: '" + what + "' has wrong length");
  } else {
    throw std::invalid_argument("config: '" + what + "' must be a number or an array");
  }
  return out;
}

NoiseModel noise_from_json(const json& node) {
  const std::string type = node.at("type").get<std::string>();
  if (type == "none") return NoiseModel::none();
  if (type == "gaussian") return NoiseModel::gaussian(node.at("sigma").get<double>());
  if (type == "uniform") return NoiseModel::uniform(node.at("b").get<double>());
  if (type == "adversarial") return NoiseModel::adversarial(node.at("sigma").get<double>());
  throw std::invalid_argument("config: unknown noise type '" + type + "'");
}

FeasibleSet set_from_json(const json& node, int d) {
  const std::string type = node.at("type").get<std::string>();
  if (type == "all") return FeasibleSet::whole_space();
  if (type == "ball")
    return FeasibleSet::ball(broadcast(node.at("center"), d, "feasible_set.center"),
                             node.at("radius").get<double>());
  if (type == "box")
    return FeasibleSet::box(broadcast(node.at("lo"), d, "feasible_set.lo"),
                            broadcast(node.at("hi"), d, "feasible_set.hi"));
  throw std::invalid_argument("config: unknown feasible_set type '" + type + "'");
}

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
  }
  try {
    ExperimentConfig cfg;
    const std::string driver = doc.at("driver").get<std::string>();
    if (driver == "pl")
      cfg.driver = Driver::pl;
    else if (driver == "sc")
      cfg.driver = Driver::sc;
    else
      throw std::invalid_argument("config: driver must be 'pl' or 'sc'");
    cfg.objective_id = doc.at("objective").get<std::string>();
    cfg.d = doc.at("d").get<int>();
    cfg.beta = doc.at("beta").get<double>();
    cfg.t_values = doc.at("T").get<std::vector<std::int64_t>>();
    cfg.replications = doc.at("replications").get<int>();
    cfg.seed = doc.at("seed").get<std::uint64_t>();
    cfg.noise = noise_from_json(doc.at("noise"));
    cfg.h_multiplier = doc.value("h_multiplier", 1.0);
    cfg.sigma2_floor = doc.value("sigma2_floor", 0.0);
    if (doc.contains("feasible_set"))
      cfg.set = set_from_json(doc.at("feasible_set"), cfg.d);
    cfg.x1 = doc.contains("x1") ? broadcast(doc.at("x1"), cfg.d, "x1") : Vec(cfg.d, 0.0);
    cfg.validate();
    return cfg;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
}

ExperimentConfig config_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_json_text(buf.str());
}

void ExperimentConfig::validate() const {
  if (d < 1) throw std::invalid_argument("config: d must be >= 1");
  if (objective_id.empty()) throw std::invalid_argument("config: objective id missing");
  if (t_values.empty()) throw std::invalid_argument("config: T grid is empty");
  for (std::size_t i = 0; i < t_values.size(); ++i) {
    if (t_values[i] < 1) throw std::invalid_argument("config: T values must be >= 1");
    if (i > 0 && t_values[i] <= t_values[i - 1])
      throw std::invalid_argument("config: T values must be strictly increasing");
  }
  if (replications < 1) throw std::invalid_argument("config: replications must be >= 1");
  if (!(h_multiplier > 0.0)) throw std::invalid_argument("config: h_multiplier must be > 0");
  if (sigma2_floor < 0.0) throw std::invalid_argument("config: sigma2_floor must be >= 0");
  if (!(std::max(noise.sigma2(), sigma2_floor) > 0.0))
    throw std::invalid_argument(
        "config: schedules need sigma2 > 0; set sigma2_floor for noiseless runs");
  if (driver == Driver::sc && !set.bounded())
    throw std::invalid_argument(
        "config: the sc driver requires a compact feasible set (ball or box)");
  if (driver == Driver::pl && set.bounded())
    throw std::invalid_argument("config: the pl driver is unconstrained; drop feasible_set");
  check_dim(x1, static_cast<std::size_t>(d), "config x1");
}

// ---------------------------------------------------------------------------
// Grid runner

std::uint64_t derive_cell_seed(std::uint64_t seed, std::int64_t horizon, int replication) {
  return subkey(subkey(subkey(seed, kTagCellSeed), static_cast<std::uint64_t>(horizon)),
                static_cast<std::uint64_t>(replication));
}

std::vector<ExperimentRecord> run_grid(const ExperimentConfig& config) {
  config.validate();
  const AdditiveObjective obj = make_objective(config.objective_id, config.d);
  const ObjectiveCertificate cert = build_certificate(obj, config.beta);
  if (config.driver == Driver::sc &&
      cert.kind != ObjectiveCertificate::Kind::strongly_convex)
    throw std::invalid_argument("run_grid: objective lacks a strong convexity certificate");
  const Kernel kernel = build_kernel(config.beta);
  const double sigma2 = std::max(config.noise.sigma2(), config.sigma2_floor);

  std::vector<ExperimentRecord> records;
  records.reserve(config.t_values.size() * static_cast<std::size_t>(config.replications));
  for (const std::int64_t horizon : config.t_values) {
    ScheduleParams params;
    params.alpha = cert.alpha;
    params.lbar = cert.lbar;
    params.holder = cert.holder;
    params.beta = config.beta;
    params.sigma2 = sigma2;
    params.dim = config.d;
    params.horizon = horizon;
    params.kappa = kernel.kappa();
    params.kappa_beta = kernel.kappa_beta();
    params.h_multiplier = config.h_multiplier;

    for (int rep = 0; rep < config.replications; ++rep) {
      const std::uint64_t cell_seed = derive_cell_seed(config.seed, horizon, rep);
      const auto start = std::chrono::steady_clock::now();
      const Trajectory traj =
          config.driver == Driver::pl
              ? run_pl(obj, config.noise, kernel, params, config.x1, cell_seed)
              : run_sc(obj, config.noise, kernel, params, config.set, config.x1, cell_seed);
      const auto stop = std::chrono::steady_clock::now();

      const Vec& report =
          (config.driver == Driver::sc && traj.weighted) ? *traj.weighted : traj.final_point;
      ExperimentRecord rec;
      rec.driver = driver_name(config.driver);
      rec.objective = config.objective_id;
      rec.d = config.d;
      rec.beta = config.beta;
      rec.horizon = horizon;
      rec.replication = rep;
      rec.seed = cell_seed;
      rec.error = obj.value(report) - cert.f_min;
      rec.queries = traj.queries_used;
      rec.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
      rec.aborted = traj.aborted;
      records.push_back(std::move(rec));
    }
  }
  return records;
}

// ---------------------------------------------------------------------------
// Rate fit

RateFit fit_rate(const std::vector<ExperimentRecord>& records, double beta) {
  if (!std::isfinite(beta) || beta < 2.0)
    throw std::invalid_argument("fit_rate: beta must be >= 2");

  std::vector<std::int64_t> horizons;
  for (const auto& r : records) horizons.push_back(r.horizon);
  std::sort(horizons.begin(), horizons.end());
  horizons.erase(std::unique(horizons.begin(), horizons.end()), horizons.end());
  if (horizons.size() < 3)
    throw std::invalid_argument("fit_rate: need at least 3 distinct T values");

  RateFit fit;
  fit.target = -(beta - 1.0) / beta;

  std::vector<double> log_t, log_err;
  for (const std::int64_t horizon : horizons) {
    std::vector<double> errs;
    for (const auto& r : records)
      if (r.horizon == horizon) errs.push_back(r.error);
    std::sort(errs.begin(), errs.end());
    const std::size_t n = errs.size();
    double med = (n % 2 == 1) ? errs[n / 2] : 0.5 * (errs[n / 2 - 1] + errs[n / 2]);
    if (med <= 0.0) {
      med = 1e-16;
      fit.clamped = true;
    }
    log_t.push_back(std::log(static_cast<double>(horizon)));
    log_err.push_back(std::log(med));
  }

  const double n = static_cast<double>(log_t.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < log_t.size(); ++i) {
    sx += log_t[i];
    sy += log_err[i];
    sxx += log_t[i] * log_t[i];
    sxy += log_t[i] * log_err[i];
  }
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;

  double ss_res = 0.0, ss_tot = 0.0;
  const double mean_y = sy / n;
  for (std::size_t i = 0; i < log_t.size(); ++i) {
    const double pred = fit.intercept + fit.slope * log_t[i];
    ss_res += (log_err[i] - pred) * (log_err[i] - pred);
    ss_tot += (log_err[i] - mean_y) * (log_err[i] - mean_y);
  }
  fit.r2 = ss_tot > 1e-300 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

constexpr const char* kCsvHeader =
    "driver,objective,d,beta,T,replication,seed,error,queries,wall_ms,aborted";

}  // namespace

void emit_csv(const std::vector<ExperimentRecord>& records, std::ostream& os) {
  os << kCsvHeader << '\n';
  for (const auto& r : records) {
    os << csv_quote(r.driver) << ',' << csv_quote(r.objective) << ',' << r.d << ','
       << fmt_double(r.beta) << ',' << r.horizon << ',' << r.replication << ',' << r.seed << ','
       << fmt_double(r.error) << ',' << r.queries << ',' << fmt_double(r.wall_ms) << ','
       << (r.aborted ? 1 : 0) << '\n';
  }
}

void emit_csv_file(const std::vector<ExperimentRecord>& records, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::invalid_argument("emit_csv: cannot open '" + path + "' for writing");
  emit_csv(records, os);
  os.flush();
  if (!os) throw std::runtime_error("emit_csv: write to '" + path + "' failed");
}

std::vector<ExperimentRecord> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("read_csv: empty input");
  if (line != kCsvHeader) throw std::invalid_argument("read_csv: unexpected header");

  std::vector<ExperimentRecord> records;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 11) throw std::invalid_argument("read_csv: malformed row");
    ExperimentRecord r;
    r.driver = f[0];
    r.objective = f[1];
    r.d = std::stoi(f[2]);
    r.beta = std::stod(f[3]);
    r.horizon = std::stoll(f[4]);
    r.replication = std::stoi(f[5]);
    r.seed = std::stoull(f[6]);
    r.error = std::stod(f[7]);
    r.queries = std::stoll(f[8]);
    r.wall_ms = std::stod(f[9]);
    r.aborted = f[10] == "1";
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<ExperimentRecord> read_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("read_csv: cannot open '" + path + "'");
  return read_csv(is);
}

// ---------------------------------------------------------------------------
// Lemma verification

namespace {

Vec probe_point(int d) {
  static const double coords[4] = {0.8, -1.9, 2.6, 1.2};
  Vec x(d);
  for (int j = 0; j < d; ++j) x[j] = coords[j % 4];
  return x;
}

}  // namespace

LemmaReport verify_lemmas(std::int64_t n_samples, std::uint64_t seed) {
  if (n_samples < 2) throw std::invalid_argument("verify_lemmas: n_samples must be >= 2");
  LemmaReport report;
  std::uint64_t cell_index = 0;
  const auto cell_seed = [&] { return subkey(seed, cell_index++); };

  // Bias cells: ||mean g - grad f|| <= kappa_beta L sqrt(d) h^{beta-1} + 3 SE.
  struct BiasSpec {
    std::string id;
    double beta;
    double holder;  // certified L for the family at beta; 0 when the Taylor
                    // remainder vanishes identically
  };
  const std::vector<BiasSpec> bias_specs = {
      {"quad-sine:a=1,c=0.5", 2.0, 0.75},
      {"quad-sine:a=1,c=0.5", 3.0, 0.5 / 6.0},
      {"quadratic:a=2,c=0", 2.0, 1.0},
      {"linear:b=1", 2.0, 0.0},
  };
  for (const auto& spec : bias_specs) {
    const Kernel kernel = build_kernel(spec.beta);
    for (const int d : {1, 4}) {
      const AdditiveObjective obj = make_objective(spec.id, d);
      const Vec x = probe_point(d);
      for (const double h : {0.4, 0.2, 0.1}) {
        const BiasEstimate est = mc_bias(obj, x, h, kernel, n_samples, cell_seed());
        LemmaCell cell;
        cell.kind = "bias";
        cell.objective = spec.id;
        cell.d = d;
        cell.beta = spec.beta;
        cell.h = h;
        cell.measured = norm(est.bias);
        cell.se = norm(est.se);
        cell.bound = kernel.kappa_beta() * spec.holder * std::sqrt(static_cast<double>(d)) *
                     std::pow(h, spec.beta - 1.0);
        cell.pass = cell.measured <= cell.bound + 3.0 * cell.se;
        report.cells.push_back(std::move(cell));
      }
    }
  }

  // Second-moment cells:
  // E||g||^2 <= (3/2) kappa d ((3/4)(d Lbar^2 h^2 + 8 ||grad f||^2) + sigma^2/h^2) + 3 SE,
  // plus the exact closed form sigma^2 kappa / (2 h^2) for the zero objective at d=1.
  const Kernel kernel2 = build_kernel(2.0);
  struct MomentSpec {
    std::string id;
    double lbar;
  };
  const std::vector<MomentSpec> moment_specs = {{"zero", 0.0}, {"quadratic:a=2,c=0", 2.0}};
  for (const auto& spec : moment_specs) {
    for (const int d : {1, 4}) {
      const AdditiveObjective obj = make_objective(spec.id, d);
      const Vec x(d, 0.3);
      const double grad_sq = norm_sq(obj.gradient(x));
      for (const double sigma : {0.3, 1.0}) {
        const NoiseModel noise = NoiseModel::gaussian(sigma);
        for (const double h : {0.1, 0.3}) {
          const SecondMomentEstimate est =
              mc_second_moment(obj, x, h, kernel2, noise, n_samples, cell_seed());
          LemmaCell cell;
          cell.kind = "second-moment";
          cell.objective = spec.id;
          cell.d = d;
          cell.beta = 2.0;
          cell.h = h;
          cell.sigma = sigma;
          cell.measured = est.mean;
          cell.se = est.se;
          cell.bound = 1.5 * kernel2.kappa() * d *
                       (0.75 * (d * spec.lbar * spec.lbar * h * h + 8.0 * grad_sq) +
                        sigma * sigma / (h * h));
          cell.pass = cell.measured <= cell.bound + 3.0 * cell.se;
          report.cells.push_back(cell);

          if (spec.lbar == 0.0 && d == 1) {
            LemmaCell closed;
            closed.kind = "second-moment-closed-form";
            closed.objective = spec.id;
            closed.d = d;
            closed.beta = 2.0;
            closed.h = h;
            closed.sigma = sigma;
            closed.measured = est.mean;
            closed.se = est.se;
            closed.bound = sigma * sigma * kernel2.kappa() / (2.0 * h * h);
            closed.pass = std::abs(closed.measured - closed.bound) <= 3.0 * closed.se;
            report.cells.push_back(std::move(closed));
          }
        }
      }
    }
  }

  report.pass = std::all_of(report.cells.begin(), report.cells.end(),
                            [](const LemmaCell& c) { return c.pass; });
  return report;
}

}  // namespace zopt
