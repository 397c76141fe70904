// Command-line front end: seeded experiment grids, rate fits, and the
// kernel / lemma / certificate verification suites.
//
// Exit codes: 0 success, 1 validation error, 2 property violation,
// 3 runtime divergence.

#include <cinttypes>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "zopt/estimator.hpp"
#include "zopt/harness.hpp"
#include "zopt/kernel.hpp"
#include "zopt/objectives.hpp"
#include "zopt/optimizer.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitViolation = 2;
constexpr int kExitDivergence = 3;

int cmd_run(const std::string& config_path, const std::string& out_path) {
  zopt::ExperimentConfig config = zopt::config_from_file(config_path);
  const auto records = zopt::run_grid(config);
  zopt::emit_csv_file(records, out_path);

  std::int64_t queries = 0;
  int aborted = 0;
  for (const auto& r : records) {
    queries += r.queries;
    aborted += r.aborted ? 1 : 0;
  }
  std::printf("run: %zu records, %" PRId64 " queries -> %s\n", records.size(), queries,
              out_path.c_str());
  if (aborted > 0) {
    std::printf("run: %d cell(s) hit the divergence guard\n", aborted);
    return kExitDivergence;
  }
  return kExitOk;
}

int cmd_fit(const std::string& in_path, double beta) {
  const auto records = zopt::read_csv_file(in_path);
  const zopt::RateFit fit = zopt::fit_rate(records, beta);
  std::printf("slope     % .6f\n", fit.slope);
  std::printf("intercept % .6f\n", fit.intercept);
  std::printf("r2        % .6f\n", fit.r2);
  std::printf("target    % .6f\n", fit.target);
  if (fit.clamped) std::printf("warning: nonpositive medians clamped to 1e-16 before the log\n");
  return kExitOk;
}

int cmd_verify_kernel(double beta) {
  const zopt::Kernel kernel = zopt::build_kernel(beta);
  const int ell = kernel.order().ell;
  std::printf("beta=%g ell=%d coeffs:", beta, ell);
  for (double c : kernel.coeffs()) std::printf(" %.12g", c);
  std::printf("\n");

  bool ok = true;
  for (int j = 0; j <= ell; ++j) {
    const double want = j == 1 ? 1.0 : 0.0;
    const double got = zopt::kernel_moment(kernel, j);
    const bool pass = std::abs(got - want) <= 1e-10;
    ok = ok && pass;
    std::printf("  moment j=%d: %.3e (want %g)  %s\n", j, got, want, pass ? "ok" : "VIOLATED");
  }

  // 1e6-node Riemann cross-check of both constants (midpoint rule under the
  // uniform law on [-1,1]).
  const std::int64_t n = 1000000;
  double riemann_kappa = 0.0, riemann_kappa_beta = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    const double u = -1.0 + 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    const double v = kernel(u);
    riemann_kappa += v * v;
    riemann_kappa_beta += std::pow(std::abs(u), beta) * std::abs(v);
  }
  riemann_kappa /= static_cast<double>(n);
  riemann_kappa_beta /= static_cast<double>(n);

  const double kappa_err = std::abs(kernel.kappa() - riemann_kappa) / riemann_kappa;
  const double kb_err = std::abs(kernel.kappa_beta() - riemann_kappa_beta) / riemann_kappa_beta;
  ok = ok && kappa_err <= 1e-6 && kb_err <= 1e-6;
  std::printf("  kappa      %.12g (riemann %.12g, rel err %.2e)\n", kernel.kappa(), riemann_kappa,
              kappa_err);
  std::printf("  kappa_beta %.12g (riemann %.12g, rel err %.2e)\n", kernel.kappa_beta(),
              riemann_kappa_beta, kb_err);
  std::printf("verify-kernel: %s\n", ok ? "PASS" : "FAIL");
  return ok ? kExitOk : kExitViolation;
}

int cmd_verify_lemmas(const std::string& config_path, std::int64_t samples, std::uint64_t seed) {
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw std::invalid_argument("verify-lemmas: cannot open '" + config_path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const auto doc = nlohmann::json::parse(buf.str());
    samples = doc.value("n_samples", samples);
    seed = doc.value("seed", seed);
  }
  const zopt::LemmaReport report = zopt::verify_lemmas(samples, seed);
  for (const auto& c : report.cells) {
    std::printf("%-26s %-22s d=%d beta=%g h=%.2f sigma=%.2f  measured=%-12.5g bound=%-12.5g "
                "se=%-10.3g %s\n",
                c.kind.c_str(), c.objective.c_str(), c.d, c.beta, c.h, c.sigma, c.measured,
                c.bound, c.se, c.pass ? "ok" : "VIOLATED");
  }
  std::printf("verify-lemmas: %zu cells, %s\n", report.cells.size(),
              report.pass ? "PASS" : "FAIL");
  return report.pass ? kExitOk : kExitViolation;
}

int cmd_certify(const std::string& id, int d, double beta) {
  const zopt::AdditiveObjective obj = zopt::make_objective(id, d);
  const zopt::ObjectiveCertificate cert = zopt::build_certificate(obj, beta);
  const bool strongly_convex = cert.kind == zopt::ObjectiveCertificate::Kind::strongly_convex;

  std::printf("objective  %s (d=%d, beta=%g)\n", id.c_str(), d, beta);
  std::printf("kind       %s\n", strongly_convex ? "strongly-convex" : "pl");
  std::printf("alpha      %.12g\n", cert.alpha);
  std::printf("lbar       %.12g\n", cert.lbar);
  std::printf("holder L   %.12g\n", cert.holder);
  std::printf("f*         %.12g\n", cert.f_min);

  bool ok = true;
  for (std::size_t j = 0; j < obj.components().size(); ++j) {
    const auto holder = zopt::verify_holder(obj.components()[j], beta, cert.holder, -10.0, 10.0, 201);
    ok = ok && holder.pass;
    if (j == 0 || !holder.pass)
      std::printf("holder[%zu]  worst ratio %.6g at (x=%.3f, z=%.3f)  %s\n", j,
                  holder.worst_ratio, holder.worst_x, holder.worst_z,
                  holder.pass ? "ok" : "VIOLATED");
  }

  if (strongly_convex) {
    const auto sc = zopt::verify_sc(obj, cert.alpha, -3.0, 3.0, 2000, 7);
    ok = ok && sc.pass;
    std::printf("sc check   worst violation %.3e  %s\n", sc.worst_violation,
                sc.pass ? "ok" : "VIOLATED");
  }
  {
    const int n_grid = d == 1 ? 4001 : d == 2 ? 201 : d == 3 ? 41 : 17;
    const auto pl = zopt::verify_pl(obj, cert.alpha, cert.f_min, -10.0, 10.0, n_grid);
    ok = ok && pl.pass;
    std::printf("pl check   worst ratio %.6g (alpha %.6g)  %s\n", pl.worst_ratio, cert.alpha,
                pl.pass ? "ok" : "VIOLATED");
  }
  std::printf("certify: %s\n", ok ? "PASS" : "FAIL");
  return ok ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zeroth-order optimization for additive models: experiment harness"};
  app.require_subcommand(1);

  std::string config_path, out_path = "results.csv", in_path, objective_id;
  double beta = 2.0;
  int d = 1;
  std::int64_t samples = 100000;
  std::uint64_t seed = 20240601;

  auto* run = app.add_subcommand("run", "run a seeded experiment grid and emit CSV");
  run->add_option("--config", config_path, "JSON experiment config")->required();
  run->add_option("--out", out_path, "output CSV path");

  auto* fit = app.add_subcommand("fit", "fit log median error against log T from a CSV");
  fit->add_option("--in", in_path, "input CSV")->required();
  fit->add_option("--beta", beta, "Hölder order for the target slope")->required();

  auto* vk = app.add_subcommand("verify-kernel", "check the kernel moment conditions");
  vk->add_option("--beta", beta, "Hölder order")->required();

  auto* vl = app.add_subcommand("verify-lemmas", "Monte-Carlo bias / second-moment bound checks");
  vl->add_option("--config", config_path, "optional JSON with n_samples / seed");
  vl->add_option("--samples", samples, "samples per cell");
  vl->add_option("--seed", seed, "base seed");

  auto* cert = app.add_subcommand("certify", "verify an objective's certified constants");
  cert->add_option("--objective", objective_id, "objective id, e.g. quadratic:a=2,c=1")->required();
  cert->add_option("--d", d, "dimension");
  cert->add_option("--beta", beta, "Hölder order");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_path);
    if (fit->parsed()) return cmd_fit(in_path, beta);
    if (vk->parsed()) return cmd_verify_kernel(beta);
    if (vl->parsed()) return cmd_verify_lemmas(config_path, samples, seed);
    if (cert->parsed()) return cmd_certify(objective_id, d, beta);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
  return kExitValidation;
}
