// rplm: robust wavelet regression on equispaced grids.
//
//   rplm estimate --input data.csv --output fhat.csv [--wavelet db4] ...
//   rplm simulate --config sim.cfg [--output reps.csv] [--dataset-dir dir]
//   rplm rate-study --config sim.cfg --out-dir results/
//   rplm coupling-check --error cauchy --kappa 1001 --reps 20000
//
// Exit status: 0 ok, 2 bad input, 3 degenerate noise estimate under --strict.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "rplm/config.hpp"
#include "rplm/csv_io.hpp"
#include "rplm/error.hpp"
#include "rplm/estimator.hpp"
#include "rplm/simulation.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;

struct EstimateArgs {
  std::string input;
  std::string output;
  std::string wavelet = "db4";
  std::optional<int> j0;
  std::optional<std::size_t> block_cardinality;
  std::optional<double> h_inv_sq;
  bool no_shrink = false;
  bool no_bias = false;
  bool strict = false;
};

int run_estimate(const EstimateArgs& a) {
  const rplm::GridSample sample = rplm::read_grid_csv(a.input);
  rplm::EstimatorConfig ec;
  ec.filter_name = a.wavelet;
  ec.j0 = a.j0;
  ec.block_cardinality = a.block_cardinality;
  ec.known_h_inv_sq = a.h_inv_sq;
  ec.shrinkage_enabled = !a.no_shrink;
  ec.bias_correction_enabled = !a.no_bias;

  const rplm::FitResult fr = rplm::fit(sample.u, sample.y, sample.q, ec);
  if (fr.noise.degenerate) {
    std::fprintf(stderr, "warning: bin medians are (nearly) identical; noise estimate clamped to %g\n",
                 fr.noise.h_inv_sq);
    if (a.strict) return kExitDegenerate;
  }
  rplm::write_estimate_csv(a.output, rplm::evaluate_on_grid(fr, fr.design), sample.q);

  const auto& d = fr.design;
  std::printf("n=%zu q=%d J=%d T=%zu V=%zu kappa=%zu\n", d.n, d.q, d.resolution, d.bins_per_axis, d.total_bins,
              d.kappa);
  std::printf("wavelet=%s j0=%d L=%zu h_inv_sq=%.6g b_hat=%.6g\n", a.wavelet.c_str(), fr.j0,
              fr.block_cardinality, fr.noise.h_inv_sq, fr.b_hat);
  for (std::size_t k = 0; k < fr.diagnostics.blocks_per_level.size(); ++k) {
    std::printf("level %zu: %zu/%zu blocks zeroed\n", static_cast<std::size_t>(fr.j0) + k,
                fr.diagnostics.zeroed_per_level[k], fr.diagnostics.blocks_per_level[k]);
  }
  return 0;
}

struct SimulateArgs {
  std::string config;
  std::string output;
  std::string dataset_dir;
};

int run_simulate(const SimulateArgs& a) {
  const rplm::SimulationConfig c = rplm::parse_config(a.config);
  std::ostringstream out;
  out << "n,replication,mise,pointwise_sq_error,h_inv_sq,b_hat,checksum\n";
  for (std::size_t n : c.sample_sizes) {
    for (std::size_t r = 0; r < c.replications; ++r) {
      const rplm::ReplicationResult rr = rplm::run_replication(c, n, r);
      out << n << "," << r << "," << rplm::format_double(rr.mise) << ","
          << (rr.pointwise_sq_error ? rplm::format_double(*rr.pointwise_sq_error) : "") << ","
          << rplm::format_double(rr.h_inv_sq) << "," << rplm::format_double(rr.b_hat) << "," << rr.data_checksum
          << "\n";
      if (!a.dataset_dir.empty()) {
        rplm::Rng rng(rplm::replication_seed(c, n, r));
        const rplm::Dataset ds = rplm::generate_dataset(c, n, rng);
        fs::create_directories(a.dataset_dir);
        const fs::path p = fs::path(a.dataset_dir) / ("data_n" + std::to_string(n) + "_r" + std::to_string(r) + ".csv");
        rplm::write_grid_csv(p, {c.q, ds.u, ds.y});
      }
    }
  }
  if (a.output.empty()) {
    std::cout << out.str();
  } else {
    rplm::write_text_file(a.output, out.str());
  }
  return 0;
}

struct RateArgs {
  std::string config;
  std::string out_dir = ".";
};

int run_rate_study(const RateArgs& a) {
  const rplm::SimulationConfig c = rplm::parse_config(a.config);
  const rplm::RateStudyReport rep = rplm::rate_study(c);
  fs::create_directories(a.out_dir);

  std::string csv = "n,mean_mise,se,slope,pointwise_mean,pointwise_se,mean_h_inv_sq\n";
  for (const auto& e : rep.entries) {
    csv += std::to_string(e.n) + "," + rplm::format_double(e.mean_mise) + "," + rplm::format_double(e.se) + "," +
           rplm::format_double(rep.slope) + "," + (e.pointwise_mean ? rplm::format_double(*e.pointwise_mean) : "") +
           "," + (e.pointwise_se ? rplm::format_double(*e.pointwise_se) : "") + "," +
           rplm::format_double(e.mean_h_inv_sq) + "\n";
  }
  rplm::write_text_file(fs::path(a.out_dir) / "rates.csv", csv);

  std::ostringstream s;
  s << "test_function: " << c.test_function.name() << " (nominal alpha " << rep.nominal_alpha << ")\n";
  s << "error_dist: " << rplm::to_string(c.error) << "\n";
  s << "design_dist: " << rplm::to_string(c.design) << "\n";
  s << "wavelet: " << c.wavelet << ", q = " << c.q << ", replications = " << c.replications << "\n";
  s << "MISE log-log slope: " << rep.slope << "\n";
  s << "target slope: " << rep.target_slope << "\n";
  if (rep.pointwise_slope) s << "pointwise log-log slope: " << *rep.pointwise_slope << "\n";
  for (const auto& w : rep.warnings) s << "warning: " << w << "\n";
  rplm::write_text_file(fs::path(a.out_dir) / "summary.txt", s.str());
  std::cout << s.str();
  return 0;
}

struct CouplingArgs {
  std::string error = "gaussian(1)";
  std::size_t kappa = 1001;
  std::size_t reps = 20000;
  std::uint64_t seed = 0;
};

int run_coupling(const CouplingArgs& a) {
  const rplm::CouplingResult r = rplm::coupling_check(rplm::parse_error_distribution(a.error), a.kappa, a.reps, a.seed);
  std::printf("variance=%.6f target=%.1f mean=%.6f mean_se=%.6f\n", r.variance, r.target, r.mean, r.mean_se);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust wavelet regression on equispaced grids"};
  app.require_subcommand(1);

  EstimateArgs est;
  auto* e = app.add_subcommand("estimate", "fit the estimator to a grid CSV");
  e->add_option("--input", est.input, "CSV with header u1,...,uq,y")->required();
  e->add_option("--output", est.output, "destination for u1,...,uq,fhat")->required();
  e->add_option("--wavelet", est.wavelet, "haar, db2 or db4");
  e->add_option("--j0", est.j0, "primary resolution level");
  e->add_option("--block-cardinality", est.block_cardinality, "target block size L");
  e->add_option("--h-inv-sq", est.h_inv_sq, "known h(0)^-2 instead of estimating it");
  e->add_flag("--no-shrink", est.no_shrink, "keep all detail coefficients");
  e->add_flag("--no-bias-correction", est.no_bias, "skip the global median bias correction");
  e->add_flag("--strict", est.strict, "exit 3 when the noise estimate is degenerate");

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "run the configured replications");
  s->add_option("--config", sim.config)->required();
  s->add_option("--output", sim.output, "per-replication CSV (default stdout)");
  s->add_option("--dataset-dir", sim.dataset_dir, "also write each generated dataset here");

  RateArgs rate;
  auto* r = app.add_subcommand("rate-study", "MISE versus n with log-log slope");
  r->add_option("--config", rate.config)->required();
  r->add_option("--out-dir", rate.out_dir, "where rates.csv and summary.txt go");

  CouplingArgs cpl;
  auto* c = app.add_subcommand("coupling-check", "variance of the normalized sample median");
  c->add_option("--error", cpl.error, "error law, e.g. cauchy or gaussian(1)");
  c->add_option("--kappa", cpl.kappa, "odd sample size");
  c->add_option("--reps", cpl.reps);
  c->add_option("--seed", cpl.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*e) return run_estimate(est);
    if (*s) return run_simulate(sim);
    if (*r) return run_rate_study(rate);
    if (*c) return run_coupling(cpl);
  } catch (const rplm::Error& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kExitInput;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kExitInput;
  }
  return 0;
}
