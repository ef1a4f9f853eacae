#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ermsim/complexity.hpp"
#include "ermsim/concentration.hpp"
#include "ermsim/config.hpp"
#include "ermsim/dgp.hpp"
#include "ermsim/erm.hpp"
#include "ermsim/experiments.hpp"
#include "ermsim/io.hpp"
#include "ermsim/risk.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required = true) {
  auto* c = cmd->add_option("--config", opts.config_path, "key=value config file");
  if (config_required) c->required();
  cmd->add_option("--out", opts.out_dir, "output directory");
  cmd->add_option("--seed", opts.seed, "master seed override")
      ->each([&opts](const std::string&) { opts.seed_given = true; });
  cmd->add_option("--threads", opts.threads, "worker count")
      ->check(CLI::PositiveNumber);
}

fs::path prepare_out(const CommonOpts& opts) {
  fs::path dir(opts.out_dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> grid;
  if (points == 1) return {lo};
  for (int i = 0; i < points; ++i)
    grid.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1)));
  return grid;
}

ermsim::BoundParams bound_params_from_config(const ermsim::Config& cfg) {
  ermsim::BoundParams params;
  const std::string kind = cfg.get_string("conc.bound", "HeavyTail");
  if (kind == "HeavyTail")
    params.kind = ermsim::BoundKind::HeavyTail;
  else if (kind == "Rio")
    params.kind = ermsim::BoundKind::Rio;
  else
    cfg.fail("conc.bound", "expected HeavyTail or Rio");
  const double eta2 = cfg.get_double("conc.eta2", 3.0);
  params.eta1 = cfg.get_double("conc.eta1", 1.0);
  params.eta2 = eta2;
  params.d1 = cfg.get_double("conc.d1", 1.0 / (1.0 + eta2));
  params.d2 = cfg.get_double("conc.d2", (eta2 - 1.0) / (eta2 + 1.0));
  params.c_prime = cfg.get_double("conc.c_prime", 1.0 / 3.0);
  params.eta = cfg.get_double("conc.eta", 0.5);
  params.v = cfg.get_double("conc.v", 1.0);
  params.c1 = cfg.get_double("conc.c1", 1.0);
  params.c2 = cfg.get_double("conc.c2", 1.0);
  params.c3 = cfg.get_double("conc.c3", 1.0);
  params.c4 = cfg.get_double("conc.c4", 1.0);
  return params;
}

ermsim::InteractionSpec interaction_from_config(const ermsim::Config& cfg) {
  ermsim::InteractionSpec spec;
  const std::string kind = cfg.get_string("conc.interaction", "IidSymPareto");
  if (kind == "IidSymPareto") {
    spec.kind = ermsim::InteractionKind::IidSymPareto;
    spec.eta2 = cfg.get_double("conc.eta2", 3.0);
  } else if (kind == "DgpInteraction") {
    spec.kind = ermsim::InteractionKind::DgpInteraction;
    spec.dgp = ermsim::dgp_from_config(cfg);
    spec.loss = ermsim::loss_from_config(cfg, spec.dgp);
    spec.theta = cfg.get_doubles("conc.theta");
  } else {
    cfg.fail("conc.interaction", "expected IidSymPareto or DgpInteraction");
  }
  return spec;
}

int run_gen(const CommonOpts& opts, long n) {
  const auto cfg = ermsim::Config::parse_file(opts.config_path);
  const ermsim::DgpSpec spec = ermsim::dgp_from_config(cfg);
  const std::uint64_t seed =
      opts.seed_given ? opts.seed : cfg.get_u64("experiment.master_seed", 0);
  const ermsim::Sample sample = ermsim::generate(spec, n, seed);
  const fs::path dir = prepare_out(opts);
  ermsim::write_sample_csv(sample, (dir / "sample.csv").string());
  std::cout << "wrote " << (dir / "sample.csv").string() << " (n=" << n
            << ", d=" << spec.d << ")\n";
  return 0;
}

int run_fit(const CommonOpts& opts, const std::string& input) {
  const auto cfg = ermsim::Config::parse_file(opts.config_path);
  const ermsim::DgpSpec spec = ermsim::dgp_from_config(cfg);
  const ermsim::LossSpec loss = ermsim::loss_from_config(cfg, spec);
  const ermsim::LoadedSample loaded = ermsim::read_sample_csv(input);
  if (loaded.d != spec.d)
    throw std::invalid_argument("fit: sample dimension does not match config");

  ermsim::Sample sample;
  sample.spec = spec;
  sample.x = loaded.x;
  sample.y = loaded.y;
  sample.n = loaded.n;
  sample.seed = opts.seed;

  const ermsim::FitResult fit = ermsim::erm_fit(sample, loss, spec.R);
  const fs::path dir = prepare_out(opts);
  ermsim::write_fit_csv(fit, opts.seed, sample.n, loss, spec.R,
                        (dir / "fit.csv").string());
  std::cout << "objective=" << ermsim::format_double(fit.objective)
            << " iterations=" << fit.iterations
            << " converged=" << (fit.converged ? "yes" : "no") << '\n';
  return 0;
}

int run_rates_cmd(const CommonOpts& opts) {
  const auto cfg = ermsim::Config::parse_file(opts.config_path);
  ermsim::ExperimentConfig exp = ermsim::experiment_from_config(cfg);
  if (opts.seed_given) exp.master_seed = opts.seed;
  if (opts.threads > 1) exp.threads = opts.threads;
  const ermsim::RateResult result = ermsim::run_rates(exp);
  const fs::path dir = prepare_out(opts);
  ermsim::write_rates_csv(result, (dir / "rates.csv").string());
  ermsim::write_summary_csv(result, (dir / "summary.csv").string());
  std::cout << "slope=" << ermsim::format_double(result.slope)
            << " stderr=" << ermsim::format_double(result.slope_stderr)
            << " theoretical=" << ermsim::format_double(result.theoretical_exponent)
            << " nonconverged=" << result.nonconverged << '\n';
  return 0;
}

int run_compare(const CommonOpts& opts) {
  const auto cfg = ermsim::Config::parse_file(opts.config_path);
  ermsim::ExperimentConfig huber = ermsim::experiment_from_config(cfg);
  if (opts.seed_given) huber.master_seed = opts.seed;
  if (opts.threads > 1) huber.threads = opts.threads;
  if (huber.loss.kind != ermsim::LossKind::Huber)
    throw std::invalid_argument("compare: config must carry loss.kind=Huber");
  ermsim::ExperimentConfig squared = huber;
  squared.loss.kind = ermsim::LossKind::Squared;

  const ermsim::ComparisonReport report = ermsim::run_huber_vs_squared(huber, squared);
  const fs::path dir = prepare_out(opts);
  ermsim::write_comparison_csv(report, (dir / "compare.csv").string());
  std::cout << "huber_slope=" << ermsim::format_double(report.huber.slope)
            << " squared_slope=" << ermsim::format_double(report.squared.slope)
            << '\n';
  return 0;
}

int run_conc_check(const CommonOpts& opts, bool check) {
  const auto cfg = ermsim::Config::parse_file(opts.config_path);
  const ermsim::InteractionSpec spec = interaction_from_config(cfg);
  const ermsim::BoundParams params = bound_params_from_config(cfg);
  const long n = cfg.get_long("conc.n", 1000);
  const long n_mc = cfg.get_long("conc.n_mc", 10000);
  const std::uint64_t seed = opts.seed_given ? opts.seed : cfg.get_u64("conc.seed", 0);

  std::vector<double> grid;
  if (cfg.has("conc.t_grid")) {
    grid = cfg.get_doubles("conc.t_grid");
  } else {
    grid = log_grid(cfg.get_double("conc.t_min", 2.0),
                    cfg.get_double("conc.t_max", 500.0),
                    static_cast<int>(cfg.get_long("conc.t_points", 20)));
  }

  const ermsim::TailReport report =
      ermsim::tail_verify(spec, n, grid, n_mc, params, seed, opts.threads);
  const fs::path dir = prepare_out(opts);
  ermsim::write_conc_csv(report, (dir / "conc.csv").string());
  ermsim::write_conc_params(report, (dir / "conc_params.txt").string());

  bool violated = false;
  for (std::size_t i = 0; i < report.t_grid.size(); ++i) {
    if (report.empirical[i] > report.bound[i] + 3.0 * report.std_error[i]) {
      violated = true;
      std::cout << "violation at t=" << report.t_grid[i]
                << ": empirical=" << report.empirical[i]
                << " bound=" << report.bound[i] << '\n';
    }
  }
  std::cout << (violated ? "domination FAILED\n" : "domination holds\n");
  if (check && violated) return 2;
  return 0;
}

int run_complexity(const CommonOpts& opts) {
  const auto cfg = ermsim::Config::parse_file(opts.config_path);
  const ermsim::DgpSpec spec = ermsim::dgp_from_config(cfg);
  const double tau = cfg.get_double("experiment.tau", 0.5);
  const double eta1 = cfg.get_double("experiment.eta1", 1.0);
  const double iota = cfg.get_double("experiment.iota", 0.05);
  const double r_exp = cfg.get_double("experiment.r_exponent", 1.0 - 2.0 * iota);
  const double mixing_c = cfg.get_double("experiment.mixing_c", 1.0);
  const long n = cfg.get_long("complexity.n", 4096);
  const long n_mc = cfg.get_long("complexity.n_mc", 20000);
  const int n_dir = static_cast<int>(cfg.get_long("complexity.n_dir", 8));
  const double u = cfg.get_double("complexity.u", 2.0 * tau);
  const double width_r = cfg.get_double("complexity.r", 1.0);
  const std::uint64_t seed =
      opts.seed_given ? opts.seed : cfg.get_u64("complexity.seed", 0);

  std::vector<ermsim::EstimateRecord> records;

  const auto qhat = ermsim::small_ball_estimate(spec, u, n_dir, n_mc, seed);
  records.push_back({"small_ball",
                     json{{"u", u}, {"n_dir", n_dir}}.dump(),
                     qhat.value, qhat.std_error, qhat.n_mc, seed});

  const long mu = ermsim::mu_for_n(n, r_exp, qhat.value, mixing_c, eta1);
  const double gamma = tau * qhat.value / 16.0;
  const auto omega = ermsim::omega_mu_estimate(spec, static_cast<int>(mu),
                                               gamma, n_mc, seed);
  records.push_back({"omega_mu",
                     json{{"mu", mu}, {"gamma", gamma}, {"n", n}}.dump(),
                     omega.value, omega.std_error, omega.n_mc, seed});

  const auto width = ermsim::gaussian_width_estimate(spec, width_r, n_mc, seed);
  records.push_back({"gaussian_width",
                     json{{"r", width_r}}.dump(),
                     width.value, width.std_error, width.n_mc, seed});

  // Theorem-scaling localization levels: zeta1 ~ 2 tau Q^{3/2}, zeta2 ~ 2 tau Q.
  const double zeta1 = 2.0 * tau * std::pow(qhat.value, 1.5);
  const double zeta2 = 2.0 * tau * qhat.value;
  const auto omega_q =
      ermsim::omega_q_estimate(spec, n, eta1, zeta1, zeta2, n_mc, seed);
  records.push_back({"omega_q",
                     json{{"n", n}, {"zeta1", zeta1}, {"zeta2", zeta2},
                          {"eta1", eta1}}.dump(),
                     omega_q.value, omega_q.std_error, omega_q.n_mc, seed});

  const fs::path dir = prepare_out(opts);
  ermsim::write_estimates_csv(records, (dir / "estimates.csv").string());
  for (const auto& rec : records)
    std::cout << rec.measure << "=" << ermsim::format_double(rec.value)
              << " (se=" << ermsim::format_double(rec.std_error) << ")\n";
  return 0;
}

int run_plot(const CommonOpts& opts, const std::string& kind,
             const std::string& input) {
  const fs::path dir = prepare_out(opts);
  if (kind == "rates") {
    ermsim::plot_summary_csv_svg(input, (dir / "rates.svg").string());
    std::cout << "wrote " << (dir / "rates.svg").string() << '\n';
  } else if (kind == "conc") {
    ermsim::plot_conc_csv_svg(input, (dir / "conc.svg").string());
    std::cout << "wrote " << (dir / "conc.svg").string() << '\n';
  } else {
    throw std::invalid_argument("plot: --kind must be rates or conc");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulation and verification toolkit for l1-constrained ERM "
               "with dependent heavy-tailed data"};
  app.require_subcommand(1);

  CommonOpts gen_opts, fit_opts, rates_opts, compare_opts, conc_opts,
      complexity_opts, plot_opts;
  long gen_n = 100;
  std::string fit_input, plot_kind = "rates", plot_input;
  bool conc_check_flag = false;

  auto* gen = app.add_subcommand("gen", "emit a sample CSV");
  add_common(gen, gen_opts);
  gen->add_option("--n", gen_n, "sample length")->check(CLI::PositiveNumber);

  auto* fit = app.add_subcommand("fit", "one ERM fit on a sample CSV");
  add_common(fit, fit_opts);
  fit->add_option("--input", fit_input, "sample CSV path")->required();

  auto* rates = app.add_subcommand("rates", "rate-scaling study");
  add_common(rates, rates_opts);

  auto* compare = app.add_subcommand("compare", "Huber vs squared comparison");
  add_common(compare, compare_opts);

  auto* conc = app.add_subcommand("conc-check", "tail-domination verification");
  add_common(conc, conc_opts);
  conc->add_flag("--check", conc_check_flag, "exit 2 on domination failure");

  auto* complexity = app.add_subcommand("complexity", "complexity estimators");
  add_common(complexity, complexity_opts);

  auto* plot = app.add_subcommand("plot", "render CSV outputs to SVG");
  add_common(plot, plot_opts, /*config_required=*/false);
  plot->add_option("--kind", plot_kind, "rates or conc");
  plot->add_option("--input", plot_input, "input CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return run_gen(gen_opts, gen_n);
    if (fit->parsed()) return run_fit(fit_opts, fit_input);
    if (rates->parsed()) return run_rates_cmd(rates_opts);
    if (compare->parsed()) return run_compare(compare_opts);
    if (conc->parsed()) return run_conc_check(conc_opts, conc_check_flag);
    if (complexity->parsed()) return run_complexity(complexity_opts);
    if (plot->parsed()) return run_plot(plot_opts, plot_kind, plot_input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
