#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ermsim/complexity.hpp"
#include "ermsim/concentration.hpp"
#include "ermsim/dgp.hpp"
#include "ermsim/erm.hpp"
#include "ermsim/experiments.hpp"
#include "ermsim/risk.hpp"

namespace py = pybind11;
using namespace ermsim;

namespace {

py::array_t<double> sample_x(const Sample& s) {
  py::array_t<double> out({s.n, static_cast<long>(s.spec.d)});
  std::copy(s.x.begin(), s.x.end(), out.mutable_data());
  return out;
}

py::array_t<double> sample_y(const Sample& s) {
  py::array_t<double> out(s.n);
  std::copy(s.y.begin(), s.y.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_ermsim, m) {
  m.doc() = "l1-constrained ERM simulation toolkit for dependent heavy-tailed data";

  py::enum_<DgpKind>(m, "DgpKind")
      .value("SubWeibullAR", DgpKind::SubWeibullAR)
      .value("SemiParetoAR", DgpKind::SemiParetoAR)
      .value("GaussianAR", DgpKind::GaussianAR);

  py::enum_<NoiseKind>(m, "NoiseKind")
      .value("Gaussian", NoiseKind::Gaussian)
      .value("SubWeibull", NoiseKind::SubWeibull)
      .value("PolyTail", NoiseKind::PolyTail);

  py::enum_<LossKind>(m, "LossKind")
      .value("Squared", LossKind::Squared)
      .value("Huber", LossKind::Huber);

  py::class_<NoiseSpec>(m, "NoiseSpec")
      .def(py::init<>())
      .def_readwrite("kind", &NoiseSpec::kind)
      .def_readwrite("scale", &NoiseSpec::scale)
      .def_readwrite("tail", &NoiseSpec::tail)
      .def("sd", &NoiseSpec::sd)
      .def("validate", &NoiseSpec::validate);

  py::class_<DgpSpec>(m, "DgpSpec")
      .def(py::init<>())
      .def_readwrite("kind", &DgpSpec::kind)
      .def_readwrite("d", &DgpSpec::d)
      .def_readwrite("dependence", &DgpSpec::dependence)
      .def_readwrite("tail", &DgpSpec::tail)
      .def_readwrite("pareto_scales", &DgpSpec::pareto_scales)
      .def_readwrite("noise", &DgpSpec::noise)
      .def_readwrite("theta_star", &DgpSpec::theta_star)
      .def_readwrite("R", &DgpSpec::R)
      .def_readwrite("burn_in", &DgpSpec::burn_in)
      .def("validate", &DgpSpec::validate);

  py::class_<Sample>(m, "Sample")
      .def_property_readonly("x", &sample_x)
      .def_property_readonly("y", &sample_y)
      .def_readonly("seed", &Sample::seed)
      .def_readonly("n", &Sample::n)
      .def_readonly("spec", &Sample::spec);

  py::class_<LossSpec>(m, "LossSpec")
      .def(py::init<>())
      .def_readwrite("kind", &LossSpec::kind)
      .def_readwrite("huber_threshold", &LossSpec::huber_threshold);

  py::class_<FitOptions>(m, "FitOptions")
      .def(py::init<>())
      .def_readwrite("tol", &FitOptions::tol)
      .def_readwrite("max_iter", &FitOptions::max_iter);

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("theta_hat", &FitResult::theta_hat)
      .def_readonly("iterations", &FitResult::iterations)
      .def_readonly("final_gap", &FitResult::final_gap)
      .def_readonly("objective", &FitResult::objective)
      .def_readonly("converged", &FitResult::converged);

  py::class_<StationaryCov>(m, "StationaryCov")
      .def_readonly("diag", &StationaryCov::diag)
      .def_readonly("mc_n", &StationaryCov::mc_n);

  py::class_<ComplexityEstimate>(m, "ComplexityEstimate")
      .def_readonly("value", &ComplexityEstimate::value)
      .def_readonly("std_error", &ComplexityEstimate::std_error)
      .def_readonly("n_mc", &ComplexityEstimate::n_mc)
      .def_readonly("r_grid", &ComplexityEstimate::r_grid);

  m.def("generate", &generate, py::arg("spec"), py::arg("n"), py::arg("seed"));
  m.def("sample_pareto_plus", &sample_pareto_plus, py::arg("u"),
        py::arg("eta3"), py::arg("scale"));
  m.def("second_moment_sym_pareto", &second_moment_sym_pareto,
        py::arg("eta3"), py::arg("scale"));
  m.def("loss_value", &loss_value, py::arg("loss"), py::arg("t"));
  m.def("loss_grad", &loss_grad, py::arg("loss"), py::arg("t"));
  m.def(
      "project_l1",
      [](std::vector<double> v, double R) { return project_l1(std::move(v), R); },
      py::arg("v"), py::arg("R"));
  m.def("erm_fit", &erm_fit, py::arg("sample"), py::arg("loss"), py::arg("R"),
        py::arg("opts") = FitOptions{});
  m.def("empirical_risk",
        [](const Sample& s, const LossSpec& l, std::vector<double> theta) {
          return empirical_risk(s, l, theta);
        },
        py::arg("sample"), py::arg("loss"), py::arg("theta"));
  m.def("stationary_cov", &stationary_cov, py::arg("spec"),
        py::arg("mc_n") = 0, py::arg("seed") = 0);
  m.def("l2_error",
        [](std::vector<double> a, std::vector<double> b, const StationaryCov& c) {
          return l2_error(a, b, c);
        },
        py::arg("theta_hat"), py::arg("theta_star"), py::arg("cov"));

  m.def("sup_linear_l1_l2",
        [](std::vector<double> w, double rho, double r) {
          return sup_linear_l1_l2(w, rho, r);
        },
        py::arg("w"), py::arg("rho"), py::arg("r"));
  m.def("omega_mu_estimate", &omega_mu_estimate, py::arg("spec"), py::arg("mu"),
        py::arg("gamma"), py::arg("n_mc"), py::arg("seed"));
  m.def("small_ball_estimate", &small_ball_estimate, py::arg("spec"),
        py::arg("u"), py::arg("n_dir"), py::arg("n_mc"), py::arg("seed"));
  m.def("gaussian_width_estimate", &gaussian_width_estimate, py::arg("spec"),
        py::arg("r"), py::arg("n_mc"), py::arg("seed"));
  m.def("omega_1_estimate", &omega_1_estimate, py::arg("spec"), py::arg("n"),
        py::arg("eta1"), py::arg("zeta1"), py::arg("n_mc"), py::arg("seed"));
  m.def("omega_q_estimate", &omega_q_estimate, py::arg("spec"), py::arg("n"),
        py::arg("eta1"), py::arg("zeta1"), py::arg("zeta2"), py::arg("n_mc"),
        py::arg("seed"));
  m.def("theory_bound_subweibull",
        [](double R, double d, double eta, double mu, double c1, double c3,
           double k1) {
          return theory_bound_subweibull(R, d, eta, mu, {c1, c3, k1});
        },
        py::arg("R"), py::arg("d"), py::arg("eta"), py::arg("mu"),
        py::arg("c1") = 1.0, py::arg("c3") = 2.0, py::arg("k1") = 1.0);
  m.def("rademacher_width_estimate", &rademacher_width_estimate,
        py::arg("spec"), py::arg("mu"), py::arg("r"), py::arg("n_mc"),
        py::arg("seed"));
  m.def("theory_bound_pareto", &theory_bound_pareto, py::arg("R"), py::arg("d"),
        py::arg("eta2"), py::arg("iota"), py::arg("n"), py::arg("tau"),
        py::arg("q"), py::arg("c9") = 1.0);

  m.def("heavy_tail_bound", &heavy_tail_bound, py::arg("t"), py::arg("n"),
        py::arg("eta1"), py::arg("eta2"), py::arg("d1"), py::arg("d2"),
        py::arg("c_prime"));
  m.def("rio_bound", &rio_bound, py::arg("t"), py::arg("n"), py::arg("eta"),
        py::arg("v"), py::arg("c1"), py::arg("c2"), py::arg("c3"),
        py::arg("c4"));
  m.def("estimate_v",
        [](std::vector<double> w, std::vector<double> m_grid, int max_lag) {
          return estimate_v(w, m_grid, max_lag);
        },
        py::arg("w"), py::arg("m_grid"), py::arg("max_lag"));
  m.def("default_m_grid", &default_m_grid);
  m.def("default_max_lag", &default_max_lag, py::arg("n"), py::arg("eta1"));

  py::class_<BlockPartition::Range>(m, "BlockRange")
      .def_readonly("begin", &BlockPartition::Range::begin)
      .def_readonly("len", &BlockPartition::Range::len);
  py::class_<BlockPartition>(m, "BlockPartition")
      .def_readonly("a", &BlockPartition::a)
      .def_readonly("b", &BlockPartition::b)
      .def_readonly("mu", &BlockPartition::mu)
      .def_readonly("odd_blocks", &BlockPartition::odd_blocks)
      .def_readonly("gap_blocks", &BlockPartition::gap_blocks);
  m.def("blocking_partition", &blocking_partition, py::arg("n"), py::arg("a"),
        py::arg("b"));

  py::enum_<InteractionKind>(m, "InteractionKind")
      .value("DgpInteraction", InteractionKind::DgpInteraction)
      .value("IidSymPareto", InteractionKind::IidSymPareto);
  py::enum_<BoundKind>(m, "BoundKind")
      .value("HeavyTail", BoundKind::HeavyTail)
      .value("Rio", BoundKind::Rio);
  py::class_<InteractionSpec>(m, "InteractionSpec")
      .def(py::init<>())
      .def_readwrite("kind", &InteractionSpec::kind)
      .def_readwrite("dgp", &InteractionSpec::dgp)
      .def_readwrite("theta", &InteractionSpec::theta)
      .def_readwrite("loss", &InteractionSpec::loss)
      .def_readwrite("eta2", &InteractionSpec::eta2);
  py::class_<BoundParams>(m, "BoundParams")
      .def(py::init<>())
      .def_readwrite("kind", &BoundParams::kind)
      .def_readwrite("eta1", &BoundParams::eta1)
      .def_readwrite("eta2", &BoundParams::eta2)
      .def_readwrite("d1", &BoundParams::d1)
      .def_readwrite("d2", &BoundParams::d2)
      .def_readwrite("c_prime", &BoundParams::c_prime)
      .def_readwrite("eta", &BoundParams::eta)
      .def_readwrite("v", &BoundParams::v)
      .def_readwrite("c1", &BoundParams::c1)
      .def_readwrite("c2", &BoundParams::c2)
      .def_readwrite("c3", &BoundParams::c3)
      .def_readwrite("c4", &BoundParams::c4);
  py::class_<TailReport>(m, "TailReport")
      .def_readonly("t_grid", &TailReport::t_grid)
      .def_readonly("empirical", &TailReport::empirical)
      .def_readonly("std_error", &TailReport::std_error)
      .def_readonly("bound", &TailReport::bound)
      .def_readonly("n", &TailReport::n)
      .def_readonly("n_mc", &TailReport::n_mc);
  m.def("tail_verify",
        [](const InteractionSpec& spec, long n, std::vector<double> grid,
           long n_mc, const BoundParams& params, std::uint64_t seed, int threads) {
          return tail_verify(spec, n, grid, n_mc, params, seed, threads);
        },
        py::arg("spec"), py::arg("n"), py::arg("t_grid"), py::arg("n_mc"),
        py::arg("params"), py::arg("seed"), py::arg("threads") = 1);

  py::enum_<InteractionTail>(m, "InteractionTail")
      .value("ExpTail", InteractionTail::ExpTail)
      .value("PolyTail", InteractionTail::PolyTail);
  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("dgp", &ExperimentConfig::dgp)
      .def_readwrite("loss", &ExperimentConfig::loss)
      .def_readwrite("n_grid", &ExperimentConfig::n_grid)
      .def_readwrite("replications", &ExperimentConfig::replications)
      .def_readwrite("master_seed", &ExperimentConfig::master_seed)
      .def_readwrite("iota", &ExperimentConfig::iota)
      .def_readwrite("r_exponent", &ExperimentConfig::r_exponent)
      .def_readwrite("eta1", &ExperimentConfig::eta1)
      .def_readwrite("eta2", &ExperimentConfig::eta2)
      .def_readwrite("tau", &ExperimentConfig::tau)
      .def_readwrite("mixing_c", &ExperimentConfig::mixing_c)
      .def_readwrite("interaction", &ExperimentConfig::interaction)
      .def_readwrite("norm_equivalent", &ExperimentConfig::norm_equivalent)
      .def_readwrite("threads", &ExperimentConfig::threads);
  py::class_<RateRow>(m, "RateRow")
      .def_readonly("n", &RateRow::n)
      .def_readonly("mean", &RateRow::mean)
      .def_readonly("median", &RateRow::median)
      .def_readonly("q95", &RateRow::q95)
      .def_readonly("std_error", &RateRow::std_error);
  py::class_<RateResult>(m, "RateResult")
      .def_readonly("per_n", &RateResult::per_n)
      .def_readonly("slope", &RateResult::slope)
      .def_readonly("slope_stderr", &RateResult::slope_stderr)
      .def_readonly("theoretical_exponent", &RateResult::theoretical_exponent)
      .def_readonly("nonconverged", &RateResult::nonconverged);
  m.def("run_rates", &run_rates, py::arg("cfg"),
        py::call_guard<py::gil_scoped_release>());
  m.def("fit_loglog_slope",
        [](std::vector<std::pair<double, double>> pairs) {
          return fit_loglog_slope(pairs);
        },
        py::arg("pairs"));
  m.def("mu_for_n", &mu_for_n, py::arg("n"), py::arg("r_exponent"),
        py::arg("q_hat"), py::arg("mixing_c"), py::arg("eta1"));
}
