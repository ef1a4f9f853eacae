#pragma once

#include <string>
#include <vector>

#include "ermsim/complexity.hpp"
#include "ermsim/concentration.hpp"
#include "ermsim/experiments.hpp"

namespace ermsim {

// All CSV files start with a "# schema=1" comment line; readers skip '#'
// lines. Doubles are printed with 17 significant digits so files round-trip
// bit-exactly.
std::string format_double(double v);

void write_sample_csv(const Sample& sample, const std::string& path);

struct LoadedSample {
  std::vector<double> x;
  std::vector<double> y;
  long n = 0;
  int d = 0;
};
LoadedSample read_sample_csv(const std::string& path);

void write_fit_csv(const FitResult& fit, std::uint64_t seed, long n,
                   const LossSpec& loss, double radius, const std::string& path);

void write_rates_csv(const RateResult& result, const std::string& path);
void write_summary_csv(const RateResult& result, const std::string& path);
void write_comparison_csv(const ComparisonReport& report, const std::string& path);

void write_conc_csv(const TailReport& report, const std::string& path);
// Bound parameters echoed as a key=value sidecar next to the conc CSV.
void write_conc_params(const TailReport& report, const std::string& path);

struct EstimateRecord {
  std::string measure;
  std::string param_json;
  double value = 0.0;
  double std_error = 0.0;
  long n_mc = 0;
  std::uint64_t seed = 0;
};
void write_estimates_csv(const std::vector<EstimateRecord>& records,
                         const std::string& path);

// Minimal SVG renderers for the `plot` subcommand.
void plot_rates_svg(const RateResult& result, const std::string& path);
void plot_summary_csv_svg(const std::string& summary_csv, const std::string& path);
void plot_conc_csv_svg(const std::string& conc_csv, const std::string& path);

}  // namespace ermsim
