#include "ermsim/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ermsim {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

std::vector<std::vector<std::string>> read_csv_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_sample_csv(const Sample& sample, const std::string& path) {
  auto out = open_out(path);
  out << "# schema=1\n";
  out << "t";
  for (int j = 1; j <= sample.spec.d; ++j) out << ",x" << j;
  out << ",y\n";
  for (long i = 0; i < sample.n; ++i) {
    out << i;
    for (int j = 0; j < sample.spec.d; ++j)
      out << ',' << format_double(sample.x_at(i, j));
    out << ',' << format_double(sample.y[static_cast<std::size_t>(i)]) << '\n';
  }
}

LoadedSample read_sample_csv(const std::string& path) {
  const auto rows = read_csv_rows(path);
  if (rows.empty()) throw std::runtime_error(path + ": empty sample file");
  const auto& header = rows.front();
  if (header.size() < 3 || header.front() != "t" || header.back() != "y")
    throw std::runtime_error(path + ": expected header t,x1..xd,y");
  LoadedSample loaded;
  loaded.d = static_cast<int>(header.size()) - 2;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& cells = rows[r];
    if (cells.size() != header.size())
      throw std::runtime_error(path + ": row " + std::to_string(r) +
                               " has wrong column count");
    for (int j = 0; j < loaded.d; ++j)
      loaded.x.push_back(std::stod(cells[static_cast<std::size_t>(j) + 1]));
    loaded.y.push_back(std::stod(cells.back()));
  }
  loaded.n = static_cast<long>(loaded.y.size());
  return loaded;
}

void write_fit_csv(const FitResult& fit, std::uint64_t seed, long n,
                   const LossSpec& loss, double radius, const std::string& path) {
  auto out = open_out(path);
  out << "# schema=1\n";
  out << "seed,n,loss,R,objective,iterations,final_gap";
  for (std::size_t j = 1; j <= fit.theta_hat.size(); ++j) out << ",theta_" << j;
  out << '\n';
  out << seed << ',' << n << ',' << to_string(loss.kind) << ','
      << format_double(radius) << ',' << format_double(fit.objective) << ','
      << fit.iterations << ',' << format_double(fit.final_gap);
  for (double t : fit.theta_hat) out << ',' << format_double(t);
  out << '\n';
}

void write_rates_csv(const RateResult& result, const std::string& path) {
  auto out = open_out(path);
  out << "# schema=1\n";
  out << "n,rep,seed,error,objective,iterations\n";
  for (const ReplicationRow& row : result.rows)
    out << row.n << ',' << row.rep << ',' << row.seed << ','
        << format_double(row.error) << ',' << format_double(row.objective)
        << ',' << row.iterations << '\n';
}

void write_summary_csv(const RateResult& result, const std::string& path) {
  auto out = open_out(path);
  out << "# schema=1\n";
  out << "# slope=" << format_double(result.slope)
      << " slope_stderr=" << format_double(result.slope_stderr)
      << " theoretical_exponent=" << format_double(result.theoretical_exponent)
      << '\n';
  out << "n,mean,median,q95,stderr\n";
  for (const RateRow& row : result.per_n)
    out << row.n << ',' << format_double(row.mean) << ','
        << format_double(row.median) << ',' << format_double(row.q95) << ','
        << format_double(row.std_error) << '\n';
}

void write_comparison_csv(const ComparisonReport& report, const std::string& path) {
  auto out = open_out(path);
  out << "# schema=1\n";
  out << "# huber_slope=" << format_double(report.huber.slope)
      << " squared_slope=" << format_double(report.squared.slope) << '\n';
  out << "n,huber_median,squared_median,median_ratio,huber_q95,squared_q95,q95_ratio\n";
  for (const ComparisonRow& row : report.per_n)
    out << row.n << ',' << format_double(row.huber_median) << ','
        << format_double(row.squared_median) << ','
        << format_double(row.median_ratio) << ','
        << format_double(row.huber_q95) << ','
        << format_double(row.squared_q95) << ','
        << format_double(row.q95_ratio) << '\n';
}

void write_conc_csv(const TailReport& report, const std::string& path) {
  auto out = open_out(path);
  out << "# schema=1\n";
  out << "t,empirical,std_error,bound\n";
  for (std::size_t i = 0; i < report.t_grid.size(); ++i)
    out << format_double(report.t_grid[i]) << ','
        << format_double(report.empirical[i]) << ','
        << format_double(report.std_error[i]) << ','
        << format_double(report.bound[i]) << '\n';
}

void write_conc_params(const TailReport& report, const std::string& path) {
  auto out = open_out(path);
  const BoundParams& p = report.params;
  out << "bound=" << (p.kind == BoundKind::HeavyTail ? "HeavyTail" : "Rio") << '\n';
  out << "n=" << report.n << '\n';
  out << "n_mc=" << report.n_mc << '\n';
  out << "seed=" << report.seed << '\n';
  if (p.kind == BoundKind::HeavyTail) {
    out << "eta1=" << format_double(p.eta1) << '\n';
    out << "eta2=" << format_double(p.eta2) << '\n';
    out << "d1=" << format_double(p.d1) << '\n';
    out << "d2=" << format_double(p.d2) << '\n';
    out << "c_prime=" << format_double(p.c_prime) << '\n';
  } else {
    out << "eta=" << format_double(p.eta) << '\n';
    out << "v=" << format_double(p.v) << '\n';
    out << "c1=" << format_double(p.c1) << '\n';
    out << "c2=" << format_double(p.c2) << '\n';
    out << "c3=" << format_double(p.c3) << '\n';
    out << "c4=" << format_double(p.c4) << '\n';
  }
}

void write_estimates_csv(const std::vector<EstimateRecord>& records,
                         const std::string& path) {
  auto out = open_out(path);
  out << "# schema=1\n";
  out << "measure,param_json,value,std_error,n_mc,seed\n";
  for (const EstimateRecord& rec : records) {
    std::string quoted = "\"";
    for (char c : rec.param_json) {
      if (c == '"') quoted += "\"\"";
      else quoted += c;
    }
    quoted += '"';
    out << rec.measure << ',' << quoted << ',' << format_double(rec.value)
        << ',' << format_double(rec.std_error) << ',' << rec.n_mc << ','
        << rec.seed << '\n';
  }
}

namespace {

struct Series {
  std::vector<double> x, y;
  std::string color;
  std::string label;
};

// Log-log polyline chart. Nonpositive values are dropped from log series.
void render_svg(const std::vector<Series>& series, const std::string& x_label,
                const std::string& y_label, const std::string& path) {
  const double width = 640, height = 480, margin = 60;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const Series& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (xmin >= xmax) { xmin /= 2; xmax = xmin * 4 + 1; }
  if (ymin >= ymax) { ymin /= 2; ymax = ymin * 4 + 1; }
  const double lx0 = std::log10(xmin), lx1 = std::log10(xmax);
  const double ly0 = std::log10(ymin), ly1 = std::log10(ymax);
  auto px = [&](double x) {
    return margin + (std::log10(x) - lx0) / (lx1 - lx0) * (width - 2 * margin);
  };
  auto py = [&](double y) {
    return height - margin -
           (std::log10(y) - ly0) / (ly1 - ly0) * (height - 2 * margin);
  };

  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\""
      << width - margin << "\" y2=\"" << height - margin
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin
      << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";

  for (int e = static_cast<int>(std::ceil(lx0)); e <= static_cast<int>(std::floor(lx1)); ++e) {
    const double x = px(std::pow(10.0, e));
    out << "<line x1=\"" << x << "\" y1=\"" << height - margin << "\" x2=\"" << x
        << "\" y2=\"" << height - margin + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << x << "\" y=\"" << height - margin + 20
        << "\" font-size=\"11\" text-anchor=\"middle\">1e" << e << "</text>\n";
  }
  for (int e = static_cast<int>(std::ceil(ly0)); e <= static_cast<int>(std::floor(ly1)); ++e) {
    const double y = py(std::pow(10.0, e));
    out << "<line x1=\"" << margin - 5 << "\" y1=\"" << y << "\" x2=\"" << margin
        << "\" y2=\"" << y << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << margin - 8 << "\" y=\"" << y + 4
        << "\" font-size=\"11\" text-anchor=\"end\">1e" << e << "</text>\n";
  }
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 15
      << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label << "</text>\n";
  out << "<text x=\"18\" y=\"" << height / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << height / 2 << ")\">" << y_label << "</text>\n";

  double legend_y = margin + 6;
  for (const Series& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
      out << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << width - margin - 4 << "\" y=\"" << legend_y
        << "\" font-size=\"12\" text-anchor=\"end\" fill=\"" << s.color << "\">"
        << s.label << "</text>\n";
    legend_y += 16;
  }
  out << "</svg>\n";
}

}  // namespace

void plot_rates_svg(const RateResult& result, const std::string& path) {
  Series mean{{}, {}, "steelblue", "mean error"};
  Series q95{{}, {}, "firebrick", "q95 error"};
  for (const RateRow& row : result.per_n) {
    mean.x.push_back(static_cast<double>(row.n));
    mean.y.push_back(row.mean);
    q95.x.push_back(static_cast<double>(row.n));
    q95.y.push_back(row.q95);
  }
  render_svg({mean, q95}, "n", "L2 error", path);
}

void plot_summary_csv_svg(const std::string& summary_csv, const std::string& path) {
  const auto rows = read_csv_rows(summary_csv);
  Series mean{{}, {}, "steelblue", "mean error"};
  Series q95{{}, {}, "firebrick", "q95 error"};
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() < 5) continue;
    mean.x.push_back(std::stod(rows[r][0]));
    mean.y.push_back(std::stod(rows[r][1]));
    q95.x.push_back(std::stod(rows[r][0]));
    q95.y.push_back(std::stod(rows[r][3]));
  }
  render_svg({mean, q95}, "n", "L2 error", path);
}

void plot_conc_csv_svg(const std::string& conc_csv, const std::string& path) {
  const auto rows = read_csv_rows(conc_csv);
  Series emp{{}, {}, "steelblue", "empirical"};
  Series bound{{}, {}, "firebrick", "bound"};
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() < 4) continue;
    emp.x.push_back(std::stod(rows[r][0]));
    emp.y.push_back(std::stod(rows[r][1]));
    bound.x.push_back(std::stod(rows[r][0]));
    bound.y.push_back(std::stod(rows[r][3]));
  }
  render_svg({emp, bound}, "t", "tail probability", path);
}

}  // namespace ermsim
