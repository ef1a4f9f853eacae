#include "ermsim/erm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ermsim {

std::string to_string(LossKind kind) {
  return kind == LossKind::Squared ? "Squared" : "Huber";
}

LossKind loss_kind_from_string(const std::string& s) {
  if (s == "Squared") return LossKind::Squared;
  if (s == "Huber") return LossKind::Huber;
  throw std::invalid_argument("unknown loss kind '" + s + "'");
}

void LossSpec::validate() const {
  if (kind == LossKind::Huber && !(huber_threshold > 0.0))
    throw std::invalid_argument("loss.huber_threshold must be > 0");
}

double loss_value(const LossSpec& loss, double t) {
  if (loss.kind == LossKind::Squared) return t * t;
  const double th = loss.huber_threshold;
  const double at = std::abs(t);
  if (at <= th) return 0.5 * t * t;
  return th * at - 0.5 * th * th;
}

double loss_grad(const LossSpec& loss, double t) {
  if (loss.kind == LossKind::Squared) return 2.0 * t;
  return std::clamp(t, -loss.huber_threshold, loss.huber_threshold);
}

std::vector<double> project_l1(std::vector<double> v, double R) {
  if (!(R > 0.0)) throw std::invalid_argument("project_l1: R must be > 0");
  double l1 = 0.0;
  for (double x : v) l1 += std::abs(x);
  if (l1 <= R) return v;  // identity on the closed ball

  std::vector<double> mags(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) mags[i] = std::abs(v[i]);
  std::sort(mags.begin(), mags.end(), std::greater<>());

  // Water-filling threshold: largest k with mags[k-1] > (cumsum_k - R)/k.
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < mags.size(); ++k) {
    cumsum += mags[k];
    const double candidate = (cumsum - R) / static_cast<double>(k + 1);
    if (mags[k] > candidate) theta = candidate;
  }
  for (double& x : v) {
    const double shrunk = std::max(std::abs(x) - theta, 0.0);
    x = std::copysign(shrunk, x);
  }
  return v;
}

double empirical_risk(const Sample& sample, const LossSpec& loss,
                      std::span<const double> theta) {
  const int d = sample.spec.d;
  double total = 0.0;
  for (long i = 0; i < sample.n; ++i) {
    double fx = 0.0;
    const double* row = sample.x.data() + static_cast<std::size_t>(i) * d;
    for (int j = 0; j < d; ++j) fx += theta[static_cast<std::size_t>(j)] * row[j];
    total += loss_value(loss, fx - sample.y[static_cast<std::size_t>(i)]);
  }
  return total / static_cast<double>(sample.n);
}

namespace {

void risk_gradient(const Sample& sample, const LossSpec& loss,
                   const std::vector<double>& theta, std::vector<double>& grad) {
  const int d = sample.spec.d;
  std::fill(grad.begin(), grad.end(), 0.0);
  for (long i = 0; i < sample.n; ++i) {
    double fx = 0.0;
    const double* row = sample.x.data() + static_cast<std::size_t>(i) * d;
    for (int j = 0; j < d; ++j) fx += theta[static_cast<std::size_t>(j)] * row[j];
    const double g = loss_grad(loss, fx - sample.y[static_cast<std::size_t>(i)]);
    for (int j = 0; j < d; ++j) grad[static_cast<std::size_t>(j)] += g * row[j];
  }
  const double inv_n = 1.0 / static_cast<double>(sample.n);
  for (double& g : grad) g *= inv_n;
}

double norm2_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return std::sqrt(s);
}

}  // namespace

FitResult erm_fit(const Sample& sample, const LossSpec& loss, double R,
                  const FitOptions& opts) {
  loss.validate();
  if (!(R > 0.0)) throw std::invalid_argument("erm_fit: R must be > 0");
  if (sample.n < 1) throw std::invalid_argument("erm_fit: sample is empty");

  const std::size_t d = static_cast<std::size_t>(sample.spec.d);
  FitResult result;
  std::vector<double> theta(d, 0.0);
  std::vector<double> grad(d), trial(d);

  double objective = empirical_risk(sample, loss, theta);
  double step = 1.0;
  if (opts.record_trace) result.objective_trace.push_back(objective);

  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    risk_gradient(sample, loss, theta, grad);

    // Optimality measure: unit-step projected-gradient mapping.
    std::vector<double> probe(d);
    for (std::size_t j = 0; j < d; ++j) probe[j] = theta[j] - grad[j];
    probe = project_l1(std::move(probe), R);
    result.final_gap = norm2_diff(theta, probe);
    if (result.final_gap <= opts.tol) break;

    // Backtracking line search with the standard proximal sufficient-decrease
    // condition F(p) <= F(theta) + <g, p-theta> + ||p-theta||^2/(2*step).
    step *= 2.0;  // allow recovery after conservative steps
    bool accepted = false;
    while (step > 1e-18) {
      for (std::size_t j = 0; j < d; ++j) trial[j] = theta[j] - step * grad[j];
      trial = project_l1(std::move(trial), R);
      double inner = 0.0, move2 = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double diff = trial[j] - theta[j];
        inner += grad[j] * diff;
        move2 += diff * diff;
      }
      const double trial_obj = empirical_risk(sample, loss, trial);
      if (trial_obj <= objective &&
          trial_obj <= objective + inner + move2 / (2.0 * step) + 1e-16) {
        theta = trial;
        objective = trial_obj;
        accepted = true;
        if (opts.record_trace) result.objective_trace.push_back(objective);
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // step underflow; gap already recorded
  }

  // Recompute the gap at the final iterate (the loop measures it before the
  // step it is about to take).
  risk_gradient(sample, loss, theta, grad);
  std::vector<double> probe(d);
  for (std::size_t j = 0; j < d; ++j) probe[j] = theta[j] - grad[j];
  probe = project_l1(std::move(probe), R);
  result.final_gap = norm2_diff(theta, probe);

  result.theta_hat = theta;
  result.iterations = iter;
  result.objective = objective;
  result.converged = result.final_gap <= opts.tol;
  return result;
}

}  // namespace ermsim
