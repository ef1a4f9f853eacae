#pragma once

#include <span>
#include <string>
#include <vector>

#include "ermsim/dgp.hpp"

namespace ermsim {

enum class LossKind { Squared, Huber };

std::string to_string(LossKind kind);
LossKind loss_kind_from_string(const std::string& s);

struct LossSpec {
  LossKind kind = LossKind::Squared;
  double huber_threshold = 1.0;  // T_h, Huber only

  void validate() const;
};

// Squared: t^2.  Huber: t^2/2 inside [-T_h, T_h], T_h|t| - T_h^2/2 outside.
double loss_value(const LossSpec& loss, double t);

// Squared: 2t.  Huber: t clipped to [-T_h, T_h].
double loss_grad(const LossSpec& loss, double t);

// Euclidean projection onto the l1 ball of radius R (sorted
// soft-thresholding). Points already in the closed ball are returned
// unchanged.
std::vector<double> project_l1(std::vector<double> v, double R);

struct FitOptions {
  double tol = 1e-8;   // threshold on the projected-gradient norm
  int max_iter = 10000;
  bool record_trace = false;  // keep the per-iteration objective sequence
};

struct FitResult {
  std::vector<double> theta_hat;
  int iterations = 0;
  double final_gap = 0.0;  // ||theta - proj(theta - grad)||_2 at exit
  double objective = 0.0;  // final empirical risk
  bool converged = true;   // false: max_iter hit with final_gap > tol
  std::vector<double> objective_trace;  // accepted objectives, if recorded
};

// Empirical risk (1/n) sum loss(x_i . theta - y_i).
double empirical_risk(const Sample& sample, const LossSpec& loss,
                      std::span<const double> theta);

// Projected gradient descent with Armijo backtracking on the constraint
// ||theta||_1 <= R. The objective sequence is non-increasing across accepted
// steps. A non-converged run still returns its diagnostics.
FitResult erm_fit(const Sample& sample, const LossSpec& loss, double R,
                  const FitOptions& opts = {});

}  // namespace ermsim
