#pragma once

#include "atlab/linalg.hpp"
#include "atlab/quad_model.hpp"
#include "atlab/vec.hpp"

namespace atlab {

struct PacBayesContext {
    double prior_scale = 1.0;    // lambda_0
    Vec prior_mean;              // theta_0; empty means zero vector
    long sample_size = 10000;    // N
    double confidence = 0.05;    // epsilon in (0, 1)
};

struct BoundReport {
    double kl = 0.0;
    double g = 0.0;
    double alpha = 0.0;
    int b = 1;
    int K = 0;
    double r = 0.0;              // alpha / b
    double trace_sigma = 0.0;
    double logdet_sigma = 0.0;
    SpdMatrix sigma;
};

// KL(N(0, Sigma) || N(theta_0, lambda_0 I)) in closed form:
//   (1/2 lambda_0) theta_0^T theta_0 - d/2 + (d/2) log lambda_0
//   + (1/2 lambda_0) tr(Sigma) - (1/2) log|Sigma|
double kl_gaussian_vs_isotropic(const SpdMatrix& sigma, const PacBayesContext& ctx);

// G = sqrt((kl + log(1/eps) + log N + 2) / (2N - 1))
double pac_bayes_bound(double kl, const PacBayesContext& ctx);

BoundReport bound_for_pgdat(const QuadraticRiskModel& model, double alpha, int b, int K,
                            const PacBayesContext& ctx);

struct KlRProfile {
    // The displayed dKL/dr expression: (r/4 lambda_0) tr(E) - (d/2) log(r/2) - log|E|/2.
    // Algebraically this is the r-dependent part of the KL itself under
    // Sigma = (r/2) E, not its derivative.
    double paper_expression = 0.0;
    // Actual derivative of that r-dependent part: tr(E)/(4 lambda_0) - d/(2r).
    // Its sign flips exactly at the d > r tr(E) / (2 lambda_0) condition.
    double true_derivative = 0.0;
};

KlRProfile kl_r_profile(const SpdMatrix& e, int d, double lambda0, double r);

double log_det(const SpdMatrix& m);  // via cholesky; throws NotPositiveDefinite

}  // namespace atlab
