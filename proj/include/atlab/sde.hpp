#pragma once

#include "atlab/linalg.hpp"
#include "atlab/optimizers.hpp"
#include "atlab/quad_model.hpp"
#include "atlab/rng.hpp"

namespace atlab {

// Linear SDE dtheta = -drift * theta dt + diffusion dW.
struct OuProcessSpec {
    SpdMatrix drift;      // A_hat, strictly PD
    Matrix diffusion;     // sigma, d x d
    double dt = 1e-3;
    double horizon = 100.0;
    Vec initial_state;
};

struct TrajectoryStats {
    int n_chains = 0;
    long n_kept_steps = 0;
    Vec empirical_mean;
    SpdMatrix empirical_cov;
};

// A_hat = A + (K + 1/2) alpha A^2, sigma = sqrt(alpha/b) A B with H = B B^T.
// dt defaults to 0.01 / lambda_max(A_hat) and horizon to 20 / lambda_min(A_hat)
// when the passed values are <= 0.
OuProcessSpec build_pgdat_sde(const QuadraticRiskModel& model, double alpha, int b, int K,
                              double dt = -1.0, double horizon = -1.0);

// Lemma-style SGD convention (drift alpha A, diffusion (alpha/sqrt(b)) B).
// Kept for reference only; the stationary-covariance formula and all bounds
// use the build_pgdat_sde convention.
OuProcessSpec build_sgd_sde_legacy(const QuadraticRiskModel& model, double alpha, int b,
                                   double dt = -1.0, double horizon = -1.0);

// Solves A_hat Sigma + Sigma A_hat = (alpha/b) A H A. The diffusion
// covariance sigma sigma^T = (alpha/b) A B B^T A^T equals (alpha/b) A H A,
// which coincides with (alpha/b) A^2 H whenever A and H commute.
SpdMatrix analytic_stationary_cov(const QuadraticRiskModel& model, double alpha, int b, int K);

// Euler-Maruyama over independent chains; chain i owns RngStream(seed,
// base_stream + i) and results are aggregated in chain-index order, so the
// output is identical whether chains run serially or in parallel.
TrajectoryStats simulate(const OuProcessSpec& spec, int n_chains, double burn_in_fraction,
                         std::uint64_t seed, std::uint64_t base_stream = 0);
TrajectoryStats simulate_serial(const OuProcessSpec& spec, int n_chains, double burn_in_fraction,
                                std::uint64_t seed, std::uint64_t base_stream = 0);

// Exact OU transition sampling through the eigenbasis of the drift; test
// oracle for the Euler-Maruyama path.
TrajectoryStats simulate_exact(const OuProcessSpec& spec, int n_chains, double burn_in_fraction,
                               std::uint64_t seed, std::uint64_t base_stream = 0);

struct StationaryCheck {
    SpdMatrix empirical_cov;
    SpdMatrix analytic_cov;
    double relative_error_frobenius = 0.0;
    double max_entry_relative_error = 0.0;
};

// Runs the actual discrete optimizer on the quadratic model (fresh batch per
// step, alpha_I = alpha_O = alpha, unconstrained lambda = 0 inner loop) and
// compares its long-run iterate covariance with the analytic Sigma.
StationaryCheck discrete_iterate_stationary_check(const QuadraticRiskModel& model,
                                                  OptimizerKind kind, double alpha, int b, int K,
                                                  long n_steps, int n_chains, std::uint64_t seed);

}  // namespace atlab
