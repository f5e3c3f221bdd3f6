#include "atlab/sde.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace atlab {

namespace {

SpdMatrix pgdat_drift(const QuadraticRiskModel& model, double alpha, int K) {
    const Matrix& a = model.hessian().as_matrix();
    const Matrix a2 = a.multiply(a);
    return SpdMatrix(a + a2 * ((K + 0.5) * alpha));
}

void default_timegrid(const SpdMatrix& drift, double& dt, double& horizon) {
    const EigenDecomposition ed = sym_eig(drift);
    const double lam_max = ed.eigenvalues.front();
    const double lam_min = ed.eigenvalues.back();
    if (dt <= 0.0) dt = 0.01 / lam_max;
    if (horizon <= 0.0) horizon = 20.0 / lam_min;
}

}  // namespace

OuProcessSpec build_pgdat_sde(const QuadraticRiskModel& model, double alpha, int b, int K,
                              double dt, double horizon) {
    if (alpha <= 0.0 || b < 1 || K < 0) throw ConfigError("build_pgdat_sde: invalid alpha/b/K");
    OuProcessSpec spec;
    spec.drift = pgdat_drift(model, alpha, K);
    spec.diffusion = model.hessian().as_matrix().multiply(model.data_factor()) *
                     std::sqrt(alpha / static_cast<double>(b));
    spec.initial_state = Vec(model.dim(), 0.0);
    default_timegrid(spec.drift, dt, horizon);
    spec.dt = dt;
    spec.horizon = horizon;
    return spec;
}

OuProcessSpec build_sgd_sde_legacy(const QuadraticRiskModel& model, double alpha, int b,
                                   double dt, double horizon) {
    if (alpha <= 0.0 || b < 1) throw ConfigError("build_sgd_sde_legacy: invalid alpha/b");
    OuProcessSpec spec;
    spec.drift = SpdMatrix(model.hessian().as_matrix() * alpha);
    spec.diffusion = model.data_factor() * (alpha / std::sqrt(static_cast<double>(b)));
    spec.initial_state = Vec(model.dim(), 0.0);
    default_timegrid(spec.drift, dt, horizon);
    spec.dt = dt;
    spec.horizon = horizon;
    return spec;
}

SpdMatrix analytic_stationary_cov(const QuadraticRiskModel& model, double alpha, int b, int K) {
    const SpdMatrix drift = pgdat_drift(model, alpha, K);
    const Matrix& a = model.hessian().as_matrix();
    const Matrix aha = a.multiply(model.data_cov().as_matrix()).multiply(a);
    const SpdMatrix c(aha * (alpha / static_cast<double>(b)));
    return solve_lyapunov(drift, c);
}

namespace {

struct ChainResult {
    MomentAccumulator acc;
    bool diverged = false;
    explicit ChainResult(int dim) : acc(dim) {}
};

void run_em_chain(const OuProcessSpec& spec, long total_steps, long burn_steps,
                  RngStream rng, ChainResult& out) {
    const int d = spec.drift.dim();
    Vec theta = spec.initial_state;
    Vec z(d);
    const double sqrt_dt = std::sqrt(spec.dt);
    for (long s = 0; s < total_steps; ++s) {
        const Vec drift_term = spec.drift.apply(theta);
        for (int i = 0; i < d; ++i) z[i] = rng.normal();
        const Vec noise = spec.diffusion.apply(z);
        for (int i = 0; i < d; ++i) theta[i] += -drift_term[i] * spec.dt + noise[i] * sqrt_dt;
        if (norm2(theta) > 1e6) {
            out.diverged = true;
            return;
        }
        if (s >= burn_steps) out.acc.add(theta);
    }
}

TrajectoryStats gather(std::vector<ChainResult>& chains, int dim) {
    MomentAccumulator total(dim);
    for (ChainResult& c : chains) {
        if (c.diverged) throw Diverged("simulate: chain state norm exceeded 1e6 (dt instability?)");
        total.merge(c.acc);
    }
    TrajectoryStats stats;
    stats.n_chains = static_cast<int>(chains.size());
    stats.n_kept_steps = total.count();
    stats.empirical_mean = total.mean();
    stats.empirical_cov = total.covariance();
    return stats;
}

void validate(const OuProcessSpec& spec, int n_chains, double burn_in_fraction) {
    if (n_chains < 1) throw ConfigError("simulate: n_chains must be >= 1");
    if (burn_in_fraction < 0.0 || burn_in_fraction >= 1.0)
        throw ConfigError("simulate: burn_in_fraction must be in [0, 1)");
    const EigenDecomposition ed = sym_eig(spec.drift);
    if (spec.dt >= 2.0 / ed.eigenvalues.front())
        throw ConfigError("simulate: dt violates the explicit-scheme stability bound");
}

}  // namespace

TrajectoryStats simulate(const OuProcessSpec& spec, int n_chains, double burn_in_fraction,
                         std::uint64_t seed, std::uint64_t base_stream) {
    validate(spec, n_chains, burn_in_fraction);
    const long total_steps = static_cast<long>(std::llround(spec.horizon / spec.dt));
    const long burn_steps = static_cast<long>(total_steps * burn_in_fraction);
    std::vector<ChainResult> chains(n_chains, ChainResult(spec.drift.dim()));
#pragma omp parallel for schedule(dynamic)
    for (int c = 0; c < n_chains; ++c)
        run_em_chain(spec, total_steps, burn_steps, RngStream(seed, base_stream + c), chains[c]);
    return gather(chains, spec.drift.dim());
}

TrajectoryStats simulate_serial(const OuProcessSpec& spec, int n_chains, double burn_in_fraction,
                                std::uint64_t seed, std::uint64_t base_stream) {
    validate(spec, n_chains, burn_in_fraction);
    const long total_steps = static_cast<long>(std::llround(spec.horizon / spec.dt));
    const long burn_steps = static_cast<long>(total_steps * burn_in_fraction);
    std::vector<ChainResult> chains(n_chains, ChainResult(spec.drift.dim()));
    for (int c = 0; c < n_chains; ++c)
        run_em_chain(spec, total_steps, burn_steps, RngStream(seed, base_stream + c), chains[c]);
    return gather(chains, spec.drift.dim());
}

TrajectoryStats simulate_exact(const OuProcessSpec& spec, int n_chains, double burn_in_fraction,
                               std::uint64_t seed, std::uint64_t base_stream) {
    validate(spec, n_chains, burn_in_fraction);
    const int d = spec.drift.dim();
    const EigenDecomposition ed = sym_eig(spec.drift);
    const Matrix vt = ed.eigenvectors.transposed();
    // diffusion covariance in the eigenbasis
    const Matrix sig_eig = vt.multiply(spec.diffusion);
    const Matrix qq = sig_eig.multiply(sig_eig.transposed());
    // transition noise covariance over one step dt
    Matrix s(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const double lam = ed.eigenvalues[i] + ed.eigenvalues[j];
            s(i, j) = qq(i, j) * (1.0 - std::exp(-lam * spec.dt)) / lam;
        }
    const Matrix noise_factor = psd_cholesky(SpdMatrix(s));
    Vec decay(d);
    for (int i = 0; i < d; ++i) decay[i] = std::exp(-ed.eigenvalues[i] * spec.dt);

    const long total_steps = static_cast<long>(std::llround(spec.horizon / spec.dt));
    const long burn_steps = static_cast<long>(total_steps * burn_in_fraction);
    MomentAccumulator total(d);
    for (int c = 0; c < n_chains; ++c) {
        RngStream rng(seed, base_stream + c);
        Vec th = vt.apply(spec.initial_state);
        Vec z(d);
        for (long step = 0; step < total_steps; ++step) {
            for (int i = 0; i < d; ++i) z[i] = rng.normal();
            const Vec eta = noise_factor.apply(z);
            for (int i = 0; i < d; ++i) th[i] = decay[i] * th[i] + eta[i];
            if (step >= burn_steps) total.add(ed.eigenvectors.apply(th));
        }
    }
    TrajectoryStats stats;
    stats.n_chains = n_chains;
    stats.n_kept_steps = total.count();
    stats.empirical_mean = total.mean();
    stats.empirical_cov = total.covariance();
    return stats;
}

StationaryCheck discrete_iterate_stationary_check(const QuadraticRiskModel& model,
                                                  OptimizerKind kind, double alpha, int b, int K,
                                                  long n_steps, int n_chains, std::uint64_t seed) {
    const int d = model.dim();
    AttackSpec attack;
    attack.steps = (kind == OptimizerKind::Sgd) ? 0 : K;
    attack.inner_rate = alpha;
    attack.budget = BudgetKind::Lagrange;  // unconstrained ascent, lambda = 0
    attack.lambda = 0.0;

    const long burn_steps = n_steps / 2;
    std::vector<ChainResult> chains(n_chains, ChainResult(d));
#pragma omp parallel for schedule(dynamic)
    for (int c = 0; c < n_chains; ++c) {
        RngStream rng(seed, c);
        const QuadraticOracle oracle(model);
        PgdAtState state{Vec(d, 0.0), alpha, b, attack};
        for (long s = 0; s < n_steps; ++s) {
            pgdat_step(state, oracle, to_samples(model.draw_batch(b, rng)));
            if (norm2(state.theta) > 1e6) {
                chains[c].diverged = true;
                break;
            }
            if (s >= burn_steps) chains[c].acc.add(state.theta);
        }
    }

    StationaryCheck check;
    MomentAccumulator total(d);
    for (ChainResult& c : chains) {
        if (c.diverged) throw Diverged("discrete_iterate_stationary_check: iterates diverged");
        total.merge(c.acc);
    }
    check.empirical_cov = total.covariance();
    check.analytic_cov = analytic_stationary_cov(model, alpha, b, K);
    const Matrix diff = check.empirical_cov.as_matrix() - check.analytic_cov.as_matrix();
    check.relative_error_frobenius = diff.frobenius_norm() / check.analytic_cov.frobenius_norm();
    double max_rel = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const double denom = std::fabs(check.analytic_cov(i, j));
            if (denom > 1e-14 * check.analytic_cov.frobenius_norm())
                max_rel = std::max(max_rel, std::fabs(diff(i, j)) / denom);
        }
    check.max_entry_relative_error = max_rel;
    return check;
}

}  // namespace atlab
