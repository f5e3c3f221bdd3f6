#include <cmath>

#include <doctest.h>

#include "atlab/sde.hpp"

using namespace atlab;

namespace {

QuadraticRiskModel scalar_model(double a, double h) {
    return {SpdMatrix::diagonal({a}), SpdMatrix::diagonal({h})};
}

SpdMatrix random_spd(int dim, RngStream& rng, double ridge = 1.0) {
    Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = rng.normal();
    Matrix m = g.multiply(g.transposed());
    for (int i = 0; i < dim; ++i) m(i, i) += ridge;
    return SpdMatrix(m);
}

double rel_frob(const Matrix& a, const Matrix& b) {
    return (a - b).frobenius_norm() / b.frobenius_norm();
}

}  // namespace

TEST_CASE("build_pgdat_sde scalar formulas") {
    const QuadraticRiskModel m = scalar_model(1.0, 1.0);
    const OuProcessSpec k0 = build_pgdat_sde(m, 0.1, 1, 0);
    CHECK(k0.drift(0, 0) == doctest::Approx(1.05).epsilon(1e-12));
    CHECK(k0.diffusion(0, 0) == doctest::Approx(std::sqrt(0.1)).epsilon(1e-12));

    const OuProcessSpec k10 = build_pgdat_sde(m, 0.1, 1, 10);
    CHECK(k10.drift(0, 0) == doctest::Approx(2.05).epsilon(1e-12));
}

TEST_CASE("K = 0 drift reduces to the SGD form A + alpha A^2 / 2") {
    RngStream rng(20, 0);
    const QuadraticRiskModel m{random_spd(3, rng), random_spd(3, rng)};
    const OuProcessSpec spec = build_pgdat_sde(m, 0.05, 2, 0);
    const Matrix a = m.hessian().as_matrix();
    const Matrix expected = a + a.multiply(a) * (0.5 * 0.05);
    CHECK(rel_frob(spec.drift.as_matrix(), expected) < 1e-12);
}

TEST_CASE("analytic_stationary_cov scalar values") {
    const QuadraticRiskModel m = scalar_model(1.0, 1.0);
    CHECK(analytic_stationary_cov(m, 0.1, 1, 0)(0, 0) ==
          doctest::Approx(0.05 / 1.05).epsilon(1e-12));
    CHECK(analytic_stationary_cov(m, 0.1, 1, 10)(0, 0) ==
          doctest::Approx(0.05 / 2.05).epsilon(1e-12));
}

TEST_CASE("doubling alpha increases every eigenvalue of Sigma") {
    RngStream rng(21, 0);
    const QuadraticRiskModel m{random_spd(3, rng), random_spd(3, rng)};
    const auto w1 = sym_eig(analytic_stationary_cov(m, 0.01, 1, 0)).eigenvalues;
    const auto w2 = sym_eig(analytic_stationary_cov(m, 0.02, 1, 0)).eigenvalues;
    const auto wb = sym_eig(analytic_stationary_cov(m, 0.01, 4, 0)).eigenvalues;
    for (int i = 0; i < 3; ++i) {
        CHECK(w2[i] > w1[i]);
        CHECK(wb[i] < w1[i]);
    }
}

TEST_CASE("commuting case matches the explicit form (alpha/2b) A^2 H Ahat^-1") {
    const SpdMatrix a = SpdMatrix::diagonal({2.0, 0.5, 1.0});
    const SpdMatrix h = SpdMatrix::diagonal({1.0, 3.0, 0.2});
    const QuadraticRiskModel m{a, h};
    const double alpha = 0.05;
    const int b = 2, K = 3;
    const SpdMatrix sigma = analytic_stationary_cov(m, alpha, b, K);
    for (int i = 0; i < 3; ++i) {
        const double ai = a(i, i);
        const double ahat = ai + (K + 0.5) * alpha * ai * ai;
        const double expected = (alpha / (2.0 * b)) * ai * ai * h(i, i) / ahat;
        CHECK(sigma(i, i) == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("Lyapunov identity holds on random model draws") {
    RngStream rng(22, 0);
    for (int rep = 0; rep < 100; ++rep) {
        const int dim = 1 + static_cast<int>(rng.next_u64() % 5);
        const QuadraticRiskModel m{random_spd(dim, rng), random_spd(dim, rng, 0.2)};
        const double alpha = 0.01 + 0.04 * rng.uniform();
        const int b = 1 + static_cast<int>(rng.next_u64() % 4);
        const int K = static_cast<int>(rng.next_u64() % 6);
        const SpdMatrix sigma = analytic_stationary_cov(m, alpha, b, K);
        const Matrix a = m.hessian().as_matrix();
        const Matrix ahat = a + a.multiply(a) * ((K + 0.5) * alpha);
        const Matrix c = a.multiply(m.data_cov().as_matrix()).multiply(a) *
                         (alpha / static_cast<double>(b));
        const Matrix lhs = ahat.multiply(sigma.as_matrix()) +
                           sigma.as_matrix().multiply(ahat);
        CHECK(rel_frob(lhs, c) < 1e-10);
    }
}

TEST_CASE("noiseless simulation decays exponentially") {
    OuProcessSpec spec;
    spec.drift = SpdMatrix::diagonal({1.0, 2.0});
    spec.diffusion = Matrix(2, 2);
    spec.dt = 1e-3;
    spec.horizon = 5.0;
    spec.initial_state = {1.0, 1.0};
    const TrajectoryStats stats = simulate(spec, 4, 0.9, 1);
    // post-burn-in states are within exp(-lambda_min * 0.9 * T) of zero
    CHECK(std::abs(stats.empirical_mean[0]) < std::exp(-1.0 * 0.9 * 5.0) * 1.5);
    CHECK(stats.empirical_cov.frobenius_norm() < 1e-3);
}

TEST_CASE("noiseless EM error halves with dt") {
    OuProcessSpec spec;
    spec.drift = SpdMatrix::diagonal({1.3});
    spec.diffusion = Matrix(1, 1);
    spec.horizon = 2.0;
    spec.initial_state = {1.0};
    const double exact = std::exp(-1.3 * 2.0);
    double errs[2];
    const double dts[2] = {1e-2, 5e-3};
    for (int i = 0; i < 2; ++i) {
        spec.dt = dts[i];
        const TrajectoryStats stats = simulate(spec, 1, 0.999, 1);
        errs[i] = std::abs(stats.empirical_mean[0] - exact);
    }
    CHECK(errs[1] < 0.7 * errs[0]);
}

TEST_CASE("simulate is deterministic") {
    const QuadraticRiskModel m = scalar_model(1.0, 1.0);
    OuProcessSpec spec = build_pgdat_sde(m, 0.1, 1, 0);
    spec.dt = 1e-3;
    spec.horizon = 20.0;
    const TrajectoryStats s1 = simulate(spec, 8, 0.5, 99);
    const TrajectoryStats s2 = simulate(spec, 8, 0.5, 99);
    CHECK(s1.n_kept_steps == s2.n_kept_steps);
    CHECK(s1.empirical_mean[0] == s2.empirical_mean[0]);
    CHECK(s1.empirical_cov(0, 0) == s2.empirical_cov(0, 0));
}

TEST_CASE("1-D stationary variance matches 0.0476190 within 5%") {
    const QuadraticRiskModel m = scalar_model(1.0, 1.0);
    OuProcessSpec spec = build_pgdat_sde(m, 0.1, 1, 0);
    spec.dt = 1e-3;
    spec.horizon = 200.0;
    const TrajectoryStats stats = simulate(spec, 64, 0.5, 7);
    CHECK(std::abs(stats.empirical_cov(0, 0) - 0.0476190) / 0.0476190 < 0.05);
}

TEST_CASE("EM agrees with the exact OU transition oracle") {
    RngStream rng(23, 0);
    const QuadraticRiskModel m{random_spd(2, rng), random_spd(2, rng)};
    OuProcessSpec spec = build_pgdat_sde(m, 0.1, 1, 1);
    spec.horizon = 40.0 / sym_eig(spec.drift).eigenvalues.back();
    const TrajectoryStats em = simulate(spec, 48, 0.5, 5);
    const TrajectoryStats exact = simulate_exact(spec, 48, 0.5, 6);
    CHECK(rel_frob(em.empirical_cov.as_matrix(), exact.empirical_cov.as_matrix()) < 0.15);
}

TEST_CASE("invalid spec parameters raise ConfigError") {
    OuProcessSpec spec;
    spec.drift = SpdMatrix::diagonal({10.0});
    spec.diffusion = Matrix(1, 1);
    spec.dt = 0.5;  // violates dt < 2/lambda_max
    spec.horizon = 1.0;
    spec.initial_state = {0.0};
    CHECK_THROWS_AS(simulate(spec, 1, 0.5, 1), ConfigError);
    spec.dt = 1e-3;
    CHECK_THROWS_AS(simulate(spec, 1, 1.0, 1), ConfigError);
}

TEST_CASE("discrete iterates: K = 0 scalar within 10%") {
    const QuadraticRiskModel m = scalar_model(1.0, 1.0);
    const StationaryCheck check = discrete_iterate_stationary_check(
        m, OptimizerKind::Sgd, 0.01, 1, 0, 200000, 16, 3);
    CHECK(check.analytic_cov(0, 0) == doctest::Approx(0.005 / 1.005).epsilon(1e-12));
    CHECK(check.relative_error_frobenius < 0.10);
}

TEST_CASE("discrete iterates: H = 0 gives zero covariance") {
    const QuadraticRiskModel m = scalar_model(1.0, 0.0);
    const StationaryCheck check = discrete_iterate_stationary_check(
        m, OptimizerKind::Sgd, 0.01, 1, 0, 5000, 2, 3);
    CHECK(check.empirical_cov(0, 0) < 1e-12);
}
