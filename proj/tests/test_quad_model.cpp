#include <cmath>

#include <doctest.h>

#include "atlab/quad_model.hpp"

using namespace atlab;

namespace {

QuadraticRiskModel scalar_model(double a, double h) {
    return {SpdMatrix::diagonal({a}), SpdMatrix::diagonal({h})};
}

SpdMatrix random_spd(int dim, RngStream& rng) {
    Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = rng.normal();
    Matrix m = g.multiply(g.transposed());
    for (int i = 0; i < dim; ++i) m(i, i) += 1.0;
    return SpdMatrix(m);
}

}  // namespace

TEST_CASE("loss values") {
    const QuadraticRiskModel id2{SpdMatrix::identity(2), SpdMatrix::identity(2)};
    CHECK(id2.loss({0.0, 0.0}, {0.0, 0.0}) == doctest::Approx(-2.0));

    CHECK(scalar_model(1.0, 1.0).loss({0.0}, {2.0}) == doctest::Approx(1.0));

    const QuadraticRiskModel d23{SpdMatrix::diagonal({2.0, 3.0}), SpdMatrix::identity(2)};
    CHECK(d23.loss({1.0, 0.0}, {0.0, 0.0}) == doctest::Approx(-4.0));
}

TEST_CASE("gradients") {
    const QuadraticRiskModel m = scalar_model(1.0, 1.0);
    CHECK(m.grad_theta({0.5}, {0.5})[0] == 0.0);
    CHECK(m.grad_x({0.5}, {0.5})[0] == 0.0);
    CHECK(m.grad_x({0.0}, {1.0})[0] == doctest::Approx(1.0));
    CHECK(m.grad_theta({0.0}, {1.0})[0] == doctest::Approx(-1.0));
}

TEST_CASE("grad_theta is exactly -grad_x") {
    RngStream rng(10, 0);
    const QuadraticRiskModel m{random_spd(4, rng), random_spd(4, rng)};
    for (int rep = 0; rep < 20; ++rep) {
        Vec theta(4), x(4);
        for (int i = 0; i < 4; ++i) {
            theta[i] = rng.normal();
            x[i] = rng.normal();
        }
        const Vec gt = m.grad_theta(theta, x);
        const Vec gx = m.grad_x(theta, x);
        for (int i = 0; i < 4; ++i) CHECK(gt[i] == -gx[i]);
    }
}

TEST_CASE("grad_theta matches central finite differences") {
    RngStream rng(11, 0);
    const QuadraticRiskModel m{random_spd(4, rng), random_spd(4, rng)};
    const double step = 1e-5;
    for (int rep = 0; rep < 10; ++rep) {
        Vec theta(4), x(4);
        for (int i = 0; i < 4; ++i) {
            theta[i] = rng.normal();
            x[i] = rng.normal();
        }
        const Vec g = m.grad_theta(theta, x);
        for (int i = 0; i < 4; ++i) {
            Vec tp = theta, tm = theta;
            tp[i] += step;
            tm[i] -= step;
            const double fd = (m.loss(tp, x) - m.loss(tm, x)) / (2 * step);
            CHECK(std::abs(g[i] - fd) < 1e-6);
        }
    }
}

TEST_CASE("expected_risk") {
    const QuadraticRiskModel d23{SpdMatrix::diagonal({2.0, 3.0}), SpdMatrix::identity(2)};
    CHECK(d23.expected_risk({0.0, 0.0}) == 0.0);
    CHECK(d23.expected_risk({1.0, 1.0}) == doctest::Approx(2.5));
}

TEST_CASE("expected_risk matches Monte Carlo mean of loss up to the constant gap") {
    // E_x[l] = 1/2 theta^T A theta + 1/2 tr(A H) - tr(A)
    const QuadraticRiskModel m{SpdMatrix::diagonal({2.0, 1.0}),
                               SpdMatrix::diagonal({1.0, 0.5})};
    const Vec theta{1.0, -0.5};
    const double gap = 0.5 * (2.0 * 1.0 + 1.0 * 0.5) - 3.0;
    RngStream rng(12, 0);
    double sum = 0.0, sumsq = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
        const MiniBatch batch = m.draw_batch(1, rng);
        const double v = m.loss(theta, batch.samples[0]);
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sumsq / n - mean * mean) / n);
    CHECK(std::abs(mean - (m.expected_risk(theta) + gap)) < 3 * se);
}

TEST_CASE("draw_batch degenerate and deterministic") {
    const QuadraticRiskModel noiseless{SpdMatrix::diagonal({1.0, 1.0}), SpdMatrix::zero(2)};
    RngStream rng(13, 0);
    const MiniBatch batch = noiseless.draw_batch(5, rng);
    for (const Vec& x : batch.samples)
        for (double v : x) CHECK(v == 0.0);
    const Vec theta{0.3, -0.7};
    const Vec g = noiseless.minibatch_grad(theta, batch);
    const Vec exact = noiseless.grad_theta(theta, {0.0, 0.0});
    CHECK(g[0] == doctest::Approx(exact[0]).epsilon(1e-15));

    const QuadraticRiskModel m{SpdMatrix::identity(2), SpdMatrix::identity(2)};
    RngStream r1(14, 0), r2(14, 0);
    const MiniBatch b1 = m.draw_batch(3, r1);
    const MiniBatch b2 = m.draw_batch(3, r2);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) CHECK(b1.samples[i][j] == b2.samples[i][j]);
}

TEST_CASE("gradient noise covariance equals A H A^T") {
    const QuadraticRiskModel m{SpdMatrix::diagonal({2.0, 0.5}), SpdMatrix::identity(2)};
    RngStream rng(15, 0);
    MomentAccumulator acc(2);
    const Vec theta{0.0, 0.0};
    const MiniBatch big = m.draw_batch(1000000, rng);
    for (const Vec& x : big.samples) acc.add(m.grad_theta(theta, x));
    const SpdMatrix cov = acc.covariance();
    // A H A^T = diag(4, 0.25)
    CHECK(std::abs(cov(0, 0) - 4.0) < 0.02);
    CHECK(std::abs(cov(1, 1) - 0.25) < 0.01);
    CHECK(std::abs(cov(0, 1)) < 0.01);
}

TEST_CASE("minibatch_grad basics and unbiasedness") {
    const QuadraticRiskModel m = scalar_model(1.0, 1.0);
    MiniBatch at_theta;
    at_theta.samples = {{0.5}, {0.5}};
    CHECK(m.minibatch_grad({0.5}, at_theta)[0] == 0.0);

    MiniBatch symmetric;
    symmetric.samples = {{1.0}, {-1.0}};
    CHECK(m.minibatch_grad({0.0}, symmetric)[0] == 0.0);

    RngStream rng(16, 0);
    const Vec theta{0.7};
    double sum = 0.0, sumsq = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double g = m.minibatch_grad(theta, m.draw_batch(4, rng))[0];
        sum += g;
        sumsq += g * g;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sumsq / n - mean * mean) / n);
    CHECK(std::abs(mean - 0.7) < 3 * se);
}

TEST_CASE("JSON round trip") {
    RngStream rng(17, 0);
    const QuadraticRiskModel m{random_spd(3, rng), random_spd(3, rng)};
    const QuadraticRiskModel back = QuadraticRiskModel::from_json(m.to_json());
    CHECK(back.dim() == 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            CHECK(back.hessian()(i, j) == m.hessian()(i, j));
            CHECK(back.data_cov()(i, j) == m.data_cov()(i, j));
        }
}
