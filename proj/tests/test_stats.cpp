#include <algorithm>
#include <cmath>
#include <numeric>

#include <doctest.h>

#include "atlab/fixture.hpp"
#include "atlab/stats.hpp"

using namespace atlab;

namespace {

// Simpson quadrature of the t density tail, for cross-checking student_t_tail.
double t_tail_quadrature(double t, double df) {
    const double c = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) /
                     std::sqrt(df * M_PI);
    auto density = [&](double u) {
        return c * std::pow(1.0 + u * u / df, -(df + 1) / 2);
    };
    // integrate density over [t, t + 4000] with fine Simpson; even for df = 3
    // the mass beyond 4000 is below 1e-11
    const int n = 400000;
    const double h = 4000.0 / n;
    double s = density(t) + density(t + 4000.0);
    for (int i = 1; i < n; ++i) s += density(t + i * h) * (i % 2 ? 4.0 : 2.0);
    return 2.0 * s * h / 3.0;  // two-sided
}

}  // namespace

TEST_CASE("perfect monotone relationships") {
    const Vec xs{1, 2, 3}, up{2, 4, 6}, down{3, 2, 1};
    CHECK(pearson_r(xs, up).coefficient == doctest::Approx(1.0));
    CHECK(spearman_rho(xs, up).coefficient == doctest::Approx(1.0));
    CHECK(kendall_tau(xs, up).coefficient == doctest::Approx(1.0));
    CHECK(kendall_tau(xs, down).coefficient == doctest::Approx(-1.0));
}

TEST_CASE("student_t_tail values") {
    CHECK(student_t_tail(0.0, 5.0) == doctest::Approx(1.0));
    CHECK(student_t_tail(2.776, 4.0) == doctest::Approx(0.05).epsilon(0.02));

    double prev = 1.1;
    for (double t = 0.0; t <= 6.0; t += 0.5) {
        const double p = student_t_tail(t, 7.0);
        CHECK(p < prev);
        CHECK(p > 0.0);
        prev = p;
    }
}

TEST_CASE("student_t_tail matches quadrature") {
    for (double df : {3.0, 13.0, 30.0})
        for (double t : {0.5, 1.5, 3.0, 6.0})
            CHECK(std::abs(student_t_tail(t, df) - t_tail_quadrature(t, df)) < 1e-6);
}

TEST_CASE("spearman equals pearson on mid-ranks, including ties") {
    const Vec xs{1.0, 2.0, 2.0, 3.0, 5.0, 5.0, 5.0, 8.0};
    const Vec ys{3.0, 1.0, 4.0, 4.0, 2.0, 9.0, 9.0, 6.0};
    const double via_ranks = pearson_r(mid_ranks(xs), mid_ranks(ys)).coefficient;
    CHECK(std::abs(spearman_rho(xs, ys).coefficient - via_ranks) < 1e-12);
}

TEST_CASE("kendall matches brute force on all permutations of 4 items") {
    Vec xs{1, 2, 3, 4};
    Vec perm{10.0, 20.0, 30.0, 40.0};
    std::sort(perm.begin(), perm.end());
    do {
        int concordant = 0, discordant = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                const double s = (xs[j] - xs[i]) * (perm[j] - perm[i]);
                (s > 0 ? concordant : discordant)++;
            }
        const double expected = (concordant - discordant) / 6.0;
        CHECK(kendall_tau(xs, perm).coefficient == doctest::Approx(expected).epsilon(1e-12));
    } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST_CASE("degenerate series raise") {
    CHECK_THROWS_AS(pearson_r({1, 1, 1}, {1, 2, 3}), DegenerateSeries);
    CHECK_THROWS_AS(paired_t_test({1, 1, 1, 1}), DegenerateSeries);
}

TEST_CASE("paired_t_test basics") {
    const TTestResult zero = paired_t_test({0, 0, 0, 0});
    CHECK(zero.mean == 0.0);
    CHECK(zero.p_value == 1.0);

    const TTestResult mixed = paired_t_test({1.0, 2.0, 0.5, 1.5, 1.2});
    CHECK(mixed.mean == doctest::Approx(1.24));
    CHECK(mixed.p_value < 0.01);
}

TEST_CASE("exact permutation p-values") {
    // |r| = 1 is achieved only by the identity and the reversal: p = 2/24
    const Vec xs{1, 2, 3, 4}, ys{2, 4, 6, 8};
    CHECK(permutation_p_value_pearson(xs, ys) == doctest::Approx(2.0 / 24.0));
    CHECK(permutation_p_value_kendall(xs, ys) == doctest::Approx(2.0 / 24.0));

    Vec big(11, 0.0);
    std::iota(big.begin(), big.end(), 0.0);
    CHECK_THROWS_AS(permutation_p_value_pearson(big, big), ConfigError);
}

TEST_CASE("table2 fixture integrity") {
    const auto& fixture = table2_fixture();
    REQUIRE(fixture.size() == 3);
    for (const ArchFixture& arch : fixture) REQUIRE(arch.rows.size() == 14);
    CHECK(fixture[0].arch_tag == "preact-resnet");
    CHECK(fixture[0].rows[0].alpha == doctest::Approx(0.010));
    CHECK(fixture[0].rows[0].pgdat_acc == doctest::Approx(44.11));
    CHECK(fixture[0].rows[0].deat_acc == doctest::Approx(45.07));
    CHECK(table2_checksum() == doctest::Approx(3914.704).epsilon(1e-12));
}

TEST_CASE("fixture statistics: correlation direction and significance") {
    for (const ArchFixture& arch : table2_fixture()) {
        const CorrelationResult r = pearson_r(arch.alphas(), arch.pgdat_column());
        CHECK(r.coefficient >= 0.75);
        CHECK(r.p_value < 0.005);
    }
}

TEST_CASE("fixture statistics: paired improvement") {
    const ArchFixture& preact = table2_fixture()[0];
    const TTestResult t = paired_t_test(preact.diff_column());
    CHECK(t.mean == doctest::Approx(1.4279).epsilon(1e-3));
    CHECK(t.mean > 0.0);
    CHECK(t.p_value < 0.005);
}
