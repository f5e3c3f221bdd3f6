#include "atlab/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "atlab/errors.hpp"

namespace atlab {

namespace {

// Lentz's continued fraction for the incomplete beta function.
double betacf(double a, double b, double x) {
    const int max_iter = 300;
    const double eps = 3e-16;
    const double fpmin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

double mean_of(const Vec& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

void require_series(const Vec& xs, const Vec& ys, std::size_t min_n) {
    if (xs.size() != ys.size()) throw DimensionMismatch("correlation: series length mismatch");
    if (xs.size() < min_n) throw DegenerateSeries("correlation: series too short");
}

double pearson_coefficient(const Vec& xs, const Vec& ys) {
    const double mx = mean_of(xs), my = mean_of(ys);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw DegenerateSeries("correlation: constant series has no defined coefficient");
    return sxy / std::sqrt(sxx * syy);
}

double t_approx_p(double r, std::size_t n) {
    const double df = static_cast<double>(n) - 2.0;
    if (std::fabs(r) >= 1.0) return 0.0;
    const double t = r * std::sqrt(df / (1.0 - r * r));
    return student_t_tail(t, df);
}

}  // namespace

double regularized_incomplete_beta(double x, double a, double b) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log(1.0 - x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_tail(double t, double df) {
    if (df < 1.0) throw DegenerateSeries("student_t_tail: df must be >= 1");
    const double x = df / (df + t * t);
    return regularized_incomplete_beta(x, 0.5 * df, 0.5);
}

Vec mid_ranks(const Vec& xs) {
    const std::size_t n = xs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return xs[i] < xs[j]; });
    Vec ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
        const double r = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

CorrelationResult pearson_r(const Vec& xs, const Vec& ys) {
    require_series(xs, ys, 3);
    CorrelationResult res;
    res.coefficient = pearson_coefficient(xs, ys);
    res.p_value = t_approx_p(res.coefficient, xs.size());
    return res;
}

CorrelationResult spearman_rho(const Vec& xs, const Vec& ys) {
    require_series(xs, ys, 3);
    CorrelationResult res;
    res.coefficient = pearson_coefficient(mid_ranks(xs), mid_ranks(ys));
    res.p_value = t_approx_p(res.coefficient, xs.size());
    return res;
}

CorrelationResult kendall_tau(const Vec& xs, const Vec& ys) {
    require_series(xs, ys, 3);
    const std::size_t n = xs.size();
    long long concordant = 0, discordant = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = xs[i] - xs[j];
            const double dy = ys[i] - ys[j];
            const double prod = dx * dy;
            if (prod > 0.0) ++concordant;
            else if (prod < 0.0) ++discordant;
        }

    auto tie_sums = [](const Vec& v) {
        Vec sorted(v);
        std::sort(sorted.begin(), sorted.end());
        double sum_t1 = 0.0;   // sum t(t-1)/2
        double sum_v = 0.0;    // sum t(t-1)(2t+5)
        double sum_t2 = 0.0;   // sum t(t-1)(t-2)
        std::size_t i = 0;
        while (i < sorted.size()) {
            std::size_t j = i;
            while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
            const double t = static_cast<double>(j - i + 1);
            sum_t1 += t * (t - 1.0) / 2.0;
            sum_v += t * (t - 1.0) * (2.0 * t + 5.0);
            sum_t2 += t * (t - 1.0) * (t - 2.0);
            i = j + 1;
        }
        return std::array<double, 3>{sum_t1, sum_v, sum_t2};
    };
    const auto [xt1, xv, xt2] = tie_sums(xs);
    const auto [yt1, yv, yt2] = tie_sums(ys);

    const double n0 = static_cast<double>(n) * (n - 1) / 2.0;
    const double denom = std::sqrt((n0 - xt1) * (n0 - yt1));
    if (denom == 0.0) throw DegenerateSeries("kendall_tau: constant series");

    CorrelationResult res;
    const double s = static_cast<double>(concordant - discordant);
    res.coefficient = s / denom;

    const double nn = static_cast<double>(n);
    const double v0 = nn * (nn - 1.0) * (2.0 * nn + 5.0);
    double var = (v0 - xv - yv) / 18.0;
    var += 2.0 * xt1 * yt1 / (nn * (nn - 1.0));
    if (n > 2) var += xt2 * yt2 / (9.0 * nn * (nn - 1.0) * (nn - 2.0));
    if (var <= 0.0) throw DegenerateSeries("kendall_tau: zero variance");
    const double z = s / std::sqrt(var);
    res.p_value = std::erfc(std::fabs(z) / std::sqrt(2.0));
    return res;
}

CorrelationReport correlation_report(const Vec& xs, const Vec& ys) {
    CorrelationReport rep;
    rep.pearson = pearson_r(xs, ys);
    rep.spearman = spearman_rho(xs, ys);
    rep.kendall = kendall_tau(xs, ys);
    return rep;
}

namespace {

template <typename StatFn>
double permutation_p(const Vec& xs, const Vec& ys, StatFn stat) {
    if (xs.size() > 10) throw ConfigError("permutation p-value limited to n <= 10");
    const double observed = std::fabs(stat(xs, ys));
    Vec perm(ys);
    std::sort(perm.begin(), perm.end());
    long long total = 0, at_least = 0;
    do {
        ++total;
        if (std::fabs(stat(xs, perm)) >= observed - 1e-12) ++at_least;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(at_least) / static_cast<double>(total);
}

}  // namespace

double permutation_p_value_pearson(const Vec& xs, const Vec& ys) {
    require_series(xs, ys, 3);
    return permutation_p(xs, ys, [](const Vec& a, const Vec& b) { return pearson_coefficient(a, b); });
}

double permutation_p_value_kendall(const Vec& xs, const Vec& ys) {
    require_series(xs, ys, 3);
    return permutation_p(xs, ys, [](const Vec& a, const Vec& b) {
        long long s = 0;
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = i + 1; j < a.size(); ++j) {
                const double prod = (a[i] - a[j]) * (b[i] - b[j]);
                if (prod > 0.0) ++s;
                else if (prod < 0.0) --s;
            }
        return static_cast<double>(s);
    });
}

TTestResult paired_t_test(const Vec& diffs) {
    if (diffs.size() < 2) throw DegenerateSeries("paired_t_test: need at least 2 observations");
    const std::size_t n = diffs.size();
    const double m = mean_of(diffs);
    double ss = 0.0;
    for (double d : diffs) ss += (d - m) * (d - m);
    if (ss == 0.0 && m != 0.0) throw DegenerateSeries("paired_t_test: zero variance");
    TTestResult res;
    res.mean = m;
    if (ss == 0.0) {
        res.t_statistic = 0.0;
        res.p_value = 1.0;
        return res;
    }
    const double sd = std::sqrt(ss / (static_cast<double>(n) - 1.0));
    res.t_statistic = m / (sd / std::sqrt(static_cast<double>(n)));
    res.p_value = student_t_tail(res.t_statistic, static_cast<double>(n) - 1.0);
    return res;
}

}  // namespace atlab
