#pragma once

#include <utility>
#include <vector>

#include "atlab/vec.hpp"

namespace atlab {

struct CorrelationResult {
    double coefficient = 0.0;
    double p_value = 1.0;
};

struct CorrelationReport {
    CorrelationResult pearson;
    CorrelationResult spearman;
    CorrelationResult kendall;
};

// Two-sided tail of Student's t with df degrees of freedom, via the
// regularized incomplete beta function: p = I_{df/(df+t^2)}(df/2, 1/2).
double student_t_tail(double t, double df);

double regularized_incomplete_beta(double x, double a, double b);

// Pearson on values; p from t = r sqrt((n-2)/(1-r^2)) against t(n-2).
CorrelationResult pearson_r(const Vec& xs, const Vec& ys);
// Pearson applied to mid-ranks; same p-value recipe.
CorrelationResult spearman_rho(const Vec& xs, const Vec& ys);
// Kendall tau-b with tie correction; p via normal approximation with
// tie-adjusted variance.
CorrelationResult kendall_tau(const Vec& xs, const Vec& ys);

CorrelationReport correlation_report(const Vec& xs, const Vec& ys);

// Exact permutation p-value (two-sided, |stat| >= |observed|) for n <= 10.
double permutation_p_value_pearson(const Vec& xs, const Vec& ys);
double permutation_p_value_kendall(const Vec& xs, const Vec& ys);

struct TTestResult {
    double mean = 0.0;
    double t_statistic = 0.0;
    double p_value = 1.0;
};

// One-sample two-sided t-test of mean(diffs) != 0 against t(n-1).
TTestResult paired_t_test(const Vec& diffs);

Vec mid_ranks(const Vec& xs);

}  // namespace atlab
