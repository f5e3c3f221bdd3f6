#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "atlab/errors.hpp"

namespace atlab {

using Vec = std::vector<double>;

inline void check_same_dim(const Vec& a, const Vec& b, const char* where) {
    if (a.size() != b.size()) throw DimensionMismatch(where);
}

inline double dot(const Vec& a, const Vec& b) {
    check_same_dim(a, b, "dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(const Vec& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::fabs(v));
    return m;
}

inline double norm1(const Vec& a) {
    double s = 0.0;
    for (double v : a) s += std::fabs(v);
    return s;
}

// y += c * x
inline void axpy(double c, const Vec& x, Vec& y) {
    check_same_dim(x, y, "axpy: length mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += c * x[i];
}

inline Vec scaled(const Vec& x, double c) {
    Vec r(x);
    for (double& v : r) v *= c;
    return r;
}

inline Vec vsub(const Vec& a, const Vec& b) {
    check_same_dim(a, b, "vsub: length mismatch");
    Vec r(a);
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    return r;
}

inline Vec vadd(const Vec& a, const Vec& b) {
    check_same_dim(a, b, "vadd: length mismatch");
    Vec r(a);
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

}  // namespace atlab
