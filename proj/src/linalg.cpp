#include "atlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace atlab {

Matrix Matrix::transposed() const {
    Matrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

Vec Matrix::apply(const Vec& x) const {
    if (static_cast<int>(x.size()) != cols_) throw DimensionMismatch("Matrix::apply: length mismatch");
    Vec y(rows_, 0.0);
    for (int i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

Matrix Matrix::multiply(const Matrix& other) const {
    if (cols_ != other.rows_) throw DimensionMismatch("Matrix::multiply: shape mismatch");
    Matrix r(rows_, other.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const double a = (*this)(i, k);
            if (a == 0.0) continue;
            for (int j = 0; j < other.cols_; ++j) r(i, j) += a * other(k, j);
        }
    return r;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
}

Matrix Matrix::operator+(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("Matrix::+: shape mismatch");
    Matrix r(*this);
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
    return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("Matrix::-: shape mismatch");
    Matrix r(*this);
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
    return r;
}

Matrix Matrix::operator*(double c) const {
    Matrix r(*this);
    for (double& v : r.data_) v *= c;
    return r;
}

SpdMatrix::SpdMatrix(const Matrix& m) : dim_(m.rows()), m_(m.rows(), m.cols()) {
    if (m.rows() != m.cols()) throw DimensionMismatch("SpdMatrix: matrix not square");
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) m_(i, j) = 0.5 * (m(i, j) + m(j, i));
}

SpdMatrix::SpdMatrix(int dim, const std::vector<double>& row_major) : dim_(dim), m_(dim, dim) {
    if (static_cast<std::size_t>(dim) * dim != row_major.size())
        throw DimensionMismatch("SpdMatrix: entry count does not match dim");
    Matrix m(dim, dim);
    m.data() = row_major;
    *this = SpdMatrix(m);
}

SpdMatrix SpdMatrix::diagonal(const Vec& diag) {
    Matrix m(static_cast<int>(diag.size()), static_cast<int>(diag.size()));
    for (std::size_t i = 0; i < diag.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = diag[i];
    return SpdMatrix(m);
}

double SpdMatrix::trace() const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += m_(i, i);
    return s;
}

namespace {

Matrix cholesky_impl(const SpdMatrix& m, bool allow_semidefinite) {
    const int n = m.dim();
    double max_diag = 0.0;
    for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, std::fabs(m(i, i)));
    const double tol = 1e-12 * std::max(max_diag, 1.0);

    Matrix l(n, n);
    for (int j = 0; j < n; ++j) {
        double d = m(j, j);
        for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (d <= tol) {
            if (allow_semidefinite && d > -tol) {
                // singular direction: zero column
                continue;
            }
            throw NotPositiveDefinite(j, "cholesky: nonpositive pivot at index " + std::to_string(j));
        }
        const double lj = std::sqrt(d);
        l(j, j) = lj;
        for (int i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / lj;
        }
    }
    return l;
}

}  // namespace

Matrix cholesky(const SpdMatrix& m) { return cholesky_impl(m, false); }
Matrix psd_cholesky(const SpdMatrix& m) { return cholesky_impl(m, true); }

EigenDecomposition sym_eig(const SpdMatrix& m) {
    const int n = m.dim();
    Matrix a = m.as_matrix();
    Matrix v = Matrix::identity(n);

    const int max_sweeps = 100 * std::max(n, 1);
    bool converged = (n <= 1);
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (std::sqrt(off) < 1e-14 * std::max(1.0, a.frobenius_norm())) {
            converged = true;
            break;
        }
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p), aqq = a(q, q);
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    if (!converged)
        throw NoConvergence("sym_eig: Jacobi iteration exceeded " + std::to_string(max_sweeps) + " sweeps");

    EigenDecomposition ed;
    ed.eigenvalues.resize(n);
    for (int i = 0; i < n; ++i) ed.eigenvalues[i] = a(i, i);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return ed.eigenvalues[i] > ed.eigenvalues[j]; });

    Vec w(n);
    Matrix vs(n, n);
    for (int j = 0; j < n; ++j) {
        w[j] = ed.eigenvalues[order[j]];
        for (int i = 0; i < n; ++i) vs(i, j) = v(i, order[j]);
    }
    ed.eigenvalues = std::move(w);
    ed.eigenvectors = std::move(vs);
    return ed;
}

SpdMatrix solve_lyapunov(const SpdMatrix& a_hat, const SpdMatrix& c) {
    if (a_hat.dim() != c.dim()) throw DimensionMismatch("solve_lyapunov: dimension mismatch");
    const EigenDecomposition ed = sym_eig(a_hat);
    const int n = a_hat.dim();
    const double lam_max = ed.eigenvalues.empty() ? 0.0 : ed.eigenvalues.front();
    for (int i = 0; i < n; ++i) {
        if (ed.eigenvalues[i] <= 1e-12 * std::max(lam_max, 1.0))
            throw NotPositiveDefinite(i, "solve_lyapunov: a_hat is not strictly positive definite");
    }
    const Matrix& v = ed.eigenvectors;
    const Matrix vt = v.transposed();
    Matrix cprime = vt.multiply(c.as_matrix()).multiply(v);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cprime(i, j) /= (ed.eigenvalues[i] + ed.eigenvalues[j]);
    return SpdMatrix(v.multiply(cprime).multiply(vt));
}

GaussianSpec::GaussianSpec(Vec mean, SpdMatrix covariance)
    : mean_(std::move(mean)), covariance_(std::move(covariance)) {
    if (static_cast<int>(mean_.size()) != covariance_.dim())
        throw DimensionMismatch("GaussianSpec: mean length does not match covariance dim");
    factor_ = psd_cholesky(covariance_);
}

Vec GaussianSpec::sample(RngStream& rng) const {
    const int n = dim();
    Vec z(n);
    for (int i = 0; i < n; ++i) z[i] = rng.normal();
    Vec x = mean_;
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j <= i; ++j) s += factor_(i, j) * z[j];
        x[i] += s;
    }
    return x;
}

std::vector<Vec> sample_gaussian(const GaussianSpec& spec, int n, RngStream& rng) {
    if (n < 1) throw DimensionMismatch("sample_gaussian: n must be >= 1");
    std::vector<Vec> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back(spec.sample(rng));
    return out;
}

MomentAccumulator::MomentAccumulator(int dim)
    : dim_(dim), n_(0), sum_(dim, 0.0), sum_outer_(dim, dim) {}

void MomentAccumulator::add(const Vec& x) {
    if (static_cast<int>(x.size()) != dim_) throw DimensionMismatch("MomentAccumulator::add: length mismatch");
    ++n_;
    for (int i = 0; i < dim_; ++i) {
        sum_[i] += x[i];
        for (int j = 0; j <= i; ++j) sum_outer_(i, j) += x[i] * x[j];
    }
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
    if (other.dim_ != dim_) throw DimensionMismatch("MomentAccumulator::merge: dimension mismatch");
    n_ += other.n_;
    for (int i = 0; i < dim_; ++i) {
        sum_[i] += other.sum_[i];
        for (int j = 0; j <= i; ++j) sum_outer_(i, j) += other.sum_outer_(i, j);
    }
}

Vec MomentAccumulator::mean() const {
    Vec m(sum_);
    if (n_ > 0)
        for (double& v : m) v /= static_cast<double>(n_);
    return m;
}

SpdMatrix MomentAccumulator::covariance() const {
    Matrix c(dim_, dim_);
    if (n_ > 0) {
        const Vec m = mean();
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j <= i; ++j) {
                const double v = sum_outer_(i, j) / static_cast<double>(n_) - m[i] * m[j];
                c(i, j) = v;
                c(j, i) = v;
            }
    }
    return SpdMatrix(c);
}

}  // namespace atlab
