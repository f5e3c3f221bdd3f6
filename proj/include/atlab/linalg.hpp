#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "atlab/errors.hpp"
#include "atlab/rng.hpp"
#include "atlab/vec.hpp"

namespace atlab {

// Dense row-major matrix, small dimensions only.
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    Matrix transposed() const;
    Vec apply(const Vec& x) const;          // this * x
    Matrix multiply(const Matrix& other) const;
    double frobenius_norm() const;

    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix operator*(double c) const;

private:
    int rows_, cols_;
    std::vector<double> data_;
};

// Symmetric positive (semi-)definite matrix. Construction symmetrizes the
// input, so entries(i,j) == entries(j,i) holds exactly.
class SpdMatrix {
public:
    SpdMatrix() : dim_(0) {}
    explicit SpdMatrix(const Matrix& m);
    SpdMatrix(int dim, const std::vector<double>& row_major);

    static SpdMatrix identity(int n) { return SpdMatrix(Matrix::identity(n)); }
    static SpdMatrix diagonal(const Vec& diag);
    static SpdMatrix zero(int n) { return SpdMatrix(Matrix(n, n)); }

    int dim() const { return dim_; }
    double operator()(int i, int j) const { return m_(i, j); }
    const Matrix& as_matrix() const { return m_; }

    Vec apply(const Vec& x) const { return m_.apply(x); }
    double frobenius_norm() const { return m_.frobenius_norm(); }
    double trace() const;

private:
    int dim_;
    Matrix m_;
};

// L lower-triangular with L L^T == m. Throws NotPositiveDefinite (with the
// failing pivot index) when a pivot is not positive beyond tolerance.
Matrix cholesky(const SpdMatrix& m);

// Semidefinite variant: zero pivots (within tolerance) produce a zero column
// instead of failing, so exactly-singular covariances factor cleanly.
Matrix psd_cholesky(const SpdMatrix& m);

struct EigenDecomposition {
    Vec eigenvalues;     // descending
    Matrix eigenvectors; // orthonormal columns, m = V diag(w) V^T
};

// Cyclic Jacobi sweeps; adequate and robust for dim up to a few hundred.
EigenDecomposition sym_eig(const SpdMatrix& m);

// Solves a_hat * X + X * a_hat = c for symmetric X, with a_hat strictly PD.
// Eigendecomposes a_hat, divides entrywise by (lambda_i + lambda_j) in the
// eigenbasis, and transforms back.
SpdMatrix solve_lyapunov(const SpdMatrix& a_hat, const SpdMatrix& c);

// Gaussian with cached lower-triangular factor of the covariance.
class GaussianSpec {
public:
    GaussianSpec(Vec mean, SpdMatrix covariance);

    const Vec& mean() const { return mean_; }
    const SpdMatrix& covariance() const { return covariance_; }
    const Matrix& factor() const { return factor_; }
    int dim() const { return static_cast<int>(mean_.size()); }

    Vec sample(RngStream& rng) const;

private:
    Vec mean_;
    SpdMatrix covariance_;
    Matrix factor_;
};

std::vector<Vec> sample_gaussian(const GaussianSpec& spec, int n, RngStream& rng);

// Empirical mean / covariance accumulator shared by the samplers and the
// trajectory statistics.
class MomentAccumulator {
public:
    explicit MomentAccumulator(int dim);
    void add(const Vec& x);
    void merge(const MomentAccumulator& other);
    long count() const { return n_; }
    Vec mean() const;
    SpdMatrix covariance() const;  // population covariance (divides by n)

private:
    int dim_;
    long n_;
    Vec sum_;
    Matrix sum_outer_;
};

}  // namespace atlab
