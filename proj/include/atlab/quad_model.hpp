#pragma once

#include <string>
#include <vector>

#include "atlab/linalg.hpp"
#include "atlab/rng.hpp"
#include "atlab/vec.hpp"

namespace atlab {

struct MiniBatch {
    std::vector<Vec> samples;
    int batch_size() const { return static_cast<int>(samples.size()); }
};

// Globally quadratic risk with Gaussian data x ~ N(0, H):
//   l(theta, x) = 1/2 (theta - x)^T A (theta - x) - tr(A)
//   risk(theta) = 1/2 theta^T A theta        (minimizer pinned at 0)
// The -tr(A) constant never affects gradients. E_x[l] differs from the risk
// by the theta-independent constant 1/2 tr(A H) - tr(A).
class QuadraticRiskModel {
public:
    QuadraticRiskModel(SpdMatrix hessian, SpdMatrix data_cov);

    int dim() const { return hessian_.dim(); }
    const SpdMatrix& hessian() const { return hessian_; }
    const SpdMatrix& data_cov() const { return data_cov_; }
    const Matrix& data_factor() const { return data_factor_; }  // B with H = B B^T

    double loss(const Vec& theta, const Vec& x) const;
    Vec grad_theta(const Vec& theta, const Vec& x) const;  // A (theta - x)
    Vec grad_x(const Vec& theta, const Vec& x) const;      // A (x - theta)
    double expected_risk(const Vec& theta) const;          // 1/2 theta^T A theta

    MiniBatch draw_batch(int b, RngStream& rng) const;
    Vec minibatch_grad(const Vec& theta, const MiniBatch& batch) const;

    std::string to_json() const;
    static QuadraticRiskModel from_json(const std::string& text);

private:
    SpdMatrix hessian_;
    SpdMatrix data_cov_;
    Matrix data_factor_;
};

}  // namespace atlab
