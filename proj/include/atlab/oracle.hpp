#pragma once

#include <vector>

#include "atlab/quad_model.hpp"
#include "atlab/vec.hpp"

namespace atlab {

struct Sample {
    Vec x;
    int label = -1;  // ignored by analytic losses
};

using SampleBatch = std::vector<Sample>;

// Abstract loss surface: per-sample loss plus gradients w.r.t. parameters
// and inputs. Implementations must be safe for concurrent read-only use.
class GradientOracle {
public:
    virtual ~GradientOracle() = default;
    virtual int param_dim() const = 0;
    virtual int input_dim() const = 0;
    virtual double loss(const Vec& theta, const Vec& x, int label) const = 0;
    virtual Vec grad_theta(const Vec& theta, const Vec& x, int label) const = 0;
    virtual Vec grad_input(const Vec& theta, const Vec& x, int label) const = 0;
};

class QuadraticOracle final : public GradientOracle {
public:
    explicit QuadraticOracle(const QuadraticRiskModel& model) : model_(model) {}
    int param_dim() const override { return model_.dim(); }
    int input_dim() const override { return model_.dim(); }
    double loss(const Vec& theta, const Vec& x, int) const override { return model_.loss(theta, x); }
    Vec grad_theta(const Vec& theta, const Vec& x, int) const override { return model_.grad_theta(theta, x); }
    Vec grad_input(const Vec& theta, const Vec& x, int) const override { return model_.grad_x(theta, x); }

private:
    const QuadraticRiskModel& model_;
};

inline SampleBatch to_samples(const MiniBatch& batch) {
    SampleBatch out;
    out.reserve(batch.samples.size());
    for (const Vec& x : batch.samples) out.push_back({x, -1});
    return out;
}

}  // namespace atlab
