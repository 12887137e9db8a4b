#pragma once

#include "phgcl/matrix.hpp"

#include <vector>

namespace phgcl {

// lr(step) = floor + 0.5 * (base - floor) * (1 + cos(pi * step / period)).
double cosine_lr(long step, long period, double base, double floor);

struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Adam with bias correction over a fixed roster of parameters. Moment
// buffers are allocated on construction and stay aligned with the
// parameter order given to step().
class Adam {
  public:
    explicit Adam(const std::vector<Matrix*>& params, AdamConfig cfg = AdamConfig());

    // Applies one update with learning rate lr. grads must be aligned with
    // the construction-time parameter roster.
    void step(const std::vector<Matrix*>& params, const std::vector<const Matrix*>& grads,
              double lr);

    long steps_taken() const { return step_; }

    // Exposed for checkpointing.
    std::vector<Matrix>& first_moments() { return m_; }
    std::vector<Matrix>& second_moments() { return v_; }
    void set_steps_taken(long s) { step_ = s; }

  private:
    AdamConfig cfg_;
    long step_ = 0;
    std::vector<Matrix> m_;
    std::vector<Matrix> v_;
};

}  // namespace phgcl
