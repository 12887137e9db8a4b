#include "phgcl/optimizer.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace phgcl {

double cosine_lr(long step, long period, double base, double floor) {
    if (period <= 0) throw std::invalid_argument("cosine_lr: period must be positive");
    if (step < 0) throw std::invalid_argument("cosine_lr: step must be non-negative");
    if (step >= period) return floor;
    const double phase = std::numbers::pi * static_cast<double>(step) / static_cast<double>(period);
    return floor + 0.5 * (base - floor) * (1.0 + std::cos(phase));
}

Adam::Adam(const std::vector<Matrix*>& params, AdamConfig cfg) : cfg_(cfg) {
    m_.reserve(params.size());
    v_.reserve(params.size());
    for (const Matrix* p : params) {
        m_.emplace_back(p->rows, p->cols);
        v_.emplace_back(p->rows, p->cols);
    }
}

void Adam::step(const std::vector<Matrix*>& params, const std::vector<const Matrix*>& grads,
                double lr) {
    if (params.size() != m_.size() || grads.size() != m_.size()) {
        throw std::invalid_argument("adam: parameter roster changed size");
    }
    ++step_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_));
    for (std::size_t k = 0; k < params.size(); ++k) {
        Matrix& p = *params[k];
        const Matrix& g = *grads[k];
        Matrix& m = m_[k];
        Matrix& v = v_[k];
        if (g.rows != p.rows || g.cols != p.cols) {
            throw std::invalid_argument("adam: gradient shape does not match its parameter");
        }
        for (std::size_t i = 0; i < p.data.size(); ++i) {
            m.data[i] = cfg_.beta1 * m.data[i] + (1.0 - cfg_.beta1) * g.data[i];
            v.data[i] = cfg_.beta2 * v.data[i] + (1.0 - cfg_.beta2) * g.data[i] * g.data[i];
            const double mhat = m.data[i] / bc1;
            const double vhat = v.data[i] / bc2;
            p.data[i] -= lr * mhat / (std::sqrt(vhat) + cfg_.eps);
        }
    }
}

}  // namespace phgcl
