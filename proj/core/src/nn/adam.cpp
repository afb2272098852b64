#include <sgphs/nn/adam.h>

#include <sgphs/errors.h>

#include <fmt/format.h>

#include <cmath>

namespace sgphs::nn {

void Adam::ensure_state(std::span<const ParamRef> params) {
    if (!m_.empty()) {
        if (m_.size() != params.size()) {
            throw UsageError("optimizer state does not match the parameter list");
        }
        for (std::size_t i = 0; i < params.size(); ++i) {
            if (m_[i].size() != params[i].value.size()) {
                throw UsageError(fmt::format("optimizer state for {} has the wrong size", params[i].name));
            }
        }
        return;
    }
    for (const auto &p : params) {
        m_.emplace_back(p.value.size(), 0.0);
        v_.emplace_back(p.value.size(), 0.0);
    }
}

void Adam::step(std::span<const ParamRef> params) {
    for (const auto &p : params) {
        if (p.grad.size() != p.value.size()) {
            throw UsageError(fmt::format("gradient of {} does not match its parameter", p.name));
        }
        for (const double g : p.grad) {
            if (!std::isfinite(g)) {
                throw TrainingError(fmt::format("non-finite gradient in parameter {}", p.name), p.name);
            }
        }
    }
    ensure_state(params);
    ++step_;
    const double bias1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_));
    const double bias2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const auto &p = params[i];
        auto &m = m_[i];
        auto &v = v_[i];
        for (std::size_t j = 0; j < p.value.size(); ++j) {
            const double g = p.grad[j] + config_.l2 * p.value[j];
            m[j] = config_.beta1 * m[j] + (1.0 - config_.beta1) * g;
            v[j] = config_.beta2 * v[j] + (1.0 - config_.beta2) * g * g;
            const double m_hat = m[j] / bias1;
            const double v_hat = v[j] / bias2;
            p.value[j] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
        }
    }
}

}  // namespace sgphs::nn
