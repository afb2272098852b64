#ifndef SGPHS_NN_ADAM_H_
#define SGPHS_NN_ADAM_H_

#include <sgphs/nn/param.h>

#include <cstdint>
#include <span>
#include <vector>

namespace sgphs::nn {

struct AdamConfig {
    double learning_rate = 3e-4;
    double l2 = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

// Bias-corrected Adam. L2 regularization is added to the gradient
// (g + l2 * w) before the moment updates, not decoupled.
class Adam {
public:
    Adam() = default;
    explicit Adam(AdamConfig config) : config_(config) {}

    // Updates every parameter in place. Throws TrainingError naming the
    // first parameter whose gradient is not finite; nothing is modified then.
    void step(std::span<const ParamRef> params);

    [[nodiscard]] auto config() const noexcept -> const AdamConfig & {
        return config_;
    }
    void set_config(const AdamConfig &config) noexcept {
        config_ = config;
    }
    [[nodiscard]] auto step_count() const noexcept -> std::int64_t {
        return step_;
    }
    void set_step_count(std::int64_t step) noexcept {
        step_ = step;
    }
    // Moment buffers, index-aligned with the parameter list of the first step.
    [[nodiscard]] auto first_moments() noexcept -> std::vector<std::vector<double>> & {
        return m_;
    }
    [[nodiscard]] auto second_moments() noexcept -> std::vector<std::vector<double>> & {
        return v_;
    }
    // Allocates zero moments for the given parameters if not done yet.
    void ensure_state(std::span<const ParamRef> params);

private:
    AdamConfig config_{};
    std::int64_t step_ = 0;
    std::vector<std::vector<double>> m_;
    std::vector<std::vector<double>> v_;
};

}  // namespace sgphs::nn

#endif  // SGPHS_NN_ADAM_H_
