#ifndef SGPHS_NN_MLP_H_
#define SGPHS_NN_MLP_H_

#include <sgphs/nn/param.h>

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace sgphs::nn {

struct Dense {
    Eigen::MatrixXd weight;  // (out, in)
    Eigen::VectorXd bias;
    Eigen::MatrixXd grad_weight;
    Eigen::VectorXd grad_bias;
};

// Activations recorded by a forward pass, consumed by backward.
struct MlpCache {
    std::vector<Eigen::VectorXd> inputs;
    std::vector<Eigen::VectorXd> pre_activations;

    [[nodiscard]] auto empty() const noexcept -> bool {
        return inputs.empty();
    }
    void clear() {
        inputs.clear();
        pre_activations.clear();
    }
};

// Feedforward stack: Dense -> ReLU -> ... -> Dense (no output activation).
class Mlp {
public:
    Mlp() = default;
    // sizes = {input, hidden..., output}
    Mlp(std::string name, const std::vector<int> &sizes, std::mt19937_64 &rng);

    [[nodiscard]] auto forward(const Eigen::VectorXd &input) const -> Eigen::VectorXd;
    [[nodiscard]] auto forward(const Eigen::VectorXd &input, MlpCache &cache) const -> Eigen::VectorXd;

    // Accumulates parameter gradients, returns the gradient w.r.t. the input.
    auto backward(const MlpCache &cache, const Eigen::VectorXd &grad_output) -> Eigen::VectorXd;

    void zero_grad();
    [[nodiscard]] auto parameters() -> std::vector<ParamRef>;

    [[nodiscard]] auto name() const noexcept -> const std::string & {
        return name_;
    }
    [[nodiscard]] auto input_size() const noexcept -> int;
    [[nodiscard]] auto output_size() const noexcept -> int;
    [[nodiscard]] auto layers() noexcept -> std::vector<Dense> & {
        return layers_;
    }
    [[nodiscard]] auto layers() const noexcept -> const std::vector<Dense> & {
        return layers_;
    }

private:
    std::string name_;
    std::vector<Dense> layers_;
};

// {input, width x depth..., output}
[[nodiscard]] auto layer_sizes(int input, int hidden_width, int hidden_layers, int output) -> std::vector<int>;

}  // namespace sgphs::nn

#endif  // SGPHS_NN_MLP_H_
