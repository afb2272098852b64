#include <sgphs/nn/mlp.h>

#include <sgphs/errors.h>

#include <fmt/format.h>

#include <cmath>

namespace sgphs::nn {

Mlp::Mlp(std::string name, const std::vector<int> &sizes, std::mt19937_64 &rng) : name_(std::move(name)) {
    if (sizes.size() < 2) {
        throw ConfigurationError("an MLP needs at least an input and an output size");
    }
    for (const int s : sizes) {
        if (s <= 0) {
            throw ConfigurationError(fmt::format("{}: layer sizes must be positive", name_));
        }
    }
    for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
        const int fan_in = sizes[i];
        const int fan_out = sizes[i + 1];
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        std::uniform_real_distribution<double> init(-bound, bound);
        Dense layer;
        layer.weight.resize(fan_out, fan_in);
        layer.bias.resize(fan_out);
        // fill order is part of the determinism contract: weights row-major, then bias
        for (int r = 0; r < fan_out; ++r) {
            for (int c = 0; c < fan_in; ++c) {
                layer.weight(r, c) = init(rng);
            }
        }
        for (int r = 0; r < fan_out; ++r) {
            layer.bias(r) = init(rng);
        }
        layer.grad_weight = Eigen::MatrixXd::Zero(fan_out, fan_in);
        layer.grad_bias = Eigen::VectorXd::Zero(fan_out);
        layers_.push_back(std::move(layer));
    }
}

auto Mlp::input_size() const noexcept -> int {
    return layers_.empty() ? 0 : static_cast<int>(layers_.front().weight.cols());
}

auto Mlp::output_size() const noexcept -> int {
    return layers_.empty() ? 0 : static_cast<int>(layers_.back().weight.rows());
}

auto Mlp::forward(const Eigen::VectorXd &input) const -> Eigen::VectorXd {
    if (input.size() != input_size()) {
        throw ConfigurationError(
            fmt::format("{}: expected input of size {}, got {}", name_, input_size(), input.size()));
    }
    Eigen::VectorXd x = input;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        Eigen::VectorXd z = layers_[i].weight * x + layers_[i].bias;
        x = (i + 1 < layers_.size()) ? Eigen::VectorXd(z.cwiseMax(0.0)) : z;
    }
    return x;
}

auto Mlp::forward(const Eigen::VectorXd &input, MlpCache &cache) const -> Eigen::VectorXd {
    if (input.size() != input_size()) {
        throw ConfigurationError(
            fmt::format("{}: expected input of size {}, got {}", name_, input_size(), input.size()));
    }
    cache.clear();
    Eigen::VectorXd x = input;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        cache.inputs.push_back(x);
        Eigen::VectorXd z = layers_[i].weight * x + layers_[i].bias;
        cache.pre_activations.push_back(z);
        x = (i + 1 < layers_.size()) ? Eigen::VectorXd(z.cwiseMax(0.0)) : z;
    }
    return x;
}

auto Mlp::backward(const MlpCache &cache, const Eigen::VectorXd &grad_output) -> Eigen::VectorXd {
    if (cache.empty() || cache.inputs.size() != layers_.size()) {
        throw UsageError(fmt::format("{}: backward called without a forward cache", name_));
    }
    if (grad_output.size() != output_size()) {
        throw UsageError(fmt::format("{}: output gradient has size {}, expected {}", name_, grad_output.size(),
                                     output_size()));
    }
    Eigen::VectorXd grad = grad_output;
    for (std::size_t i = layers_.size(); i-- > 0;) {
        if (i + 1 < layers_.size()) {
            const auto &z = cache.pre_activations[i];
            for (Eigen::Index j = 0; j < grad.size(); ++j) {
                if (z(j) <= 0.0) {
                    grad(j) = 0.0;
                }
            }
        }
        auto &layer = layers_[i];
        layer.grad_weight.noalias() += grad * cache.inputs[i].transpose();
        layer.grad_bias += grad;
        grad = layer.weight.transpose() * grad;
    }
    return grad;
}

void Mlp::zero_grad() {
    for (auto &layer : layers_) {
        layer.grad_weight.setZero();
        layer.grad_bias.setZero();
    }
}

auto Mlp::parameters() -> std::vector<ParamRef> {
    std::vector<ParamRef> params;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        auto &layer = layers_[i];
        params.push_back({fmt::format("{}.{}.weight", name_, i),
                          {static_cast<int>(layer.weight.rows()), static_cast<int>(layer.weight.cols())},
                          {layer.weight.data(), static_cast<std::size_t>(layer.weight.size())},
                          {layer.grad_weight.data(), static_cast<std::size_t>(layer.grad_weight.size())}});
        params.push_back({fmt::format("{}.{}.bias", name_, i),
                          {static_cast<int>(layer.bias.size())},
                          {layer.bias.data(), static_cast<std::size_t>(layer.bias.size())},
                          {layer.grad_bias.data(), static_cast<std::size_t>(layer.grad_bias.size())}});
    }
    return params;
}

auto layer_sizes(int input, int hidden_width, int hidden_layers, int output) -> std::vector<int> {
    std::vector<int> sizes{input};
    for (int i = 0; i < hidden_layers; ++i) {
        sizes.push_back(hidden_width);
    }
    sizes.push_back(output);
    return sizes;
}

}  // namespace sgphs::nn
