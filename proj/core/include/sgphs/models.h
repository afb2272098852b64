#ifndef SGPHS_MODELS_H_
#define SGPHS_MODELS_H_

#include <sgphs/guidance.h>
#include <sgphs/nn/adam.h>
#include <sgphs/nn/mlp.h>
#include <sgphs/vqvae.h>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace sgphs {

struct ModelConfig {
    int hidden_width = 128;
    int hidden_layers = 2;
    VqvaeConfig vqvae{};
    nn::AdamConfig optimizer{};
};

enum class ModelKind { subgoal_bundle, flat_policy };

[[nodiscard]] auto to_string(ModelKind kind) -> std::string;
[[nodiscard]] auto parse_model_kind(const std::string &name) -> ModelKind;

// A trainable unit with its own optimizer state.
struct ModuleRef {
    std::string name;
    std::vector<nn::ParamRef> params;
    nn::Adam *optimizer;
};

// Guidance backed by trainable networks. Copies are independent snapshots.
class PolicyModel : public Guidance {
public:
    [[nodiscard]] virtual auto kind() const noexcept -> ModelKind = 0;
    [[nodiscard]] virtual auto clone() const -> std::unique_ptr<PolicyModel> = 0;
    [[nodiscard]] virtual auto modules() -> std::vector<ModuleRef> = 0;

    [[nodiscard]] auto config() const noexcept -> const ModelConfig & {
        return config_;
    }
    [[nodiscard]] auto observation_shape() const noexcept -> const std::vector<int> & {
        return observation_shape_;
    }
    [[nodiscard]] auto action_count() const noexcept -> int {
        return action_count_;
    }

protected:
    PolicyModel(ModelConfig config, std::vector<int> observation_shape, int action_count);

    ModelConfig config_;
    std::vector<int> observation_shape_;
    int action_count_ = 0;
};

// Low-level conditional policy, high-level subgoal policy, heuristic and
// VQVAE subgoal generator acting as one guidance unit.
class SubgoalPolicyBundle final : public PolicyModel {
public:
    SubgoalPolicyBundle(const ModelConfig &config, std::vector<int> observation_shape, int action_count,
                        std::uint64_t seed);

    [[nodiscard]] auto kind() const noexcept -> ModelKind override {
        return ModelKind::subgoal_bundle;
    }
    [[nodiscard]] auto clone() const -> std::unique_ptr<PolicyModel> override;
    [[nodiscard]] auto modules() -> std::vector<ModuleRef> override;

    [[nodiscard]] auto log_policy(const Problem &problem, const State &state, std::span<const bool> applicable) const
        -> std::vector<double> override;
    [[nodiscard]] auto heuristic(const Problem &problem, const State &state) const -> double override;

    // Conditional low policy consumes the channel concatenation (state, subgoal).
    [[nodiscard]] auto low_policy_logits(const Tensor &state, const Tensor &subgoal) const -> Eigen::VectorXd;
    [[nodiscard]] auto high_policy_logits(const Tensor &state) const -> Eigen::VectorXd;
    [[nodiscard]] auto heuristic_value(const Tensor &state) const -> double;

    [[nodiscard]] auto low_policy() noexcept -> nn::Mlp & {
        return low_policy_;
    }
    [[nodiscard]] auto high_policy() noexcept -> nn::Mlp & {
        return high_policy_;
    }
    [[nodiscard]] auto heuristic_net() noexcept -> nn::Mlp & {
        return heuristic_;
    }
    [[nodiscard]] auto vqvae() noexcept -> Vqvae & {
        return vqvae_;
    }
    [[nodiscard]] auto vqvae() const noexcept -> const Vqvae & {
        return vqvae_;
    }
    [[nodiscard]] auto low_optimizer() noexcept -> nn::Adam & {
        return low_optimizer_;
    }
    [[nodiscard]] auto high_optimizer() noexcept -> nn::Adam & {
        return high_optimizer_;
    }
    [[nodiscard]] auto heuristic_optimizer() noexcept -> nn::Adam & {
        return heuristic_optimizer_;
    }
    [[nodiscard]] auto vqvae_optimizer() noexcept -> nn::Adam & {
        return vqvae_optimizer_;
    }

private:
    nn::Mlp low_policy_;
    nn::Mlp high_policy_;
    nn::Mlp heuristic_;
    Vqvae vqvae_;
    nn::Adam low_optimizer_;
    nn::Adam high_optimizer_;
    nn::Adam heuristic_optimizer_;
    nn::Adam vqvae_optimizer_;
};

// Single policy plus heuristic, the plain (non-subgoal) formulation.
class FlatPolicyModel final : public PolicyModel {
public:
    FlatPolicyModel(const ModelConfig &config, std::vector<int> observation_shape, int action_count,
                    std::uint64_t seed);

    [[nodiscard]] auto kind() const noexcept -> ModelKind override {
        return ModelKind::flat_policy;
    }
    [[nodiscard]] auto clone() const -> std::unique_ptr<PolicyModel> override;
    [[nodiscard]] auto modules() -> std::vector<ModuleRef> override;

    [[nodiscard]] auto log_policy(const Problem &problem, const State &state, std::span<const bool> applicable) const
        -> std::vector<double> override;
    [[nodiscard]] auto heuristic(const Problem &problem, const State &state) const -> double override;

    [[nodiscard]] auto policy_net() noexcept -> nn::Mlp & {
        return policy_;
    }
    [[nodiscard]] auto heuristic_net() noexcept -> nn::Mlp & {
        return heuristic_;
    }
    [[nodiscard]] auto policy_optimizer() noexcept -> nn::Adam & {
        return policy_optimizer_;
    }
    [[nodiscard]] auto heuristic_optimizer() noexcept -> nn::Adam & {
        return heuristic_optimizer_;
    }

private:
    nn::Mlp policy_;
    nn::Mlp heuristic_;
    nn::Adam policy_optimizer_;
    nn::Adam heuristic_optimizer_;
};

[[nodiscard]] auto make_model(ModelKind kind, const ModelConfig &config, std::vector<int> observation_shape,
                              int action_count, std::uint64_t seed) -> std::unique_ptr<PolicyModel>;

// FNV-1a over the raw bytes of every parameter value.
[[nodiscard]] auto hash_parameters(const std::vector<nn::ParamRef> &params) -> std::uint64_t;
[[nodiscard]] auto hash_module(PolicyModel &model, const std::string &module_name) -> std::uint64_t;
[[nodiscard]] auto hash_model(PolicyModel &model) -> std::uint64_t;

}  // namespace sgphs

#endif  // SGPHS_MODELS_H_
