#include <sgphs/models.h>

#include <sgphs/errors.h>
#include <sgphs/nn/losses.h>
#include <sgphs/policy_mixing.h>

#include <cmath>
#include <cstring>

namespace sgphs {

auto to_string(ModelKind kind) -> std::string {
    return kind == ModelKind::subgoal_bundle ? "subgoal_bundle" : "flat_policy";
}

auto parse_model_kind(const std::string &name) -> ModelKind {
    if (name == "subgoal_bundle") {
        return ModelKind::subgoal_bundle;
    }
    if (name == "flat_policy") {
        return ModelKind::flat_policy;
    }
    throw ConfigurationError("unknown model kind: " + name);
}

PolicyModel::PolicyModel(ModelConfig config, std::vector<int> observation_shape, int action_count)
    : config_(config), observation_shape_(std::move(observation_shape)), action_count_(action_count) {
    if (observation_shape_.size() != 3 || action_count_ <= 0) {
        throw ConfigurationError("models need a (C, H, W) observation shape and at least one action");
    }
    if (config_.hidden_width <= 0 || config_.hidden_layers < 0) {
        throw ConfigurationError("hidden width must be positive and layer count non-negative");
    }
}

SubgoalPolicyBundle::SubgoalPolicyBundle(const ModelConfig &config, std::vector<int> observation_shape,
                                         int action_count, std::uint64_t seed)
    : PolicyModel(config, std::move(observation_shape), action_count),
      low_optimizer_(config.optimizer),
      high_optimizer_(config.optimizer),
      heuristic_optimizer_(config.optimizer),
      vqvae_optimizer_(config.optimizer) {
    std::mt19937_64 rng(seed);
    const auto obs = static_cast<int>(shape_numel(observation_shape_));
    const int width = config_.hidden_width;
    const int depth = config_.hidden_layers;
    low_policy_ = nn::Mlp("low_policy", nn::layer_sizes(2 * obs, width, depth, action_count_), rng);
    high_policy_ = nn::Mlp("high_policy", nn::layer_sizes(obs, width, depth, config_.vqvae.codebook_size), rng);
    heuristic_ = nn::Mlp("heuristic", nn::layer_sizes(obs, width, depth, 1), rng);
    vqvae_ = Vqvae(config_.vqvae, observation_shape_, rng);
}

auto SubgoalPolicyBundle::clone() const -> std::unique_ptr<PolicyModel> {
    return std::make_unique<SubgoalPolicyBundle>(*this);
}

auto SubgoalPolicyBundle::modules() -> std::vector<ModuleRef> {
    return {
        {"low_policy", low_policy_.parameters(), &low_optimizer_},
        {"high_policy", high_policy_.parameters(), &high_optimizer_},
        {"heuristic", heuristic_.parameters(), &heuristic_optimizer_},
        {"vqvae", vqvae_.parameters(), &vqvae_optimizer_},
    };
}

auto SubgoalPolicyBundle::low_policy_logits(const Tensor &state, const Tensor &subgoal) const -> Eigen::VectorXd {
    return low_policy_.forward(concat_channels(state, subgoal).as_vector());
}

auto SubgoalPolicyBundle::high_policy_logits(const Tensor &state) const -> Eigen::VectorXd {
    return high_policy_.forward(state.as_vector());
}

auto SubgoalPolicyBundle::heuristic_value(const Tensor &state) const -> double {
    return heuristic_.forward(state.as_vector())(0);
}

auto SubgoalPolicyBundle::log_policy(const Problem &problem, const State &state,
                                     std::span<const bool> applicable) const -> std::vector<double> {
    const auto mixed = subgoal_guided_policy(problem, state, *this, applicable);
    return masked_log_normalize(mixed.action_probs, applicable);
}

auto SubgoalPolicyBundle::heuristic(const Problem &problem, const State &state) const -> double {
    return heuristic_value(problem.encode(state));
}

FlatPolicyModel::FlatPolicyModel(const ModelConfig &config, std::vector<int> observation_shape, int action_count,
                                 std::uint64_t seed)
    : PolicyModel(config, std::move(observation_shape), action_count),
      policy_optimizer_(config.optimizer),
      heuristic_optimizer_(config.optimizer) {
    std::mt19937_64 rng(seed);
    const auto obs = static_cast<int>(shape_numel(observation_shape_));
    policy_ = nn::Mlp("policy", nn::layer_sizes(obs, config_.hidden_width, config_.hidden_layers, action_count_), rng);
    heuristic_ = nn::Mlp("heuristic", nn::layer_sizes(obs, config_.hidden_width, config_.hidden_layers, 1), rng);
}

auto FlatPolicyModel::clone() const -> std::unique_ptr<PolicyModel> {
    return std::make_unique<FlatPolicyModel>(*this);
}

auto FlatPolicyModel::modules() -> std::vector<ModuleRef> {
    return {
        {"policy", policy_.parameters(), &policy_optimizer_},
        {"heuristic", heuristic_.parameters(), &heuristic_optimizer_},
    };
}

auto FlatPolicyModel::log_policy(const Problem &problem, const State &state, std::span<const bool> applicable) const
    -> std::vector<double> {
    const Eigen::VectorXd logits = policy_.forward(problem.encode(state).as_vector());
    const auto probs = masked_softmax({logits.data(), static_cast<std::size_t>(logits.size())}, applicable);
    return masked_log_normalize(probs, applicable);
}

auto FlatPolicyModel::heuristic(const Problem &problem, const State &state) const -> double {
    return heuristic_.forward(problem.encode(state).as_vector())(0);
}

auto make_model(ModelKind kind, const ModelConfig &config, std::vector<int> observation_shape, int action_count,
                std::uint64_t seed) -> std::unique_ptr<PolicyModel> {
    if (kind == ModelKind::subgoal_bundle) {
        return std::make_unique<SubgoalPolicyBundle>(config, std::move(observation_shape), action_count, seed);
    }
    return std::make_unique<FlatPolicyModel>(config, std::move(observation_shape), action_count, seed);
}

auto hash_parameters(const std::vector<nn::ParamRef> &params) -> std::uint64_t {
    std::uint64_t h = 1469598103934665603ULL;
    for (const auto &p : params) {
        for (const double x : p.value) {
            unsigned char bytes[sizeof(double)];
            std::memcpy(bytes, &x, sizeof(double));
            for (const unsigned char b : bytes) {
                h ^= b;
                h *= 1099511628211ULL;
            }
        }
    }
    return h;
}

auto hash_module(PolicyModel &model, const std::string &module_name) -> std::uint64_t {
    for (const auto &module : model.modules()) {
        if (module.name == module_name) {
            return hash_parameters(module.params);
        }
    }
    throw LookupError("model has no module named " + module_name);
}

auto hash_model(PolicyModel &model) -> std::uint64_t {
    std::vector<nn::ParamRef> all;
    for (auto &module : model.modules()) {
        all.insert(all.end(), module.params.begin(), module.params.end());
    }
    return hash_parameters(all);
}

}  // namespace sgphs
