#include <sgphs/policy_mixing.h>

#include <sgphs/errors.h>
#include <sgphs/models.h>
#include <sgphs/nn/losses.h>
#include <sgphs/vqvae.h>

#include <cmath>
#include <limits>

namespace sgphs {

auto generate_subgoals(const Tensor &state_encoding, const Vqvae &generator) -> SubgoalSet {
    if (state_encoding.shape() != generator.observation_shape()) {
        throw ConfigurationError("state encoding shape does not match the subgoal generator");
    }
    SubgoalSet set;
    const auto k = static_cast<int>(generator.codebook().rows());
    for (int i = 0; i < k; ++i) {
        set.subgoals.push_back(generator.generate(state_encoding, i));
        set.source_codebook_indices.push_back(i);
    }
    return set;
}

auto mix(std::span<const double> high_probs, const std::vector<std::vector<double>> &low_dists) -> MixedPolicy {
    if (high_probs.size() != low_dists.size() || low_dists.empty()) {
        throw UsageError("mix needs one weight per low-level distribution");
    }
    const std::size_t actions = low_dists.front().size();
    std::vector<double> numerators(actions, 0.0);
    for (std::size_t i = 0; i < low_dists.size(); ++i) {
        if (low_dists[i].size() != actions) {
            throw UsageError("low-level distributions disagree on the action count");
        }
        if (!(high_probs[i] >= 0.0) || !std::isfinite(high_probs[i])) {
            throw UsageError("subgoal weights must be finite and non-negative");
        }
        for (std::size_t a = 0; a < actions; ++a) {
            numerators[a] += high_probs[i] * low_dists[i][a];
        }
    }
    double denominator = 0.0;
    for (const double n : numerators) {
        denominator += n;
    }
    if (!(denominator > 0.0)) {
        throw DegeneratePolicyError("every mixture numerator is zero");
    }
    for (auto &n : numerators) {
        n /= denominator;
    }
    return {std::move(numerators)};
}

auto masked_softmax(std::span<const double> logits, std::span<const bool> applicable) -> std::vector<double> {
    double max = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < logits.size(); ++a) {
        if (applicable[a]) {
            max = std::max(max, logits[a]);
        }
    }
    std::vector<double> probs(logits.size(), 0.0);
    double total = 0.0;
    for (std::size_t a = 0; a < logits.size(); ++a) {
        if (applicable[a]) {
            probs[a] = std::exp(logits[a] - max);
            total += probs[a];
        }
    }
    if (total > 0.0) {
        for (auto &p : probs) {
            p /= total;
        }
    }
    return probs;
}

auto subgoal_guided_policy(const Problem &problem, const State &state, const SubgoalPolicyBundle &bundle,
                           std::span<const bool> applicable) -> MixedPolicy {
    const Tensor encoding = problem.encode(state);
    const SubgoalSet subgoals = generate_subgoals(encoding, bundle.vqvae());

    std::vector<std::vector<double>> low_dists;
    low_dists.reserve(subgoals.size());
    for (const auto &subgoal : subgoals.subgoals) {
        const Eigen::VectorXd logits = bundle.low_policy_logits(encoding, subgoal);
        low_dists.push_back(masked_softmax({logits.data(), static_cast<std::size_t>(logits.size())}, applicable));
    }
    const Eigen::VectorXd high = nn::softmax(bundle.high_policy_logits(encoding));
    try {
        return mix({high.data(), static_cast<std::size_t>(high.size())}, low_dists);
    } catch (const DegeneratePolicyError &) {
        std::vector<double> uniform(applicable.size(), 0.0);
        double count = 0.0;
        for (const bool ok : applicable) {
            count += ok ? 1.0 : 0.0;
        }
        for (std::size_t a = 0; a < applicable.size(); ++a) {
            uniform[a] = applicable[a] ? 1.0 / count : 0.0;
        }
        return {std::move(uniform)};
    }
}

}  // namespace sgphs
