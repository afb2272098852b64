#ifndef SGPHS_POLICY_MIXING_H_
#define SGPHS_POLICY_MIXING_H_

#include <sgphs/problem.h>
#include <sgphs/tensor.h>

#include <span>
#include <vector>

namespace sgphs {

class Vqvae;
class SubgoalPolicyBundle;

// k decoded subgoals, index-aligned with the generator's codebook.
struct SubgoalSet {
    std::vector<Tensor> subgoals;
    std::vector<int> source_codebook_indices;

    [[nodiscard]] auto size() const noexcept -> std::size_t {
        return subgoals.size();
    }
};

struct MixedPolicy {
    std::vector<double> action_probs;
};

// subgoal i = decoder(state, e_i) for every codebook entry.
[[nodiscard]] auto generate_subgoals(const Tensor &state_encoding, const Vqvae &generator) -> SubgoalSet;

// pi(a) = sum_i w_i p_i(a) / sum_a' sum_i w_i p_i(a').
// The weights need not be normalized; the denominator cancels any scale.
// Throws DegeneratePolicyError when every numerator is zero.
[[nodiscard]] auto mix(std::span<const double> high_probs, const std::vector<std::vector<double>> &low_dists)
    -> MixedPolicy;

// Full subgoal-guided policy at a state. Inapplicable actions are masked
// and each low-level distribution is renormalized over the applicable ones
// before mixing; a degenerate mixture falls back to uniform over them.
[[nodiscard]] auto subgoal_guided_policy(const Problem &problem, const State &state,
                                         const SubgoalPolicyBundle &bundle, std::span<const bool> applicable)
    -> MixedPolicy;

// Softmax restricted to the applicable entries (others get probability 0).
[[nodiscard]] auto masked_softmax(std::span<const double> logits, std::span<const bool> applicable)
    -> std::vector<double>;

}  // namespace sgphs

#endif  // SGPHS_POLICY_MIXING_H_
