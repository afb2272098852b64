#ifndef SGPHS_GUIDANCE_H_
#define SGPHS_GUIDANCE_H_

#include <sgphs/problem.h>

#include <span>
#include <vector>

namespace sgphs {

// Model outputs consumed by the evaluation functions.
class Guidance {
public:
    virtual ~Guidance() = default;

    // log pi(a | s) for every action. Inapplicable actions carry -infinity;
    // the applicable entries sum to 1 in probability space.
    [[nodiscard]] virtual auto log_policy(const Problem &problem, const State &state, std::span<const bool> applicable)
        const -> std::vector<double> = 0;

    // Cost-to-go estimate; negative outputs are clamped to 0 by the search.
    [[nodiscard]] virtual auto heuristic(const Problem &problem, const State &state) const -> double = 0;
};

// Uniform policy over applicable actions, zero heuristic.
class UniformGuidance final : public Guidance {
public:
    [[nodiscard]] auto log_policy(const Problem &problem, const State &state, std::span<const bool> applicable) const
        -> std::vector<double> override;
    [[nodiscard]] auto heuristic(const Problem &problem, const State &state) const -> double override;
};

// Fills -infinity for masked entries and log(p / sum) for the rest.
[[nodiscard]] auto masked_log_normalize(std::span<const double> probabilities, std::span<const bool> applicable)
    -> std::vector<double>;

}  // namespace sgphs

#endif  // SGPHS_GUIDANCE_H_
