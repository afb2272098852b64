#ifndef SGPHS_EVALUATORS_H_
#define SGPHS_EVALUATORS_H_

#include <string>
#include <string_view>

namespace sgphs {

// Log of the LevinTS priority (d + 1) / pi.
[[nodiscard]] auto phi_levints(int depth, double log_pi) noexcept -> double;

// Log of the PHS* priority eta * g / pi, with
//   eta = (1 + h/g) / pi^(h/g),  eta = 1 when g = 0.
// For g = 0 the priority is 0, returned as -infinity (expanded first).
[[nodiscard]] auto phi_phs(double path_loss, double log_pi, double heuristic) noexcept -> double;

// Weighted A*: g + w * h (not in log space).
[[nodiscard]] auto phi_wastar(double path_loss, double heuristic, double weight) noexcept -> double;

enum class Algorithm { levints, phs, wastar, uniform_cost };

[[nodiscard]] auto to_string(Algorithm algorithm) -> std::string;
[[nodiscard]] auto parse_algorithm(std::string_view name) -> Algorithm;

// Bookkeeping of a node that its priority depends on.
struct NodeStats {
    int depth = 0;
    double path_loss = 0.0;
    double log_pi = 0.0;
};

// The pluggable priority phi. Only phs and wastar consult the heuristic,
// only levints and phs consult the policy.
struct EvaluationFunction {
    Algorithm algorithm = Algorithm::levints;
    double weight = 1.5;

    [[nodiscard]] auto priority(const NodeStats &node, double heuristic) const noexcept -> double;
    [[nodiscard]] auto needs_heuristic() const noexcept -> bool;
    [[nodiscard]] auto needs_policy() const noexcept -> bool;

    static auto levints() -> EvaluationFunction {
        return {Algorithm::levints, 1.0};
    }
    static auto phs() -> EvaluationFunction {
        return {Algorithm::phs, 1.0};
    }
    static auto wastar(double w = 1.5) -> EvaluationFunction {
        return {Algorithm::wastar, w};
    }
    static auto uniform_cost() -> EvaluationFunction {
        return {Algorithm::uniform_cost, 1.0};
    }
};

}  // namespace sgphs

#endif  // SGPHS_EVALUATORS_H_
