#include <sgphs/evaluators.h>

#include <sgphs/errors.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace sgphs {

auto phi_levints(int depth, double log_pi) noexcept -> double {
    return std::log(static_cast<double>(depth) + 1.0) - log_pi;
}

auto phi_phs(double path_loss, double log_pi, double heuristic) noexcept -> double {
    if (path_loss <= 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    const double h = std::max(heuristic, 0.0);
    const double ratio = h / path_loss;
    return std::log1p(ratio) + ratio * (-log_pi) + std::log(path_loss) - log_pi;
}

auto phi_wastar(double path_loss, double heuristic, double weight) noexcept -> double {
    return path_loss + weight * heuristic;
}

auto to_string(Algorithm algorithm) -> std::string {
    switch (algorithm) {
    case Algorithm::levints:
        return "levints";
    case Algorithm::phs:
        return "phs";
    case Algorithm::wastar:
        return "wastar";
    case Algorithm::uniform_cost:
        return "uniform-cost";
    }
    return "unknown";
}

auto parse_algorithm(std::string_view name) -> Algorithm {
    if (name == "levints") {
        return Algorithm::levints;
    }
    if (name == "phs") {
        return Algorithm::phs;
    }
    if (name == "wastar") {
        return Algorithm::wastar;
    }
    if (name == "uniform-cost") {
        return Algorithm::uniform_cost;
    }
    throw ConfigurationError("unknown evaluation function: " + std::string(name));
}

auto EvaluationFunction::priority(const NodeStats &node, double heuristic) const noexcept -> double {
    switch (algorithm) {
    case Algorithm::levints:
        return phi_levints(node.depth, node.log_pi);
    case Algorithm::phs:
        return phi_phs(node.path_loss, node.log_pi, heuristic);
    case Algorithm::wastar:
        return phi_wastar(node.path_loss, std::max(heuristic, 0.0), weight);
    case Algorithm::uniform_cost:
        return node.path_loss;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

auto EvaluationFunction::needs_heuristic() const noexcept -> bool {
    return algorithm == Algorithm::phs || algorithm == Algorithm::wastar;
}

auto EvaluationFunction::needs_policy() const noexcept -> bool {
    return algorithm == Algorithm::levints || algorithm == Algorithm::phs;
}

}  // namespace sgphs
