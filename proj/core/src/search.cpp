#include <sgphs/search.h>

#include <sgphs/errors.h>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <limits>
#include <queue>
#include <unordered_set>

namespace sgphs {

namespace {

constexpr double kUnitLoss = 1.0;

struct QueueEntry {
    double priority;
    std::uint64_t sequence;
    NodeId node;
};

// min-heap on (priority, insertion sequence)
struct QueueOrder {
    auto operator()(const QueueEntry &lhs, const QueueEntry &rhs) const noexcept -> bool {
        if (lhs.priority != rhs.priority) {
            return lhs.priority > rhs.priority;
        }
        return lhs.sequence > rhs.sequence;
    }
};

void check_priority(const SearchNode &node) {
    if (std::isnan(node.priority) || node.priority == std::numeric_limits<double>::infinity()) {
        throw GuidanceError(fmt::format("evaluation function returned non-finite priority {} for node {} (state {})",
                                        node.priority, node.node_id, node.state_key.to_string()),
                            node.node_id);
    }
}

}  // namespace

auto to_string(SearchOutcome outcome) -> std::string {
    switch (outcome) {
    case SearchOutcome::solved:
        return "solved";
    case SearchOutcome::timeout:
        return "timeout";
    case SearchOutcome::no_solution:
        return "no_solution";
    }
    return "unknown";
}

auto UniformGuidance::log_policy([[maybe_unused]] const Problem &problem, [[maybe_unused]] const State &state,
                                 std::span<const bool> applicable) const -> std::vector<double> {
    const std::vector<double> ones(applicable.size(), 1.0);
    return masked_log_normalize(ones, applicable);
}

auto UniformGuidance::heuristic([[maybe_unused]] const Problem &problem, [[maybe_unused]] const State &state) const
    -> double {
    return 0.0;
}

auto masked_log_normalize(std::span<const double> probabilities, std::span<const bool> applicable)
    -> std::vector<double> {
    double total = 0.0;
    for (std::size_t a = 0; a < probabilities.size(); ++a) {
        if (applicable[a]) {
            total += probabilities[a];
        }
    }
    std::vector<double> out(probabilities.size(), -std::numeric_limits<double>::infinity());
    for (std::size_t a = 0; a < probabilities.size(); ++a) {
        if (applicable[a]) {
            out[a] = std::log(probabilities[a]) - std::log(total);
        }
    }
    return out;
}

auto bfs_search(const Problem &problem, const Guidance &guidance, const EvaluationFunction &evaluator,
                std::int64_t budget) -> SearchResult {
    const int action_count = problem.action_count();
    if (action_count <= 0) {
        throw ConfigurationError("problem must expose at least one action");
    }
    if (budget < 0) {
        throw ConfigurationError("search budget must be non-negative");
    }

    SearchResult result;
    auto heuristic_of = [&](const State &state) {
        return evaluator.needs_heuristic() ? std::max(guidance.heuristic(problem, state), 0.0) : 0.0;
    };
    auto add_node = [&](State state, std::optional<NodeId> parent, std::optional<ActionIndex> action, int depth,
                        double path_loss, double log_pi) -> SearchNode & {
        SearchNode node;
        node.node_id = result.nodes.size();
        node.state_key = problem.state_key(state);
        node.parent_id = parent;
        node.action_from_parent = action;
        node.depth = depth;
        node.path_loss = path_loss;
        node.log_pi = log_pi;
        result.nodes.push_back(std::move(node));
        result.states.push_back(std::move(state));
        return result.nodes.back();
    };

    const State root_state = problem.initial_state();
    {
        auto &root = add_node(root_state, std::nullopt, std::nullopt, 0, 0.0, 0.0);
        if (problem.is_goal(root_state)) {
            result.outcome = SearchOutcome::solved;
            result.solution_node = root.node_id;
            return result;
        }
        root.priority = evaluator.priority({root.depth, root.path_loss, root.log_pi}, heuristic_of(root_state));
        check_priority(root);
    }

    std::priority_queue<QueueEntry, std::vector<QueueEntry>, QueueOrder> open;
    std::uint64_t sequence = 0;
    open.push({result.nodes[0].priority, sequence++, 0});
    std::unordered_set<StateKey, StateKeyHash> expanded;

    std::vector<std::optional<State>> children(static_cast<std::size_t>(action_count));
    // std::span<const bool> cannot view std::vector<bool>
    const auto mask = std::make_unique<bool[]>(static_cast<std::size_t>(action_count));
    const std::span<const bool> applicable(mask.get(), static_cast<std::size_t>(action_count));

    std::int64_t pops = 0;
    while (!open.empty() && pops < budget) {
        const NodeId current = open.top().node;
        open.pop();
        ++pops;
        if (!expanded.insert(result.nodes[current].state_key).second) {
            continue;
        }
        result.nodes[current].expanded = true;
        result.expansion_order.push_back(current);

        const State parent_state = result.states[current];
        bool any_applicable = false;
        for (int a = 0; a < action_count; ++a) {
            children[static_cast<std::size_t>(a)] = problem.transition(parent_state, a);
            mask[static_cast<std::size_t>(a)] = children[static_cast<std::size_t>(a)].has_value();
            any_applicable = any_applicable || children[static_cast<std::size_t>(a)].has_value();
        }
        if (!any_applicable) {
            continue;
        }
        std::vector<double> log_probs(static_cast<std::size_t>(action_count), 0.0);
        if (evaluator.needs_policy()) {
            log_probs = guidance.log_policy(problem, parent_state, applicable);
        }

        const int parent_depth = result.nodes[current].depth;
        const double parent_loss = result.nodes[current].path_loss;
        const double parent_log_pi = result.nodes[current].log_pi;
        for (int a = 0; a < action_count; ++a) {
            auto &child_state = children[static_cast<std::size_t>(a)];
            if (!child_state) {
                continue;
            }
            const bool is_goal = problem.is_goal(*child_state);
            auto &child = add_node(std::move(*child_state), current, a, parent_depth + 1, parent_loss + kUnitLoss,
                                   parent_log_pi + log_probs[static_cast<std::size_t>(a)]);
            if (is_goal) {
                result.outcome = SearchOutcome::solved;
                result.solution_node = child.node_id;
                result.expansions_used = pops;
                return result;
            }
            const NodeId child_id = child.node_id;
            const double h = heuristic_of(result.states[child_id]);
            auto &stored = result.nodes[child_id];
            stored.priority = evaluator.priority({stored.depth, stored.path_loss, stored.log_pi}, h);
            check_priority(stored);
            open.push({stored.priority, sequence++, child_id});
        }
    }

    result.expansions_used = pops;
    result.outcome = pops >= budget ? SearchOutcome::timeout : SearchOutcome::no_solution;
    return result;
}

auto reconstruct_path(const SearchResult &result, std::optional<NodeId> node) -> Trajectory {
    const auto target = node ? node : result.solution_node;
    if (!target) {
        throw LookupError("no node given and the search has no solution node");
    }
    if (*target >= result.nodes.size()) {
        throw LookupError(fmt::format("node id {} is not in the search tree", *target));
    }
    Trajectory trajectory;
    std::optional<NodeId> cursor = target;
    while (cursor) {
        const auto &n = result.nodes[*cursor];
        trajectory.states.push_back(result.states[*cursor]);
        if (n.action_from_parent) {
            trajectory.actions.push_back(*n.action_from_parent);
        }
        cursor = n.parent_id;
    }
    std::ranges::reverse(trajectory.states);
    std::ranges::reverse(trajectory.actions);
    return trajectory;
}

}  // namespace sgphs
