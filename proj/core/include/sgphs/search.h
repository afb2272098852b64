#ifndef SGPHS_SEARCH_H_
#define SGPHS_SEARCH_H_

#include <sgphs/evaluators.h>
#include <sgphs/guidance.h>
#include <sgphs/problem.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sgphs {

using NodeId = std::size_t;

struct SearchNode {
    NodeId node_id = 0;
    StateKey state_key;
    std::optional<NodeId> parent_id;
    std::optional<ActionIndex> action_from_parent;
    int depth = 0;
    double path_loss = 0.0;
    double log_pi = 0.0;
    double priority = 0.0;
    bool expanded = false;
};

enum class SearchOutcome { solved, timeout, no_solution };

[[nodiscard]] auto to_string(SearchOutcome outcome) -> std::string;

struct SearchResult {
    SearchOutcome outcome = SearchOutcome::no_solution;
    std::optional<NodeId> solution_node;
    std::int64_t expansions_used = 0;
    // Full node table, indexed by node_id; states[i] belongs to nodes[i].
    std::vector<SearchNode> nodes;
    std::vector<State> states;
    // node ids in the order they were expanded
    std::vector<NodeId> expansion_order;

    [[nodiscard]] auto solved() const noexcept -> bool {
        return outcome == SearchOutcome::solved;
    }
};

// Budgeted best-first search. Every pop counts against the budget,
// including pops of states that were already expanded. Children are
// goal-tested at generation; the root is goal-tested before the loop.
// Ties on priority are broken first-in first-out.
[[nodiscard]] auto bfs_search(const Problem &problem, const Guidance &guidance, const EvaluationFunction &evaluator,
                              std::int64_t budget) -> SearchResult;

// Path from the root to the given node (the solution node by default).
[[nodiscard]] auto reconstruct_path(const SearchResult &result, std::optional<NodeId> node = std::nullopt)
    -> Trajectory;

}  // namespace sgphs

#endif  // SGPHS_SEARCH_H_
