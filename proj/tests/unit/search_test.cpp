#include "oracles.h"
#include "test_problems.h"

#include <sgphs/envs/gridnav.h>
#include <sgphs/errors.h>
#include <sgphs/search.h>

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <set>

namespace sgphs {
namespace {

using testing::chain_problem;
using testing::FunctionGuidance;
using testing::GraphProblem;

auto open_grid(int size, int agent, int goal) -> envs::GridNavProblem {
    return {size, size, std::vector<std::uint8_t>(static_cast<std::size_t>(size * size), 0), agent, goal};
}

TEST(Search, FirstChildGoalNeedsOneExpansion) {
    const GraphProblem problem({{1, 2}, {}, {}}, 0, {1});
    const auto result = bfs_search(problem, UniformGuidance{}, EvaluationFunction::levints(), 10);
    EXPECT_EQ(result.outcome, SearchOutcome::solved);
    EXPECT_EQ(result.expansions_used, 1);
}

TEST(Search, ZeroBudgetTimesOut) {
    const auto problem = chain_problem(3);
    const auto result = bfs_search(problem, UniformGuidance{}, EvaluationFunction::levints(), 0);
    EXPECT_EQ(result.outcome, SearchOutcome::timeout);
    EXPECT_EQ(result.expansions_used, 0);
}

TEST(Search, RootGoalIsSolvedWithoutExpansion) {
    const GraphProblem problem({{1}, {}}, 0, {0});
    const auto result = bfs_search(problem, UniformGuidance{}, EvaluationFunction::phs(), 0);
    EXPECT_TRUE(result.solved());
    EXPECT_EQ(result.expansions_used, 0);
    const auto path = reconstruct_path(result);
    EXPECT_EQ(path.states.size(), 1U);
    EXPECT_TRUE(path.actions.empty());
}

TEST(Search, ExhaustedTreeIsNoSolution) {
    const GraphProblem problem({{1}, {}}, 0, {});
    const auto result = bfs_search(problem, UniformGuidance{}, EvaluationFunction::levints(), 10);
    EXPECT_EQ(result.outcome, SearchOutcome::no_solution);
    EXPECT_EQ(result.expansions_used, 2);
}

TEST(Search, TimeoutUsesWholeBudget) {
    const auto problem = chain_problem(50);
    const auto result = bfs_search(problem, UniformGuidance{}, EvaluationFunction::levints(), 7);
    EXPECT_EQ(result.outcome, SearchOutcome::timeout);
    EXPECT_EQ(result.expansions_used, 7);
}

TEST(Search, RejectsProblemsWithoutActions) {
    const GraphProblem problem({{}}, 0, {});
    struct NoActions final : Problem {
        const GraphProblem &inner;
        explicit NoActions(const GraphProblem &p) : inner(p) {}
        auto domain() const -> std::string_view override { return "none"; }
        auto initial_state() const -> State override { return inner.initial_state(); }
        auto action_count() const -> int override { return 0; }
        auto transition(const State &, ActionIndex) const -> std::optional<State> override { return std::nullopt; }
        auto is_goal(const State &) const -> bool override { return false; }
        auto encode(const State &s) const -> Tensor override { return inner.encode(s); }
        auto observation_shape() const -> std::vector<int> override { return inner.observation_shape(); }
        auto render(const State &) const -> std::string override { return {}; }
    };
    EXPECT_THROW((void)bfs_search(NoActions(problem), UniformGuidance{}, EvaluationFunction::levints(), 5),
                 ConfigurationError);
}

TEST(Search, DuplicatePopsCountAgainstBudget) {
    // 0 -> {1, 2}, 1 -> 3, 2 -> 3, 3 -> 4 (goal). State 3 is queued twice.
    const GraphProblem problem({{1, 2}, {3}, {3}, {4}, {}}, 0, {4});
    const auto result = bfs_search(problem, UniformGuidance{}, EvaluationFunction::uniform_cost(), 100);
    ASSERT_TRUE(result.solved());
    // pops: 0, 1, 2, 3 (generates goal) -> the duplicate entry of 3 is never popped
    EXPECT_EQ(result.expansions_used, 4);

    // with goal unreachable, the duplicate pop of 3 is counted
    const GraphProblem dead({{1, 2}, {3}, {3}, {}}, 0, {});
    const auto exhausted = bfs_search(dead, UniformGuidance{}, EvaluationFunction::uniform_cost(), 100);
    EXPECT_EQ(exhausted.outcome, SearchOutcome::no_solution);
    EXPECT_EQ(exhausted.expansions_used, 5);
    EXPECT_EQ(exhausted.expansion_order.size(), 4U);
}

TEST(Search, NoStateExpandedTwice) {
    const auto problem = envs::gridnav_generate(8, 8, 0.2, 11);
    const auto result = bfs_search(problem, UniformGuidance{}, EvaluationFunction::levints(), 300);
    std::set<StateKey> seen;
    for (const auto id : result.expansion_order) {
        EXPECT_TRUE(seen.insert(result.nodes[id].state_key).second);
    }
}

TEST(Search, NodeBookkeepingFollowsParents) {
    const auto problem = envs::gridnav_generate(8, 8, 0.2, 5);
    const auto guidance = testing::synthetic_grid_policy(3, 5);
    const auto result = bfs_search(problem, guidance, EvaluationFunction::levints(), 200);
    const auto &root = result.nodes.front();
    EXPECT_EQ(root.depth, 0);
    EXPECT_EQ(root.path_loss, 0.0);
    EXPECT_EQ(root.log_pi, 0.0);
    EXPECT_FALSE(root.parent_id.has_value());
    for (const auto &node : result.nodes) {
        if (!node.parent_id) {
            continue;
        }
        const auto &parent = result.nodes[*node.parent_id];
        EXPECT_EQ(node.depth, parent.depth + 1);
        EXPECT_DOUBLE_EQ(node.path_loss, static_cast<double>(node.depth));
        EXPECT_LE(node.log_pi, parent.log_pi);
    }
}

TEST(Search, ExpandedPrioritiesAreMonotoneForLevints) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto problem = envs::gridnav_generate(8, 8, 0.25, seed);
        const auto guidance = testing::synthetic_grid_policy(static_cast<int>(seed % 5), seed);
        const auto result = bfs_search(problem, guidance, EvaluationFunction::levints(), 400);
        double last = -std::numeric_limits<double>::infinity();
        for (const auto id : result.expansion_order) {
            EXPECT_GE(result.nodes[id].priority, last);
            last = result.nodes[id].priority;
        }
    }
}

TEST(Search, OpenGridMatchesDijkstra) {
    // goal at Manhattan distance 6
    const auto problem = open_grid(5, 0, 2 * 5 + 4);
    const auto result = bfs_search(problem, UniformGuidance{}, EvaluationFunction::uniform_cost(), 10000);
    ASSERT_TRUE(result.solved());
    EXPECT_EQ(result.expansions_used, testing::grid_dijkstra_pops(problem));
    EXPECT_EQ(reconstruct_path(result).length(), 6U);
}

TEST(Search, NonFinitePriorityRaisesGuidanceError) {
    const auto problem = chain_problem(3);
    const FunctionGuidance nan_heuristic(
        [](const Problem &, const State &, std::span<const bool> a) { return std::vector<double>(a.size(), 1.0); },
        [](const Problem &, const State &) { return std::numeric_limits<double>::quiet_NaN(); });
    try {
        (void)bfs_search(problem, nan_heuristic, EvaluationFunction::wastar(), 10);
        FAIL() << "expected GuidanceError";
    } catch (const GuidanceError &e) {
        EXPECT_EQ(e.node_id(), 0U);
    }
}

TEST(Search, ZeroProbabilityActionsGetInfinitePriority) {
    const auto problem = chain_problem(3);
    const FunctionGuidance zero_forward(
        [](const Problem &, const State &, std::span<const bool> a) {
            std::vector<double> p(a.size(), 1.0);
            p[0] = 0.0;
            return p;
        },
        [](const Problem &, const State &) { return 0.0; });
    EXPECT_THROW((void)bfs_search(problem, zero_forward, EvaluationFunction::levints(), 10), GuidanceError);
}

TEST(ReconstructPath, FollowsParentChain) {
    const auto problem = chain_problem(2);
    const auto result = bfs_search(problem, UniformGuidance{}, EvaluationFunction::levints(), 10);
    ASSERT_TRUE(result.solved());
    const auto path = reconstruct_path(result);
    EXPECT_EQ(path.actions, (std::vector<ActionIndex>{0, 0}));
    EXPECT_EQ(path.states.size(), 3U);
    EXPECT_TRUE(replays(problem, path));
}

TEST(ReconstructPath, ArbitraryNodesReplay) {
    std::mt19937_64 rng(3);
    const auto problem = envs::gridnav_generate(8, 8, 0.2, 99);
    const auto result = bfs_search(problem, UniformGuidance{}, EvaluationFunction::levints(), 60);
    std::uniform_int_distribution<std::size_t> pick(0, result.nodes.size() - 1);
    for (int i = 0; i < 100; ++i) {
        const auto id = pick(rng);
        const auto path = reconstruct_path(result, id);
        EXPECT_TRUE(replays(problem, path));
        EXPECT_EQ(path.states.back(), result.states[id]);
    }
}

TEST(ReconstructPath, UnknownNodeIsLookupError) {
    const auto problem = chain_problem(2);
    const auto result = bfs_search(problem, UniformGuidance{}, EvaluationFunction::levints(), 1);
    EXPECT_THROW((void)reconstruct_path(result, 999), LookupError);
    EXPECT_THROW((void)reconstruct_path(result), LookupError);
}

}  // namespace
}  // namespace sgphs
