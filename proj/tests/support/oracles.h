#ifndef SGPHS_TESTS_ORACLES_H_
#define SGPHS_TESTS_ORACLES_H_

#include <sgphs/envs/gridnav.h>
#include <sgphs/envs/tsp.h>
#include <sgphs/louvain.h>

#include <cstdint>
#include <random>
#include <vector>

namespace sgphs::testing {

// Uniform-cost search written directly on the grid: lazy insertion, every
// pop counted (stale ones included), goal test when a cell is generated,
// FIFO among equal costs. Returns the number of pops before the goal is
// generated, or -1 if unreachable.
[[nodiscard]] auto grid_dijkstra_pops(const envs::GridNavProblem &problem) -> std::int64_t;

// Plain BFS distance from agent to goal.
[[nodiscard]] auto grid_bfs_distance(const envs::GridNavProblem &problem) -> int;

// Modularity via the adjacency-matrix form
//   Q = 1/2m sum_ij (A_ij - rho k_i k_j / 2m) [c_i == c_j].
[[nodiscard]] auto matrix_modularity(const WeightedGraph &graph, const std::vector<int> &partition, double rho = 1.0)
    -> double;

struct BestPartition {
    double modularity = 0.0;
    std::vector<int> partition;
};

// Random simple graph on 3..8 nodes, edge probability 0.45, weights 1 or
// (one time in four) a random value in [0.5, 3).
[[nodiscard]] auto random_small_graph(std::mt19937_64 &rng) -> WeightedGraph;

// The first 30 non-empty search graphs from budget-8 uniform BFS on 8x8
// GridNav (density 0.25, instance seeds 0,1,2,...), symmetrized. At most 8 nodes.
[[nodiscard]] auto search_graph_corpus() -> std::vector<WeightedGraph>;

// Two k-cliques joined by a single bridge edge (k-1, k).
[[nodiscard]] auto barbell_graph(int k) -> WeightedGraph;

// Exhaustive search over all set partitions (restricted growth strings).
[[nodiscard]] auto brute_force_modularity(const WeightedGraph &graph, double rho = 1.0) -> BestPartition;

// Optimal tour length by enumerating every visiting order; each leg is a
// BFS that may not step on cities still unvisited other than its target.
[[nodiscard]] auto tsp_brute_force(const envs::TspProblem &problem) -> int;

// Textbook Adam with L2 folded into the gradient, one scalar at a time.
struct ReferenceAdam {
    double lr = 3e-4;
    double l2 = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::vector<double> m;
    std::vector<double> v;
    int t = 0;

    void step(std::vector<double> &w, const std::vector<double> &g);
};

}  // namespace sgphs::testing

#endif  // SGPHS_TESTS_ORACLES_H_
