#ifndef SGPHS_LOUVAIN_H_
#define SGPHS_LOUVAIN_H_

#include <cstdint>
#include <vector>

namespace sgphs {

struct WeightedEdge {
    int u = 0;
    int v = 0;
    double weight = 1.0;

    auto operator==(const WeightedEdge &) const -> bool = default;
};

// Undirected weighted graph; u == v entries are self-loops.
struct WeightedGraph {
    int node_count = 0;
    std::vector<WeightedEdge> edges;

    [[nodiscard]] auto total_weight() const noexcept -> double;
    // Weighted degree; a self-loop adds twice its weight.
    [[nodiscard]] auto degrees() const -> std::vector<double>;
};

// One level G_i of the hierarchy. partition_map[v] is the node of G_{i+1}
// that v belongs to; empty for the top level.
struct ClusterGraph {
    WeightedGraph graph;
    std::vector<int> partition_map;
};

struct ClusterHierarchy {
    std::vector<ClusterGraph> levels;
    // modularity after each local-move sweep, per level that ran sweeps
    std::vector<std::vector<double>> sweep_modularity;

    [[nodiscard]] auto size() const noexcept -> std::size_t {
        return levels.size();
    }
    // For every G_0 node, the id of the G_level node containing it.
    [[nodiscard]] auto membership(std::size_t level) const -> std::vector<int>;
    // G_0 nodes contained in a given G_level node.
    [[nodiscard]] auto members(std::size_t level, int node) const -> std::vector<int>;
};

// Q = sum_c [ in_c / 2m - rho (tot_c / 2m)^2 ], where in_c counts internal
// edges from both endpoints and tot_c sums member degrees. Q = 0 when m = 0.
[[nodiscard]] auto modularity(const WeightedGraph &graph, const std::vector<int> &partition, double rho = 1.0)
    -> double;

// Hierarchical Louvain clustering. Nodes are visited in a seeded random
// order, refreshed every sweep; a level is aggregated only when its local
// moves strictly improved modularity.
[[nodiscard]] auto louvain(const WeightedGraph &graph, double rho = 1.0, std::uint64_t seed = 0) -> ClusterHierarchy;

// Runs local-move sweeps on one graph; returns the compacted partition.
[[nodiscard]] auto louvain_local_moves(const WeightedGraph &graph, double rho, std::uint64_t seed,
                                       std::vector<double> *sweep_modularity = nullptr) -> std::vector<int>;

// Collapses each part into a node; internal weight becomes a self-loop.
[[nodiscard]] auto aggregate(const WeightedGraph &graph, const std::vector<int> &partition) -> WeightedGraph;

}  // namespace sgphs

#endif  // SGPHS_LOUVAIN_H_
