#ifndef SGPHS_SUBGOAL_DATA_H_
#define SGPHS_SUBGOAL_DATA_H_

#include <sgphs/louvain.h>
#include <sgphs/problem.h>
#include <sgphs/search.h>

#include <cstdint>
#include <optional>
#include <random>
#include <unordered_map>
#include <vector>

namespace sgphs {

struct SearchEdge {
    int from = 0;
    int to = 0;
    ActionIndex action = 0;

    auto operator==(const SearchEdge &) const -> bool = default;
};

// G_0: the states expanded by one search, joined by their parent -> child
// relations. Node ids follow expansion order.
struct SearchGraph {
    std::vector<State> states;
    std::vector<StateKey> keys;
    std::vector<NodeId> representative;  // search node that expanded the state
    std::vector<SearchEdge> edges;
    std::vector<std::vector<SearchEdge>> out_edges;
    std::unordered_map<StateKey, int, StateKeyHash> index;

    [[nodiscard]] auto node_count() const noexcept -> int {
        return static_cast<int>(states.size());
    }
};

[[nodiscard]] auto extract_graph(const SearchResult &tree) -> SearchGraph;

// Symmetrized unit-weight copy for clustering.
[[nodiscard]] auto to_undirected(const SearchGraph &graph) -> WeightedGraph;

// Shortest directed path in G_0, as a trajectory; nullopt if unreachable.
[[nodiscard]] auto shortest_path(const SearchGraph &graph, int from, int to) -> std::optional<Trajectory>;

// Lengths of the trajectories recovered from failed searches; drives the
// segment length distribution used on solutions.
class SegmentStats {
public:
    static constexpr double kColdStartMean = 8.0;
    static constexpr double kColdStartStddev = 2.0;

    void record(std::size_t length);

    [[nodiscard]] auto lengths() const noexcept -> const std::vector<std::size_t> & {
        return lengths_;
    }
    [[nodiscard]] auto mean() const noexcept -> double;
    // population variance
    [[nodiscard]] auto variance() const noexcept -> double;
    [[nodiscard]] auto stddev() const noexcept -> double;

    // round(Normal(mean, stddev)) clamped to [1, max_length]
    [[nodiscard]] auto sample_length(std::mt19937_64 &rng, std::size_t max_length) const -> std::size_t;

private:
    std::vector<std::size_t> lengths_;
    double sum_ = 0.0;
    double sum_sq_ = 0.0;
};

struct TrainingPair {
    State s_cur;
    State s_tar;
    Trajectory trajectory;
    int level = 0;
    int cluster_cur = 0;  // G_level nodes containing s_cur / s_tar
    int cluster_tar = 0;
};

inline constexpr int kDefaultClusterLevel = 3;
inline constexpr int kPairResamples = 5;

// Level actually used for sampling: the requested level clamped to the
// hierarchy, stepping down while the level has no edge between distinct
// nodes. nullopt when no level has one.
[[nodiscard]] auto effective_level(const ClusterHierarchy &hierarchy, int level) -> std::optional<int>;

// Picks a uniform edge of G_k, one G_0 state from each endpoint cluster and
// the directed G_0 path joining them (either direction). Endpoint states are
// redrawn up to kPairResamples times. The path length is recorded in stats.
[[nodiscard]] auto sample_subgoal_pair(const ClusterHierarchy &hierarchy, int level, const SearchGraph &g0,
                                       std::mt19937_64 &rng, SegmentStats *stats = nullptr)
    -> std::optional<TrainingPair>;

// Splits a solution into consecutive pieces of `segment_length` actions
// (the last may be shorter); neighbouring pieces share their boundary state.
[[nodiscard]] auto segment_with_length(const Trajectory &trajectory, std::size_t segment_length)
    -> std::vector<Trajectory>;

[[nodiscard]] auto segment_solution(const Trajectory &trajectory, const SegmentStats &stats, std::mt19937_64 &rng)
    -> std::vector<Trajectory>;

}  // namespace sgphs

#endif  // SGPHS_SUBGOAL_DATA_H_
