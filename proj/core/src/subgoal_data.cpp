#include <sgphs/subgoal_data.h>

#include <sgphs/errors.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace sgphs {

auto extract_graph(const SearchResult &tree) -> SearchGraph {
    if (tree.nodes.empty()) {
        throw UsageError("cannot extract a graph from an empty search tree");
    }
    SearchGraph graph;
    for (const NodeId id : tree.expansion_order) {
        const auto &key = tree.nodes[id].state_key;
        if (graph.index.contains(key)) {
            continue;
        }
        graph.index.emplace(key, graph.node_count());
        graph.states.push_back(tree.states[id]);
        graph.keys.push_back(key);
        graph.representative.push_back(id);
    }
    graph.out_edges.resize(graph.states.size());

    std::set<std::pair<int, int>> seen;
    for (const auto &node : tree.nodes) {
        if (!node.parent_id) {
            continue;
        }
        const auto child = graph.index.find(node.state_key);
        const auto parent = graph.index.find(tree.nodes[*node.parent_id].state_key);
        if (child == graph.index.end() || parent == graph.index.end() || child->second == parent->second) {
            continue;
        }
        if (!seen.emplace(parent->second, child->second).second) {
            continue;
        }
        const SearchEdge edge{parent->second, child->second, *node.action_from_parent};
        graph.edges.push_back(edge);
        graph.out_edges[static_cast<std::size_t>(edge.from)].push_back(edge);
    }
    return graph;
}

auto to_undirected(const SearchGraph &graph) -> WeightedGraph {
    WeightedGraph out;
    out.node_count = graph.node_count();
    std::set<std::pair<int, int>> seen;
    for (const auto &e : graph.edges) {
        const auto key = std::minmax(e.from, e.to);
        if (seen.insert(key).second) {
            out.edges.push_back({key.first, key.second, 1.0});
        }
    }
    return out;
}

auto shortest_path(const SearchGraph &graph, int from, int to) -> std::optional<Trajectory> {
    const int n = graph.node_count();
    if (from < 0 || to < 0 || from >= n || to >= n) {
        throw LookupError("path endpoint outside the search graph");
    }
    std::vector<int> parent(static_cast<std::size_t>(n), -1);
    std::vector<ActionIndex> via(static_cast<std::size_t>(n), -1);
    std::vector<bool> visited(static_cast<std::size_t>(n), false);
    std::deque<int> frontier{from};
    visited[static_cast<std::size_t>(from)] = true;
    while (!frontier.empty() && !visited[static_cast<std::size_t>(to)]) {
        const int u = frontier.front();
        frontier.pop_front();
        for (const auto &e : graph.out_edges[static_cast<std::size_t>(u)]) {
            if (!visited[static_cast<std::size_t>(e.to)]) {
                visited[static_cast<std::size_t>(e.to)] = true;
                parent[static_cast<std::size_t>(e.to)] = u;
                via[static_cast<std::size_t>(e.to)] = e.action;
                frontier.push_back(e.to);
            }
        }
    }
    if (!visited[static_cast<std::size_t>(to)]) {
        return std::nullopt;
    }
    Trajectory path;
    for (int v = to; v != from; v = parent[static_cast<std::size_t>(v)]) {
        path.states.push_back(graph.states[static_cast<std::size_t>(v)]);
        path.actions.push_back(via[static_cast<std::size_t>(v)]);
    }
    path.states.push_back(graph.states[static_cast<std::size_t>(from)]);
    std::ranges::reverse(path.states);
    std::ranges::reverse(path.actions);
    return path;
}

void SegmentStats::record(std::size_t length) {
    lengths_.push_back(length);
    const auto x = static_cast<double>(length);
    sum_ += x;
    sum_sq_ += x * x;
}

auto SegmentStats::mean() const noexcept -> double {
    if (lengths_.empty()) {
        return kColdStartMean;
    }
    return sum_ / static_cast<double>(lengths_.size());
}

auto SegmentStats::variance() const noexcept -> double {
    if (lengths_.empty()) {
        return kColdStartStddev * kColdStartStddev;
    }
    const double mu = mean();
    double acc = 0.0;
    for (const auto l : lengths_) {
        const double d = static_cast<double>(l) - mu;
        acc += d * d;
    }
    return acc / static_cast<double>(lengths_.size());
}

auto SegmentStats::stddev() const noexcept -> double {
    return std::sqrt(variance());
}

auto SegmentStats::sample_length(std::mt19937_64 &rng, std::size_t max_length) const -> std::size_t {
    if (max_length == 0) {
        throw UsageError("segment length needs a trajectory of at least one action");
    }
    const double sigma = stddev();
    double draw = mean();
    if (sigma > 0.0) {
        std::normal_distribution<double> normal(mean(), sigma);
        draw = normal(rng);
    }
    const double rounded = std::round(draw);
    if (rounded < 1.0) {
        return 1;
    }
    if (rounded >= static_cast<double>(max_length)) {
        return max_length;
    }
    return static_cast<std::size_t>(rounded);
}

auto effective_level(const ClusterHierarchy &hierarchy, int level) -> std::optional<int> {
    if (hierarchy.levels.empty()) {
        return std::nullopt;
    }
    int k = std::clamp(level, 0, static_cast<int>(hierarchy.size()) - 1);
    for (; k >= 0; --k) {
        const auto &edges = hierarchy.levels[static_cast<std::size_t>(k)].graph.edges;
        if (std::ranges::any_of(edges, [](const WeightedEdge &e) { return e.u != e.v; })) {
            return k;
        }
    }
    return std::nullopt;
}

auto sample_subgoal_pair(const ClusterHierarchy &hierarchy, int level, const SearchGraph &g0, std::mt19937_64 &rng,
                         SegmentStats *stats) -> std::optional<TrainingPair> {
    const auto k = effective_level(hierarchy, level);
    if (!k) {
        return std::nullopt;
    }
    std::vector<WeightedEdge> candidates;
    for (const auto &e : hierarchy.levels[static_cast<std::size_t>(*k)].graph.edges) {
        if (e.u != e.v) {
            candidates.push_back(e);
        }
    }
    std::uniform_int_distribution<std::size_t> pick_edge(0, candidates.size() - 1);
    const auto edge = candidates[pick_edge(rng)];

    const auto membership = hierarchy.membership(static_cast<std::size_t>(*k));
    std::vector<int> side_u;
    std::vector<int> side_v;
    for (std::size_t i = 0; i < membership.size(); ++i) {
        if (membership[i] == edge.u) {
            side_u.push_back(static_cast<int>(i));
        } else if (membership[i] == edge.v) {
            side_v.push_back(static_cast<int>(i));
        }
    }
    std::uniform_int_distribution<std::size_t> pick_u(0, side_u.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_v(0, side_v.size() - 1);

    for (int attempt = 0; attempt <= kPairResamples; ++attempt) {
        const int a = side_u[pick_u(rng)];
        const int b = side_v[pick_v(rng)];
        auto path = shortest_path(g0, a, b);
        int cluster_cur = edge.u;
        int cluster_tar = edge.v;
        if (!path) {
            path = shortest_path(g0, b, a);
            std::swap(cluster_cur, cluster_tar);
        }
        if (!path) {
            continue;
        }
        if (stats != nullptr) {
            stats->record(path->length());
        }
        TrainingPair pair;
        pair.s_cur = path->states.front();
        pair.s_tar = path->states.back();
        pair.trajectory = std::move(*path);
        pair.level = *k;
        pair.cluster_cur = cluster_cur;
        pair.cluster_tar = cluster_tar;
        return pair;
    }
    return std::nullopt;
}

auto segment_with_length(const Trajectory &trajectory, std::size_t segment_length) -> std::vector<Trajectory> {
    const std::size_t t = trajectory.length();
    if (t == 0) {
        throw UsageError("cannot segment an empty trajectory");
    }
    if (segment_length == 0) {
        throw UsageError("segment length must be positive");
    }
    std::vector<Trajectory> segments;
    for (std::size_t i = 0; i < t; i += segment_length) {
        const std::size_t end = std::min(i + segment_length, t);
        Trajectory piece;
        piece.states.assign(trajectory.states.begin() + static_cast<std::ptrdiff_t>(i),
                            trajectory.states.begin() + static_cast<std::ptrdiff_t>(end) + 1);
        piece.actions.assign(trajectory.actions.begin() + static_cast<std::ptrdiff_t>(i),
                             trajectory.actions.begin() + static_cast<std::ptrdiff_t>(end));
        segments.push_back(std::move(piece));
    }
    return segments;
}

auto segment_solution(const Trajectory &trajectory, const SegmentStats &stats, std::mt19937_64 &rng)
    -> std::vector<Trajectory> {
    if (trajectory.length() == 0) {
        throw UsageError("cannot segment an empty trajectory");
    }
    return segment_with_length(trajectory, stats.sample_length(rng, trajectory.length()));
}

}  // namespace sgphs
