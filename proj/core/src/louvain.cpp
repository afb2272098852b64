#include <sgphs/louvain.h>

#include <sgphs/errors.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <unordered_map>

namespace sgphs {

namespace {

constexpr double kGainTolerance = 1e-12;

struct Adjacency {
    std::vector<std::vector<std::pair<int, double>>> neighbours;  // excludes self-loops
    std::vector<double> self_loop;
    std::vector<double> degree;
    double total_weight = 0.0;
};

auto build_adjacency(const WeightedGraph &graph) -> Adjacency {
    Adjacency adj;
    const auto n = static_cast<std::size_t>(graph.node_count);
    adj.self_loop.assign(n, 0.0);
    adj.degree.assign(n, 0.0);
    std::vector<std::map<int, double>> merged(n);
    for (const auto &e : graph.edges) {
        if (e.u < 0 || e.v < 0 || e.u >= graph.node_count || e.v >= graph.node_count) {
            throw DomainError("edge endpoint outside the graph");
        }
        if (!(e.weight > 0.0)) {
            throw DomainError("edge weights must be positive");
        }
        adj.total_weight += e.weight;
        if (e.u == e.v) {
            adj.self_loop[static_cast<std::size_t>(e.u)] += e.weight;
            adj.degree[static_cast<std::size_t>(e.u)] += 2.0 * e.weight;
        } else {
            merged[static_cast<std::size_t>(e.u)][e.v] += e.weight;
            merged[static_cast<std::size_t>(e.v)][e.u] += e.weight;
            adj.degree[static_cast<std::size_t>(e.u)] += e.weight;
            adj.degree[static_cast<std::size_t>(e.v)] += e.weight;
        }
    }
    adj.neighbours.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        adj.neighbours[i].assign(merged[i].begin(), merged[i].end());
    }
    return adj;
}

auto compact(const std::vector<int> &partition) -> std::vector<int> {
    std::unordered_map<int, int> relabel;
    std::vector<int> out(partition.size());
    for (std::size_t i = 0; i < partition.size(); ++i) {
        auto [it, inserted] = relabel.try_emplace(partition[i], static_cast<int>(relabel.size()));
        out[i] = it->second;
    }
    return out;
}

auto identity_partition(int n) -> std::vector<int> {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    return p;
}

}  // namespace

auto WeightedGraph::total_weight() const noexcept -> double {
    double m = 0.0;
    for (const auto &e : edges) {
        m += e.weight;
    }
    return m;
}

auto WeightedGraph::degrees() const -> std::vector<double> {
    std::vector<double> k(static_cast<std::size_t>(node_count), 0.0);
    for (const auto &e : edges) {
        k[static_cast<std::size_t>(e.u)] += e.weight;
        k[static_cast<std::size_t>(e.v)] += e.weight;
    }
    return k;
}

auto ClusterHierarchy::membership(std::size_t level) const -> std::vector<int> {
    if (levels.empty() || level >= levels.size()) {
        throw LookupError("hierarchy level out of range");
    }
    std::vector<int> member = identity_partition(levels.front().graph.node_count);
    for (std::size_t l = 0; l < level; ++l) {
        for (auto &m : member) {
            m = levels[l].partition_map[static_cast<std::size_t>(m)];
        }
    }
    return member;
}

auto ClusterHierarchy::members(std::size_t level, int node) const -> std::vector<int> {
    const auto member = membership(level);
    std::vector<int> out;
    for (std::size_t i = 0; i < member.size(); ++i) {
        if (member[i] == node) {
            out.push_back(static_cast<int>(i));
        }
    }
    return out;
}

auto modularity(const WeightedGraph &graph, const std::vector<int> &partition, double rho) -> double {
    if (graph.node_count <= 0) {
        throw DomainError("modularity of an empty graph is undefined");
    }
    if (partition.size() != static_cast<std::size_t>(graph.node_count)) {
        throw DomainError("partition must assign every node exactly once");
    }
    const double m = graph.total_weight();
    if (m == 0.0) {
        return 0.0;
    }
    std::map<int, double> internal;
    std::map<int, double> total;
    for (const auto &e : graph.edges) {
        const int cu = partition[static_cast<std::size_t>(e.u)];
        const int cv = partition[static_cast<std::size_t>(e.v)];
        total[cu] += e.weight;
        total[cv] += e.weight;
        if (cu == cv) {
            internal[cu] += 2.0 * e.weight;
        }
    }
    double q = 0.0;
    for (const auto &[c, tot] : total) {
        const double in = internal.contains(c) ? internal.at(c) : 0.0;
        q += in / (2.0 * m) - rho * (tot / (2.0 * m)) * (tot / (2.0 * m));
    }
    return q;
}

auto louvain_local_moves(const WeightedGraph &graph, double rho, std::uint64_t seed,
                         std::vector<double> *sweep_modularity) -> std::vector<int> {
    const Adjacency adj = build_adjacency(graph);
    const int n = graph.node_count;
    std::vector<int> cluster = identity_partition(n);
    if (adj.total_weight == 0.0 || n <= 1) {
        return cluster;
    }
    const double m = adj.total_weight;
    std::vector<double> cluster_total(adj.degree);
    std::vector<int> order = identity_partition(n);
    std::mt19937_64 rng(seed);
    std::map<int, double> weight_to;

    bool moved = true;
    while (moved) {
        moved = false;
        std::shuffle(order.begin(), order.end(), rng);
        for (const int u : order) {
            const auto ui = static_cast<std::size_t>(u);
            const int own = cluster[ui];
            const double k = adj.degree[ui];
            weight_to.clear();
            for (const auto &[v, w] : adj.neighbours[ui]) {
                weight_to[cluster[static_cast<std::size_t>(v)]] += w;
            }
            cluster_total[static_cast<std::size_t>(own)] -= k;
            auto gain = [&](int c) {
                const double w = weight_to.contains(c) ? weight_to.at(c) : 0.0;
                return w / m - rho * cluster_total[static_cast<std::size_t>(c)] * k / (2.0 * m * m);
            };
            int best = own;
            double best_gain = gain(own);
            for (const auto &[c, w] : weight_to) {
                if (c == own) {
                    continue;
                }
                const double g = gain(c);
                if (g > best_gain + kGainTolerance) {
                    best = c;
                    best_gain = g;
                }
            }
            cluster_total[static_cast<std::size_t>(best)] += k;
            if (best != own) {
                cluster[ui] = best;
                moved = true;
            }
        }
        if (sweep_modularity != nullptr) {
            sweep_modularity->push_back(modularity(graph, cluster, rho));
        }
    }
    return compact(cluster);
}

auto aggregate(const WeightedGraph &graph, const std::vector<int> &partition) -> WeightedGraph {
    WeightedGraph out;
    out.node_count = partition.empty() ? 0 : *std::ranges::max_element(partition) + 1;
    std::map<std::pair<int, int>, double> merged;
    for (const auto &e : graph.edges) {
        int a = partition[static_cast<std::size_t>(e.u)];
        int b = partition[static_cast<std::size_t>(e.v)];
        if (a > b) {
            std::swap(a, b);
        }
        merged[{a, b}] += e.weight;
    }
    for (const auto &[key, w] : merged) {
        out.edges.push_back({key.first, key.second, w});
    }
    return out;
}

auto louvain(const WeightedGraph &graph, double rho, std::uint64_t seed) -> ClusterHierarchy {
    if (graph.node_count <= 0) {
        throw DomainError("louvain needs a non-empty graph");
    }
    if (!(rho > 0.0)) {
        throw DomainError("resolution rho must be positive");
    }
    ClusterHierarchy hierarchy;
    hierarchy.levels.push_back({graph, {}});
    for (std::uint64_t level = 0;; ++level) {
        const WeightedGraph &current = hierarchy.levels.back().graph;
        if (current.node_count <= 1) {
            break;
        }
        std::vector<double> sweeps{modularity(current, identity_partition(current.node_count), rho)};
        auto partition = louvain_local_moves(current, rho, seed + level * 0x9E3779B97F4A7C15ULL, &sweeps);
        const double q_old = sweeps.front();
        const double q_new = modularity(current, partition, rho);
        hierarchy.sweep_modularity.push_back(std::move(sweeps));
        if (!(q_new > q_old + kGainTolerance)) {
            break;
        }
        WeightedGraph next = aggregate(current, partition);
        hierarchy.levels.back().partition_map = std::move(partition);
        hierarchy.levels.push_back({std::move(next), {}});
    }
    return hierarchy;
}

}  // namespace sgphs
