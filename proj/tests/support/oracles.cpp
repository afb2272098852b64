#include "oracles.h"

#include <sgphs/search.h>
#include <sgphs/subgoal_data.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <tuple>

namespace sgphs::testing {

namespace {

constexpr int kDr[4] = {-1, 1, 0, 0};
constexpr int kDc[4] = {0, 0, -1, 1};

auto neighbour(int cell, int a, int width, int height) -> int {
    const int r = cell / width + kDr[a];
    const int c = cell % width + kDc[a];
    if (r < 0 || c < 0 || r >= height || c >= width) {
        return -1;
    }
    return r * width + c;
}

}  // namespace

auto grid_dijkstra_pops(const envs::GridNavProblem &problem) -> std::int64_t {
    const int w = problem.width();
    const int h = problem.height();
    if (problem.agent() == problem.goal()) {
        return 0;
    }
    using Entry = std::tuple<int, std::uint64_t, int>;  // cost, sequence, cell
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    std::vector<bool> closed(static_cast<std::size_t>(w * h), false);
    std::uint64_t seq = 0;
    open.emplace(0, seq++, problem.agent());
    std::int64_t pops = 0;
    while (!open.empty()) {
        const auto [cost, s, cell] = open.top();
        open.pop();
        ++pops;
        if (closed[static_cast<std::size_t>(cell)]) {
            continue;
        }
        closed[static_cast<std::size_t>(cell)] = true;
        for (int a = 0; a < 4; ++a) {
            const int next = neighbour(cell, a, w, h);
            if (next < 0 || problem.is_wall(next)) {
                continue;
            }
            if (next == problem.goal()) {
                return pops;
            }
            open.emplace(cost + 1, seq++, next);
        }
    }
    return -1;
}

auto grid_bfs_distance(const envs::GridNavProblem &problem) -> int {
    const int w = problem.width();
    const int h = problem.height();
    std::vector<int> dist(static_cast<std::size_t>(w * h), -1);
    std::deque<int> q{problem.agent()};
    dist[static_cast<std::size_t>(problem.agent())] = 0;
    while (!q.empty()) {
        const int u = q.front();
        q.pop_front();
        for (int a = 0; a < 4; ++a) {
            const int v = neighbour(u, a, w, h);
            if (v >= 0 && !problem.is_wall(v) && dist[static_cast<std::size_t>(v)] < 0) {
                dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                q.push_back(v);
            }
        }
    }
    return dist[static_cast<std::size_t>(problem.goal())];
}

auto matrix_modularity(const WeightedGraph &graph, const std::vector<int> &partition, double rho) -> double {
    const auto n = static_cast<std::size_t>(graph.node_count);
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (const auto &e : graph.edges) {
        const auto u = static_cast<std::size_t>(e.u);
        const auto v = static_cast<std::size_t>(e.v);
        if (u == v) {
            a[u][u] += 2.0 * e.weight;
        } else {
            a[u][v] += e.weight;
            a[v][u] += e.weight;
        }
    }
    std::vector<double> k(n, 0.0);
    double two_m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            k[i] += a[i][j];
        }
        two_m += k[i];
    }
    if (two_m == 0.0) {
        return 0.0;
    }
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (partition[i] == partition[j]) {
                q += a[i][j] - rho * k[i] * k[j] / two_m;
            }
        }
    }
    return q / two_m;
}

auto random_small_graph(std::mt19937_64 &rng) -> WeightedGraph {
    std::uniform_int_distribution<int> size(3, 8);
    std::bernoulli_distribution edge(0.45);
    std::bernoulli_distribution weighted(0.25);
    std::uniform_real_distribution<double> weight(0.5, 3.0);
    WeightedGraph g;
    g.node_count = size(rng);
    for (int u = 0; u < g.node_count; ++u) {
        for (int v = u + 1; v < g.node_count; ++v) {
            if (edge(rng)) {
                g.edges.push_back({u, v, weighted(rng) ? weight(rng) : 1.0});
            }
        }
    }
    return g;
}

auto search_graph_corpus() -> std::vector<WeightedGraph> {
    std::vector<WeightedGraph> corpus;
    for (std::uint64_t seed = 0; corpus.size() < 30; ++seed) {
        const auto p = envs::gridnav_generate(8, 8, 0.25, seed);
        const auto tree = bfs_search(p, UniformGuidance{}, EvaluationFunction::levints(), 8);
        auto g = to_undirected(extract_graph(tree));
        if (!g.edges.empty()) {
            corpus.push_back(std::move(g));
        }
    }
    return corpus;
}

auto barbell_graph(int k) -> WeightedGraph {
    WeightedGraph g;
    g.node_count = 2 * k;
    for (int side = 0; side < 2; ++side) {
        for (int u = 0; u < k; ++u) {
            for (int v = u + 1; v < k; ++v) {
                g.edges.push_back({side * k + u, side * k + v, 1.0});
            }
        }
    }
    g.edges.push_back({k - 1, k, 1.0});
    return g;
}

auto brute_force_modularity(const WeightedGraph &graph, double rho) -> BestPartition {
    const auto n = static_cast<std::size_t>(graph.node_count);
    BestPartition best{-std::numeric_limits<double>::infinity(), {}};
    std::vector<int> labels(n, 0);
    // restricted growth strings: labels[i] <= 1 + max(labels[0..i-1])
    auto recurse = [&](auto &self, std::size_t i, int max_label) -> void {
        if (i == n) {
            const double q = matrix_modularity(graph, labels, rho);
            if (q > best.modularity) {
                best = {q, labels};
            }
            return;
        }
        for (int l = 0; l <= max_label + 1; ++l) {
            labels[i] = l;
            self(self, i + 1, std::max(max_label, l));
        }
    };
    if (n > 0) {
        recurse(recurse, 1, 0);
    }
    return best;
}

auto tsp_brute_force(const envs::TspProblem &problem) -> int {
    const int w = problem.width();
    const int h = problem.height();
    const auto &cities = problem.cities();
    auto leg = [&](int from, int to, const std::vector<bool> &blocked) {
        std::vector<int> dist(static_cast<std::size_t>(w * h), -1);
        std::deque<int> q{from};
        dist[static_cast<std::size_t>(from)] = 0;
        while (!q.empty()) {
            const int u = q.front();
            q.pop_front();
            if (u == to) {
                return dist[static_cast<std::size_t>(u)];
            }
            for (int a = 0; a < 4; ++a) {
                const int v = neighbour(u, a, w, h);
                if (v < 0 || dist[static_cast<std::size_t>(v)] >= 0) {
                    continue;
                }
                if (v != to && blocked[static_cast<std::size_t>(v)]) {
                    continue;
                }
                dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                q.push_back(v);
            }
        }
        return -1;
    };
    std::vector<int> order(cities.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = static_cast<int>(i);
    }
    int best = std::numeric_limits<int>::max();
    do {
        std::vector<bool> blocked(static_cast<std::size_t>(w * h), false);
        for (const int c : cities) {
            blocked[static_cast<std::size_t>(c)] = true;
        }
        int total = 0;
        int at = problem.agent();
        bool ok = true;
        for (const int idx : order) {
            const int target = cities[static_cast<std::size_t>(idx)];
            const int d = leg(at, target, blocked);
            if (d < 0) {
                ok = false;
                break;
            }
            total += d;
            blocked[static_cast<std::size_t>(target)] = false;
            at = target;
        }
        if (ok) {
            const int back = leg(at, cities[static_cast<std::size_t>(order.front())], blocked);
            if (back >= 0) {
                best = std::min(best, total + back);
            }
        }
    } while (std::next_permutation(order.begin(), order.end()));
    return best == std::numeric_limits<int>::max() ? -1 : best;
}

void ReferenceAdam::step(std::vector<double> &w, const std::vector<double> &g) {
    if (m.empty()) {
        m.assign(w.size(), 0.0);
        v.assign(w.size(), 0.0);
    }
    ++t;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double grad = g[i] + l2 * w[i];
        m[i] = beta1 * m[i] + (1 - beta1) * grad;
        v[i] = beta2 * v[i] + (1 - beta2) * grad * grad;
        const double mh = m[i] / (1 - std::pow(beta1, t));
        const double vh = v[i] / (1 - std::pow(beta2, t));
        w[i] -= lr * mh / (std::sqrt(vh) + eps);
    }
}

}  // namespace sgphs::testing
