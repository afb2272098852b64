#include <sgphs/bootstrap.h>

#include <sgphs/errors.h>
#include <sgphs/louvain.h>
#include <sgphs/nn/losses.h>

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

namespace sgphs {

namespace {

auto reshape(const Eigen::VectorXd &values, const std::vector<int> &shape) -> Tensor {
    return Tensor(shape, std::vector<double>(values.data(), values.data() + values.size()));
}

// One optimizer step on the mean of per-example losses.
template <typename PerExample>
void averaged_step(nn::Mlp &net, nn::Adam &optimizer, std::size_t count, const std::string &what,
                   PerExample &&per_example) {
    net.zero_grad();
    const double scale = 1.0 / static_cast<double>(count);
    nn::MlpCache cache;
    for (std::size_t i = 0; i < count; ++i) {
        const auto [input, grad_fn] = per_example(i);
        const Eigen::VectorXd out = net.forward(input, cache);
        const Eigen::VectorXd grad = grad_fn(out) * scale;
        net.backward(cache, grad);
    }
    try {
        optimizer.step(net.parameters());
    } catch (const TrainingError &e) {
        throw TrainingError(fmt::format("{} update failed: {}", what, e.what()), e.parameter_name());
    }
}

void heuristic_step(nn::Mlp &net, nn::Adam &optimizer, const Problem &problem, const Trajectory &trajectory) {
    const std::size_t t = trajectory.length();
    averaged_step(net, optimizer, trajectory.states.size(), "heuristic", [&](std::size_t i) {
        const double target = static_cast<double>(t - i);
        return std::pair{problem.encode(trajectory.states[i]).as_vector(), [target](const Eigen::VectorXd &out) {
                             return nn::mse(out, Eigen::VectorXd::Constant(1, target)).grad;
                         }};
    });
}

void policy_step(nn::Mlp &net, nn::Adam &optimizer, const std::vector<Eigen::VectorXd> &inputs,
                 const std::vector<int> &targets, const std::string &what) {
    averaged_step(net, optimizer, inputs.size(), what, [&](std::size_t i) {
        const int target = targets[i];
        return std::pair{inputs[i],
                         [target](const Eigen::VectorXd &out) { return nn::cross_entropy(out, target).grad; }};
    });
}

// VQVAE step on (first, last) of the segment followed by a low-policy step
// on every action of it. Returns the quantization index.
auto train_pair(SubgoalPolicyBundle &bundle, const Problem &problem, const Trajectory &segment,
                const TrainConfig &config, TrainCounters &counters) -> int {
    const Tensor current = problem.encode(segment.states.front());
    const Tensor target = problem.encode(segment.states.back());
    const auto step = train_subgoal_pair(bundle.vqvae(), bundle.vqvae_optimizer(), current, target);
    ++counters.vqvae_steps;

    const Tensor subgoal =
        config.condition_on_reconstruction ? reshape(step.reconstruction, problem.observation_shape()) : target;
    std::vector<Eigen::VectorXd> inputs;
    for (std::size_t j = 0; j < segment.actions.size(); ++j) {
        inputs.push_back(concat_channels(problem.encode(segment.states[j]), subgoal).as_vector());
    }
    policy_step(bundle.low_policy(), bundle.low_optimizer(), inputs, segment.actions, "low_policy");
    ++counters.low_policy_steps;
    return step.index;
}

}  // namespace

void validate(const TrainConfig &config) {
    if (config.initial_budget < 1) {
        throw ConfigurationError("initial budget must be at least 1");
    }
    if (!(config.improvement_factor >= 0.0)) {
        throw ConfigurationError("improvement factor must be non-negative");
    }
    if (config.max_budget < config.initial_budget) {
        throw ConfigurationError("max budget must not be below the initial budget");
    }
    if (config.cluster_level < 0) {
        throw ConfigurationError("cluster level must be non-negative");
    }
    if (!(config.resolution > 0.0)) {
        throw ConfigurationError("louvain resolution must be positive");
    }
    if (config.pairs_per_failure < 1) {
        throw ConfigurationError("pairs per failure must be at least 1");
    }
    if (config.max_iterations < 0 || config.max_hours < 0.0 || config.threads < 0) {
        throw ConfigurationError("iteration, time and thread caps must be non-negative");
    }
    if (config.evaluator.algorithm == Algorithm::uniform_cost) {
        throw ConfigurationError("training needs a learned evaluation function");
    }
}

auto next_budget(std::int64_t budget, std::int64_t solved, std::int64_t solved_previous,
                 std::int64_t solved_expansions, std::int64_t unsolved, std::int64_t initial_budget,
                 double improvement_factor) -> std::int64_t {
    if (unsolved < 0 || solved_expansions < 0) {
        throw UsageError("expansion and problem counts must be non-negative");
    }
    if (static_cast<double>(solved) > (1.0 + improvement_factor) * static_cast<double>(solved_previous)) {
        return std::max(initial_budget, budget / 2);
    }
    if (unsolved == 0) {
        throw UsageError("budget increase requested with no unsolved problems left");
    }
    const std::int64_t share = (solved_expansions + unsolved - 1) / unsolved;
    return 2 * budget + share;
}

auto to_string(StopReason reason) -> std::string {
    switch (reason) {
    case StopReason::all_solved:
        return "all_solved";
    case StopReason::validation_solved:
        return "validation_solved";
    case StopReason::wall_clock:
        return "wall_clock";
    case StopReason::max_iterations:
        return "max_iterations";
    case StopReason::budget_exhausted:
        return "budget_exhausted";
    }
    return "unknown";
}

void train_from_solution(PolicyModel &model, const Problem &problem, const Trajectory &trajectory,
                         SegmentStats &stats, std::mt19937_64 &rng, const TrainConfig &config,
                         TrainCounters &counters) {
    if (!replays(problem, trajectory)) {
        throw UsageError("solution trajectory does not replay");
    }
    if (auto *flat = dynamic_cast<FlatPolicyModel *>(&model)) {
        heuristic_step(flat->heuristic_net(), flat->heuristic_optimizer(), problem, trajectory);
        ++counters.heuristic_steps;
        if (trajectory.length() > 0) {
            std::vector<Eigen::VectorXd> inputs;
            for (std::size_t j = 0; j < trajectory.length(); ++j) {
                inputs.push_back(problem.encode(trajectory.states[j]).as_vector());
            }
            policy_step(flat->policy_net(), flat->policy_optimizer(), inputs, trajectory.actions, "policy");
            ++counters.low_policy_steps;
        }
        return;
    }
    auto &bundle = dynamic_cast<SubgoalPolicyBundle &>(model);
    heuristic_step(bundle.heuristic_net(), bundle.heuristic_optimizer(), problem, trajectory);
    ++counters.heuristic_steps;
    if (trajectory.length() == 0) {
        return;
    }
    for (const auto &segment : segment_solution(trajectory, stats, rng)) {
        const int c = train_pair(bundle, problem, segment, config, counters);
        std::vector<Eigen::VectorXd> inputs;
        for (std::size_t j = 0; j < segment.actions.size(); ++j) {
            inputs.push_back(problem.encode(segment.states[j]).as_vector());
        }
        policy_step(bundle.high_policy(), bundle.high_optimizer(), inputs, std::vector<int>(inputs.size(), c),
                    "high_policy");
        ++counters.high_policy_steps;
    }
}

auto train_from_failure(SubgoalPolicyBundle &bundle, const Problem &problem, const SearchResult &tree,
                        SegmentStats &stats, std::mt19937_64 &rng, const TrainConfig &config,
                        TrainCounters &counters) -> int {
    const SearchGraph g0 = extract_graph(tree);
    if (g0.node_count() < 2 || g0.edges.empty()) {
        ++counters.skipped_failures;
        return 0;
    }
    const auto hierarchy = louvain(to_undirected(g0), config.resolution, rng());
    int used = 0;
    for (int p = 0; p < config.pairs_per_failure; ++p) {
        const auto pair = sample_subgoal_pair(hierarchy, config.cluster_level, g0, rng, &stats);
        if (!pair) {
            continue;
        }
        train_pair(bundle, problem, pair->trajectory, config, counters);
        ++used;
    }
    if (used == 0) {
        ++counters.skipped_failures;
    }
    return used;
}

auto resolve_thread_count(int requested) -> int {
    if (requested > 0) {
        return requested;
    }
    if (const char *env = std::getenv("SGPHS_THREADS"); env != nullptr && *env != '\0') {
        char *end = nullptr;
        const long value = std::strtol(env, &end, 10);
        if (end != nullptr && *end == '\0' && value > 0) {
            return static_cast<int>(value);
        }
        throw ConfigurationError(fmt::format("SGPHS_THREADS must be a positive integer, got '{}'", env));
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

auto search_all(const std::vector<const Problem *> &problems, const Guidance &guidance,
                const EvaluationFunction &evaluator, std::int64_t budget, int threads) -> std::vector<SearchResult> {
    std::vector<SearchResult> results(problems.size());
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(resolve_thread_count(threads)),
                                               std::max<std::size_t>(problems.size(), 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < problems.size(); ++i) {
            results[i] = bfs_search(*problems[i], guidance, evaluator, budget);
        }
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < problems.size(); i = next++) {
            try {
                results[i] = bfs_search(*problems[i], guidance, evaluator, budget);
            } catch (...) {
                const std::scoped_lock lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back(work);
    }
    for (auto &t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return results;
}

auto run_bootstrap(const std::vector<const Problem *> &training, const std::vector<const Problem *> &validation,
                   PolicyModel &model, const TrainConfig &config, const SweepCallback &on_sweep)
    -> BootstrapResult {
    validate(config);
    if (training.empty()) {
        throw UsageError("bootstrap needs at least one training problem");
    }
    auto *bundle = dynamic_cast<SubgoalPolicyBundle *>(&model);
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

    BootstrapResult result;
    result.solved.assign(training.size(), false);
    std::mt19937_64 rng(config.seed);
    SegmentStats stats;
    std::int64_t budget = config.initial_budget;
    std::int64_t cumulative = 0;
    int solved_total = 0;
    int solved_previous = 0;

    for (int iteration = 0;; ++iteration) {
        std::vector<std::size_t> pending;
        std::vector<const Problem *> batch;
        for (std::size_t i = 0; i < training.size(); ++i) {
            if (!result.solved[i]) {
                pending.push_back(i);
                batch.push_back(training[i]);
            }
        }
        const auto snapshot = model.clone();
        const auto searches = search_all(batch, *snapshot, config.evaluator, budget, config.threads);

        IterationReport report;
        report.iteration = iteration;
        report.budget = budget;
        std::int64_t solved_expansions = 0;
        const int skipped_before = result.counters.skipped_failures;
        for (std::size_t j = 0; j < pending.size(); ++j) {
            const auto &search = searches[j];
            const Problem &problem = *training[pending[j]];
            report.sweep_expansions += search.expansions_used;
            if (search.solved()) {
                result.solved[pending[j]] = true;
                ++report.new_solved;
                solved_expansions += search.expansions_used;
                train_from_solution(model, problem, reconstruct_path(search), stats, rng, config, result.counters);
            } else if (bundle != nullptr && !config.solution_only) {
                train_from_failure(*bundle, problem, search, stats, rng, config, result.counters);
            }
        }
        solved_total += report.new_solved;
        cumulative += report.sweep_expansions;
        report.solved = solved_total;
        report.cumulative_expansions = cumulative;
        report.skipped_failures = result.counters.skipped_failures - skipped_before;

        bool validation_done = false;
        if (!validation.empty()) {
            const auto checks = search_all(validation, model, config.evaluator, budget, config.threads);
            report.validation_solved =
                static_cast<int>(std::ranges::count_if(checks, [](const SearchResult &r) { return r.solved(); }));
            validation_done = report.validation_solved == static_cast<int>(validation.size());
        }
        report.wall_seconds = elapsed();

        const auto unsolved = static_cast<std::int64_t>(training.size()) - solved_total;
        std::int64_t upcoming = budget;
        std::optional<StopReason> stop;
        if (unsolved == 0) {
            stop = StopReason::all_solved;
        } else if (validation_done) {
            stop = StopReason::validation_solved;
        } else if (config.max_hours > 0.0 && report.wall_seconds >= config.max_hours * 3600.0) {
            stop = StopReason::wall_clock;
        } else if (config.max_iterations > 0 && iteration + 1 >= config.max_iterations) {
            stop = StopReason::max_iterations;
        } else {
            upcoming = next_budget(budget, report.new_solved, solved_previous, solved_expansions, unsolved,
                                   config.initial_budget, config.improvement_factor);
            if (upcoming > config.max_budget) {
                stop = StopReason::budget_exhausted;
            }
        }
        result.reports.push_back(report);
        if (on_sweep) {
            on_sweep(report, model, upcoming);
        }
        if (stop) {
            result.stop_reason = *stop;
            result.final_budget = budget;
            return result;
        }
        solved_previous = report.new_solved;
        budget = upcoming;
    }
}

void write_reports_csv(std::ostream &out, const std::vector<IterationReport> &reports) {
    out << kReportsHeader << '\n';
    for (const auto &r : reports) {
        out << fmt::format("{},{},{},{},{},{:.3f}\n", r.iteration, r.solved, r.new_solved, r.cumulative_expansions,
                           r.budget, r.wall_seconds);
    }
}

}  // namespace sgphs
