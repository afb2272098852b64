#ifndef SGPHS_BOOTSTRAP_H_
#define SGPHS_BOOTSTRAP_H_

#include <sgphs/evaluators.h>
#include <sgphs/models.h>
#include <sgphs/problem.h>
#include <sgphs/search.h>
#include <sgphs/subgoal_data.h>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace sgphs {

struct TrainConfig {
    std::int64_t initial_budget = 4000;
    double improvement_factor = 0.1;
    // the loop aborts instead of raising the budget past this
    std::int64_t max_budget = std::int64_t{1} << 40;
    int cluster_level = kDefaultClusterLevel;
    double resolution = 1.0;
    int pairs_per_failure = 1;
    bool solution_only = false;
    // low policy sees the VQVAE reconstruction of the target (false: the raw target)
    bool condition_on_reconstruction = true;
    EvaluationFunction evaluator = EvaluationFunction::phs();
    std::uint64_t seed = 0;
    int max_iterations = 0;  // 0: no cap
    double max_hours = 0.0;  // 0: no cap
    int threads = 0;         // 0: SGPHS_THREADS, else hardware concurrency
};

void validate(const TrainConfig &config);

// Next sweep's budget. Reduced to max(B0, B/2) when more than (1 + b) times
// as many problems were solved as in the previous sweep, otherwise raised to
// 2B + ceil(T / s) where T is the expansions spent on this sweep's solved
// problems and s the number still unsolved.
[[nodiscard]] auto next_budget(std::int64_t budget, std::int64_t solved, std::int64_t solved_previous,
                               std::int64_t solved_expansions, std::int64_t unsolved, std::int64_t initial_budget,
                               double improvement_factor) -> std::int64_t;

struct IterationReport {
    int iteration = 0;
    int solved = 0;
    int new_solved = 0;
    std::int64_t cumulative_expansions = 0;
    std::int64_t budget = 0;
    double wall_seconds = 0.0;
    std::int64_t sweep_expansions = 0;
    int skipped_failures = 0;
    int validation_solved = -1;  // -1 when there is no validation set

    auto operator==(const IterationReport &) const -> bool = default;
};

struct TrainCounters {
    int heuristic_steps = 0;
    int low_policy_steps = 0;
    int high_policy_steps = 0;
    int vqvae_steps = 0;
    int skipped_failures = 0;
};

enum class StopReason { all_solved, validation_solved, wall_clock, max_iterations, budget_exhausted };

[[nodiscard]] auto to_string(StopReason reason) -> std::string;

struct BootstrapResult {
    std::vector<IterationReport> reports;
    std::vector<bool> solved;
    std::int64_t final_budget = 0;
    StopReason stop_reason = StopReason::all_solved;
    TrainCounters counters;
};

// Called after every sweep, once the model has been updated.
using SweepCallback = std::function<void(const IterationReport &, PolicyModel &, std::int64_t next_budget)>;

// Solution branch: heuristic regression on the cost-to-go of every state,
// then for the subgoal bundle a VQVAE step, a low-policy step and a
// high-policy step per segment. The flat model gets one policy step instead.
void train_from_solution(PolicyModel &model, const Problem &problem, const Trajectory &trajectory,
                         SegmentStats &stats, std::mt19937_64 &rng, const TrainConfig &config,
                         TrainCounters &counters);

// Failure branch: cluster the expanded states, sample subgoal pairs and
// update the VQVAE and low policy only. Returns the number of pairs used.
auto train_from_failure(SubgoalPolicyBundle &bundle, const Problem &problem, const SearchResult &tree,
                        SegmentStats &stats, std::mt19937_64 &rng, const TrainConfig &config,
                        TrainCounters &counters) -> int;

// Searches every problem with one shared model, optionally in parallel.
// Results are index-aligned with the problems.
[[nodiscard]] auto search_all(const std::vector<const Problem *> &problems, const Guidance &guidance,
                              const EvaluationFunction &evaluator, std::int64_t budget, int threads)
    -> std::vector<SearchResult>;

[[nodiscard]] auto resolve_thread_count(int requested) -> int;

[[nodiscard]] auto run_bootstrap(const std::vector<const Problem *> &training,
                                 const std::vector<const Problem *> &validation, PolicyModel &model,
                                 const TrainConfig &config, const SweepCallback &on_sweep = {}) -> BootstrapResult;

inline constexpr const char *kReportsHeader =
    "iteration,solved,new_solved,cumulative_expansions,budget,wall_seconds";

void write_reports_csv(std::ostream &out, const std::vector<IterationReport> &reports);

}  // namespace sgphs

#endif  // SGPHS_BOOTSTRAP_H_
