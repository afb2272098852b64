#include "cli.h"

#include <sgphs/bootstrap.h>
#include <sgphs/checkpoint.h>
#include <sgphs/envs/registry.h>
#include <sgphs/errors.h>
#include <sgphs/louvain.h>
#include <sgphs/run_config.h>
#include <sgphs/search.h>
#include <sgphs/subgoal_data.h>

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

namespace sgphs::cli {

namespace {

namespace fs = std::filesystem;

struct CommonOptions {
    std::string domain = "gridnav";
    std::string algo = "phs-sg";
    std::uint64_t seed = 0;
    std::string config;
};

struct TrainOptions {
    int count = 100;
    int validation_count = 0;
    std::string problems;
    std::string validation_problems;
    std::int64_t budget = 4000;
    double density = 0.2;
    int codebook_size = 4;
    int codebook_dim = 128;
    double beta = 0.25;
    int cluster_level = kDefaultClusterLevel;
    double lr = 3e-4;
    double l2 = 1e-4;
    std::string out;
    bool solution_only = false;
    bool raw_target = false;
    double max_hours = 0.0;
    int max_iterations = 0;
    int threads = 0;
    int hidden_width = 128;
    int hidden_layers = 2;
};

struct SearchOptions {
    std::string checkpoint;
    std::string problems;
    int index = 0;
    std::int64_t budget = 4000;
    bool uniform = false;
    std::string out;
    int cluster_level = kDefaultClusterLevel;
    int pairs = 5;
};

struct GenOptions {
    int count = 10;
    std::string out;
    int width = 0;
    int height = 0;
    double density = 0.2;
    int boxes = 2;
};

// Guidance for solve/evaluate/inspect: a checkpointed model or the uniform policy.
struct GuidanceSource {
    std::unique_ptr<PolicyModel> model;
    UniformGuidance uniform;

    [[nodiscard]] auto get() const -> const Guidance & {
        return model ? static_cast<const Guidance &>(*model) : uniform;
    }
};

auto load_guidance(const SearchOptions &options, const AlgorithmChoice &choice, const Problem &sample)
    -> GuidanceSource {
    GuidanceSource source;
    if (options.uniform || options.checkpoint.empty()) {
        return source;
    }
    auto loaded = load_checkpoint(options.checkpoint);
    if (loaded.model->kind() != choice.model_kind) {
        throw ConfigurationError(fmt::format("checkpoint holds a {} model but the algorithm needs {}",
                                             to_string(loaded.model->kind()), to_string(choice.model_kind)));
    }
    if (loaded.model->observation_shape() != sample.observation_shape() ||
        loaded.model->action_count() != sample.action_count()) {
        throw ConfigurationError("checkpoint was trained on a different observation shape or action set");
    }
    source.model = std::move(loaded.model);
    return source;
}

auto format_actions(const Problem &problem, const Trajectory &path) -> std::string {
    std::string out;
    for (std::size_t i = 0; i < path.actions.size(); ++i) {
        if (i > 0) {
            out += ' ';
        }
        out += problem.action_name(path.actions[i]);
    }
    return out;
}

auto exit_code(SearchOutcome outcome) -> int {
    switch (outcome) {
    case SearchOutcome::solved:
        return kExitSuccess;
    case SearchOutcome::timeout:
        return kExitTimeout;
    case SearchOutcome::no_solution:
        return kExitNoSolution;
    }
    return kExitError;
}

void require_directory(const std::string &dir) {
    if (dir.empty() || !fs::is_directory(dir)) {
        throw IoError(fmt::format("output directory '{}' does not exist", dir));
    }
}

void write_text(const std::string &path, const std::string &text, std::ostream &out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    write_file_atomic(path, text);
}

auto select_problem(const envs::ProblemList &problems, int index) -> const Problem & {
    if (index < 0 || static_cast<std::size_t>(index) >= problems.size()) {
        throw UsageError(fmt::format("problem index {} outside 0..{}", index, problems.size()));
    }
    return *problems[static_cast<std::size_t>(index)];
}

auto run_train(const CommonOptions &common, const TrainOptions &options, const CLI::App &cmd, std::ostream &out)
    -> int {
    RunConfig config;
    if (!common.config.empty()) {
        apply_json_file(config, common.config);
    }
    auto given = [&](const char *name) {
        for (const CLI::App *app : {&cmd, static_cast<const CLI::App *>(cmd.get_parent())}) {
            if (const auto *option = app->get_option_no_throw(name); option != nullptr && option->count() > 0) {
                return true;
            }
        }
        return false;
    };
    if (given("--domain")) {
        config.domain = envs::parse_domain(common.domain);
    }
    if (given("--algo")) {
        config.algorithm = common.algo;
    }
    if (given("--seed")) {
        config.seed = common.seed;
    }
    if (given("--count")) {
        config.count = options.count;
    }
    if (given("--validation-count")) {
        config.validation_count = options.validation_count;
    }
    if (given("--problems")) {
        config.problems = options.problems;
    }
    if (given("--validation-problems")) {
        config.validation_problems = options.validation_problems;
    }
    if (given("--density")) {
        config.generator.wall_density = options.density;
    }
    if (given("--budget")) {
        config.train.initial_budget = options.budget;
    }
    if (given("--codebook-size")) {
        config.model.vqvae.codebook_size = options.codebook_size;
    }
    if (given("--codebook-dim")) {
        config.model.vqvae.codebook_dim = options.codebook_dim;
    }
    if (given("--beta")) {
        config.model.vqvae.beta = options.beta;
    }
    if (given("--cluster-level")) {
        config.train.cluster_level = options.cluster_level;
    }
    if (given("--lr")) {
        config.model.optimizer.learning_rate = options.lr;
    }
    if (given("--l2")) {
        config.model.optimizer.l2 = options.l2;
    }
    if (given("--hidden-width")) {
        config.model.hidden_width = options.hidden_width;
        config.model.vqvae.hidden_width = options.hidden_width;
    }
    if (given("--hidden-layers")) {
        config.model.hidden_layers = options.hidden_layers;
        config.model.vqvae.hidden_layers = options.hidden_layers;
    }
    if (given("--solution-only")) {
        config.train.solution_only = options.solution_only;
    }
    if (given("--raw-target")) {
        config.train.condition_on_reconstruction = !options.raw_target;
    }
    if (given("--max-hours")) {
        config.train.max_hours = options.max_hours;
    }
    if (given("--max-iterations")) {
        config.train.max_iterations = options.max_iterations;
    }
    if (given("--threads")) {
        config.train.threads = options.threads;
    }
    if (given("--out")) {
        config.out = options.out;
    }
    validate(config);
    require_directory(config.out);

    const auto choice = config.algorithm_choice();
    const auto training = config.problems.empty()
                              ? envs::generate_problems(config.domain, config.count, config.seed, config.generator)
                              : envs::load_problems(config.domain, config.problems);
    const auto validation =
        config.validation_problems.empty()
            ? envs::generate_problems(config.domain, config.validation_count, config.seed + 1000003U,
                                      config.generator)
            : envs::load_problems(config.domain, config.validation_problems);
    if (training.empty()) {
        throw UsageError("training needs at least one problem");
    }
    const auto shape = training.front()->observation_shape();
    for (const auto &p : training) {
        if (p->observation_shape() != shape) {
            throw ConfigurationError("all training problems must share one grid size");
        }
    }
    for (const auto &p : validation) {
        if (p->observation_shape() != shape) {
            throw ConfigurationError("validation problems must match the training grid size");
        }
    }

    auto model = make_model(choice.model_kind, config.model, shape, training.front()->action_count(), config.seed);
    TrainConfig train = config.train;
    train.evaluator.algorithm = choice.evaluator.algorithm;
    if (train.evaluator.algorithm != Algorithm::wastar) {
        train.evaluator.weight = 1.0;
    }
    train.seed = config.seed;

    const fs::path dir(config.out);
    write_file_atomic((dir / "config.json").string(), to_json(config) + "\n");
    std::vector<IterationReport> reports;
    const auto on_sweep = [&](const IterationReport &report, PolicyModel &current, std::int64_t upcoming) {
        reports.push_back(report);
        std::ostringstream csv;
        write_reports_csv(csv, reports);
        write_file_atomic((dir / "reports.csv").string(), csv.str());
        save_checkpoint((dir / "checkpoint.ckpt").string(), current,
                        {report.iteration, upcoming, config.seed, config.seed, false});
        out << fmt::format("sweep {} solved {}/{} (+{}) budget {} expansions {}\n", report.iteration, report.solved,
                           training.size(), report.new_solved, report.budget, report.cumulative_expansions);
    };
    const auto result = run_bootstrap(envs::as_pointers(training), envs::as_pointers(validation), *model, train,
                                      on_sweep);
    const int last = result.reports.empty() ? 0 : result.reports.back().iteration;
    save_checkpoint((dir / "final.ckpt").string(), *model, {last, result.final_budget, config.seed, config.seed, true});
    out << fmt::format("stopped: {}\n", to_string(result.stop_reason));
    if (result.stop_reason == StopReason::budget_exhausted) {
        throw Error(fmt::format("training aborted: next budget exceeds the maximum of {}", train.max_budget));
    }
    return kExitSuccess;
}

auto run_solve(const CommonOptions &common, const SearchOptions &options, std::ostream &out) -> int {
    const auto domain = envs::parse_domain(common.domain);
    const auto choice = parse_algorithm_choice(common.algo);
    const auto problems = envs::load_problems(domain, options.problems);
    const Problem &problem = select_problem(problems, options.index);
    const auto guidance = load_guidance(options, choice, problem);
    const auto result = bfs_search(problem, guidance.get(), choice.evaluator, options.budget);
    std::size_t length = 0;
    if (result.solved()) {
        const auto path = reconstruct_path(result);
        length = path.length();
        out << format_actions(problem, path) << '\n';
    } else {
        out << '\n';
    }
    out << fmt::format("outcome={} expansions={} length={}\n", to_string(result.outcome), result.expansions_used,
                       result.solved() ? std::to_string(length) : std::string("-"));
    return exit_code(result.outcome);
}

auto run_evaluate(const CommonOptions &common, const SearchOptions &options, std::ostream &out) -> int {
    const auto domain = envs::parse_domain(common.domain);
    const auto choice = parse_algorithm_choice(common.algo);
    const auto problems = envs::load_problems(domain, options.problems);
    GuidanceSource guidance;
    if (!problems.empty()) {
        guidance = load_guidance(options, choice, *problems.front());
    }
    std::string csv = "instance,solved,expansions,length\n";
    int solved = 0;
    double expansions = 0.0;
    double length = 0.0;
    for (std::size_t i = 0; i < problems.size(); ++i) {
        const auto result = bfs_search(*problems[i], guidance.get(), choice.evaluator, options.budget);
        if (result.solved()) {
            const auto path_length = reconstruct_path(result).length();
            ++solved;
            expansions += static_cast<double>(result.expansions_used);
            length += static_cast<double>(path_length);
            csv += fmt::format("{},1,{},{}\n", i, result.expansions_used, path_length);
        } else {
            csv += fmt::format("{},0,{},\n", i, result.expansions_used);
        }
    }
    if (solved > 0) {
        csv += fmt::format("summary,{},{},{}\n", solved, expansions / solved, length / solved);
    } else {
        csv += "summary,0,,\n";
    }
    write_text(options.out, csv, out);
    return kExitSuccess;
}

auto run_gen(const CommonOptions &common, const GenOptions &options, std::ostream &out) -> int {
    const auto domain = envs::parse_domain(common.domain);
    if (options.count < 0) {
        throw UsageError("--count must be non-negative");
    }
    if (options.count == 0) {
        out << "no problems requested; nothing written\n";
        return kExitSuccess;
    }
    if (options.out.empty()) {
        throw UsageError("gen-problems needs --out");
    }
    envs::GeneratorOptions generator;
    generator.width = options.width;
    generator.height = options.height;
    generator.wall_density = options.density;
    generator.boxes = options.boxes;
    const auto problems = envs::generate_problems(domain, options.count, common.seed, generator);
    write_file_atomic(options.out, envs::serialize_problems(problems));
    out << fmt::format("wrote {} {} problems to {}\n", problems.size(), envs::to_string(domain), options.out);
    return kExitSuccess;
}

auto run_inspect(const CommonOptions &common, const SearchOptions &options, std::ostream &out) -> int {
    const auto domain = envs::parse_domain(common.domain);
    const auto choice = parse_algorithm_choice(common.algo);
    const auto problems = envs::load_problems(domain, options.problems);
    const Problem &problem = select_problem(problems, options.index);
    const auto guidance = load_guidance(options, choice, problem);
    const auto result = bfs_search(problem, guidance.get(), choice.evaluator, options.budget);
    const auto g0 = extract_graph(result);

    std::string text = fmt::format("# outcome {} expansions {} states {} edges {}\n", to_string(result.outcome),
                                   result.expansions_used, g0.node_count(), g0.edges.size());
    text += "# g0 directed\n";
    for (const auto &e : g0.edges) {
        text += fmt::format("{} {} {}\n", e.from, e.to, problem.action_name(e.action));
    }
    const auto hierarchy = louvain(to_undirected(g0), 1.0, common.seed);
    for (std::size_t level = 0; level < hierarchy.size(); ++level) {
        const auto &cg = hierarchy.levels[level];
        text += fmt::format("# level {} nodes {}\n", level, cg.graph.node_count);
        for (const auto &e : cg.graph.edges) {
            text += fmt::format("{} {} {}\n", e.u, e.v, e.weight);
        }
        if (!cg.partition_map.empty()) {
            text += fmt::format("# partition {}\n", level);
            for (std::size_t v = 0; v < cg.partition_map.size(); ++v) {
                text += fmt::format("{} {}\n", v, cg.partition_map[v]);
            }
        }
    }
    std::mt19937_64 rng(common.seed);
    for (int p = 0; p < options.pairs; ++p) {
        const auto pair = sample_subgoal_pair(hierarchy, options.cluster_level, g0, rng);
        if (!pair) {
            text += fmt::format("# pair {} unavailable\n", p);
            continue;
        }
        text += fmt::format("# pair {} level {} clusters {} {}\n", p, pair->level, pair->cluster_cur,
                            pair->cluster_tar);
        text += fmt::format("cur {}\ntar {}\nactions {}\n", problem.state_key(pair->s_cur).to_string(),
                            problem.state_key(pair->s_tar).to_string(), format_actions(problem, pair->trajectory));
    }
    write_text(options.out, text, out);
    return kExitSuccess;
}

void add_search_options(CLI::App *cmd, SearchOptions &options, bool single_problem) {
    cmd->add_option("--checkpoint", options.checkpoint, "Model checkpoint (.ckpt)");
    cmd->add_flag("--uniform", options.uniform, "Search with the uniform policy and zero heuristic");
    cmd->add_option("--problems", options.problems, "Level file")->required();
    cmd->add_option("--budget", options.budget, "Expansion budget")->check(CLI::NonNegativeNumber);
    if (single_problem) {
        cmd->add_option("--index", options.index, "Level index within the file");
    }
}

}  // namespace

auto run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) -> int {
    CLI::App app{"Subgoal-guided policy search: training and solving"};
    app.require_subcommand(1);
    CommonOptions common;
    app.add_option("--domain", common.domain, "gridnav, sokoban or tsp");
    app.add_option("--algo", common.algo, "levints, levints-sg, phs, phs-sg or wastar");
    app.add_option("--seed", common.seed, "Random seed");
    app.add_option("--config", common.config, "JSON run configuration");
    app.fallthrough();

    TrainOptions train;
    auto *train_cmd = app.add_subcommand("train", "Bootstrap a model on a problem set");
    train_cmd->add_option("--count", train.count, "Generated training problems");
    train_cmd->add_option("--validation-count", train.validation_count, "Generated validation problems");
    train_cmd->add_option("--problems", train.problems, "Training level file (instead of generating)");
    train_cmd->add_option("--validation-problems", train.validation_problems, "Validation level file");
    train_cmd->add_option("--density", train.density, "Wall density for generated problems");
    train_cmd->add_option("--budget,--initial-budget", train.budget, "Initial expansion budget");
    train_cmd->add_option("--codebook-size", train.codebook_size);
    train_cmd->add_option("--codebook-dim", train.codebook_dim);
    train_cmd->add_option("--beta", train.beta, "Commitment loss weight");
    train_cmd->add_option("--cluster-level", train.cluster_level, "Cluster level used to sample subgoal pairs");
    train_cmd->add_option("--lr", train.lr);
    train_cmd->add_option("--l2", train.l2);
    train_cmd->add_option("--hidden-width", train.hidden_width);
    train_cmd->add_option("--hidden-layers", train.hidden_layers);
    train_cmd->add_option("--out", train.out, "Output directory (must exist)");
    train_cmd->add_flag("--solution-only", train.solution_only, "Skip training on failed searches");
    train_cmd->add_flag("--raw-target", train.raw_target, "Condition the low policy on raw targets");
    train_cmd->add_option("--max-hours", train.max_hours, "Wall-clock cap");
    train_cmd->add_option("--max-iterations", train.max_iterations, "Sweep cap");
    train_cmd->add_option("--threads", train.threads, "Search threads (default: SGPHS_THREADS)");

    SearchOptions solve;
    auto *solve_cmd = app.add_subcommand("solve", "Solve one level");
    add_search_options(solve_cmd, solve, true);

    SearchOptions evaluate;
    auto *evaluate_cmd = app.add_subcommand("evaluate", "Search every level and write a metrics CSV");
    add_search_options(evaluate_cmd, evaluate, false);
    evaluate_cmd->add_option("--out", evaluate.out, "CSV path (default stdout)");

    GenOptions gen;
    auto *gen_cmd = app.add_subcommand("gen-problems", "Generate a level file");
    gen_cmd->add_option("--count", gen.count);
    gen_cmd->add_option("--out", gen.out, "Level file to write");
    gen_cmd->add_option("--width", gen.width);
    gen_cmd->add_option("--height", gen.height);
    gen_cmd->add_option("--density", gen.density);
    gen_cmd->add_option("--boxes", gen.boxes);

    SearchOptions inspect;
    auto *inspect_cmd = app.add_subcommand("inspect-tree", "Dump the search graph, its clusters and subgoal pairs");
    add_search_options(inspect_cmd, inspect, true);
    inspect_cmd->add_option("--out", inspect.out, "Output path (default stdout)");
    inspect_cmd->add_option("--cluster-level", inspect.cluster_level);
    inspect_cmd->add_option("--pairs", inspect.pairs, "Subgoal pairs to sample");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitSuccess : kExitError;
    }

    try {
        if (*train_cmd) {
            return run_train(common, train, *train_cmd, out);
        }
        if (*solve_cmd) {
            return run_solve(common, solve, out);
        }
        if (*evaluate_cmd) {
            return run_evaluate(common, evaluate, out);
        }
        if (*gen_cmd) {
            return run_gen(common, gen, out);
        }
        if (*inspect_cmd) {
            return run_inspect(common, inspect, out);
        }
    } catch (const VersionMismatchError &e) {
        err << fmt::format("error: checkpoint format version {} is not supported (this build reads version {})\n",
                           e.found(), e.expected());
        return kExitError;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}

}  // namespace sgphs::cli
