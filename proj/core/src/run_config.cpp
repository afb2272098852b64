#include <sgphs/run_config.h>

#include <sgphs/checkpoint.h>
#include <sgphs/errors.h>

#include <fmt/format.h>
#include <json.hpp>

#include <functional>
#include <map>

namespace sgphs {

namespace {

using Json = nlohmann::ordered_json;

template <typename T>
auto setter(T RunConfig::*field) {
    return [field](RunConfig &c, const Json &v) { c.*field = v.get<T>(); };
}

using Setter = std::function<void(RunConfig &, const Json &)>;

auto setters() -> const std::map<std::string, Setter> & {
    static const std::map<std::string, Setter> table{
        {"domain", [](RunConfig &c, const Json &v) { c.domain = envs::parse_domain(v.get<std::string>()); }},
        {"algo", setter(&RunConfig::algorithm)},
        {"count", setter(&RunConfig::count)},
        {"validation_count", setter(&RunConfig::validation_count)},
        {"problems", setter(&RunConfig::problems)},
        {"validation_problems", setter(&RunConfig::validation_problems)},
        {"out", setter(&RunConfig::out)},
        {"seed", setter(&RunConfig::seed)},
        {"width", [](RunConfig &c, const Json &v) { c.generator.width = v.get<int>(); }},
        {"height", [](RunConfig &c, const Json &v) { c.generator.height = v.get<int>(); }},
        {"wall_density", [](RunConfig &c, const Json &v) { c.generator.wall_density = v.get<double>(); }},
        {"boxes", [](RunConfig &c, const Json &v) { c.generator.boxes = v.get<int>(); }},
        {"min_cities", [](RunConfig &c, const Json &v) { c.generator.min_cities = v.get<int>(); }},
        {"max_cities", [](RunConfig &c, const Json &v) { c.generator.max_cities = v.get<int>(); }},
        {"hidden_width", [](RunConfig &c, const Json &v) { c.model.hidden_width = v.get<int>(); }},
        {"hidden_layers", [](RunConfig &c, const Json &v) { c.model.hidden_layers = v.get<int>(); }},
        {"codebook_size", [](RunConfig &c, const Json &v) { c.model.vqvae.codebook_size = v.get<int>(); }},
        {"codebook_dim", [](RunConfig &c, const Json &v) { c.model.vqvae.codebook_dim = v.get<int>(); }},
        {"beta", [](RunConfig &c, const Json &v) { c.model.vqvae.beta = v.get<double>(); }},
        {"lr", [](RunConfig &c, const Json &v) { c.model.optimizer.learning_rate = v.get<double>(); }},
        {"l2", [](RunConfig &c, const Json &v) { c.model.optimizer.l2 = v.get<double>(); }},
        {"initial_budget", [](RunConfig &c, const Json &v) { c.train.initial_budget = v.get<std::int64_t>(); }},
        {"max_budget", [](RunConfig &c, const Json &v) { c.train.max_budget = v.get<std::int64_t>(); }},
        {"improvement_factor", [](RunConfig &c, const Json &v) { c.train.improvement_factor = v.get<double>(); }},
        {"cluster_level", [](RunConfig &c, const Json &v) { c.train.cluster_level = v.get<int>(); }},
        {"pairs_per_failure", [](RunConfig &c, const Json &v) { c.train.pairs_per_failure = v.get<int>(); }},
        {"solution_only", [](RunConfig &c, const Json &v) { c.train.solution_only = v.get<bool>(); }},
        {"condition_on_reconstruction",
         [](RunConfig &c, const Json &v) { c.train.condition_on_reconstruction = v.get<bool>(); }},
        {"max_iterations", [](RunConfig &c, const Json &v) { c.train.max_iterations = v.get<int>(); }},
        {"max_hours", [](RunConfig &c, const Json &v) { c.train.max_hours = v.get<double>(); }},
        {"threads", [](RunConfig &c, const Json &v) { c.train.threads = v.get<int>(); }},
        {"wastar_weight", [](RunConfig &c, const Json &v) { c.train.evaluator.weight = v.get<double>(); }},
    };
    return table;
}

}  // namespace

auto parse_algorithm_choice(std::string_view name) -> AlgorithmChoice {
    if (name == "levints") {
        return {EvaluationFunction::levints(), ModelKind::flat_policy};
    }
    if (name == "levints-sg") {
        return {EvaluationFunction::levints(), ModelKind::subgoal_bundle};
    }
    if (name == "phs") {
        return {EvaluationFunction::phs(), ModelKind::flat_policy};
    }
    if (name == "phs-sg") {
        return {EvaluationFunction::phs(), ModelKind::subgoal_bundle};
    }
    if (name == "wastar") {
        return {EvaluationFunction::wastar(), ModelKind::flat_policy};
    }
    throw ConfigurationError(
        fmt::format("unknown algorithm '{}' (expected levints, levints-sg, phs, phs-sg or wastar)", name));
}

void validate(const RunConfig &config) {
    const auto choice = parse_algorithm_choice(config.algorithm);
    if (config.count < 0 || config.validation_count < 0) {
        throw ConfigurationError("problem counts must be non-negative");
    }
    if (config.model.hidden_width < 1 || config.model.hidden_layers < 0) {
        throw ConfigurationError("network width must be positive and depth non-negative");
    }
    if (config.model.vqvae.codebook_size < 1 || config.model.vqvae.codebook_dim < 1) {
        throw ConfigurationError("codebook size and dimension must be positive");
    }
    if (!(config.model.vqvae.beta > 0.0)) {
        throw ConfigurationError("commitment weight beta must be positive");
    }
    if (!(config.model.optimizer.learning_rate > 0.0) || !(config.model.optimizer.l2 >= 0.0)) {
        throw ConfigurationError("learning rate must be positive and l2 non-negative");
    }
    if (config.generator.min_cities > config.generator.max_cities) {
        throw ConfigurationError("min_cities exceeds max_cities");
    }
    TrainConfig train = config.train;
    train.evaluator.algorithm = choice.evaluator.algorithm;
    validate(train);
}

void apply_json(RunConfig &config, std::string_view json_text) {
    Json doc;
    try {
        doc = Json::parse(json_text);
    } catch (const Json::exception &e) {
        throw ConfigurationError(fmt::format("config is not valid JSON: {}", e.what()));
    }
    if (!doc.is_object()) {
        throw ConfigurationError("config must be a JSON object");
    }
    const auto &table = setters();
    for (const auto &[key, value] : doc.items()) {
        const auto it = table.find(key);
        if (it == table.end()) {
            throw ConfigurationError(fmt::format("unknown config key '{}'", key));
        }
        try {
            it->second(config, value);
        } catch (const Json::exception &e) {
            throw ConfigurationError(fmt::format("config key '{}' has the wrong type: {}", key, e.what()));
        }
    }
}

void apply_json_file(RunConfig &config, const std::string &path) {
    apply_json(config, read_file(path));
}

auto to_json(const RunConfig &c) -> std::string {
    const Json doc{
        {"domain", envs::to_string(c.domain)},
        {"algo", c.algorithm},
        {"count", c.count},
        {"validation_count", c.validation_count},
        {"problems", c.problems},
        {"validation_problems", c.validation_problems},
        {"out", c.out},
        {"seed", c.seed},
        {"width", c.generator.width},
        {"height", c.generator.height},
        {"wall_density", c.generator.wall_density},
        {"boxes", c.generator.boxes},
        {"min_cities", c.generator.min_cities},
        {"max_cities", c.generator.max_cities},
        {"hidden_width", c.model.hidden_width},
        {"hidden_layers", c.model.hidden_layers},
        {"codebook_size", c.model.vqvae.codebook_size},
        {"codebook_dim", c.model.vqvae.codebook_dim},
        {"beta", c.model.vqvae.beta},
        {"lr", c.model.optimizer.learning_rate},
        {"l2", c.model.optimizer.l2},
        {"initial_budget", c.train.initial_budget},
        {"max_budget", c.train.max_budget},
        {"improvement_factor", c.train.improvement_factor},
        {"cluster_level", c.train.cluster_level},
        {"pairs_per_failure", c.train.pairs_per_failure},
        {"solution_only", c.train.solution_only},
        {"condition_on_reconstruction", c.train.condition_on_reconstruction},
        {"max_iterations", c.train.max_iterations},
        {"max_hours", c.train.max_hours},
        {"threads", c.train.threads},
        {"wastar_weight", c.train.evaluator.weight},
    };
    return doc.dump(2);
}

}  // namespace sgphs
