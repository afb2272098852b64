#ifndef SGPHS_RUN_CONFIG_H_
#define SGPHS_RUN_CONFIG_H_

#include <sgphs/bootstrap.h>
#include <sgphs/envs/registry.h>
#include <sgphs/models.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace sgphs {

// Command-line algorithm names: levints, levints-sg, phs, phs-sg, wastar.
// The -sg variants search with the subgoal bundle, the rest with the flat model.
struct AlgorithmChoice {
    EvaluationFunction evaluator;
    ModelKind model_kind = ModelKind::subgoal_bundle;
};

[[nodiscard]] auto parse_algorithm_choice(std::string_view name) -> AlgorithmChoice;

struct RunConfig {
    envs::Domain domain = envs::Domain::gridnav;
    std::string algorithm = "phs-sg";
    int count = 100;
    int validation_count = 0;
    std::string problems;  // level file; overrides count when set
    std::string validation_problems;
    std::string out = ".";
    envs::GeneratorOptions generator{};
    ModelConfig model{};
    TrainConfig train{};
    std::uint64_t seed = 0;

    [[nodiscard]] auto algorithm_choice() const -> AlgorithmChoice {
        return parse_algorithm_choice(algorithm);
    }
};

// Checks every field; throws ConfigurationError before any compute.
void validate(const RunConfig &config);

// Overlays a JSON object onto the config. Unknown keys are rejected.
void apply_json(RunConfig &config, std::string_view json_text);
void apply_json_file(RunConfig &config, const std::string &path);

[[nodiscard]] auto to_json(const RunConfig &config) -> std::string;

}  // namespace sgphs

#endif  // SGPHS_RUN_CONFIG_H_
