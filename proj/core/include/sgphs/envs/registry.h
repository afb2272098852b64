#ifndef SGPHS_ENVS_REGISTRY_H_
#define SGPHS_ENVS_REGISTRY_H_

#include <sgphs/problem.h>

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace sgphs::envs {

enum class Domain { gridnav, sokoban, tsp };

[[nodiscard]] auto to_string(Domain domain) -> std::string;
[[nodiscard]] auto parse_domain(std::string_view name) -> Domain;

struct GeneratorOptions {
    int width = 0;  // 0: domain default (gridnav 8, sokoban 10, tsp 10)
    int height = 0;
    double wall_density = 0.2;  // gridnav walls, tsp obstacles use half of it
    int boxes = 2;
    int min_cities = 4;
    int max_cities = 6;
};

using ProblemList = std::vector<std::unique_ptr<Problem>>;

[[nodiscard]] auto parse_problems(Domain domain, std::string_view text) -> ProblemList;
[[nodiscard]] auto load_problems(Domain domain, const std::string &path) -> ProblemList;

// Level text of a problem's initial position.
[[nodiscard]] auto serialize_problem(const Problem &problem) -> std::vector<std::string>;
[[nodiscard]] auto serialize_problems(const ProblemList &problems) -> std::string;

// Instance i is drawn from its own seed derived from (seed, i).
[[nodiscard]] auto generate_problems(Domain domain, int count, std::uint64_t seed,
                                     const GeneratorOptions &options = {}) -> ProblemList;

[[nodiscard]] auto as_pointers(const ProblemList &problems) -> std::vector<const Problem *>;

}  // namespace sgphs::envs

#endif  // SGPHS_ENVS_REGISTRY_H_
