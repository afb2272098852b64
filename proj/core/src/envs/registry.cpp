#include <sgphs/envs/registry.h>

#include <sgphs/envs/gridnav.h>
#include <sgphs/envs/level_text.h>
#include <sgphs/envs/sokoban.h>
#include <sgphs/envs/tsp.h>
#include <sgphs/errors.h>

#include <fmt/format.h>

#include <fstream>
#include <random>
#include <sstream>

namespace sgphs::envs {

namespace {

auto instance_seed(std::uint64_t seed, int index) -> std::uint64_t {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index)};
    std::mt19937_64 rng(seq);
    return rng();
}

}  // namespace

auto to_string(Domain domain) -> std::string {
    switch (domain) {
    case Domain::gridnav:
        return "gridnav";
    case Domain::sokoban:
        return "sokoban";
    case Domain::tsp:
        return "tsp";
    }
    return "unknown";
}

auto parse_domain(std::string_view name) -> Domain {
    if (name == "gridnav") {
        return Domain::gridnav;
    }
    if (name == "sokoban") {
        return Domain::sokoban;
    }
    if (name == "tsp") {
        return Domain::tsp;
    }
    throw ConfigurationError(fmt::format("unknown domain '{}' (expected gridnav, sokoban or tsp)", name));
}

auto parse_problems(Domain domain, std::string_view text) -> ProblemList {
    ProblemList out;
    for (const auto &block : parse_level_blocks(text)) {
        switch (domain) {
        case Domain::gridnav:
            out.push_back(std::make_unique<GridNavProblem>(GridNavProblem::parse(block)));
            break;
        case Domain::sokoban:
            out.push_back(std::make_unique<SokobanProblem>(SokobanProblem::parse(block)));
            break;
        case Domain::tsp:
            out.push_back(std::make_unique<TspProblem>(TspProblem::parse(block)));
            break;
        }
    }
    return out;
}

auto load_problems(Domain domain, const std::string &path) -> ProblemList {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(fmt::format("cannot open problem file '{}'", path));
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_problems(domain, buffer.str());
}

auto serialize_problem(const Problem &problem) -> std::vector<std::string> {
    const State start = problem.initial_state();
    if (const auto *p = dynamic_cast<const GridNavProblem *>(&problem)) {
        return p->rows(start);
    }
    if (const auto *p = dynamic_cast<const SokobanProblem *>(&problem)) {
        return p->rows(start);
    }
    if (const auto *p = dynamic_cast<const TspProblem *>(&problem)) {
        return p->rows(start);
    }
    throw UsageError(fmt::format("no level format for domain '{}'", problem.domain()));
}

auto serialize_problems(const ProblemList &problems) -> std::string {
    std::string out;
    for (std::size_t i = 0; i < problems.size(); ++i) {
        out += format_level_block(std::to_string(i), serialize_problem(*problems[i]));
    }
    return out;
}

auto generate_problems(Domain domain, int count, std::uint64_t seed, const GeneratorOptions &options)
    -> ProblemList {
    if (count < 0) {
        throw ConfigurationError("problem count must be non-negative");
    }
    const int default_size = domain == Domain::gridnav ? 8 : 10;
    const int width = options.width > 0 ? options.width : default_size;
    const int height = options.height > 0 ? options.height : default_size;
    ProblemList out;
    for (int i = 0; i < count; ++i) {
        const auto s = instance_seed(seed, i);
        switch (domain) {
        case Domain::gridnav:
            out.push_back(std::make_unique<GridNavProblem>(gridnav_generate(width, height, options.wall_density, s)));
            break;
        case Domain::sokoban:
            out.push_back(std::make_unique<SokobanProblem>(sokoban_generate(width, height, options.boxes, s)));
            break;
        case Domain::tsp: {
            if (options.min_cities > options.max_cities) {
                throw ConfigurationError("min cities exceeds max cities");
            }
            std::mt19937_64 rng(s);
            const int cities = std::uniform_int_distribution<int>(options.min_cities, options.max_cities)(rng);
            out.push_back(std::make_unique<TspProblem>(tsp_generate(width, height, cities, rng(),
                                                                    options.wall_density / 2.0)));
            break;
        }
        }
    }
    return out;
}

auto as_pointers(const ProblemList &problems) -> std::vector<const Problem *> {
    std::vector<const Problem *> out;
    out.reserve(problems.size());
    for (const auto &p : problems) {
        out.push_back(p.get());
    }
    return out;
}

}  // namespace sgphs::envs
