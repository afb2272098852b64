#include <sgphs/envs/gridnav.h>

#include "grid_moves.h"

#include <sgphs/errors.h>

#include <fmt/format.h>

#include <deque>
#include <random>

namespace sgphs::envs {

namespace {

constexpr int kGenerationAttempts = 100;

}  // namespace

GridNavProblem::GridNavProblem(int width, int height, std::vector<std::uint8_t> walls, int agent, int goal)
    : width_(width), height_(height), walls_(std::move(walls)), agent_(agent), goal_(goal) {
    if (width_ < 1 || height_ < 1 || walls_.size() != static_cast<std::size_t>(width_ * height_)) {
        throw ConfigurationError("grid dimensions do not match the wall map");
    }
    const int cells = width_ * height_;
    if (agent_ < 0 || agent_ >= cells || goal_ < 0 || goal_ >= cells) {
        throw ConfigurationError("agent and goal must lie on the grid");
    }
    if (is_wall(agent_) || is_wall(goal_)) {
        throw ConfigurationError("agent and goal must be on free cells");
    }
}

auto GridNavProblem::parse(const LevelBlock &block) -> GridNavProblem {
    check_rectangular(block);
    const int height = static_cast<int>(block.rows.size());
    const int width = static_cast<int>(block.rows.front().size());
    std::vector<std::uint8_t> walls(static_cast<std::size_t>(width * height), 0);
    int agent = -1;
    int goal = -1;
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            const char ch = block.rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            const int cell = r * width + c;
            const int line = block.first_row_line + r;
            switch (ch) {
            case '#':
                walls[static_cast<std::size_t>(cell)] = 1;
                break;
            case '.':
                break;
            case '@':
                if (agent >= 0) {
                    throw ParseError("more than one agent", line, c + 1);
                }
                agent = cell;
                break;
            case 'G':
                if (goal >= 0) {
                    throw ParseError("more than one goal", line, c + 1);
                }
                goal = cell;
                break;
            default:
                throw ParseError(fmt::format("unknown character '{}'", ch), line, c + 1);
            }
        }
    }
    if (agent < 0 || goal < 0) {
        throw ParseError("level needs one agent '@' and one goal 'G'", block.first_row_line, 1);
    }
    return {width, height, std::move(walls), agent, goal};
}

auto GridNavProblem::initial_state() const -> State {
    return State({agent_});
}

auto GridNavProblem::transition(const State &state, ActionIndex action) const -> std::optional<State> {
    if (action < 0 || action >= 4) {
        throw UsageError(fmt::format("action {} outside 0..3", action));
    }
    const auto next = detail::step(state.words().at(0), action, width_, height_);
    if (!next || is_wall(*next)) {
        return std::nullopt;
    }
    return State({*next});
}

auto GridNavProblem::is_goal(const State &state) const -> bool {
    return state.words().at(0) == goal_;
}

auto GridNavProblem::encode(const State &state) const -> Tensor {
    Tensor t(observation_shape());
    const int agent = state.words().at(0);
    for (int cell = 0; cell < width_ * height_; ++cell) {
        const int r = cell / width_;
        const int c = cell % width_;
        t.at(0, r, c) = is_wall(cell) ? 1.0 : 0.0;
        t.at(1, r, c) = cell == agent ? 1.0 : 0.0;
        t.at(2, r, c) = cell == goal_ ? 1.0 : 0.0;
    }
    return t;
}

auto GridNavProblem::observation_shape() const -> std::vector<int> {
    return {kChannels, height_, width_};
}

auto GridNavProblem::action_name(ActionIndex action) const -> std::string {
    return detail::move_name(action);
}

auto GridNavProblem::rows(const State &state) const -> std::vector<std::string> {
    const int agent = state.words().at(0);
    std::vector<std::string> out(static_cast<std::size_t>(height_), std::string(static_cast<std::size_t>(width_), '.'));
    for (int cell = 0; cell < width_ * height_; ++cell) {
        char &ch = out[static_cast<std::size_t>(cell / width_)][static_cast<std::size_t>(cell % width_)];
        if (is_wall(cell)) {
            ch = '#';
        } else if (cell == agent) {
            ch = '@';
        } else if (cell == goal_) {
            ch = 'G';
        }
    }
    return out;
}

auto GridNavProblem::render(const State &state) const -> std::string {
    return join_rows(rows(state));
}

auto gridnav_distance(const GridNavProblem &problem) -> int {
    const int cells = problem.width() * problem.height();
    std::vector<int> dist(static_cast<std::size_t>(cells), -1);
    std::deque<int> frontier{problem.agent()};
    dist[static_cast<std::size_t>(problem.agent())] = 0;
    while (!frontier.empty()) {
        const int u = frontier.front();
        frontier.pop_front();
        if (u == problem.goal()) {
            return dist[static_cast<std::size_t>(u)];
        }
        for (int a = 0; a < 4; ++a) {
            const auto v = detail::step(u, a, problem.width(), problem.height());
            if (v && !problem.is_wall(*v) && dist[static_cast<std::size_t>(*v)] < 0) {
                dist[static_cast<std::size_t>(*v)] = dist[static_cast<std::size_t>(u)] + 1;
                frontier.push_back(*v);
            }
        }
    }
    return -1;
}

auto gridnav_generate(int width, int height, double wall_density, std::uint64_t seed) -> GridNavProblem {
    if (width < 3 || height < 3) {
        throw ConfigurationError("gridnav dimensions must be at least 3");
    }
    if (!(wall_density >= 0.0 && wall_density <= 0.4)) {
        throw ConfigurationError("wall density must lie in [0, 0.4]");
    }
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution wall(wall_density);
    const int cells = width * height;
    for (int attempt = 0; attempt < kGenerationAttempts; ++attempt) {
        std::vector<std::uint8_t> walls(static_cast<std::size_t>(cells));
        std::vector<int> free;
        for (int cell = 0; cell < cells; ++cell) {
            walls[static_cast<std::size_t>(cell)] = wall(rng) ? 1 : 0;
            if (walls[static_cast<std::size_t>(cell)] == 0) {
                free.push_back(cell);
            }
        }
        if (free.size() < 2) {
            continue;
        }
        std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
        const int agent = free[pick(rng)];
        int goal = agent;
        while (goal == agent) {
            goal = free[pick(rng)];
        }
        GridNavProblem problem(width, height, std::move(walls), agent, goal);
        if (gridnav_distance(problem) > 0) {
            return problem;
        }
    }
    throw GeneratorError(fmt::format("no solvable {}x{} gridnav instance at density {} after {} attempts", width,
                                     height, wall_density, kGenerationAttempts));
}

}  // namespace sgphs::envs
