#include <sgphs/envs/tsp.h>

#include "grid_moves.h"

#include <sgphs/errors.h>

#include <fmt/format.h>

#include <algorithm>
#include <random>

namespace sgphs::envs {

TspProblem::TspProblem(int width, int height, std::vector<std::uint8_t> obstacles, std::vector<int> cities, int agent)
    : width_(width), height_(height), obstacles_(std::move(obstacles)), cities_(std::move(cities)), agent_(agent) {
    const int cells = width_ * height_;
    if (width_ < 1 || height_ < 1 || obstacles_.size() != static_cast<std::size_t>(cells)) {
        throw ConfigurationError("grid dimensions do not match the obstacle map");
    }
    if (cities_.size() < 2 || cities_.size() > static_cast<std::size_t>(kMaxCities)) {
        throw ConfigurationError(fmt::format("tsp needs between 2 and {} cities", kMaxCities));
    }
    std::ranges::sort(cities_);
    if (std::ranges::adjacent_find(cities_) != cities_.end() || cities_.front() < 0 || cities_.back() >= cells) {
        throw ConfigurationError("cities must be distinct cells of the grid");
    }
    if (agent_ < 0 || agent_ >= cells || city_index(agent_) >= 0) {
        throw ConfigurationError("the agent must start on a grid cell without a city");
    }
}

auto TspProblem::parse(const LevelBlock &block) -> TspProblem {
    check_rectangular(block);
    const int height = static_cast<int>(block.rows.size());
    const int width = static_cast<int>(block.rows.front().size());
    std::vector<std::uint8_t> obstacles(static_cast<std::size_t>(width * height), 0);
    std::vector<int> cities;
    int agent = -1;
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            const char ch = block.rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            const int cell = r * width + c;
            const int line = block.first_row_line + r;
            switch (ch) {
            case '#':
                obstacles[static_cast<std::size_t>(cell)] = 1;
                break;
            case '.':
                break;
            case 'C':
                cities.push_back(cell);
                break;
            case '@':
                if (agent >= 0) {
                    throw ParseError("more than one agent", line, c + 1);
                }
                agent = cell;
                break;
            default:
                throw ParseError(fmt::format("unknown character '{}'", ch), line, c + 1);
            }
        }
    }
    if (agent < 0) {
        throw ParseError("level has no agent", block.first_row_line, 1);
    }
    if (cities.size() < 2 || cities.size() > static_cast<std::size_t>(kMaxCities)) {
        throw ParseError(fmt::format("level has {} cities, expected 2 to {}", cities.size(), kMaxCities),
                         block.first_row_line, 1);
    }
    return {width, height, std::move(obstacles), std::move(cities), agent};
}

auto TspProblem::city_index(int cell) const -> int {
    const auto it = std::ranges::lower_bound(cities_, cell);
    return it != cities_.end() && *it == cell ? static_cast<int>(it - cities_.begin()) : -1;
}

auto TspProblem::initial_state() const -> State {
    return State({agent_, 0, -1});
}

auto TspProblem::transition(const State &state, ActionIndex action) const -> std::optional<State> {
    if (action < 0 || action >= 4) {
        throw UsageError(fmt::format("action {} outside 0..3", action));
    }
    const auto next = detail::step(state.words().at(0), action, width_, height_);
    if (!next) {
        return std::nullopt;
    }
    std::int32_t visited = state.words().at(1);
    std::int32_t first = state.words().at(2);
    if (const int city = city_index(*next); city >= 0) {
        visited |= std::int32_t{1} << city;
        if (first < 0) {
            first = city;
        }
    }
    return State({*next, visited, first});
}

auto TspProblem::is_goal(const State &state) const -> bool {
    const auto all = static_cast<std::int32_t>((std::uint32_t{1} << cities_.size()) - 1);
    const auto &w = state.words();
    return w.at(1) == all && w.at(2) >= 0 && w.at(0) == cities_[static_cast<std::size_t>(w.at(2))];
}

auto TspProblem::encode(const State &state) const -> Tensor {
    Tensor t(observation_shape());
    const auto &w = state.words();
    for (int cell = 0; cell < width_ * height_; ++cell) {
        const int r = cell / width_;
        const int c = cell % width_;
        t.at(0, r, c) = is_obstacle(cell) ? 1.0 : 0.0;
        t.at(1, r, c) = cell == w.at(0) ? 1.0 : 0.0;
    }
    for (std::size_t i = 0; i < cities_.size(); ++i) {
        const int r = cities_[i] / width_;
        const int c = cities_[i] % width_;
        const bool visited = ((w.at(1) >> i) & 1) != 0;
        t.at(visited ? 3 : 2, r, c) = 1.0;
        t.at(4, r, c) = static_cast<int>(i) == w.at(2) ? 1.0 : 0.0;
    }
    return t;
}

auto TspProblem::observation_shape() const -> std::vector<int> {
    return {kChannels, height_, width_};
}

auto TspProblem::action_name(ActionIndex action) const -> std::string {
    return detail::move_name(action);
}

// Visited cities and the tour start are not representable in the level
// format; only the agent position changes here.
auto TspProblem::rows(const State &state) const -> std::vector<std::string> {
    std::vector<std::string> out(static_cast<std::size_t>(height_), std::string(static_cast<std::size_t>(width_), '.'));
    auto cell_char = [&](int cell) -> char & {
        return out[static_cast<std::size_t>(cell / width_)][static_cast<std::size_t>(cell % width_)];
    };
    for (int cell = 0; cell < width_ * height_; ++cell) {
        if (is_obstacle(cell)) {
            cell_char(cell) = '#';
        }
    }
    for (const int city : cities_) {
        cell_char(city) = 'C';
    }
    if (city_index(state.words().at(0)) < 0) {
        cell_char(state.words().at(0)) = '@';
    }
    return out;
}

auto TspProblem::render(const State &state) const -> std::string {
    return join_rows(rows(state));
}

auto tsp_generate(int width, int height, int city_count, std::uint64_t seed, double obstacle_density) -> TspProblem {
    if (width < 2 || height < 2) {
        throw ConfigurationError("tsp grids must be at least 2x2");
    }
    if (city_count < 2 || city_count > TspProblem::kMaxCities) {
        throw ConfigurationError(fmt::format("city count must lie in [2, {}]", TspProblem::kMaxCities));
    }
    if (!(obstacle_density >= 0.0 && obstacle_density < 1.0)) {
        throw ConfigurationError("obstacle density must lie in [0, 1)");
    }
    const int cells = width * height;
    if (city_count + 1 > cells) {
        throw GeneratorError(fmt::format("{} cities and an agent do not fit a {}x{} grid", city_count, width, height));
    }
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution obstacle(obstacle_density);
    std::vector<std::uint8_t> obstacles(static_cast<std::size_t>(cells));
    for (auto &o : obstacles) {
        o = obstacle(rng) ? 1 : 0;
    }
    std::vector<int> order(static_cast<std::size_t>(cells));
    for (int i = 0; i < cells; ++i) {
        order[static_cast<std::size_t>(i)] = i;
    }
    std::ranges::shuffle(order, rng);
    std::vector<int> cities(order.begin(), order.begin() + city_count);
    for (const int city : cities) {
        obstacles[static_cast<std::size_t>(city)] = 0;
    }
    const int agent = order[static_cast<std::size_t>(city_count)];
    obstacles[static_cast<std::size_t>(agent)] = 0;
    return {width, height, std::move(obstacles), std::move(cities), agent};
}

}  // namespace sgphs::envs
