#include <sgphs/envs/sokoban.h>

#include "grid_moves.h"

#include <sgphs/errors.h>

#include <fmt/format.h>

#include <algorithm>
#include <random>

namespace sgphs::envs {

namespace {

constexpr int kGenerationAttempts = 100;
constexpr double kInteriorWallDensity = 0.1;

auto contains(const std::vector<int> &sorted, int value) -> bool {
    return std::ranges::binary_search(sorted, value);
}

auto box_span(const State &state) -> std::span<const std::int32_t> {
    return std::span<const std::int32_t>(state.words()).subspan(1);
}

}  // namespace

SokobanProblem::SokobanProblem(int width, int height, std::vector<std::uint8_t> walls, std::vector<int> goals,
                               int agent, std::vector<int> boxes)
    : width_(width), height_(height), walls_(std::move(walls)), goals_(std::move(goals)), agent_(agent),
      boxes_(std::move(boxes)) {
    if (width_ < 1 || height_ < 1 || walls_.size() != static_cast<std::size_t>(width_ * height_)) {
        throw ConfigurationError("grid dimensions do not match the wall map");
    }
    if (goals_.size() != boxes_.size()) {
        throw ConfigurationError("box and goal counts differ");
    }
    std::ranges::sort(goals_);
    std::ranges::sort(boxes_);
    auto on_floor = [&](int cell) { return cell >= 0 && cell < width_ * height_ && !is_wall(cell); };
    if (!on_floor(agent_) || !std::ranges::all_of(boxes_, on_floor) || !std::ranges::all_of(goals_, on_floor)) {
        throw ConfigurationError("agent, boxes and goals must be on floor cells");
    }
    if (contains(boxes_, agent_) || std::ranges::adjacent_find(boxes_) != boxes_.end()) {
        throw ConfigurationError("cells hold at most one of agent and box");
    }
}

auto SokobanProblem::parse(const LevelBlock &block) -> SokobanProblem {
    check_rectangular(block);
    const int height = static_cast<int>(block.rows.size());
    const int width = static_cast<int>(block.rows.front().size());
    std::vector<std::uint8_t> walls(static_cast<std::size_t>(width * height), 0);
    std::vector<int> goals;
    std::vector<int> boxes;
    int agent = -1;
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            const char ch = block.rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            const int cell = r * width + c;
            const int line = block.first_row_line + r;
            if (ch == '@' || ch == '+') {
                if (agent >= 0) {
                    throw ParseError("more than one agent", line, c + 1);
                }
                agent = cell;
            }
            switch (ch) {
            case '#':
                walls[static_cast<std::size_t>(cell)] = 1;
                break;
            case ' ':
            case '@':
                break;
            case '$':
                boxes.push_back(cell);
                break;
            case '.':
            case '+':
                goals.push_back(cell);
                break;
            case '*':
                boxes.push_back(cell);
                goals.push_back(cell);
                break;
            default:
                throw ParseError(fmt::format("unknown character '{}'", ch), line, c + 1);
            }
        }
    }
    if (agent < 0) {
        throw ParseError("level has no agent", block.first_row_line, 1);
    }
    if (boxes.size() != goals.size()) {
        throw ParseError(fmt::format("{} boxes but {} goals", boxes.size(), goals.size()), block.first_row_line, 1);
    }
    return {width, height, std::move(walls), std::move(goals), agent, std::move(boxes)};
}

auto SokobanProblem::make_state(int agent, std::vector<int> boxes) -> State {
    std::ranges::sort(boxes);
    std::vector<std::int32_t> words{agent};
    words.insert(words.end(), boxes.begin(), boxes.end());
    return State(std::move(words));
}

auto SokobanProblem::initial_state() const -> State {
    return make_state(agent_, boxes_);
}

auto SokobanProblem::is_goal_cell(int cell) const -> bool {
    return contains(goals_, cell);
}

auto SokobanProblem::transition(const State &state, ActionIndex action) const -> std::optional<State> {
    if (action < 0 || action >= 4) {
        throw UsageError(fmt::format("action {} outside 0..3", action));
    }
    const int agent = state.words().at(0);
    const auto target = detail::step(agent, action, width_, height_);
    if (!target || is_wall(*target)) {
        return std::nullopt;
    }
    const auto boxes = box_span(state);
    const auto hit = std::ranges::find(boxes, *target);
    if (hit == boxes.end()) {
        std::vector<std::int32_t> words(state.words());
        words[0] = *target;
        return State(std::move(words));
    }
    const auto beyond = detail::step(*target, action, width_, height_);
    if (!beyond || is_wall(*beyond) || std::ranges::find(boxes, *beyond) != boxes.end()) {
        return std::nullopt;
    }
    std::vector<int> moved(boxes.begin(), boxes.end());
    moved[static_cast<std::size_t>(hit - boxes.begin())] = *beyond;
    return make_state(*target, std::move(moved));
}

auto SokobanProblem::is_goal(const State &state) const -> bool {
    return std::ranges::all_of(box_span(state), [&](int box) { return is_goal_cell(box); });
}

auto SokobanProblem::encode(const State &state) const -> Tensor {
    Tensor t(observation_shape());
    const int agent = state.words().at(0);
    for (int cell = 0; cell < width_ * height_; ++cell) {
        const int r = cell / width_;
        const int c = cell % width_;
        t.at(0, r, c) = is_wall(cell) ? 1.0 : 0.0;
        t.at(1, r, c) = cell == agent ? 1.0 : 0.0;
        t.at(3, r, c) = is_goal_cell(cell) ? 1.0 : 0.0;
        t.at(4, r, c) = is_wall(cell) ? 0.0 : 1.0;
    }
    for (const int box : box_span(state)) {
        t.at(2, box / width_, box % width_) = 1.0;
    }
    return t;
}

auto SokobanProblem::observation_shape() const -> std::vector<int> {
    return {kChannels, height_, width_};
}

auto SokobanProblem::action_name(ActionIndex action) const -> std::string {
    return detail::move_name(action);
}

auto SokobanProblem::rows(const State &state) const -> std::vector<std::string> {
    std::vector<std::string> out(static_cast<std::size_t>(height_), std::string(static_cast<std::size_t>(width_), ' '));
    auto cell_char = [&](int cell) -> char & {
        return out[static_cast<std::size_t>(cell / width_)][static_cast<std::size_t>(cell % width_)];
    };
    for (int cell = 0; cell < width_ * height_; ++cell) {
        if (is_wall(cell)) {
            cell_char(cell) = '#';
        } else if (is_goal_cell(cell)) {
            cell_char(cell) = '.';
        }
    }
    for (const int box : box_span(state)) {
        cell_char(box) = is_goal_cell(box) ? '*' : '$';
    }
    const int agent = state.words().at(0);
    cell_char(agent) = is_goal_cell(agent) ? '+' : '@';
    return out;
}

auto SokobanProblem::render(const State &state) const -> std::string {
    return join_rows(rows(state));
}

auto sokoban_generate(int width, int height, int box_count, std::uint64_t seed, int pull_steps) -> SokobanProblem {
    if (width < 5 || height < 5) {
        throw ConfigurationError("sokoban rooms must be at least 5x5");
    }
    if (box_count < 1 || pull_steps < 1) {
        throw ConfigurationError("sokoban generation needs at least one box and one step");
    }
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution interior_wall(kInteriorWallDensity);
    std::bernoulli_distribution pull(0.5);
    std::uniform_int_distribution<int> direction(0, 3);
    const int cells = width * height;

    for (int attempt = 0; attempt < kGenerationAttempts; ++attempt) {
        std::vector<std::uint8_t> walls(static_cast<std::size_t>(cells), 0);
        std::vector<int> free;
        for (int cell = 0; cell < cells; ++cell) {
            const int r = cell / width;
            const int c = cell % width;
            const bool border = r == 0 || c == 0 || r == height - 1 || c == width - 1;
            walls[static_cast<std::size_t>(cell)] = border || interior_wall(rng) ? 1 : 0;
            if (walls[static_cast<std::size_t>(cell)] == 0) {
                free.push_back(cell);
            }
        }
        if (static_cast<int>(free.size()) < 2 * box_count + 2) {
            continue;
        }
        std::ranges::shuffle(free, rng);
        std::vector<int> goals(free.begin(), free.begin() + box_count);
        std::vector<int> boxes = goals;
        int agent = free[static_cast<std::size_t>(box_count)];

        auto is_box = [&](int cell) { return std::ranges::find(boxes, cell) != boxes.end(); };
        for (int s = 0; s < pull_steps; ++s) {
            const int a = direction(rng);
            const auto ahead = detail::step(agent, a, width, height);
            if (!ahead || walls[static_cast<std::size_t>(*ahead)] != 0 || is_box(*ahead)) {
                continue;
            }
            // the box behind the agent follows it: the reverse of a push
            const auto behind = detail::step(agent, a ^ 1, width, height);
            if (behind && is_box(*behind) && pull(rng)) {
                *std::ranges::find(boxes, *behind) = agent;
            }
            agent = *ahead;
        }
        std::ranges::sort(boxes);
        std::ranges::sort(goals);
        if (boxes == goals) {
            continue;
        }
        return {width, height, std::move(walls), std::move(goals), agent, std::move(boxes)};
    }
    throw GeneratorError(fmt::format("no sokoban level generated after {} attempts", kGenerationAttempts));
}

}  // namespace sgphs::envs
