#ifndef SGPHS_ENVS_GRIDNAV_H_
#define SGPHS_ENVS_GRIDNAV_H_

#include <sgphs/envs/level_text.h>
#include <sgphs/problem.h>

#include <cstdint>
#include <string>
#include <vector>

namespace sgphs::envs {

// Maze navigation: move the agent onto the goal cell. Actions are
// up/down/left/right; moves into walls or off the grid are inapplicable.
// Text: '#' wall, '@' agent, 'G' goal, '.' floor.
class GridNavProblem final : public Problem {
public:
    static constexpr int kChannels = 3;  // wall, agent, goal

    GridNavProblem(int width, int height, std::vector<std::uint8_t> walls, int agent, int goal);

    [[nodiscard]] static auto parse(const LevelBlock &block) -> GridNavProblem;

    [[nodiscard]] auto domain() const -> std::string_view override {
        return "gridnav";
    }
    [[nodiscard]] auto initial_state() const -> State override;
    [[nodiscard]] auto action_count() const -> int override {
        return 4;
    }
    [[nodiscard]] auto transition(const State &state, ActionIndex action) const -> std::optional<State> override;
    [[nodiscard]] auto is_goal(const State &state) const -> bool override;
    [[nodiscard]] auto encode(const State &state) const -> Tensor override;
    [[nodiscard]] auto observation_shape() const -> std::vector<int> override;
    [[nodiscard]] auto action_name(ActionIndex action) const -> std::string override;
    [[nodiscard]] auto render(const State &state) const -> std::string override;

    [[nodiscard]] auto rows(const State &state) const -> std::vector<std::string>;
    [[nodiscard]] auto width() const noexcept -> int {
        return width_;
    }
    [[nodiscard]] auto height() const noexcept -> int {
        return height_;
    }
    [[nodiscard]] auto is_wall(int cell) const -> bool {
        return walls_[static_cast<std::size_t>(cell)] != 0;
    }
    [[nodiscard]] auto goal() const noexcept -> int {
        return goal_;
    }
    [[nodiscard]] auto agent() const noexcept -> int {
        return agent_;
    }

private:
    int width_;
    int height_;
    std::vector<std::uint8_t> walls_;
    int agent_;
    int goal_;
};

// Shortest agent-to-goal move count, or -1 when the goal is unreachable.
[[nodiscard]] auto gridnav_distance(const GridNavProblem &problem) -> int;

// Walls drawn independently with the given density; agent and goal on
// distinct free cells; redrawn until the goal is reachable (100 attempts).
[[nodiscard]] auto gridnav_generate(int width, int height, double wall_density, std::uint64_t seed)
    -> GridNavProblem;

}  // namespace sgphs::envs

#endif  // SGPHS_ENVS_GRIDNAV_H_
