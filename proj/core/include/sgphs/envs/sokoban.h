#ifndef SGPHS_ENVS_SOKOBAN_H_
#define SGPHS_ENVS_SOKOBAN_H_

#include <sgphs/envs/level_text.h>
#include <sgphs/problem.h>

#include <cstdint>
#include <string>
#include <vector>

namespace sgphs::envs {

// Boxoban-compatible Sokoban. The agent walks up/down/left/right and pushes
// (never pulls) a single box one cell; a push into a wall or another box is
// inapplicable. Solved when every box rests on a goal.
//
// Characters: '#' wall, ' ' floor, '@' agent, '$' box, '.' goal,
// '+' agent on goal, '*' box on goal.
class SokobanProblem final : public Problem {
public:
    static constexpr int kChannels = 5;  // wall, agent, box, goal, floor

    SokobanProblem(int width, int height, std::vector<std::uint8_t> walls, std::vector<int> goals, int agent,
                   std::vector<int> boxes);

    [[nodiscard]] static auto parse(const LevelBlock &block) -> SokobanProblem;

    [[nodiscard]] auto domain() const -> std::string_view override {
        return "sokoban";
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
    [[nodiscard]] auto is_goal_cell(int cell) const -> bool;
    [[nodiscard]] auto goals() const noexcept -> const std::vector<int> & {
        return goals_;
    }

    // words = {agent, box_0, ..., box_n} with boxes ascending
    [[nodiscard]] static auto make_state(int agent, std::vector<int> boxes) -> State;

private:
    int width_;
    int height_;
    std::vector<std::uint8_t> walls_;
    std::vector<int> goals_;  // ascending
    int agent_;
    std::vector<int> boxes_;
};

// Reverse-play generator: boxes start on goals inside a walled room and the
// agent performs random walks and pulls; the resulting position is solvable
// by construction. At least one box ends off its goal.
[[nodiscard]] auto sokoban_generate(int width, int height, int box_count, std::uint64_t seed, int pull_steps = 300)
    -> SokobanProblem;

}  // namespace sgphs::envs

#endif  // SGPHS_ENVS_SOKOBAN_H_
