#ifndef SGPHS_ENVS_TSP_H_
#define SGPHS_ENVS_TSP_H_

#include <sgphs/envs/level_text.h>
#include <sgphs/problem.h>

#include <cstdint>
#include <string>
#include <vector>

namespace sgphs::envs {

// Grid travelling salesman: walk up/down/left/right (obstacles are
// traversable), entering a city marks it visited. The first city entered
// becomes the tour's start; the goal is every city visited with the agent
// back on that first city.
// Text: '#' obstacle, '@' agent, 'C' city, '.' floor.
class TspProblem final : public Problem {
public:
    static constexpr int kChannels = 5;  // obstacle, agent, unvisited, visited, first city
    static constexpr int kMaxCities = 30;

    TspProblem(int width, int height, std::vector<std::uint8_t> obstacles, std::vector<int> cities, int agent);

    [[nodiscard]] static auto parse(const LevelBlock &block) -> TspProblem;

    [[nodiscard]] auto domain() const -> std::string_view override {
        return "tsp";
    }
    // words = {agent cell, visited city bitmask, index of first city or -1}
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
    [[nodiscard]] auto cities() const noexcept -> const std::vector<int> & {
        return cities_;
    }
    [[nodiscard]] auto agent() const noexcept -> int {
        return agent_;
    }
    [[nodiscard]] auto is_obstacle(int cell) const -> bool {
        return obstacles_[static_cast<std::size_t>(cell)] != 0;
    }

private:
    [[nodiscard]] auto city_index(int cell) const -> int;

    int width_;
    int height_;
    std::vector<std::uint8_t> obstacles_;
    std::vector<int> cities_;  // ascending cell ids
    int agent_;
};

// Cities and agent placed on distinct cells; obstacles drawn at the given density.
[[nodiscard]] auto tsp_generate(int width, int height, int city_count, std::uint64_t seed,
                                double obstacle_density = 0.1) -> TspProblem;

}  // namespace sgphs::envs

#endif  // SGPHS_ENVS_TSP_H_
