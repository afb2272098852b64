#ifndef SGPHS_ENVS_GRID_MOVES_H_
#define SGPHS_ENVS_GRID_MOVES_H_

#include <array>
#include <optional>
#include <string>

namespace sgphs::envs::detail {

inline constexpr std::array<int, 4> kRowDelta{-1, 1, 0, 0};
inline constexpr std::array<int, 4> kColDelta{0, 0, -1, 1};
inline constexpr std::array<const char *, 4> kMoveNames{"up", "down", "left", "right"};

// Cell reached by moving from `cell` in direction a, or nullopt off the grid.
inline auto step(int cell, int action, int width, int height) -> std::optional<int> {
    const int r = cell / width + kRowDelta[static_cast<std::size_t>(action)];
    const int c = cell % width + kColDelta[static_cast<std::size_t>(action)];
    if (r < 0 || c < 0 || r >= height || c >= width) {
        return std::nullopt;
    }
    return r * width + c;
}

inline auto move_name(int action) -> std::string {
    if (action < 0 || action >= 4) {
        return std::to_string(action);
    }
    return kMoveNames[static_cast<std::size_t>(action)];
}

}  // namespace sgphs::envs::detail

#endif  // SGPHS_ENVS_GRID_MOVES_H_
