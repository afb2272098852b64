#ifndef SGPHS_PROBLEM_H_
#define SGPHS_PROBLEM_H_

#include <sgphs/tensor.h>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sgphs {

using ActionIndex = int;

// Packed dynamic part of a domain state (agent position, boxes, visited
// masks, ...). The static layout lives in the owning Problem.
class State {
public:
    State() = default;
    explicit State(std::vector<std::int32_t> words) : words_(std::move(words)) {}

    [[nodiscard]] auto words() const noexcept -> const std::vector<std::int32_t> & {
        return words_;
    }
    auto operator<=>(const State &) const = default;

private:
    std::vector<std::int32_t> words_;
};

// Exact identity key of a state; equal keys iff equal states.
struct StateKey {
    std::vector<std::int32_t> words;

    auto operator<=>(const StateKey &) const = default;
    [[nodiscard]] auto to_string() const -> std::string;
};

struct StateKeyHash {
    [[nodiscard]] auto operator()(const StateKey &key) const noexcept -> std::size_t;
};

// State/action sequence; states.size() == actions.size() + 1.
struct Trajectory {
    std::vector<State> states;
    std::vector<ActionIndex> actions;

    [[nodiscard]] auto length() const noexcept -> std::size_t {
        return actions.size();
    }
    auto operator==(const Trajectory &) const -> bool = default;
};

// A deterministic single-agent search problem instance.
class Problem {
public:
    virtual ~Problem() = default;

    [[nodiscard]] virtual auto domain() const -> std::string_view = 0;
    [[nodiscard]] virtual auto initial_state() const -> State = 0;
    [[nodiscard]] virtual auto action_count() const -> int = 0;
    // Absent when the action is inapplicable in the given state.
    [[nodiscard]] virtual auto transition(const State &state, ActionIndex action) const -> std::optional<State> = 0;
    [[nodiscard]] virtual auto is_goal(const State &state) const -> bool = 0;
    // (channels, height, width) one-hot style grid encoding
    [[nodiscard]] virtual auto encode(const State &state) const -> Tensor = 0;
    [[nodiscard]] virtual auto observation_shape() const -> std::vector<int> = 0;
    [[nodiscard]] virtual auto action_name(ActionIndex action) const -> std::string;
    [[nodiscard]] virtual auto render(const State &state) const -> std::string = 0;

    [[nodiscard]] virtual auto state_key(const State &state) const -> StateKey {
        return StateKey{state.words()};
    }
};

// True iff replaying the actions from states[0] reproduces every stored state.
[[nodiscard]] auto replays(const Problem &problem, const Trajectory &trajectory) -> bool;

}  // namespace sgphs

#endif  // SGPHS_PROBLEM_H_
