#include <sgphs/problem.h>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace sgphs {

auto StateKey::to_string() const -> std::string {
    return fmt::format("{}", fmt::join(words, ":"));
}

auto StateKeyHash::operator()(const StateKey &key) const noexcept -> std::size_t {
    // FNV-1a over the packed words
    std::uint64_t h = 1469598103934665603ULL;
    for (const auto w : key.words) {
        auto u = static_cast<std::uint32_t>(w);
        for (int i = 0; i < 4; ++i) {
            h ^= (u >> (8 * i)) & 0xFFU;
            h *= 1099511628211ULL;
        }
    }
    return static_cast<std::size_t>(h);
}

auto Problem::action_name(ActionIndex action) const -> std::string {
    return fmt::format("{}", action);
}

auto replays(const Problem &problem, const Trajectory &trajectory) -> bool {
    if (trajectory.states.size() != trajectory.actions.size() + 1) {
        return false;
    }
    for (std::size_t i = 0; i < trajectory.actions.size(); ++i) {
        const auto next = problem.transition(trajectory.states[i], trajectory.actions[i]);
        if (!next || *next != trajectory.states[i + 1]) {
            return false;
        }
    }
    return true;
}

}  // namespace sgphs
