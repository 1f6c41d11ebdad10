#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace chaineval {

// The seven attack-chain phases, in chain order. This is a closed
// enumeration: every analytics surface (rates, heatmaps, coverage reports)
// is keyed on exactly these seven values.
enum class Phase {
  Reconnaissance = 0,
  Weaponization,
  Delivery,
  Exploitation,
  Installation,
  CommandAndControl,
  ActionsOnObjectives,
};

inline constexpr int kPhaseCount = 7;

// All seven phases in chain order.
const std::array<Phase, kPhaseCount>& phases_in_order();

// Stable serialized name, e.g. "command_and_control".
std::string_view to_string(Phase phase);

// Inverse of to_string. Unknown names yield nullopt.
std::optional<Phase> phase_from_string(std::string_view name);

constexpr int ordinal(Phase phase) { return static_cast<int>(phase); }

}  // namespace chaineval
