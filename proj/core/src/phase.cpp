#include "chaineval/phase.hpp"

namespace chaineval {

const std::array<Phase, kPhaseCount>& phases_in_order() {
  static const std::array<Phase, kPhaseCount> order = {
      Phase::Reconnaissance,    Phase::Weaponization,
      Phase::Delivery,          Phase::Exploitation,
      Phase::Installation,      Phase::CommandAndControl,
      Phase::ActionsOnObjectives,
  };
  return order;
}

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::Reconnaissance:
      return "reconnaissance";
    case Phase::Weaponization:
      return "weaponization";
    case Phase::Delivery:
      return "delivery";
    case Phase::Exploitation:
      return "exploitation";
    case Phase::Installation:
      return "installation";
    case Phase::CommandAndControl:
      return "command_and_control";
    case Phase::ActionsOnObjectives:
      return "actions_on_objectives";
  }
  return "unknown";
}

std::optional<Phase> phase_from_string(std::string_view name) {
  for (Phase phase : phases_in_order()) {
    if (to_string(phase) == name) {
      return phase;
    }
  }
  return std::nullopt;
}

}  // namespace chaineval
