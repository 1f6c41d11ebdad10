#include "chaineval/phase.hpp"
#include "doctest.h"

using namespace chaineval;

TEST_CASE("phases_in_order is the fixed seven-stage chain") {
  const auto& order = phases_in_order();
  CHECK(order.size() == 7);
  CHECK(order.front() == Phase::Reconnaissance);
  CHECK(order.back() == Phase::ActionsOnObjectives);
  CHECK(order[1] == Phase::Weaponization);
  CHECK(order[2] == Phase::Delivery);
  CHECK(order[3] == Phase::Exploitation);
  CHECK(order[4] == Phase::Installation);
  CHECK(order[5] == Phase::CommandAndControl);
  for (int i = 0; i < kPhaseCount; ++i) {
    CHECK(ordinal(order[i]) == i);
  }
}

TEST_CASE("phase names serialize to the documented strings") {
  CHECK(to_string(Phase::Reconnaissance) == "reconnaissance");
  CHECK(to_string(Phase::Weaponization) == "weaponization");
  CHECK(to_string(Phase::Delivery) == "delivery");
  CHECK(to_string(Phase::Exploitation) == "exploitation");
  CHECK(to_string(Phase::Installation) == "installation");
  CHECK(to_string(Phase::CommandAndControl) == "command_and_control");
  CHECK(to_string(Phase::ActionsOnObjectives) == "actions_on_objectives");
}

TEST_CASE("phase names round-trip bit-exactly") {
  for (Phase phase : phases_in_order()) {
    auto parsed = phase_from_string(to_string(phase));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == phase);
  }
  CHECK_FALSE(phase_from_string("Reconnaissance").has_value());
  CHECK_FALSE(phase_from_string("c2").has_value());
  CHECK_FALSE(phase_from_string("").has_value());
}
