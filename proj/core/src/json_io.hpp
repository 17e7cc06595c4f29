#pragma once

// Internal helpers shared by the game and instance readers.

#include <string>
#include <string_view>

#include "json.hpp"
#include "sbai/game.hpp"

namespace sbai::detail {

nlohmann::json parse_json(std::string_view text);
GameStructure game_from_json(const nlohmann::json& doc);
nlohmann::json game_to_json(const GameStructure& game);

}  // namespace sbai::detail
