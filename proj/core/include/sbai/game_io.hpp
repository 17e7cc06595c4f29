#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sbai/game.hpp"

namespace sbai {

// Parse or validation failure in an input file. The message carries the
// line number for syntax errors and the JSON pointer of the offending node
// for structural errors.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Game file format:
//   { "L": <int>,
//     "nodes": { "player": 1|-1, "children": { "<move>": <node>, ... } } }
// where a maximal history is written { "terminal": <1..L> }.
GameStructure parse_game(std::string_view text);
std::string serialize_game(const GameStructure& game);

std::string read_text_file(const std::filesystem::path& path);
GameStructure load_game(const std::filesystem::path& path);

}  // namespace sbai
