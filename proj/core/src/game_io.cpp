#include "sbai/game_io.hpp"

#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "json_io.hpp"

namespace sbai {
namespace detail {

namespace {

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  std::size_t line = 1;
  for (std::size_t k = 0; k < byte; ++k) {
    if (text[k] == '\n') ++line;
  }
  return line;
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

Move parse_move(const std::string& key, const std::string& where) {
  std::size_t used = 0;
  long long m = 0;
  try {
    m = std::stoll(key, &used);
  } catch (const std::exception&) {
    fail(where, "move identifier '" + key + "' is not an integer");
  }
  if (used != key.size()) fail(where, "move identifier '" + key + "' is not an integer");
  return static_cast<Move>(m);
}

}  // namespace

nlohmann::json parse_json(std::string_view text) {
  try {
    return nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("line " + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)) +
                     ": malformed JSON (" + e.what() + ")");
  }
}

GameStructure game_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) fail("/", "expected a JSON object");
  if (!doc.contains("L") || !doc["L"].is_number_integer() || doc["L"].get<long long>() <= 0) {
    fail("/L", "expected a positive integer terminal count");
  }
  if (!doc.contains("nodes") || !doc["nodes"].is_object()) fail("/nodes", "expected the root node object");
  const auto num_terminals = doc["L"].get<std::size_t>();

  const nlohmann::json& root = doc["nodes"];
  int root_player = 1;
  if (root.contains("player")) {
    if (!root["player"].is_number_integer()) fail("/nodes/player", "expected 1 or -1");
    root_player = root["player"].get<int>();
    if (root_player != 1 && root_player != -1) fail("/nodes/player", "expected 1 or -1");
  }
  if (root.contains("terminal")) fail("/nodes", "the root history cannot be terminal");

  GameStructure::Builder builder(num_terminals, root_player);
  struct Pending {
    const nlohmann::json* node;
    NodeId id;
    std::string pointer;
  };
  std::vector<Pending> stack{{&root, builder.root(), "/nodes"}};
  while (!stack.empty()) {
    const Pending p = stack.back();
    stack.pop_back();
    if (!p.node->contains("children") || !(*p.node)["children"].is_object() ||
        (*p.node)["children"].empty()) {
      fail(p.pointer, "non-terminal node needs a non-empty \"children\" object");
    }
    for (const auto& [key, child] : (*p.node)["children"].items()) {
      const std::string where = p.pointer + "/children/" + key;
      const Move move = parse_move(key, where);
      if (!child.is_object()) fail(where, "expected a node object");
      const bool has_terminal = child.contains("terminal");
      const bool has_children = child.contains("children");
      if (has_terminal && has_children) fail(where, "node has both \"terminal\" and \"children\"");
      if (has_terminal) {
        const auto& t = child["terminal"];
        if (!t.is_number_integer() || t.get<long long>() < 1 ||
            t.get<long long>() > static_cast<long long>(num_terminals)) {
          fail(where + "/terminal", "expected an integer in [1.." + std::to_string(num_terminals) + "]");
        }
        builder.add_terminal(p.id, move, t.get<std::size_t>() - 1);
        continue;
      }
      if (!child.contains("player") || !child["player"].is_number_integer() ||
          (child["player"].get<int>() != 1 && child["player"].get<int>() != -1)) {
        fail(where + "/player", "expected 1 or -1");
      }
      const NodeId id = builder.add_internal(p.id, move, child["player"].get<int>());
      stack.push_back({&child, id, where});
    }
  }
  const ValidationReport report = builder.validate();
  if (!report.ok()) fail("/", report.summary());
  return builder.build();
}

nlohmann::json game_to_json(const GameStructure& game) {
  // Build bottom-up: pre-order ids mean children have larger ids than parents.
  std::vector<nlohmann::json> objects(game.node_count());
  for (std::size_t k = game.node_count(); k-- > 0;) {
    const GameNode& n = game.node(static_cast<NodeId>(k));
    nlohmann::json obj = nlohmann::json::object();
    if (n.maximal() && k != 0) {
      obj["terminal"] = n.terminal + 1;
    } else {
      obj["player"] = n.player;
      nlohmann::json children = nlohmann::json::object();
      for (NodeId c : n.children) {
        children[std::to_string(game.node(c).move)] = std::move(objects[static_cast<std::size_t>(c)]);
      }
      obj["children"] = std::move(children);
    }
    objects[k] = std::move(obj);
  }
  nlohmann::json doc = nlohmann::json::object();
  doc["L"] = game.observables();
  doc["nodes"] = std::move(objects.front());
  return doc;
}

}  // namespace detail

GameStructure parse_game(std::string_view text) {
  return detail::game_from_json(detail::parse_json(text));
}

std::string serialize_game(const GameStructure& game) { return detail::game_to_json(game).dump(2) + "\n"; }

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

GameStructure load_game(const std::filesystem::path& path) {
  try {
    return parse_game(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace sbai
