#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uirft/geometry.hpp"

namespace uirft::resp {

enum class ActionType { Click, OpenApp, Scroll, NavigateBack, InputText };
inline constexpr int kActionTypeCount = 5;

enum class Mode { Think, NoThink };

// Case-insensitive lookup of the five wire spellings (click, open_app,
// scroll, navigate_back, input_text); nullopt for anything else.
std::optional<ActionType> canonical_action_name(std::string_view name);
std::string_view action_name(ActionType t);

struct Action {
  ActionType kind = ActionType::Click;
  // Point prediction; present only for Click.
  std::optional<geom::Point> coordinate;
  // Box prediction (four-element coordinate payload); present only for Click.
  std::optional<geom::BBox> box;
  bool operator==(const Action&) const = default;
};

struct ParsedResponse {
  std::optional<std::string> think;
  std::vector<Action> actions;
  bool well_formed = false;
  int token_length = 0;  // whitespace-delimited tokens of the full raw text
  Mode mode = Mode::Think;
  std::string raw;

  int think_token_count() const;
};

int count_tokens(std::string_view text);

// Total over arbitrary input: malformed text yields well_formed = false and
// empty actions, never an exception. Think mode requires exactly one
// <think>..</think> followed by one <answer>..</answer>; NoThink forbids the
// think tag. Only whitespace may appear outside the tags.
ParsedResponse parse_response(std::string_view raw, Mode mode);

// Canonical emission; parse_response(serialize_response(r, m), m) recovers
// the same actions. Requires a well-formed response whose think segment
// matches the mode.
std::string serialize_response(const ParsedResponse& r, Mode mode);

}  // namespace uirft::resp
