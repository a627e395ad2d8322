#include "uirft/response.hpp"

#include <string>

#include "doctest.h"
#include "uirft/rng.hpp"

using namespace uirft;
using resp::Action;
using resp::ActionType;
using resp::Mode;
using resp::ParsedResponse;

TEST_CASE("canonical_action_name covers the five actions case-insensitively") {
  CHECK(resp::canonical_action_name("click") == ActionType::Click);
  CHECK(resp::canonical_action_name("NAVIGATE_BACK") == ActionType::NavigateBack);
  CHECK(resp::canonical_action_name("Open_App") == ActionType::OpenApp);
  CHECK(resp::canonical_action_name("scroll") == ActionType::Scroll);
  CHECK(resp::canonical_action_name("input_text") == ActionType::InputText);
  CHECK_FALSE(resp::canonical_action_name("long_press").has_value());
  CHECK_FALSE(resp::canonical_action_name("").has_value());
}

TEST_CASE("parse_response accepts the canonical think format") {
  auto r = resp::parse_response(
      "<think>find icon</think><answer>[{action: click, coordinate: [10, 20]}]</answer>",
      Mode::Think);
  REQUIRE(r.well_formed);
  REQUIRE(r.actions.size() == 1);
  CHECK(r.actions[0].kind == ActionType::Click);
  REQUIRE(r.actions[0].coordinate.has_value());
  CHECK(r.actions[0].coordinate->x == 10.0);
  CHECK(r.actions[0].coordinate->y == 20.0);
  CHECK(r.think == "find icon");
  CHECK(r.token_length == 6);
  CHECK(r.think_token_count() == 2);
}

TEST_CASE("parse_response tolerates whitespace between the tags") {
  auto r = resp::parse_response(
      "  <think>find icon</think> \n <answer>[{action: click, coordinate: [10, 20]}]</answer>  ",
      Mode::Think);
  REQUIRE(r.well_formed);
  CHECK(r.actions[0].kind == ActionType::Click);
  CHECK(r.token_length == 7);
}

TEST_CASE("think mode requires the think tag") {
  auto r = resp::parse_response("<answer>[{action: navigate_back}]</answer>", Mode::Think);
  CHECK_FALSE(r.well_formed);
  CHECK(r.actions.empty());
}

TEST_CASE("nothink mode forbids the think tag") {
  auto ok = resp::parse_response("<answer>[{action: scroll}]</answer>", Mode::NoThink);
  REQUIRE(ok.well_formed);
  CHECK(ok.actions[0].kind == ActionType::Scroll);
  CHECK_FALSE(ok.actions[0].coordinate.has_value());

  auto bad = resp::parse_response(
      "<think>x</think><answer>[{action: scroll}]</answer>", Mode::NoThink);
  CHECK_FALSE(bad.well_formed);
}

TEST_CASE("relaxed payload syntax variants parse") {
  const char* variants[] = {
      "<answer>[{action: scroll}]</answer>",
      "<answer>{action: scroll}</answer>",
      "<answer>[{\"action\": \"scroll\"}]</answer>",
      "<answer>[{'action': 'scroll'}]</answer>",
      "<answer>[ { action : scroll } ]</answer>",
  };
  for (const char* text : variants) {
    CAPTURE(text);
    auto r = resp::parse_response(text, Mode::NoThink);
    CHECK(r.well_formed);
    CHECK(r.actions.size() == 1);
    CHECK(r.actions[0].kind == ActionType::Scroll);
  }
}

TEST_CASE("four element coordinates parse as predicted boxes") {
  auto r = resp::parse_response(
      "<answer>[{action: click, coordinate: [0, 0, 10, 10]}]</answer>", Mode::NoThink);
  REQUIRE(r.well_formed);
  REQUIRE(r.actions[0].box.has_value());
  CHECK(r.actions[0].box->x2 == 10.0);
  CHECK_FALSE(r.actions[0].coordinate.has_value());
}

TEST_CASE("multiple records keep list order") {
  auto r = resp::parse_response(
      "<answer>[{action: click, coordinate: [1, 2]}, {action: scroll}]</answer>",
      Mode::NoThink);
  REQUIRE(r.well_formed);
  REQUIRE(r.actions.size() == 2);
  CHECK(r.actions[0].kind == ActionType::Click);
  CHECK(r.actions[1].kind == ActionType::Scroll);
}

TEST_CASE("unknown keys with simple values are tolerated") {
  auto r = resp::parse_response(
      "<answer>[{action: input_text, text: \"hello world\", confidence: 0.9}]</answer>",
      Mode::NoThink);
  CHECK(r.well_formed);
}

TEST_CASE("coordinates on non-click actions are dropped") {
  auto r = resp::parse_response(
      "<answer>[{action: scroll, coordinate: [5, 5]}]</answer>", Mode::NoThink);
  REQUIRE(r.well_formed);
  CHECK_FALSE(r.actions[0].coordinate.has_value());
  CHECK_FALSE(r.actions[0].box.has_value());
}

TEST_CASE("malformed payloads are rejected without raising") {
  const char* bad[] = {
      "<answer>[{action: long_press}]</answer>",              // unknown action
      "<answer>[{action: click}]</answer>",                   // click without coordinate
      "<answer>[{action: click, coordinate: [1]}]</answer>",  // bad arity
      "<answer>[{action: click, coordinate: [1, 2, 3]}]</answer>",
      "<answer>[{action: click, coordinate: [a, b]}]</answer>",
      "<answer>[{coordinate: [1, 2]}]</answer>",               // missing action
      "<answer>[]</answer>",
      "<answer></answer>",
      "<answer>[{action: scroll}</answer>",                    // unbalanced
      "junk <answer>[{action: scroll}]</answer>",              // junk outside tags
      "<answer>[{action: scroll}]</answer> trailing",
      "<answer>[{action: scroll}]</answer><answer>x</answer>",  // duplicate tag
  };
  for (const char* text : bad) {
    CAPTURE(text);
    auto r = resp::parse_response(text, Mode::NoThink);
    CHECK_FALSE(r.well_formed);
    CHECK(r.actions.empty());
  }
}

TEST_CASE("order violations fail in think mode") {
  auto r = resp::parse_response(
      "<answer>[{action: scroll}]</answer><think>late</think>", Mode::Think);
  CHECK_FALSE(r.well_formed);
}

TEST_CASE("parse_response is total over fuzzed input") {
  Rng rng(4242);
  const char* fragments[] = {"<think>", "</think>", "<answer>", "</answer>",
                             "{action:", "click", "coordinate:", "[10, 20]",
                             "}", "]", "[", ",", " ", "\n", "\t", "::", "{{"};
  for (int i = 0; i < 3000; ++i) {
    std::string s;
    int pieces = rng.next_int(0, 12);
    for (int k = 0; k < pieces; ++k) {
      if (rng.next_below(3) == 0) {
        s += static_cast<char>(rng.next_int(1, 255));
      } else {
        s += fragments[rng.next_below(std::size(fragments))];
      }
    }
    Mode mode = rng.next_below(2) == 0 ? Mode::Think : Mode::NoThink;
    auto r = resp::parse_response(s, mode);  // must not throw
    if (r.well_formed) {
      CHECK_FALSE(r.actions.empty());
      if (mode == Mode::Think) CHECK(r.think.has_value());
    } else {
      CHECK(r.actions.empty());
    }
    CHECK(r.token_length >= 0);
  }
}

namespace {

ParsedResponse random_response(Rng& rng, Mode mode) {
  ParsedResponse r;
  r.well_formed = true;
  r.mode = mode;
  if (mode == Mode::Think) {
    std::string think;
    int words = rng.next_int(0, 5);
    for (int i = 0; i < words; ++i) {
      if (i > 0) think += ' ';
      int len = rng.next_int(1, 6);
      for (int k = 0; k < len; ++k) think += static_cast<char>('a' + rng.next_below(26));
    }
    r.think = think;
  }
  int n = rng.next_int(1, 3);
  for (int i = 0; i < n; ++i) {
    Action a;
    a.kind = static_cast<ActionType>(rng.next_below(5));
    if (a.kind == ActionType::Click) {
      if (rng.next_below(4) == 0) {
        double x1 = rng.next_int(0, 500), y1 = rng.next_int(0, 500);
        a.box = geom::BBox{x1, y1, x1 + rng.next_int(1, 100), y1 + rng.next_int(1, 100)};
      } else if (rng.next_below(3) == 0) {
        a.coordinate = geom::Point{rng.next_double() * 1000, rng.next_double() * 1000};
      } else {
        a.coordinate = geom::Point{double(rng.next_int(0, 2000)), double(rng.next_int(0, 2000))};
      }
    }
    r.actions.push_back(a);
  }
  return r;
}

}  // namespace

TEST_CASE("serialize/parse round trip preserves actions and think text") {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    Mode mode = rng.next_below(2) == 0 ? Mode::Think : Mode::NoThink;
    ParsedResponse r = random_response(rng, mode);
    std::string text = resp::serialize_response(r, mode);
    ParsedResponse back = resp::parse_response(text, mode);
    REQUIRE(back.well_formed);
    CHECK(back.actions == r.actions);
    if (mode == Mode::Think) CHECK(back.think == r.think);
  }
}

TEST_CASE("serialized canonical examples") {
  ParsedResponse r;
  r.well_formed = true;
  r.think = "t";
  Action a;
  a.kind = ActionType::Click;
  a.coordinate = geom::Point{10, 20};
  r.actions.push_back(a);
  CHECK(resp::serialize_response(r, Mode::Think) ==
        "<think>t</think><answer>[{action: click, coordinate: [10, 20]}]</answer>");

  ParsedResponse s;
  s.well_formed = true;
  s.actions.push_back({ActionType::Scroll, std::nullopt, std::nullopt});
  CHECK(resp::serialize_response(s, Mode::NoThink) ==
        "<answer>[{action: scroll}]</answer>");
}

TEST_CASE("serialize_response enforces its preconditions") {
  ParsedResponse r;
  r.well_formed = false;
  CHECK_THROWS_AS(resp::serialize_response(r, Mode::Think), std::invalid_argument);

  ParsedResponse no_think;
  no_think.well_formed = true;
  no_think.actions.push_back({ActionType::Scroll, std::nullopt, std::nullopt});
  CHECK_THROWS_AS(resp::serialize_response(no_think, Mode::Think), std::invalid_argument);

  ParsedResponse click_without_coord;
  click_without_coord.well_formed = true;
  click_without_coord.actions.push_back({ActionType::Click, std::nullopt, std::nullopt});
  CHECK_THROWS_AS(resp::serialize_response(click_without_coord, Mode::NoThink),
                  std::invalid_argument);
}

TEST_CASE("mode exclusivity: well-formed under one mode only") {
  Rng rng(13);
  for (int i = 0; i < 400; ++i) {
    Mode mode = rng.next_below(2) == 0 ? Mode::Think : Mode::NoThink;
    ParsedResponse r = random_response(rng, mode);
    std::string text = resp::serialize_response(r, mode);
    Mode other = mode == Mode::Think ? Mode::NoThink : Mode::Think;
    CHECK(resp::parse_response(text, mode).well_formed);
    CHECK_FALSE(resp::parse_response(text, other).well_formed);
  }
}

TEST_CASE("token counting follows whitespace splits") {
  CHECK(resp::count_tokens("") == 0);
  CHECK(resp::count_tokens("   ") == 0);
  CHECK(resp::count_tokens("a") == 1);
  CHECK(resp::count_tokens(" a  b\tc\nd ") == 4);
}
