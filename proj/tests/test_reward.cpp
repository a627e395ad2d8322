#include "uirft/reward.hpp"

#include <cmath>

#include "doctest.h"
#include "uirft/rng.hpp"

using namespace uirft;
using resp::ActionType;
using resp::Mode;
using reward::CoordVariant;
using reward::RewardConfig;

namespace {

TaskSample click_sample() {
  TaskSample t;
  t.id = "s0";
  t.image_size = {1000, 1000};
  t.instruction = "Click the icon";
  t.gt.action = "click";
  t.gt.bbox = geom::BBox{0, 0, 100, 100};
  return t;
}

TaskSample scroll_sample() {
  TaskSample t;
  t.id = "s1";
  t.image_size = {1000, 1000};
  t.instruction = "Scroll down";
  t.gt.action = "scroll";
  return t;
}

}  // namespace

TEST_CASE("action_type_reward is the equality indicator") {
  CHECK(reward::action_type_reward(ActionType::Click, ActionType::Click) == 1);
  CHECK(reward::action_type_reward(ActionType::Scroll, ActionType::Click) == 0);
  CHECK(reward::action_type_reward(ActionType::InputText, ActionType::InputText) == 1);
}

TEST_CASE("coordinate_reward point-in-box variant") {
  geom::BBox box{0, 0, 100, 100};
  CHECK(reward::coordinate_reward(geom::Point{50, 50}, std::nullopt, box,
                                  CoordVariant::PointInBox) == 1);
  CHECK(reward::coordinate_reward(geom::Point{150, 50}, std::nullopt, box,
                                  CoordVariant::PointInBox) == 0);
  CHECK(reward::coordinate_reward(std::nullopt, std::nullopt, box,
                                  CoordVariant::PointInBox) == 0);
}

TEST_CASE("coordinate_reward IoU variant requires a predicted box") {
  geom::BBox gt{5, 0, 15, 10};
  CHECK(reward::coordinate_reward(std::nullopt, geom::BBox{0, 0, 10, 10}, gt,
                                  CoordVariant::IoUThreshold, 0.5) == 0);  // IoU 1/3
  CHECK(reward::coordinate_reward(std::nullopt, geom::BBox{5, 0, 15, 10}, gt,
                                  CoordVariant::IoUThreshold, 0.5) == 1);
  CHECK(reward::coordinate_reward(geom::Point{7, 5}, std::nullopt, gt,
                                  CoordVariant::IoUThreshold, 0.5) == 0);
  // strict threshold: IoU exactly 0.5 earns nothing
  CHECK(geom::iou({0, 0, 10, 10}, {0, 0, 10, 5}) == doctest::Approx(0.5));
  CHECK(reward::coordinate_reward(std::nullopt, geom::BBox{0, 0, 10, 5},
                                  geom::BBox{0, 0, 10, 10},
                                  CoordVariant::IoUThreshold, 0.5) == 0);
}

TEST_CASE("coordinate_reward is vacuous without a ground-truth box") {
  CHECK(reward::coordinate_reward(std::nullopt, std::nullopt, std::nullopt,
                                  CoordVariant::PointInBox) == 1);
  CHECK(reward::coordinate_reward(geom::Point{1, 1}, std::nullopt, std::nullopt,
                                  CoordVariant::PointInBox) == 0);
  CHECK(reward::coordinate_reward(std::nullopt, geom::BBox{0, 0, 1, 1}, std::nullopt,
                                  CoordVariant::IoUThreshold) == 0);
}

TEST_CASE("format_reward follows well-formedness under the mode") {
  auto think_ok = resp::parse_response(
      "<think>x</think><answer>[{action: scroll}]</answer>", Mode::Think);
  CHECK(reward::format_reward(think_ok, Mode::Think) == 1);

  auto answer_only = resp::parse_response("<answer>[{action: scroll}]</answer>", Mode::Think);
  CHECK(reward::format_reward(answer_only, Mode::Think) == 0);
  // the same text re-checked under nothink scores
  CHECK(reward::format_reward(answer_only, Mode::NoThink) == 1);
}

TEST_CASE("token_length_budget mixes correct mean and max length") {
  // 4 of 8 correct with mean correct length 100
  std::vector<int> lengths{100, 100, 100, 100, 900, 900, 900, 900};
  std::vector<bool> correct{true, true, true, true, false, false, false, false};
  auto stats = reward::token_length_budget(lengths, correct, 1024);
  CHECK(stats.correct_count == 4);
  CHECK(stats.group_size == 8);
  CHECK(stats.mean_correct_length == doctest::Approx(100.0));
  CHECK(stats.budget == doctest::Approx(562.0));
}

TEST_CASE("token_length_budget edge cases") {
  std::vector<int> lengths{100, 100};
  std::vector<bool> all_correct{true, true};
  CHECK(reward::token_length_budget(lengths, all_correct, 1024).budget ==
        doctest::Approx(100.0));

  std::vector<bool> none_correct{false, false};
  CHECK(reward::token_length_budget(lengths, none_correct, 1024).budget ==
        doctest::Approx(1024.0));

  CHECK_THROWS_AS(reward::token_length_budget({}, {}, 1024), std::invalid_argument);
}

TEST_CASE("length_reward reproduces the piecewise values") {
  CHECK(reward::length_reward(100, 100.0, true) == doctest::Approx(0.5));
  CHECK(reward::length_reward(200, 100.0, true) == doctest::Approx(0.1));
  CHECK(reward::length_reward(50, 100.0, false) == doctest::Approx(-0.55));
  CHECK(reward::length_reward(200, 100.0, false) == doctest::Approx(-0.1));
  CHECK_THROWS_AS(reward::length_reward(10, 0.0, true), std::invalid_argument);
}

TEST_CASE("length_reward monotonicity and separation over random draws") {
  Rng rng(31337);
  for (int i = 0; i < 10000; ++i) {
    double budget = 1.0 + rng.next_double() * 1023.0;
    int l1 = rng.next_int(0, 2048);
    int l2 = rng.next_int(0, 2048);
    if (l1 > l2) std::swap(l1, l2);

    double c1 = reward::length_reward(l1, budget, true);
    double c2 = reward::length_reward(l2, budget, true);
    double w1 = reward::length_reward(l1, budget, false);
    double w2 = reward::length_reward(l2, budget, false);

    CHECK(c1 >= c2);          // correct branch non-increasing
    CHECK(w1 <= w2);          // incorrect branch non-decreasing
    CHECK(c1 >= 0.1);
    CHECK(c1 <= 1.0);
    CHECK(w1 <= -0.1);
    CHECK(c1 > w1);           // separation at fixed length
    CHECK(c2 > w2);
  }
}

TEST_CASE("total_reward composes the three base terms") {
  TaskSample sample = click_sample();
  RewardConfig cfg;

  auto perfect = resp::parse_response(
      "<think>t</think><answer>[{action: click, coordinate: [50, 50]}]</answer>",
      Mode::Think);
  auto b = reward::total_reward(sample, perfect, std::nullopt, cfg);
  CHECK(b.r_type == 1);
  CHECK(b.r_coord == 1);
  CHECK(b.r_format == 1);
  CHECK(b.r_length == 0.0);
  CHECK(b.total == doctest::Approx(3.0));
}

TEST_CASE("total_reward with DAST adds the length term") {
  TaskSample sample = click_sample();
  RewardConfig cfg;
  cfg.dast_enabled = true;

  auto perfect = resp::parse_response(
      "<think>t</think><answer>[{action: click, coordinate: [50, 50]}]</answer>",
      Mode::Think);
  reward::BudgetStats stats;
  stats.budget = perfect.token_length;
  stats.group_size = 8;
  auto b = reward::total_reward(sample, perfect, stats, cfg);
  CHECK(b.r_length == doctest::Approx(0.5));
  CHECK(b.total == doctest::Approx(3.5));

  CHECK_THROWS_AS(reward::total_reward(sample, perfect, std::nullopt, cfg),
                  std::invalid_argument);
}

TEST_CASE("malformed responses earn no task rewards") {
  TaskSample sample = click_sample();
  RewardConfig cfg;
  auto bad = resp::parse_response("click at [50, 50]", Mode::Think);
  auto b = reward::total_reward(sample, bad, std::nullopt, cfg);
  CHECK(b.r_type == 0);
  CHECK(b.r_coord == 0);
  CHECK(b.r_format == 0);
  CHECK(b.total == 0.0);
}

TEST_CASE("non-click ground truths make the coordinate term vacuous") {
  TaskSample sample = scroll_sample();
  RewardConfig cfg;
  auto r = resp::parse_response("<think>t</think><answer>[{action: scroll}]</answer>",
                                Mode::Think);
  auto b = reward::total_reward(sample, r, std::nullopt, cfg);
  CHECK(b.r_type == 1);
  CHECK(b.r_coord == 1);
  CHECK(b.total == doctest::Approx(3.0));

  auto click = resp::parse_response(
      "<think>t</think><answer>[{action: click, coordinate: [5, 5]}]</answer>",
      Mode::Think);
  auto b2 = reward::total_reward(sample, click, std::nullopt, cfg);
  CHECK(b2.r_type == 0);
  CHECK(b2.r_coord == 0);  // spurious spatial prediction
  CHECK(b2.total == doctest::Approx(1.0));
}

TEST_CASE("totals without DAST stay in 0..3") {
  Rng rng(5);
  TaskSample sample = click_sample();
  RewardConfig cfg;
  const char* texts[] = {
      "<think>a</think><answer>[{action: click, coordinate: [50, 50]}]</answer>",
      "<think>a</think><answer>[{action: click, coordinate: [500, 500]}]</answer>",
      "<think>a</think><answer>[{action: scroll}]</answer>",
      "<answer>[{action: click, coordinate: [50, 50]}]</answer>",
      "garbage",
  };
  for (const char* text : texts) {
    auto r = resp::parse_response(text, Mode::Think);
    auto b = reward::total_reward(sample, r, std::nullopt, cfg);
    CHECK(b.total >= 0.0);
    CHECK(b.total <= 3.0);
    CHECK(b.total == doctest::Approx(b.r_type + b.r_coord + b.r_format));
    (void)rng;
  }
}

TEST_CASE("score_group derives the budget from the group") {
  TaskSample sample = click_sample();
  RewardConfig cfg;
  cfg.dast_enabled = true;
  cfg.l_max = 1024;

  std::vector<resp::ParsedResponse> group;
  group.push_back(resp::parse_response(
      "<think>one two</think><answer>[{action: click, coordinate: [50, 50]}]</answer>",
      Mode::Think));
  group.push_back(resp::parse_response(
      "<think>one two</think><answer>[{action: click, coordinate: [500, 500]}]</answer>",
      Mode::Think));
  auto breakdowns = reward::score_group(sample, group, cfg);
  REQUIRE(breakdowns.size() == 2);

  // one correct of two; budget = 0.5 * L + 0.5 * 1024
  double l = group[0].token_length;
  double budget = 0.5 * l + 0.5 * 1024;
  CHECK(breakdowns[0].r_length ==
        doctest::Approx(reward::length_reward(static_cast<int>(l), budget, true)));
  CHECK(breakdowns[1].r_length ==
        doctest::Approx(reward::length_reward(static_cast<int>(l), budget, false)));
  CHECK(breakdowns[0].total == doctest::Approx(3.0 + breakdowns[0].r_length));
}
