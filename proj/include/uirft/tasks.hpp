#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uirft/geometry.hpp"
#include "uirft/response.hpp"
#include "uirft/rng.hpp"

namespace uirft {

enum class Platform { Mobile, Desktop, Web };
enum class ElementType { Icon, Text };
enum class Difficulty { Easy, Hard };

std::string_view platform_name(Platform p);
std::optional<Platform> parse_platform(std::string_view s);
std::string_view element_type_name(ElementType t);
std::optional<ElementType> parse_element_type(std::string_view s);
std::string_view difficulty_name(Difficulty d);
std::optional<Difficulty> parse_difficulty(std::string_view s);

struct GroundTruth {
  std::string action;                  // raw annotated action name
  std::optional<geom::BBox> bbox;      // present for click targets
  std::optional<std::string> arg;      // app name or text payload, bookkeeping only

  std::optional<resp::ActionType> type() const {
    return resp::canonical_action_name(action);
  }
};

// One single-state GUI task: a screen, a low-level instruction, and the
// action that solves it.
struct TaskSample {
  std::string id;
  Platform platform = Platform::Mobile;
  geom::ImageSize image_size{1179, 2556};
  std::string instruction;
  GroundTruth gt;
  std::string element;
  ElementType element_type = ElementType::Icon;
  std::optional<Difficulty> difficulty;
  int feature = 0;  // identity feature consumed by the surrogate policy
};

struct ScreenElement {
  std::string name;
  geom::BBox bbox;
  ElementType type = ElementType::Icon;
};

// Stand-in for a screenshot: a grid of non-overlapping element boxes. The
// first element is the instruction target.
struct SyntheticScreen {
  int grid = 16;
  std::vector<ScreenElement> elements;
  int distractor_count = 0;
};

// Relative weights over the five action types. Defaults reproduce the
// 101/5/2/9/19 mobile training mixture.
struct ActionMixture {
  double click = 101;
  double scroll = 5;
  double input_text = 2;
  double navigate_back = 9;
  double open_app = 19;
};

struct GenConfig {
  int grid = 16;
  ActionMixture mixture;
  double hard_fraction = 0.15;
  std::vector<Platform> platforms = {Platform::Mobile};
  int easy_distractors = 3;
  int hard_distractors = 8;
  // Easy targets span easy_span x easy_span grid cells at a random cell
  // offset; hard targets occupy a single cell.
  int easy_span = 6;
  int distractor_span = 3;
};

void validate(const GenConfig& config);

// Largest-remainder apportionment of `total` across `weights`.
std::vector<int> apportion(std::span<const double> weights, int total);

geom::ImageSize platform_image_size(Platform p);

SyntheticScreen synthesize_screen(Rng& rng, const GenConfig& config,
                                  Difficulty difficulty, geom::ImageSize size);

// Deterministic given seed. Instructions are templated from element names;
// the action-type histogram follows the mixture exactly (largest remainder).
std::vector<TaskSample> generate_tasks(std::uint64_t seed, int count,
                                       const GenConfig& config = {});

}  // namespace uirft
