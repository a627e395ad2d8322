#include "uirft/tasks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace uirft {

std::string_view platform_name(Platform p) {
  switch (p) {
    case Platform::Mobile: return "mobile";
    case Platform::Desktop: return "desktop";
    case Platform::Web: return "web";
  }
  return "mobile";
}

std::optional<Platform> parse_platform(std::string_view s) {
  if (s == "mobile") return Platform::Mobile;
  if (s == "desktop") return Platform::Desktop;
  if (s == "web") return Platform::Web;
  return std::nullopt;
}

std::string_view element_type_name(ElementType t) {
  return t == ElementType::Icon ? "icon" : "text";
}

std::optional<ElementType> parse_element_type(std::string_view s) {
  if (s == "icon") return ElementType::Icon;
  if (s == "text") return ElementType::Text;
  return std::nullopt;
}

std::string_view difficulty_name(Difficulty d) {
  return d == Difficulty::Easy ? "easy" : "hard";
}

std::optional<Difficulty> parse_difficulty(std::string_view s) {
  if (s == "easy") return Difficulty::Easy;
  if (s == "hard") return Difficulty::Hard;
  return std::nullopt;
}

void validate(const GenConfig& c) {
  if (c.grid < 2) throw std::invalid_argument("GenConfig: grid must be >= 2");
  if (c.easy_span < 1 || c.easy_span >= c.grid) {
    throw std::invalid_argument("GenConfig: easy_span must be in [1, grid)");
  }
  if (c.distractor_span < 1 || c.distractor_span >= c.grid) {
    throw std::invalid_argument("GenConfig: distractor_span must be in [1, grid)");
  }
  if (!(c.hard_fraction >= 0.0 && c.hard_fraction <= 1.0)) {
    throw std::invalid_argument("GenConfig: hard_fraction must be in [0,1]");
  }
  if (c.platforms.empty()) {
    throw std::invalid_argument("GenConfig: platforms must be non-empty");
  }
  const ActionMixture& m = c.mixture;
  std::array<double, 5> w{m.click, m.scroll, m.input_text, m.navigate_back, m.open_app};
  double sum = 0.0;
  for (double v : w) {
    if (v < 0.0) throw std::invalid_argument("GenConfig: mixture weights must be >= 0");
    sum += v;
  }
  if (sum <= 0.0) throw std::invalid_argument("GenConfig: mixture weights sum to 0");
  if (c.easy_distractors < 0 || c.hard_distractors < 0) {
    throw std::invalid_argument("GenConfig: distractor counts must be >= 0");
  }
}

std::vector<int> apportion(std::span<const double> weights, int total) {
  if (weights.empty() || total < 0) {
    throw std::invalid_argument("apportion: bad arguments");
  }
  double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (sum <= 0.0) throw std::invalid_argument("apportion: weights sum to 0");

  std::vector<int> counts(weights.size(), 0);
  std::vector<std::pair<double, std::size_t>> fractions;
  int assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    double share = weights[i] / sum * total;
    counts[i] = static_cast<int>(std::floor(share));
    assigned += counts[i];
    fractions.emplace_back(share - counts[i], i);
  }
  std::stable_sort(fractions.begin(), fractions.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (int r = 0; r < total - assigned; ++r) {
    counts[fractions[static_cast<std::size_t>(r) % fractions.size()].second]++;
  }
  return counts;
}

geom::ImageSize platform_image_size(Platform p) {
  switch (p) {
    case Platform::Mobile: return {1179, 2556};
    case Platform::Desktop: return {1920, 1080};
    case Platform::Web: return {1280, 800};
  }
  return {1179, 2556};
}

namespace {

constexpr std::array<std::string_view, 12> kIconNames = {
    "wifi icon",      "settings gear", "search icon",  "menu icon",
    "back arrow",     "camera icon",   "share icon",   "home icon",
    "profile avatar", "bell icon",     "lock icon",    "star icon"};

constexpr std::array<std::string_view, 8> kTextNames = {
    "submit button",    "cancel link",   "sign in button", "learn more link",
    "checkout button",  "subscribe button", "details tab", "archive label"};

constexpr std::array<std::string_view, 8> kAppNames = {
    "Settings", "Camera", "Maps", "Clock", "Mail", "Photos", "Calendar", "Notes"};

constexpr std::array<std::string_view, 6> kInputTexts = {
    "hello world", "coffee near me", "meeting notes",
    "john.doe@mail.com", "weekend plans", "invoice 42"};

geom::BBox block_bbox(int bx, int by, int span, double cell_w, double cell_h) {
  double inset_x = 0.02 * cell_w;
  double inset_y = 0.02 * cell_h;
  return {bx * span * cell_w + inset_x, by * span * cell_h + inset_y,
          (bx + 1) * span * cell_w - inset_x, (by + 1) * span * cell_h - inset_y};
}

geom::BBox cell_bbox(int cx, int cy, double cell_w, double cell_h) {
  double inset_x = 0.02 * cell_w;
  double inset_y = 0.02 * cell_h;
  return {cx * cell_w + inset_x, cy * cell_h + inset_y,
          (cx + 1) * cell_w - inset_x, (cy + 1) * cell_h - inset_y};
}

}  // namespace

SyntheticScreen synthesize_screen(Rng& rng, const GenConfig& config,
                                  Difficulty difficulty, geom::ImageSize size) {
  validate(config);
  int span = config.block_span;
  int blocks_per_axis = config.grid / span;
  int total_blocks = blocks_per_axis * blocks_per_axis;
  double cell_w = static_cast<double>(size.width) / config.grid;
  double cell_h = static_cast<double>(size.height) / config.grid;

  int wanted = difficulty == Difficulty::Hard ? config.hard_distractors
                                              : config.easy_distractors;
  int distractors = std::min(wanted, total_blocks - 1);

  std::vector<int> block_ids(total_blocks);
  std::iota(block_ids.begin(), block_ids.end(), 0);
  rng.shuffle(block_ids);

  SyntheticScreen screen;
  screen.grid = config.grid;
  screen.distractor_count = distractors;
  for (int i = 0; i <= distractors; ++i) {
    int bx = block_ids[i] % blocks_per_axis;
    int by = block_ids[i] / blocks_per_axis;
    ElementType type = rng.next_below(2) == 0 ? ElementType::Icon : ElementType::Text;
    std::string_view base =
        type == ElementType::Icon
            ? kIconNames[rng.next_below(kIconNames.size())]
            : kTextNames[rng.next_below(kTextNames.size())];
    geom::BBox box;
    if (i == 0 && difficulty == Difficulty::Hard) {
      // Hard targets occupy a single grid cell near the block center.
      int cx = bx * span + span / 2;
      int cy = by * span + span / 2;
      box = cell_bbox(cx, cy, cell_w, cell_h);
    } else {
      box = block_bbox(bx, by, span, cell_w, cell_h);
    }
    screen.elements.push_back({std::string(base), box, type});
  }
  return screen;
}

std::vector<TaskSample> generate_tasks(std::uint64_t seed, int count,
                                       const GenConfig& config) {
  if (count < 1) throw std::invalid_argument("generate_tasks: count must be >= 1");
  validate(config);
  Rng rng(seed);

  const ActionMixture& m = config.mixture;
  std::array<double, 5> weights{m.click, m.scroll, m.input_text,
                                m.navigate_back, m.open_app};
  std::array<resp::ActionType, 5> order{
      resp::ActionType::Click, resp::ActionType::Scroll,
      resp::ActionType::InputText, resp::ActionType::NavigateBack,
      resp::ActionType::OpenApp};
  std::vector<int> counts = apportion(weights, count);

  std::vector<resp::ActionType> types;
  types.reserve(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < order.size(); ++i) {
    types.insert(types.end(), counts[i], order[i]);
  }
  rng.shuffle(types);

  // Exact hard quota among click tasks.
  std::vector<std::size_t> click_positions;
  for (std::size_t i = 0; i < types.size(); ++i) {
    if (types[i] == resp::ActionType::Click) click_positions.push_back(i);
  }
  rng.shuffle(click_positions);
  std::size_t hard_count = static_cast<std::size_t>(
      std::llround(config.hard_fraction * static_cast<double>(click_positions.size())));
  std::vector<bool> is_hard(types.size(), false);
  for (std::size_t i = 0; i < hard_count; ++i) is_hard[click_positions[i]] = true;

  std::vector<TaskSample> tasks;
  tasks.reserve(types.size());
  for (std::size_t i = 0; i < types.size(); ++i) {
    TaskSample t;
    char idbuf[32];
    std::snprintf(idbuf, sizeof(idbuf), "t%05zu", i);
    t.id = idbuf;
    t.feature = static_cast<int>(i);
    t.platform = config.platforms[rng.next_below(config.platforms.size())];
    t.image_size = platform_image_size(t.platform);
    Difficulty diff = is_hard[i] ? Difficulty::Hard : Difficulty::Easy;
    t.difficulty = diff;

    SyntheticScreen screen = synthesize_screen(rng, config, diff, t.image_size);
    const ScreenElement& target = screen.elements.front();
    t.element = target.name;
    t.element_type = target.type;

    resp::ActionType kind = types[i];
    t.gt.action = std::string(resp::action_name(kind));
    switch (kind) {
      case resp::ActionType::Click:
        t.instruction = "Click the " + target.name;
        t.gt.bbox = target.bbox;
        break;
      case resp::ActionType::Scroll: {
        bool down = rng.next_below(2) == 0;
        t.instruction = down ? "Scroll down the page" : "Scroll up the page";
        t.gt.arg = down ? "down" : "up";
        break;
      }
      case resp::ActionType::NavigateBack:
        t.instruction = "Go back to the previous screen";
        break;
      case resp::ActionType::OpenApp: {
        std::string app(kAppNames[rng.next_below(kAppNames.size())]);
        t.instruction = "Open " + app;
        t.gt.arg = app;
        break;
      }
      case resp::ActionType::InputText: {
        std::string text(kInputTexts[rng.next_below(kInputTexts.size())]);
        t.instruction = "Type \"" + text + "\" in the " + target.name;
        t.gt.arg = text;
        break;
      }
    }
    tasks.push_back(std::move(t));
  }
  return tasks;
}

}  // namespace uirft
