#include "uirft/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <functional>
#include <map>
#include <stdexcept>

#include "uirft/io.hpp"

namespace uirft::cfg {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

struct Field {
  std::string key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
    throw std::invalid_argument("config: bad value for " + key + ": '" + value + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument("config: bad boolean for " + key + ": '" + value + "'");
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"learning_rate",
       [](const RunConfig& c) { return format_double(c.learning_rate); },
       [](RunConfig& c, const std::string& v) { c.learning_rate = parse_number<double>("learning_rate", v); }},
      {"lr_schedule",
       [](const RunConfig& c) { return c.lr_schedule; },
       [](RunConfig& c, const std::string& v) { c.lr_schedule = v; }},
      {"max_pixels",
       [](const RunConfig& c) { return std::to_string(c.max_pixels); },
       [](RunConfig& c, const std::string& v) { c.max_pixels = parse_number<std::int64_t>("max_pixels", v); }},
      {"num_generations",
       [](const RunConfig& c) { return std::to_string(c.num_generations); },
       [](RunConfig& c, const std::string& v) { c.num_generations = parse_number<int>("num_generations", v); }},
      {"num_train_epochs",
       [](const RunConfig& c) { return std::to_string(c.num_train_epochs); },
       [](RunConfig& c, const std::string& v) { c.num_train_epochs = parse_number<int>("num_train_epochs", v); }},
      {"max_prompt_length",
       [](const RunConfig& c) { return std::to_string(c.max_prompt_length); },
       [](RunConfig& c, const std::string& v) { c.max_prompt_length = parse_number<int>("max_prompt_length", v); }},
      {"per_device_train_batch_size",
       [](const RunConfig& c) { return std::to_string(c.per_device_train_batch_size); },
       [](RunConfig& c, const std::string& v) { c.per_device_train_batch_size = parse_number<int>("per_device_train_batch_size", v); }},
      {"gradient_accumulation_steps",
       [](const RunConfig& c) { return std::to_string(c.gradient_accumulation_steps); },
       [](RunConfig& c, const std::string& v) { c.gradient_accumulation_steps = parse_number<int>("gradient_accumulation_steps", v); }},
      {"reward_mode",
       [](const RunConfig& c) { return c.reward_mode; },
       [](RunConfig& c, const std::string& v) { c.reward_mode = v; }},
      {"coordinate_variant",
       [](const RunConfig& c) { return c.coordinate_variant; },
       [](RunConfig& c, const std::string& v) { c.coordinate_variant = v; }},
      {"iou_threshold",
       [](const RunConfig& c) { return format_double(c.iou_threshold); },
       [](RunConfig& c, const std::string& v) { c.iou_threshold = parse_number<double>("iou_threshold", v); }},
      {"dast",
       [](const RunConfig& c) { return std::string(c.dast ? "true" : "false"); },
       [](RunConfig& c, const std::string& v) { c.dast = parse_bool("dast", v); }},
      {"epsilon",
       [](const RunConfig& c) { return format_double(c.epsilon); },
       [](RunConfig& c, const std::string& v) { c.epsilon = parse_number<double>("epsilon", v); }},
      {"beta",
       [](const RunConfig& c) { return format_double(c.beta); },
       [](RunConfig& c, const std::string& v) { c.beta = parse_number<double>("beta", v); }},
      {"seed",
       [](const RunConfig& c) { return std::to_string(c.seed); },
       [](RunConfig& c, const std::string& v) { c.seed = parse_number<std::uint64_t>("seed", v); }},
      {"grid",
       [](const RunConfig& c) { return std::to_string(c.grid); },
       [](RunConfig& c, const std::string& v) { c.grid = parse_number<int>("grid", v); }},
      {"think_vocab",
       [](const RunConfig& c) { return std::to_string(c.think_vocab); },
       [](RunConfig& c, const std::string& v) { c.think_vocab = parse_number<int>("think_vocab", v); }},
      {"temperature",
       [](const RunConfig& c) { return format_double(c.temperature); },
       [](RunConfig& c, const std::string& v) { c.temperature = parse_number<double>("temperature", v); }},
      {"resize_factor",
       [](const RunConfig& c) { return std::to_string(c.resize_factor); },
       [](RunConfig& c, const std::string& v) { c.resize_factor = parse_number<int>("resize_factor", v); }},
      {"min_pixels",
       [](const RunConfig& c) { return std::to_string(c.min_pixels); },
       [](RunConfig& c, const std::string& v) { c.min_pixels = parse_number<std::int64_t>("min_pixels", v); }},
      {"jobs",
       [](const RunConfig& c) { return std::to_string(c.jobs); },
       [](RunConfig& c, const std::string& v) { c.jobs = parse_number<int>("jobs", v); }},
  };
  return table;
}

}  // namespace

resp::Mode RunConfig::mode() const {
  if (reward_mode == "think") return resp::Mode::Think;
  if (reward_mode == "nothink") return resp::Mode::NoThink;
  throw std::invalid_argument("config: reward_mode must be think or nothink");
}

reward::CoordVariant RunConfig::variant() const {
  if (coordinate_variant == "point_in_box") return reward::CoordVariant::PointInBox;
  if (coordinate_variant == "iou_threshold") return reward::CoordVariant::IoUThreshold;
  throw std::invalid_argument(
      "config: coordinate_variant must be point_in_box or iou_threshold");
}

reward::RewardConfig RunConfig::reward_config() const {
  reward::RewardConfig r;
  r.mode = mode();
  r.coordinate_variant = variant();
  r.iou_threshold = iou_threshold;
  r.dast_enabled = dast;
  r.l_max = max_prompt_length;
  return r;
}

grpo::Hyper RunConfig::hyper() const {
  grpo::Hyper h;
  h.epsilon = epsilon;
  h.beta = beta;
  h.group_size = num_generations;
  h.learning_rate = learning_rate;
  return h;
}

geom::ResizePolicy RunConfig::resize_policy() const {
  return {resize_factor, min_pixels, max_pixels};
}

gym::TrainConfig RunConfig::train_config(const std::string& stage) const {
  gym::TrainConfig t;
  t.reward = reward_config();
  if (stage == "think") {
    t.reward.mode = resp::Mode::Think;
    t.reward.dast_enabled = false;
  } else if (stage == "dast") {
    t.reward.mode = resp::Mode::Think;
    t.reward.dast_enabled = true;
  } else if (stage == "nothink") {
    t.reward.mode = resp::Mode::NoThink;
    t.reward.dast_enabled = false;
  } else {
    throw std::invalid_argument("config: stage must be think, dast or nothink");
  }
  t.hyper = hyper();
  t.epochs = num_train_epochs;
  t.grad_accum = gradient_accumulation_steps;
  t.seed = seed;
  t.stage = stage;
  t.decay_lr = lr_schedule == "linear_to_zero";
  return t;
}

void validate(const RunConfig& cfg) {
  if (!(cfg.learning_rate >= 0.0)) throw std::invalid_argument("config: learning_rate must be >= 0");
  if (cfg.lr_schedule != "linear_to_zero" && cfg.lr_schedule != "constant") {
    throw std::invalid_argument("config: lr_schedule must be linear_to_zero or constant");
  }
  if (cfg.num_generations < 2) throw std::invalid_argument("config: num_generations must be >= 2");
  if (cfg.num_train_epochs < 0) throw std::invalid_argument("config: num_train_epochs must be >= 0");
  if (cfg.max_prompt_length < 1) throw std::invalid_argument("config: max_prompt_length must be >= 1");
  if (cfg.per_device_train_batch_size < 1) {
    throw std::invalid_argument("config: per_device_train_batch_size must be >= 1");
  }
  if (cfg.gradient_accumulation_steps < 1) {
    throw std::invalid_argument("config: gradient_accumulation_steps must be >= 1");
  }
  if (!(cfg.iou_threshold > 0.0 && cfg.iou_threshold < 1.0)) {
    throw std::invalid_argument("config: iou_threshold must be in (0,1)");
  }
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) {
    throw std::invalid_argument("config: epsilon must be in (0,1)");
  }
  if (cfg.beta < 0.0) throw std::invalid_argument("config: beta must be >= 0");
  if (cfg.grid < 2) throw std::invalid_argument("config: grid must be >= 2");
  if (cfg.think_vocab < 1) throw std::invalid_argument("config: think_vocab must be >= 1");
  if (!(cfg.temperature > 0.0)) throw std::invalid_argument("config: temperature must be > 0");
  if (cfg.resize_factor < 1) throw std::invalid_argument("config: resize_factor must be >= 1");
  if (cfg.min_pixels < static_cast<std::int64_t>(cfg.resize_factor) * cfg.resize_factor) {
    throw std::invalid_argument("config: min_pixels must be >= resize_factor^2");
  }
  if (cfg.max_pixels < cfg.min_pixels) {
    throw std::invalid_argument("config: max_pixels must be >= min_pixels");
  }
  if (cfg.jobs < 1) throw std::invalid_argument("config: jobs must be >= 1");
  cfg.mode();
  cfg.variant();
}

RunConfig parse_config(const std::string& text, RunConfig base) {
  RunConfig cfg = base;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    std::string line = trim(text.substr(pos, end == std::string::npos ? end : end - pos));
    ++line_no;
    pos = end == std::string::npos ? text.size() + 1 : end + 1;
    if (line.empty() || line[0] == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config:" + std::to_string(line_no) +
                                  ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    bool found = false;
    for (const Field& f : fields()) {
      if (f.key == key) {
        f.set(cfg, value);
        found = true;
        break;
      }
    }
    if (!found) {
      throw std::invalid_argument("config:" + std::to_string(line_no) +
                                  ": unknown key '" + key + "'");
    }
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  return parse_config(io::read_file(path), base);
}

RunConfig apply_env(RunConfig cfg) {
  for (const Field& f : fields()) {
    std::string var = "UIRFT_" + f.key;
    std::transform(var.begin(), var.end(), var.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (const char* v = std::getenv(var.c_str())) {
      f.set(cfg, v);
    }
  }
  validate(cfg);
  return cfg;
}

std::string dump_config(const RunConfig& cfg) {
  std::string out = "# uirft effective configuration\n";
  for (const Field& f : fields()) {
    out += f.key;
    out += " = ";
    out += f.get(cfg);
    out += '\n';
  }
  return out;
}

}  // namespace uirft::cfg
