#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "uirft/geometry.hpp"
#include "uirft/grpo.hpp"
#include "uirft/gym.hpp"
#include "uirft/response.hpp"
#include "uirft/reward.hpp"

namespace uirft::cfg {

// Flat, human-editable run configuration. Defaults mirror the published
// training hyperparameters; the surrogate policy typically needs a much
// larger learning rate (see README).
struct RunConfig {
  double learning_rate = 9.98e-7;
  std::string lr_schedule = "linear_to_zero";  // or "constant"
  std::int64_t max_pixels = 12845056;
  int num_generations = 8;
  int num_train_epochs = 8;
  int max_prompt_length = 1024;
  int per_device_train_batch_size = 1;
  int gradient_accumulation_steps = 2;
  std::string reward_mode = "think";  // think | nothink
  std::string coordinate_variant = "point_in_box";  // point_in_box | iou_threshold
  double iou_threshold = 0.5;
  bool dast = false;
  double epsilon = 0.2;
  double beta = 0.04;
  std::uint64_t seed = 17;
  int grid = 16;
  int think_vocab = 9;
  double temperature = 1.0;
  int resize_factor = 28;
  std::int64_t min_pixels = 784;
  int jobs = 1;

  resp::Mode mode() const;
  reward::CoordVariant variant() const;
  reward::RewardConfig reward_config() const;
  grpo::Hyper hyper() const;
  geom::ResizePolicy resize_policy() const;
  gym::TrainConfig train_config(const std::string& stage) const;
};

void validate(const RunConfig& cfg);

// key = value lines; '#' comments; unknown keys are errors.
RunConfig parse_config(const std::string& text, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

// UIRFT_<UPPERCASE_KEY> environment overrides.
RunConfig apply_env(RunConfig cfg);

// Canonical form: every key, definition order, round-trip exact.
std::string dump_config(const RunConfig& cfg);

}  // namespace uirft::cfg
