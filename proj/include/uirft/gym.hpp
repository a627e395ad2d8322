#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "uirft/eval.hpp"
#include "uirft/grpo.hpp"
#include "uirft/policy.hpp"
#include "uirft/reward.hpp"
#include "uirft/tasks.hpp"

namespace uirft::gym {

// Pixel center of a grid cell in original-image space.
geom::Point cell_center(int x_cell, int y_cell, const geom::ImageSize& size,
                        int grid);

// Fixed mapping between ActionKind slot indices and action types.
int action_index(resp::ActionType t);
resp::ActionType action_from_index(int i);

// Smallest policy shape covering every task feature.
PolicyShape shape_for(std::span<const TaskSample> tasks, int grid = 16,
                      int think_vocab = 9);

struct Rollout {
  std::string text;
  TokenSeq tokens;
  std::vector<double> logprobs;  // exact log-probability of each sampled token
  resp::ParsedResponse parsed;
};

Rollout rollout(const PolicyParams& policy, const TaskSample& sample,
                resp::Mode mode, Rng& rng);
Rollout greedy_rollout(const PolicyParams& policy, const TaskSample& sample,
                       resp::Mode mode);

bool greedy_correct(const PolicyParams& policy, const TaskSample& sample,
                    resp::Mode mode);
double greedy_accuracy(const PolicyParams& policy,
                       std::span<const TaskSample> tasks, resp::Mode mode);

evalh::MetricReport evaluate_policy(
    const PolicyParams& policy, std::span<const TaskSample> tasks,
    resp::Mode mode, evalh::Protocol protocol = evalh::Protocol::ScreenSpot);

struct TrainConfig {
  reward::RewardConfig reward;
  grpo::Hyper hyper;
  int epochs = 8;
  int grad_accum = 2;
  std::uint64_t seed = 17;
  std::string stage = "think";
  bool decay_lr = true;  // linear decay to 0 across the run
};

struct TraceRecord {
  int step = 0;
  int epoch = 0;
  std::string stage;
  std::string sample_id;
  double mean_reward = 0.0;
  double mean_advantage_abs = 0.0;
  double objective = 0.0;
  double kl = 0.0;
  double accuracy = 0.0;
};

struct TrainResult {
  PolicyParams policy;
  std::vector<TraceRecord> trace;
};

// One GRPO pass per task per epoch: sample a group, score it, normalize
// advantages, take an ascent step (with gradient accumulation).
TrainResult train(const PolicyParams& init, std::span<const TaskSample> tasks,
                  const TrainConfig& cfg);

// Single-group update, exposed for tests.
void apply_group_update(PolicyParams& policy, const grpo::Group& group,
                        const PolicyParams& reference, const grpo::Hyper& hyper,
                        double learning_rate);

}  // namespace uirft::gym
