#pragma once

#include <optional>
#include <span>
#include <vector>

#include "uirft/geometry.hpp"
#include "uirft/response.hpp"
#include "uirft/tasks.hpp"

namespace uirft::reward {

enum class CoordVariant { PointInBox, IoUThreshold };

struct RewardConfig {
  resp::Mode mode = resp::Mode::Think;
  CoordVariant coordinate_variant = CoordVariant::PointInBox;
  double iou_threshold = 0.5;
  bool dast_enabled = false;
  int l_max = 1024;
};

void validate(const RewardConfig& cfg);

struct RewardBreakdown {
  int r_type = 0;
  int r_coord = 0;
  int r_format = 0;
  double r_length = 0.0;
  double total = 0.0;
};

// Group-level token length budget (p * mean correct length + (1-p) * l_max).
struct BudgetStats {
  int correct_count = 0;
  int group_size = 0;
  double mean_correct_length = 0.0;
  double budget = 0.0;
};

int action_type_reward(resp::ActionType pred, resp::ActionType gt);

// PointInBox: 1 iff the predicted point lands inside the ground-truth box.
// IoUThreshold: the prediction must itself be a box with iou > threshold.
// Without a ground-truth box (non-click steps) the reward is vacuously 1
// unless the prediction supplies spatial data anyway.
int coordinate_reward(const std::optional<geom::Point>& pred_point,
                      const std::optional<geom::BBox>& pred_box,
                      const std::optional<geom::BBox>& gt_box,
                      CoordVariant variant, double iou_threshold = 0.5);

int format_reward(const resp::ParsedResponse& r, resp::Mode mode);

BudgetStats token_length_budget(std::span<const int> lengths,
                                const std::vector<bool>& correct, int l_max);

// Piecewise length shaping: correct responses earn max(-0.5*l + 0.5, 0.1),
// incorrect ones min(0.9*l - 0.1, -0.1), with l the relative deviation from
// the budget.
double length_reward(int length, double budget, bool correct);

// Composition of the component rewards. `stats` must be present exactly when
// cfg.dast_enabled. A response that is not well-formed earns no task rewards.
RewardBreakdown total_reward(const TaskSample& sample,
                             const resp::ParsedResponse& response,
                             const std::optional<BudgetStats>& stats,
                             const RewardConfig& cfg);

// Scores one rollout group, deriving the length budget from the group itself
// when DAST is enabled.
std::vector<RewardBreakdown> score_group(
    const TaskSample& sample, std::span<const resp::ParsedResponse> responses,
    const RewardConfig& cfg);

}  // namespace uirft::reward
