#include "uirft/reward.hpp"

#include <algorithm>
#include <stdexcept>

namespace uirft::reward {

void validate(const RewardConfig& cfg) {
  if (!(cfg.iou_threshold > 0.0 && cfg.iou_threshold < 1.0)) {
    throw std::invalid_argument("RewardConfig: iou_threshold must be in (0,1)");
  }
  if (cfg.l_max < 1) {
    throw std::invalid_argument("RewardConfig: l_max must be >= 1");
  }
}

int action_type_reward(resp::ActionType pred, resp::ActionType gt) {
  return pred == gt ? 1 : 0;
}

int coordinate_reward(const std::optional<geom::Point>& pred_point,
                      const std::optional<geom::BBox>& pred_box,
                      const std::optional<geom::BBox>& gt_box,
                      CoordVariant variant, double iou_threshold) {
  if (!gt_box) {
    return (pred_point || pred_box) ? 0 : 1;
  }
  if (variant == CoordVariant::PointInBox) {
    return (pred_point && geom::point_in_bbox(*pred_point, *gt_box)) ? 1 : 0;
  }
  return (pred_box && geom::iou(*pred_box, *gt_box) > iou_threshold) ? 1 : 0;
}

int format_reward(const resp::ParsedResponse& r, resp::Mode mode) {
  if (r.mode == mode) return r.well_formed ? 1 : 0;
  return resp::parse_response(r.raw, mode).well_formed ? 1 : 0;
}

BudgetStats token_length_budget(std::span<const int> lengths,
                                const std::vector<bool>& correct, int l_max) {
  if (lengths.empty() || lengths.size() != correct.size()) {
    throw std::invalid_argument("token_length_budget: lists must be non-empty and aligned");
  }
  if (l_max < 1) throw std::invalid_argument("token_length_budget: l_max must be >= 1");

  BudgetStats stats;
  stats.group_size = static_cast<int>(lengths.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (correct[i]) {
      stats.correct_count++;
      sum += lengths[i];
    }
  }
  double p = static_cast<double>(stats.correct_count) / stats.group_size;
  if (stats.correct_count > 0) {
    stats.mean_correct_length = sum / stats.correct_count;
    stats.budget = p * stats.mean_correct_length + (1.0 - p) * l_max;
  } else {
    stats.mean_correct_length = 0.0;
    stats.budget = l_max;
  }
  return stats;
}

double length_reward(int length, double budget, bool correct) {
  if (!(budget > 0.0)) {
    throw std::invalid_argument("length_reward: budget must be positive");
  }
  double lambda = (length - budget) / budget;
  if (correct) return std::max(-0.5 * lambda + 0.5, 0.1);
  return std::min(0.9 * lambda - 0.1, -0.1);
}

RewardBreakdown total_reward(const TaskSample& sample,
                             const resp::ParsedResponse& response,
                             const std::optional<BudgetStats>& stats,
                             const RewardConfig& cfg) {
  validate(cfg);
  if (cfg.dast_enabled != stats.has_value()) {
    throw std::invalid_argument("total_reward: stats required iff DAST enabled");
  }

  RewardBreakdown b;
  b.r_format = format_reward(response, cfg.mode);

  bool usable = response.well_formed && !response.actions.empty();
  if (usable) {
    const resp::Action& pred = response.actions.front();
    std::optional<resp::ActionType> gt_type = sample.gt.type();
    if (gt_type) {
      b.r_type = action_type_reward(pred.kind, *gt_type);
    }
    b.r_coord = coordinate_reward(pred.coordinate, pred.box, sample.gt.bbox,
                                  cfg.coordinate_variant, cfg.iou_threshold);
  }

  if (cfg.dast_enabled) {
    bool correct = b.r_type == 1 && b.r_coord == 1;
    b.r_length = length_reward(response.token_length, stats->budget, correct);
  }
  b.total = b.r_type + b.r_coord + b.r_format + b.r_length;
  return b;
}

std::vector<RewardBreakdown> score_group(
    const TaskSample& sample, std::span<const resp::ParsedResponse> responses,
    const RewardConfig& cfg) {
  validate(cfg);
  if (responses.empty()) {
    throw std::invalid_argument("score_group: empty group");
  }

  std::optional<BudgetStats> stats;
  if (cfg.dast_enabled) {
    RewardConfig base = cfg;
    base.dast_enabled = false;
    std::vector<int> lengths;
    std::vector<bool> correct;
    lengths.reserve(responses.size());
    correct.reserve(responses.size());
    for (const auto& r : responses) {
      RewardBreakdown b = total_reward(sample, r, std::nullopt, base);
      lengths.push_back(r.token_length);
      correct.push_back(b.r_type == 1 && b.r_coord == 1);
    }
    stats = token_length_budget(lengths, correct, cfg.l_max);
  }

  std::vector<RewardBreakdown> out;
  out.reserve(responses.size());
  for (const auto& r : responses) {
    out.push_back(total_reward(sample, r, stats, cfg));
  }
  return out;
}

}  // namespace uirft::reward
