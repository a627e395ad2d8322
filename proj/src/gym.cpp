#include "uirft/gym.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace uirft::gym {

namespace {

constexpr std::string_view kFillerToken = "...";

constexpr std::array<resp::ActionType, 5> kActionOrder = {
    resp::ActionType::Click, resp::ActionType::OpenApp, resp::ActionType::Scroll,
    resp::ActionType::NavigateBack, resp::ActionType::InputText};

std::string filler_think(int tokens) {
  std::string out;
  for (int i = 0; i < tokens; ++i) {
    if (i > 0) out += ' ';
    out += kFillerToken;
  }
  return out;
}

struct Decoder {
  const PolicyParams& policy;
  Rng* rng;  // null = greedy

  int decode(int feature, Slot slot, TokenSeq& tokens, std::vector<double>& lps) {
    int choice;
    double lp;
    if (rng) {
      choice = policy.sample(feature, slot, *rng, &lp);
    } else {
      choice = policy.greedy(feature, slot);
      lp = policy.log_prob_of(feature, slot, choice);
    }
    tokens.push_back({slot, feature, choice});
    lps.push_back(lp);
    return choice;
  }
};

Rollout run_rollout(const PolicyParams& policy, const TaskSample& sample,
                    resp::Mode mode, Rng* rng) {
  if (sample.feature < 0 || sample.feature >= policy.shape().feature_count) {
    throw std::out_of_range("rollout: task feature outside policy shape");
  }
  Decoder dec{policy, rng};
  Rollout out;
  int feature = sample.feature;

  resp::ParsedResponse draft;
  draft.well_formed = true;
  draft.mode = mode;
  if (mode == resp::Mode::Think) {
    int len = dec.decode(feature, Slot::ThinkLen, out.tokens, out.logprobs);
    draft.think = filler_think(len);
  }

  int kind_idx = dec.decode(feature, Slot::ActionKind, out.tokens, out.logprobs);
  resp::Action action;
  action.kind = kActionOrder[static_cast<std::size_t>(kind_idx)];
  if (action.kind == resp::ActionType::Click) {
    int cx = dec.decode(feature, Slot::XCell, out.tokens, out.logprobs);
    int cy = dec.decode(feature, Slot::YCell, out.tokens, out.logprobs);
    geom::Point center =
        cell_center(cx, cy, sample.image_size, policy.shape().grid);
    action.coordinate = geom::Point{static_cast<double>(std::llround(center.x)),
                                    static_cast<double>(std::llround(center.y))};
  }
  draft.actions.push_back(action);

  out.text = resp::serialize_response(draft, mode);
  out.parsed = resp::parse_response(out.text, mode);
  return out;
}

}  // namespace

geom::Point cell_center(int x_cell, int y_cell, const geom::ImageSize& size,
                        int grid) {
  if (grid < 1 || x_cell < 0 || x_cell >= grid || y_cell < 0 || y_cell >= grid) {
    throw std::out_of_range("cell_center: cell outside grid");
  }
  return {(x_cell + 0.5) * size.width / grid, (y_cell + 0.5) * size.height / grid};
}

int action_index(resp::ActionType t) {
  for (std::size_t i = 0; i < kActionOrder.size(); ++i) {
    if (kActionOrder[i] == t) return static_cast<int>(i);
  }
  return 0;
}

resp::ActionType action_from_index(int i) {
  if (i < 0 || i >= static_cast<int>(kActionOrder.size())) {
    throw std::out_of_range("action_from_index: index outside action vocabulary");
  }
  return kActionOrder[static_cast<std::size_t>(i)];
}

PolicyShape shape_for(std::span<const TaskSample> tasks, int grid,
                      int think_vocab) {
  int max_feature = 0;
  for (const TaskSample& t : tasks) max_feature = std::max(max_feature, t.feature);
  PolicyShape shape;
  shape.feature_count = max_feature + 1;
  shape.grid = grid;
  shape.think_vocab = think_vocab;
  return shape;
}

Rollout rollout(const PolicyParams& policy, const TaskSample& sample,
                resp::Mode mode, Rng& rng) {
  return run_rollout(policy, sample, mode, &rng);
}

Rollout greedy_rollout(const PolicyParams& policy, const TaskSample& sample,
                       resp::Mode mode) {
  return run_rollout(policy, sample, mode, nullptr);
}

bool greedy_correct(const PolicyParams& policy, const TaskSample& sample,
                    resp::Mode mode) {
  Rollout r = greedy_rollout(policy, sample, mode);
  evalh::Prediction pred{sample.id, r.text, r.parsed};
  return evalh::sample_correct(pred, sample);
}

double greedy_accuracy(const PolicyParams& policy,
                       std::span<const TaskSample> tasks, resp::Mode mode) {
  if (tasks.empty()) throw std::invalid_argument("greedy_accuracy: empty task list");
  int correct = 0;
  for (const TaskSample& t : tasks) {
    if (greedy_correct(policy, t, mode)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(tasks.size());
}

evalh::MetricReport evaluate_policy(const PolicyParams& policy,
                                    std::span<const TaskSample> tasks,
                                    resp::Mode mode, evalh::Protocol protocol) {
  if (tasks.empty()) throw std::invalid_argument("evaluate_policy: empty task list");
  std::vector<evalh::Prediction> preds;
  preds.reserve(tasks.size());
  for (const TaskSample& t : tasks) {
    Rollout r = greedy_rollout(policy, t, mode);
    preds.push_back({t.id, r.text, r.parsed});
  }
  return evalh::score(preds, tasks, protocol);
}

void apply_group_update(PolicyParams& policy, const grpo::Group& group,
                        const PolicyParams& reference, const grpo::Hyper& hyper,
                        double learning_rate) {
  std::vector<double> grad = grpo::grpo_gradient(group, policy, reference, hyper);
  grpo::policy_step(policy, grad, learning_rate);
}

TrainResult train(const PolicyParams& init, std::span<const TaskSample> tasks,
                  const TrainConfig& cfg) {
  if (tasks.empty()) throw std::invalid_argument("train: empty task list");
  if (cfg.epochs < 0) throw std::invalid_argument("train: epochs must be >= 0");
  if (cfg.grad_accum < 1) throw std::invalid_argument("train: grad_accum must be >= 1");
  grpo::validate(cfg.hyper);
  reward::validate(cfg.reward);
  for (const TaskSample& t : tasks) {
    if (t.feature < 0 || t.feature >= init.shape().feature_count) {
      throw std::invalid_argument("train: task feature outside policy shape: " + t.id);
    }
  }

  TrainResult result{init, {}};
  PolicyParams reference = init;
  Rng rng(cfg.seed);

  int total_groups = cfg.epochs * static_cast<int>(tasks.size());
  int total_updates = (total_groups + cfg.grad_accum - 1) / cfg.grad_accum;
  int update_index = 0;

  std::vector<double> accum(static_cast<std::size_t>(init.param_count()), 0.0);
  int accum_groups = 0;

  auto flush = [&]() {
    if (accum_groups == 0) return;
    double lr = cfg.decay_lr && total_updates > 0
                    ? grpo::scheduled_lr(cfg.hyper.learning_rate, update_index,
                                         total_updates)
                    : cfg.hyper.learning_rate;
    for (double& g : accum) g /= accum_groups;
    grpo::policy_step(result.policy, accum, lr);
    std::fill(accum.begin(), accum.end(), 0.0);
    accum_groups = 0;
    ++update_index;
  };

  int step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (const TaskSample& task : tasks) {
      grpo::Group group;
      group.sample_id = task.id;
      std::vector<resp::ParsedResponse> parsed;
      for (int i = 0; i < cfg.hyper.group_size; ++i) {
        Rollout r = rollout(result.policy, task, cfg.reward.mode, rng);
        group.responses.push_back(std::move(r.tokens));
        group.logprobs_old.push_back(std::move(r.logprobs));
        parsed.push_back(std::move(r.parsed));
      }
      std::vector<reward::RewardBreakdown> breakdowns =
          reward::score_group(task, parsed, cfg.reward);
      for (const auto& b : breakdowns) group.rewards.push_back(b.total);
      group.advantages = grpo::compute_advantages(group.rewards);

      grpo::Objective obj =
          grpo::grpo_objective(group, result.policy, reference, cfg.hyper);
      std::vector<double> grad =
          grpo::grpo_gradient(group, result.policy, reference, cfg.hyper);
      for (std::size_t i = 0; i < accum.size(); ++i) accum[i] += grad[i];
      ++accum_groups;
      if (accum_groups == cfg.grad_accum) flush();

      TraceRecord rec;
      rec.step = step++;
      rec.epoch = epoch;
      rec.stage = cfg.stage;
      rec.sample_id = task.id;
      double reward_sum = 0.0;
      double adv_sum = 0.0;
      for (double r : group.rewards) reward_sum += r;
      for (double a : group.advantages) adv_sum += std::abs(a);
      rec.mean_reward = reward_sum / group.rewards.size();
      rec.mean_advantage_abs = adv_sum / group.advantages.size();
      rec.objective = obj.value;
      rec.kl = obj.mean_kl;
      rec.accuracy = greedy_accuracy(result.policy, tasks, cfg.reward.mode);
      result.trace.push_back(std::move(rec));
    }
  }
  flush();
  return result;
}

}  // namespace uirft::gym
