#include "uirft/select.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "uirft/gym.hpp"

namespace uirft::sel {

std::string_view strategy_name(Strategy s) {
  return s == Strategy::FailureOnly ? "failure_only" : "top_k_reasoning_length";
}

std::optional<Strategy> parse_strategy(std::string_view s) {
  if (s == "failure_only") return Strategy::FailureOnly;
  if (s == "top_k_reasoning_length" || s == "top_k") return Strategy::TopKReasoningLength;
  return std::nullopt;
}

void validate(const SelectionConfig& cfg) {
  if (cfg.k < 0) throw std::invalid_argument("SelectionConfig: k must be >= 0");
  if (cfg.target < 0) throw std::invalid_argument("SelectionConfig: target must be >= 0");
  int quota_sum = 0;
  for (const auto& [key, n] : cfg.quotas) {
    if (n < 0) throw std::invalid_argument("SelectionConfig: quota for '" + key + "' is negative");
    if (key.rfind("action:", 0) != 0 && key.rfind("element:", 0) != 0) {
      throw std::invalid_argument("SelectionConfig: unknown stratum key '" + key +
                                  "' (use action:<name> or element:<type>)");
    }
    quota_sum += n;
  }
  // Keys of different kinds can overlap, so only same-kind quotas are summed
  // against the target.
  int action_sum = 0;
  int element_sum = 0;
  for (const auto& [key, n] : cfg.quotas) {
    (key.rfind("action:", 0) == 0 ? action_sum : element_sum) += n;
  }
  if (action_sum > cfg.target || element_sum > cfg.target) {
    throw std::invalid_argument("SelectionConfig: quota minima exceed the target size");
  }
  const std::vector<std::string> canonical = {"quality", "difficulty", "diversity"};
  if (cfg.stage_order != canonical) {
    throw std::invalid_argument(
        "SelectionConfig: stage order is fixed to quality,difficulty,diversity");
  }
}

namespace {

bool bbox_within_image(const geom::BBox& b, const geom::ImageSize& size) {
  return b.x1 >= 0 && b.y1 >= 0 && b.x2 <= size.width && b.y2 <= size.height &&
         b.x1 <= b.x2 && b.y1 <= b.y2;
}

std::string quality_reason(const TaskSample& s) {
  std::optional<resp::ActionType> type = s.gt.type();
  if (!type) return "unknown_action_type";
  if (s.instruction.empty()) return "empty_instruction";
  if (*type == resp::ActionType::Click) {
    if (!s.gt.bbox) return "click_without_bbox";
    if (!bbox_within_image(*s.gt.bbox, s.image_size)) return "bbox_out_of_bounds";
  }
  return {};
}

bool matches_stratum(const TaskSample& s, const std::string& key) {
  if (key.rfind("action:", 0) == 0) {
    std::string action = s.gt.action;
    std::transform(action.begin(), action.end(), action.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return action == key.substr(7);
  }
  return std::string(element_type_name(s.element_type)) == key.substr(8);
}

}  // namespace

std::vector<TaskSample> quality_filter(std::span<const TaskSample> samples,
                                       ProvenanceReport* report) {
  std::vector<TaskSample> kept;
  kept.reserve(samples.size());
  for (const TaskSample& s : samples) {
    std::string reason = quality_reason(s);
    if (reason.empty()) {
      kept.push_back(s);
    } else if (report) {
      report->quality_drop_reasons[reason]++;
    }
  }
  if (report) {
    report->quality.in = static_cast<int>(samples.size());
    report->quality.kept = static_cast<int>(kept.size());
    report->quality.dropped = report->quality.in - report->quality.kept;
  }
  return kept;
}

std::vector<TaskSample> difficulty_filter(std::span<const TaskSample> samples,
                                          const PolicyParams& oracle,
                                          Strategy strategy, int k,
                                          resp::Mode oracle_mode) {
  struct Failure {
    const TaskSample* sample;
    int think_tokens;
  };
  std::vector<Failure> failures;
  for (const TaskSample& s : samples) {
    gym::Rollout r = gym::greedy_rollout(oracle, s, oracle_mode);
    evalh::Prediction pred{s.id, r.text, r.parsed};
    if (!evalh::sample_correct(pred, s)) {
      failures.push_back({&s, r.parsed.think_token_count()});
    }
  }

  if (strategy == Strategy::TopKReasoningLength) {
    std::stable_sort(failures.begin(), failures.end(),
                     [](const Failure& a, const Failure& b) {
                       if (a.think_tokens != b.think_tokens) {
                         return a.think_tokens > b.think_tokens;
                       }
                       return a.sample->id < b.sample->id;
                     });
    if (static_cast<int>(failures.size()) > k) {
      failures.resize(static_cast<std::size_t>(k));
    }
    // Restore corpus order so downstream stages see a stable subset.
    std::sort(failures.begin(), failures.end(),
              [](const Failure& a, const Failure& b) {
                return a.sample < b.sample;
              });
  }

  std::vector<TaskSample> out;
  out.reserve(failures.size());
  for (const Failure& f : failures) out.push_back(*f.sample);
  return out;
}

std::vector<TaskSample> diversity_select(std::span<const TaskSample> pool,
                                         const Quotas& quotas, int target,
                                         std::uint64_t seed) {
  if (target < 0) throw std::invalid_argument("diversity_select: target must be >= 0");

  Rng rng(seed);
  std::vector<std::size_t> chosen;
  std::vector<bool> taken(pool.size(), false);

  for (const auto& [key, need] : quotas) {
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (!taken[i] && matches_stratum(pool[i], key)) candidates.push_back(i);
    }
    if (static_cast<int>(candidates.size()) < need) {
      throw InfeasibleSelection(key, need, static_cast<int>(candidates.size()));
    }
    rng.shuffle(candidates);
    for (int j = 0; j < need; ++j) {
      taken[candidates[static_cast<std::size_t>(j)]] = true;
      chosen.push_back(candidates[static_cast<std::size_t>(j)]);
    }
  }

  if (static_cast<int>(chosen.size()) > target) {
    throw std::invalid_argument("diversity_select: quota minima exceed the target");
  }

  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (!taken[i]) rest.push_back(i);
  }
  rng.shuffle(rest);
  for (std::size_t i = 0;
       i < rest.size() && static_cast<int>(chosen.size()) < target; ++i) {
    chosen.push_back(rest[i]);
  }

  std::sort(chosen.begin(), chosen.end());
  std::vector<TaskSample> out;
  out.reserve(chosen.size());
  for (std::size_t i : chosen) out.push_back(pool[i]);
  return out;
}

PipelineResult run_pipeline(std::span<const TaskSample> corpus,
                            const PolicyParams& oracle,
                            const SelectionConfig& cfg) {
  validate(cfg);
  PipelineResult result;
  result.report.strategy = std::string(strategy_name(cfg.strategy));
  result.report.k = cfg.k;
  result.report.seed = cfg.seed;

  std::vector<TaskSample> quality = quality_filter(corpus, &result.report);

  std::vector<TaskSample> hard = difficulty_filter(quality, oracle, cfg.strategy,
                                                   cfg.k, cfg.oracle_mode);
  result.report.difficulty.in = static_cast<int>(quality.size());
  result.report.difficulty.kept = static_cast<int>(hard.size());
  result.report.difficulty.dropped =
      result.report.difficulty.in - result.report.difficulty.kept;

  result.selected = diversity_select(hard, cfg.quotas, cfg.target, cfg.seed);
  result.report.diversity.in = static_cast<int>(hard.size());
  result.report.diversity.kept = static_cast<int>(result.selected.size());
  result.report.diversity.dropped =
      result.report.diversity.in - result.report.diversity.kept;

  result.report.output_count = static_cast<int>(result.selected.size());
  for (const TaskSample& s : result.selected) {
    std::string action = s.gt.action;
    std::transform(action.begin(), action.end(), action.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    result.report.output_by_action[action]++;
    result.report.output_by_element[std::string(element_type_name(s.element_type))]++;
  }
  return result;
}

}  // namespace uirft::sel
