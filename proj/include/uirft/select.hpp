#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "uirft/policy.hpp"
#include "uirft/tasks.hpp"

namespace uirft::sel {

enum class Strategy { FailureOnly, TopKReasoningLength };

std::string_view strategy_name(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view s);

// Stratum keys are "action:<name>" or "element:<icon|text>".
using Quotas = std::vector<std::pair<std::string, int>>;

struct SelectionConfig {
  Strategy strategy = Strategy::FailureOnly;
  int k = 0;  // TopKReasoningLength only
  Quotas quotas;
  int target = 136;
  std::uint64_t seed = 7;
  std::vector<std::string> stage_order = {"quality", "difficulty", "diversity"};
  resp::Mode oracle_mode = resp::Mode::Think;
};

void validate(const SelectionConfig& cfg);

class InfeasibleSelection : public std::runtime_error {
 public:
  InfeasibleSelection(const std::string& stratum, int need, int have)
      : std::runtime_error("diversity_select: stratum '" + stratum + "' needs " +
                           std::to_string(need) + " samples but the pool has " +
                           std::to_string(have)),
        stratum_(stratum) {}
  const std::string& stratum() const { return stratum_; }

 private:
  std::string stratum_;
};

struct StageCounts {
  int in = 0;
  int kept = 0;
  int dropped = 0;
};

struct ProvenanceReport {
  StageCounts quality;
  StageCounts difficulty;
  StageCounts diversity;
  std::map<std::string, int> quality_drop_reasons;
  std::map<std::string, int> output_by_action;
  std::map<std::string, int> output_by_element;
  int output_count = 0;
  std::string strategy;
  int k = 0;
  std::uint64_t seed = 0;
};

// Drops click samples without a box, boxes outside the image, empty
// instructions, and action types outside the five-type space.
std::vector<TaskSample> quality_filter(std::span<const TaskSample> samples,
                                       ProvenanceReport* report = nullptr);

// Keeps the samples the oracle's greedy prediction gets wrong; TopK
// additionally keeps only the k failures with the longest greedy think
// segments (ties broken by ascending sample id).
std::vector<TaskSample> difficulty_filter(std::span<const TaskSample> samples,
                                          const PolicyParams& oracle,
                                          Strategy strategy, int k,
                                          resp::Mode oracle_mode);

// Stratified: per-stratum minima first, then uniform fill to the target.
std::vector<TaskSample> diversity_select(std::span<const TaskSample> pool,
                                         const Quotas& quotas, int target,
                                         std::uint64_t seed);

struct PipelineResult {
  std::vector<TaskSample> selected;
  ProvenanceReport report;
};

// quality -> difficulty -> diversity, in that fixed order.
PipelineResult run_pipeline(std::span<const TaskSample> corpus,
                            const PolicyParams& oracle,
                            const SelectionConfig& cfg);

}  // namespace uirft::sel
