#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "uirft/eval.hpp"
#include "uirft/gym.hpp"
#include "uirft/policy.hpp"
#include "uirft/reward.hpp"
#include "uirft/select.hpp"
#include "uirft/tasks.hpp"

namespace uirft::io {

// All readers throw std::runtime_error with file/line context on bad input.

void atomic_write(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

std::string task_to_json(const TaskSample& t);
TaskSample task_from_json(const std::string& line);
std::string tasks_to_jsonl(std::span<const TaskSample> tasks);
std::vector<TaskSample> load_tasks(const std::filesystem::path& path);
void save_tasks(const std::filesystem::path& path, std::span<const TaskSample> tasks);

enum class CoordinateSpace { Original, Resized };

struct PredictionFile {
  CoordinateSpace space = CoordinateSpace::Original;
  // sample_id, response_text pairs exactly as stored
  std::vector<std::pair<std::string, std::string>> rows;
};

PredictionFile load_predictions(const std::filesystem::path& path);
void save_predictions(const std::filesystem::path& path, const PredictionFile& file);

// Parses rows under `mode` and, for resized-space files, rescales predicted
// coordinates back to original pixels with smart-resize scaling.
std::vector<evalh::Prediction> to_predictions(
    const PredictionFile& file, std::span<const TaskSample> samples,
    resp::Mode mode, const geom::ResizePolicy& policy = {});

struct RewardRow {
  std::string sample_id;
  int rollout_index = 0;
  reward::RewardBreakdown breakdown;
};

std::string rewards_to_jsonl(std::span<const RewardRow> rows);

std::string trace_to_jsonl(std::span<const gym::TraceRecord> trace);

std::string report_to_json(const evalh::MetricReport& report);

std::string provenance_to_json(const sel::ProvenanceReport& report);

std::string policy_to_json(const PolicyParams& policy);
PolicyParams policy_from_json(const std::string& text);
PolicyParams load_policy(const std::filesystem::path& path);
void save_policy(const std::filesystem::path& path, const PolicyParams& policy);

}  // namespace uirft::io
