#include "uirft/io.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace uirft::io {

using nlohmann::json;

namespace {

json parse_line(const std::filesystem::path& path, int line_no,
                const std::string& line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                             ": invalid JSON object");
  }
  return j;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path dir = path.parent_path();
  if (!dir.empty()) std::filesystem::create_directories(dir);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string task_to_json(const TaskSample& t) {
  json j;
  j["id"] = t.id;
  j["platform"] = std::string(platform_name(t.platform));
  j["width"] = t.image_size.width;
  j["height"] = t.image_size.height;
  j["instruction"] = t.instruction;
  j["action"] = t.gt.action;
  if (t.gt.bbox) {
    j["bbox"] = {t.gt.bbox->x1, t.gt.bbox->y1, t.gt.bbox->x2, t.gt.bbox->y2};
  }
  if (t.gt.arg) j["arg"] = *t.gt.arg;
  j["element"] = t.element;
  j["element_type"] = std::string(element_type_name(t.element_type));
  if (t.difficulty) j["difficulty"] = std::string(difficulty_name(*t.difficulty));
  j["feature"] = t.feature;
  return j.dump();
}

namespace {

TaskSample task_from_parsed(const json& j, const std::string& context) {
  try {
    TaskSample t;
    t.id = j.at("id").get<std::string>();
    std::string platform = j.at("platform").get<std::string>();
    auto p = parse_platform(platform);
    if (!p) throw std::runtime_error("unknown platform: " + platform);
    t.platform = *p;
    t.image_size = {j.at("width").get<int>(), j.at("height").get<int>()};
    geom::validate(t.image_size);
    t.instruction = j.at("instruction").get<std::string>();
    t.gt.action = j.at("action").get<std::string>();
    if (j.contains("bbox") && !j["bbox"].is_null()) {
      const json& b = j["bbox"];
      if (!b.is_array() || b.size() != 4) {
        throw std::runtime_error("bbox must be [x1,y1,x2,y2]");
      }
      geom::BBox box{b[0].get<double>(), b[1].get<double>(), b[2].get<double>(),
                     b[3].get<double>()};
      geom::validate(box);
      t.gt.bbox = box;
    }
    if (j.contains("arg") && !j["arg"].is_null()) {
      t.gt.arg = j["arg"].get<std::string>();
    }
    t.element = j.value("element", std::string{});
    std::string et = j.value("element_type", std::string{"icon"});
    auto e = parse_element_type(et);
    if (!e) throw std::runtime_error("unknown element_type: " + et);
    t.element_type = *e;
    if (j.contains("difficulty") && !j["difficulty"].is_null()) {
      std::string d = j["difficulty"].get<std::string>();
      auto diff = parse_difficulty(d);
      if (!diff) throw std::runtime_error("unknown difficulty: " + d);
      t.difficulty = diff;
    }
    t.feature = j.value("feature", 0);
    if (t.feature < 0) throw std::runtime_error("feature must be >= 0");
    return t;
  } catch (const json::exception& e) {
    throw std::runtime_error(context + ": " + e.what());
  }
}

}  // namespace

TaskSample task_from_json(const std::string& line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw std::runtime_error("task: invalid JSON object");
  }
  return task_from_parsed(j, "task");
}

std::string tasks_to_jsonl(std::span<const TaskSample> tasks) {
  std::string out;
  for (const TaskSample& t : tasks) {
    out += task_to_json(t);
    out += '\n';
  }
  return out;
}

std::vector<TaskSample> load_tasks(const std::filesystem::path& path) {
  std::vector<TaskSample> tasks;
  std::vector<std::string> lines = split_lines(read_file(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    json j = parse_line(path, static_cast<int>(i + 1), lines[i]);
    tasks.push_back(task_from_parsed(
        j, path.string() + ":" + std::to_string(i + 1)));
  }
  return tasks;
}

void save_tasks(const std::filesystem::path& path,
                std::span<const TaskSample> tasks) {
  atomic_write(path, tasks_to_jsonl(tasks));
}

PredictionFile load_predictions(const std::filesystem::path& path) {
  PredictionFile file;
  std::vector<std::string> lines = split_lines(read_file(path));
  std::size_t start = 0;
  if (!lines.empty()) {
    json j = parse_line(path, 1, lines[0]);
    if (j.contains("schema")) {
      std::string space = j.value("coordinate_space", std::string{"original"});
      if (space == "original") {
        file.space = CoordinateSpace::Original;
      } else if (space == "resized") {
        file.space = CoordinateSpace::Resized;
      } else {
        throw std::runtime_error(path.string() + ":1: unknown coordinate_space: " + space);
      }
      start = 1;
    }
  }
  for (std::size_t i = start; i < lines.size(); ++i) {
    json j = parse_line(path, static_cast<int>(i + 1), lines[i]);
    try {
      file.rows.emplace_back(j.at("sample_id").get<std::string>(),
                             j.at("response_text").get<std::string>());
    } catch (const json::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(i + 1) +
                               ": " + e.what());
    }
  }
  return file;
}

void save_predictions(const std::filesystem::path& path,
                      const PredictionFile& file) {
  json header;
  header["schema"] = "uirft-predictions/v1";
  header["coordinate_space"] =
      file.space == CoordinateSpace::Original ? "original" : "resized";
  std::string out = header.dump();
  out += '\n';
  for (const auto& [id, text] : file.rows) {
    json j;
    j["sample_id"] = id;
    j["response_text"] = text;
    out += j.dump();
    out += '\n';
  }
  atomic_write(path, out);
}

std::vector<evalh::Prediction> to_predictions(const PredictionFile& file,
                                              std::span<const TaskSample> samples,
                                              resp::Mode mode,
                                              const geom::ResizePolicy& policy) {
  std::vector<evalh::Prediction> preds;
  preds.reserve(file.rows.size());
  for (const auto& [id, text] : file.rows) {
    preds.push_back(evalh::make_prediction(id, text, mode));
  }
  if (file.space == CoordinateSpace::Resized) {
    std::unordered_map<std::string_view, const TaskSample*> by_id;
    for (const TaskSample& s : samples) by_id.emplace(s.id, &s);
    for (evalh::Prediction& p : preds) {
      auto it = by_id.find(p.sample_id);
      if (it == by_id.end()) continue;  // unmatched ids surface in score()
      const geom::ImageSize& origin = it->second->image_size;
      for (resp::Action& a : p.parsed.actions) {
        if (a.coordinate) {
          a.coordinate = geom::scale_coordinates(*a.coordinate, origin, policy);
        }
        if (a.box) {
          geom::Point tl = geom::scale_coordinates({a.box->x1, a.box->y1}, origin, policy);
          geom::Point br = geom::scale_coordinates({a.box->x2, a.box->y2}, origin, policy);
          a.box = geom::BBox{tl.x, tl.y, br.x, br.y};
        }
      }
    }
  }
  return preds;
}

std::string rewards_to_jsonl(std::span<const RewardRow> rows) {
  std::string out;
  for (const RewardRow& r : rows) {
    json j;
    j["sample_id"] = r.sample_id;
    j["rollout_index"] = r.rollout_index;
    j["r_type"] = r.breakdown.r_type;
    j["r_coord"] = r.breakdown.r_coord;
    j["r_format"] = r.breakdown.r_format;
    j["r_length"] = r.breakdown.r_length;
    j["total"] = r.breakdown.total;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string trace_to_jsonl(std::span<const gym::TraceRecord> trace) {
  std::string out;
  for (const gym::TraceRecord& r : trace) {
    json j;
    j["step"] = r.step;
    j["epoch"] = r.epoch;
    j["stage"] = r.stage;
    j["sample_id"] = r.sample_id;
    j["mean_reward"] = r.mean_reward;
    j["mean_advantage_abs"] = r.mean_advantage_abs;
    j["objective"] = r.objective;
    j["kl"] = r.kl;
    j["accuracy"] = r.accuracy;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string report_to_json(const evalh::MetricReport& report) {
  json j;
  j["protocol"] = report.protocol;
  j["type_accuracy"] = report.type_accuracy;
  j["grounding_accuracy"] = report.grounding_accuracy;
  j["average"] = report.average;
  j["distance_ratio"] = report.distance_ratio;
  json counts;
  counts["samples"] = report.sample_count;
  counts["predictions"] = report.prediction_count;
  counts["type_evaluable"] = report.type_evaluable;
  counts["type_correct"] = report.type_correct;
  counts["grounding_evaluable"] = report.grounding_evaluable;
  counts["grounding_correct"] = report.grounding_correct;
  counts["missing_prediction"] = report.missing_prediction;
  counts["missing_bbox"] = report.missing_bbox;
  counts["malformed"] = report.malformed;
  j["counts"] = counts;
  json strata = json::array();
  for (const evalh::StratumMetrics& m : report.strata) {
    json s;
    s["platform"] = m.platform;
    s["element_type"] = m.element_type;
    s["action"] = m.action;
    s["count"] = m.count;
    s["type_evaluable"] = m.type_evaluable;
    s["type_correct"] = m.type_correct;
    s["grounding_evaluable"] = m.grounding_evaluable;
    s["grounding_correct"] = m.grounding_correct;
    strata.push_back(s);
  }
  j["strata"] = strata;
  return j.dump(2) + "\n";
}

std::string provenance_to_json(const sel::ProvenanceReport& report) {
  json j;
  auto stage = [](const sel::StageCounts& c) {
    json s;
    s["in"] = c.in;
    s["kept"] = c.kept;
    s["dropped"] = c.dropped;
    return s;
  };
  j["quality"] = stage(report.quality);
  j["difficulty"] = stage(report.difficulty);
  j["diversity"] = stage(report.diversity);
  j["quality_drop_reasons"] = report.quality_drop_reasons;
  j["output_by_action"] = report.output_by_action;
  j["output_by_element"] = report.output_by_element;
  j["output_count"] = report.output_count;
  j["strategy"] = report.strategy;
  j["k"] = report.k;
  j["seed"] = report.seed;
  return j.dump(2) + "\n";
}

std::string policy_to_json(const PolicyParams& policy) {
  json j;
  j["schema"] = "uirft-policy/v1";
  j["feature_count"] = policy.shape().feature_count;
  j["think_vocab"] = policy.shape().think_vocab;
  j["action_vocab"] = policy.shape().action_vocab;
  j["grid"] = policy.shape().grid;
  j["temperature"] = policy.temperature();
  j["logits"] = std::vector<double>(policy.flat().begin(), policy.flat().end());
  return j.dump() + "\n";
}

PolicyParams policy_from_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw std::runtime_error("policy: invalid JSON");
  }
  try {
    if (j.value("schema", std::string{}) != "uirft-policy/v1") {
      throw std::runtime_error("policy: unsupported schema");
    }
    PolicyShape shape;
    shape.feature_count = j.at("feature_count").get<int>();
    shape.think_vocab = j.at("think_vocab").get<int>();
    shape.action_vocab = j.at("action_vocab").get<int>();
    shape.grid = j.at("grid").get<int>();
    PolicyParams policy(shape, j.value("temperature", 1.0));
    std::vector<double> logits = j.at("logits").get<std::vector<double>>();
    if (logits.size() != static_cast<std::size_t>(shape.total())) {
      throw std::runtime_error("policy: logit count does not match shape");
    }
    std::copy(logits.begin(), logits.end(), policy.flat().begin());
    return policy;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("policy: ") + e.what());
  }
}

PolicyParams load_policy(const std::filesystem::path& path) {
  try {
    return policy_from_json(read_file(path));
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void save_policy(const std::filesystem::path& path, const PolicyParams& policy) {
  atomic_write(path, policy_to_json(policy));
}

}  // namespace uirft::io
