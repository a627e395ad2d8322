#include "uirft/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <future>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "uirft/geometry.hpp"

namespace uirft::evalh {

std::string_view protocol_name(Protocol p) {
  return p == Protocol::ScreenSpot ? "screenspot" : "androidcontrol";
}

std::optional<Protocol> parse_protocol(std::string_view s) {
  if (s == "screenspot") return Protocol::ScreenSpot;
  if (s == "androidcontrol") return Protocol::AndroidControl;
  return std::nullopt;
}

Prediction make_prediction(std::string sample_id, std::string response_text,
                           resp::Mode mode) {
  Prediction p;
  p.sample_id = std::move(sample_id);
  p.parsed = resp::parse_response(response_text, mode);
  p.response_text = std::move(response_text);
  return p;
}

namespace {

const resp::Action* scored_action(const Prediction& pred) {
  if (!pred.parsed.well_formed || pred.parsed.actions.empty()) return nullptr;
  return &pred.parsed.actions.front();
}

}  // namespace

bool grounding_correct(const Prediction& pred, const TaskSample& sample) {
  if (!sample.gt.bbox) {
    throw std::invalid_argument("grounding_correct: sample has no ground-truth box");
  }
  const resp::Action* a = scored_action(pred);
  if (!a || a->kind != resp::ActionType::Click || !a->coordinate) return false;
  return geom::point_in_bbox(*a->coordinate, *sample.gt.bbox);
}

bool distance_correct(const Prediction& pred, const TaskSample& sample,
                      double ratio) {
  if (!sample.gt.bbox) {
    throw std::invalid_argument("distance_correct: sample has no ground-truth box");
  }
  const resp::Action* a = scored_action(pred);
  if (!a || a->kind != resp::ActionType::Click || !a->coordinate) return false;
  return geom::within_screen_distance(*a->coordinate, sample.gt.bbox->center(),
                                      sample.image_size, ratio);
}

bool sample_correct(const Prediction& pred, const TaskSample& sample) {
  std::optional<resp::ActionType> gt_type = sample.gt.type();
  if (gt_type == resp::ActionType::Click && sample.gt.bbox) {
    return grounding_correct(pred, sample);
  }
  const resp::Action* a = scored_action(pred);
  return a && gt_type && a->kind == *gt_type;
}

namespace {

struct SampleOutcome {
  bool has_prediction = false;
  bool malformed = false;
  bool type_evaluable = false;
  bool type_correct = false;
  bool grounding_candidate = false;  // click sample with a prediction
  bool grounding_evaluable = false;  // ... that also carries a gt box
  bool grounding_correct = false;
};

SampleOutcome judge(const Prediction* pred, const TaskSample& sample,
                    Protocol protocol, double ratio) {
  SampleOutcome out;
  if (!pred) return out;
  out.has_prediction = true;
  out.malformed = !pred->parsed.well_formed;

  std::optional<resp::ActionType> gt_type = sample.gt.type();
  if (gt_type) {
    out.type_evaluable = true;
    const resp::Action* a = scored_action(*pred);
    out.type_correct = a && a->kind == *gt_type;
  }

  if (gt_type == resp::ActionType::Click) {
    out.grounding_candidate = true;
    if (sample.gt.bbox) {
      out.grounding_evaluable = true;
      out.grounding_correct = protocol == Protocol::ScreenSpot
                                  ? grounding_correct(*pred, sample)
                                  : distance_correct(*pred, sample, ratio);
    }
  }
  return out;
}

std::string stratum_key(const TaskSample& s) {
  std::string action = s.gt.action;
  std::transform(action.begin(), action.end(), action.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return std::string(platform_name(s.platform)) + "|" +
         std::string(element_type_name(s.element_type)) + "|" + action;
}

double safe_ratio(int num, int den) {
  return den > 0 ? static_cast<double>(num) / den : 0.0;
}

}  // namespace

MetricReport score(std::span<const Prediction> predictions,
                   std::span<const TaskSample> samples, Protocol protocol,
                   double distance_ratio, int jobs) {
  if (samples.empty()) throw std::runtime_error("eval: no samples to score");
  if (predictions.empty()) throw std::runtime_error("eval: no predictions to score");
  if (jobs < 1) throw std::invalid_argument("eval: jobs must be >= 1");

  std::unordered_map<std::string_view, const TaskSample*> by_id;
  for (const TaskSample& s : samples) {
    if (!by_id.emplace(s.id, &s).second) {
      throw std::runtime_error("eval: duplicate sample id: " + s.id);
    }
  }

  std::unordered_map<std::string_view, const Prediction*> pred_by_id;
  std::vector<std::string> unknown;
  for (const Prediction& p : predictions) {
    if (!by_id.count(p.sample_id)) {
      unknown.push_back(p.sample_id);
      continue;
    }
    if (!pred_by_id.emplace(p.sample_id, &p).second) {
      throw std::runtime_error("eval: duplicate prediction for sample id: " + p.sample_id);
    }
  }
  if (!unknown.empty()) {
    std::sort(unknown.begin(), unknown.end());
    std::string msg = "eval: predictions reference unknown sample ids:";
    for (const std::string& id : unknown) msg += " " + id;
    throw std::runtime_error(msg);
  }

  // Canonical order makes the report independent of input permutation.
  std::vector<const TaskSample*> ordered;
  ordered.reserve(samples.size());
  for (const TaskSample& s : samples) ordered.push_back(&s);
  std::sort(ordered.begin(), ordered.end(),
            [](const TaskSample* a, const TaskSample* b) { return a->id < b->id; });

  std::vector<SampleOutcome> outcomes(ordered.size());
  auto run_chunk = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto it = pred_by_id.find(ordered[i]->id);
      const Prediction* p = it == pred_by_id.end() ? nullptr : it->second;
      outcomes[i] = judge(p, *ordered[i], protocol, distance_ratio);
    }
  };
  if (jobs == 1 || ordered.size() < 2) {
    run_chunk(0, ordered.size());
  } else {
    std::size_t chunk = (ordered.size() + jobs - 1) / static_cast<std::size_t>(jobs);
    std::vector<std::future<void>> futures;
    for (std::size_t begin = 0; begin < ordered.size(); begin += chunk) {
      std::size_t end = std::min(begin + chunk, ordered.size());
      futures.push_back(std::async(std::launch::async, run_chunk, begin, end));
    }
    for (auto& f : futures) f.get();
  }

  MetricReport report;
  report.protocol = std::string(protocol_name(protocol));
  report.distance_ratio = distance_ratio;
  report.sample_count = static_cast<int>(samples.size());
  report.prediction_count = static_cast<int>(predictions.size());

  std::map<std::string, StratumMetrics> strata;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    const TaskSample& s = *ordered[i];
    const SampleOutcome& o = outcomes[i];
    StratumMetrics& m = strata[stratum_key(s)];
    if (m.count == 0) {
      m.platform = std::string(platform_name(s.platform));
      m.element_type = std::string(element_type_name(s.element_type));
      m.action = s.gt.action;
      std::transform(m.action.begin(), m.action.end(), m.action.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    }
    m.count++;

    if (!o.has_prediction) {
      report.missing_prediction++;
      continue;
    }
    if (o.malformed) report.malformed++;
    if (o.type_evaluable) {
      report.type_evaluable++;
      m.type_evaluable++;
      if (o.type_correct) {
        report.type_correct++;
        m.type_correct++;
      }
    }
    if (o.grounding_candidate && !o.grounding_evaluable) report.missing_bbox++;
    if (o.grounding_evaluable) {
      report.grounding_evaluable++;
      m.grounding_evaluable++;
      if (o.grounding_correct) {
        report.grounding_correct++;
        m.grounding_correct++;
      }
    }
  }

  report.type_accuracy = safe_ratio(report.type_correct, report.type_evaluable);
  report.grounding_accuracy =
      safe_ratio(report.grounding_correct, report.grounding_evaluable);
  report.average = (report.type_accuracy + report.grounding_accuracy) / 2.0;
  for (auto& [key, m] : strata) report.strata.push_back(m);
  return report;
}

std::string render_table(const MetricReport& report) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "protocol: %s\n", report.protocol.c_str());
  out += line;
  std::snprintf(line, sizeof(line), "%-12s %-8s %-14s %7s %7s %11s\n", "platform",
                "element", "action", "count", "type", "grounding");
  out += line;
  auto fmt_ratio = [](int num, int den) {
    char buf[32];
    if (den == 0) {
      std::snprintf(buf, sizeof(buf), "%7s", "-");
    } else {
      std::snprintf(buf, sizeof(buf), "%7.3f", static_cast<double>(num) / den);
    }
    return std::string(buf);
  };
  for (const StratumMetrics& m : report.strata) {
    std::snprintf(line, sizeof(line), "%-12s %-8s %-14s %7d %s %s\n",
                  m.platform.c_str(), m.element_type.c_str(), m.action.c_str(),
                  m.count, fmt_ratio(m.type_correct, m.type_evaluable).c_str(),
                  fmt_ratio(m.grounding_correct, m.grounding_evaluable).c_str());
    out += line;
  }
  std::snprintf(line, sizeof(line),
                "Type %.4f  Grounding %.4f  Average %.4f\n", report.type_accuracy,
                report.grounding_accuracy, report.average);
  out += line;
  std::snprintf(line, sizeof(line),
                "samples %d  predictions %d  missing_prediction %d  missing_bbox %d  malformed %d\n",
                report.sample_count, report.prediction_count,
                report.missing_prediction, report.missing_bbox, report.malformed);
  out += line;
  return out;
}

}  // namespace uirft::evalh
