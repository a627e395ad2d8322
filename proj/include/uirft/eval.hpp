#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uirft/response.hpp"
#include "uirft/tasks.hpp"

namespace uirft::evalh {

enum class Protocol { ScreenSpot, AndroidControl };

std::string_view protocol_name(Protocol p);
std::optional<Protocol> parse_protocol(std::string_view s);

struct Prediction {
  std::string sample_id;
  std::string response_text;
  resp::ParsedResponse parsed;  // parsed under the harness mode
};

Prediction make_prediction(std::string sample_id, std::string response_text,
                           resp::Mode mode);

struct StratumMetrics {
  std::string platform;
  std::string element_type;
  std::string action;
  int count = 0;
  int type_evaluable = 0;
  int type_correct = 0;
  int grounding_evaluable = 0;
  int grounding_correct = 0;
};

struct MetricReport {
  std::string protocol;
  double type_accuracy = 0.0;
  double grounding_accuracy = 0.0;
  double average = 0.0;  // mean of type and grounding
  int sample_count = 0;
  int prediction_count = 0;
  int type_evaluable = 0;
  int type_correct = 0;
  int grounding_evaluable = 0;
  int grounding_correct = 0;
  int missing_prediction = 0;  // samples lacking a prediction (excluded)
  int missing_bbox = 0;        // click samples lacking a box (excluded)
  int malformed = 0;           // malformed predictions (counted incorrect)
  double distance_ratio = 0.14;
  std::vector<StratumMetrics> strata;
};

// Click grounding: well-formed, click predicted, point inside the gt box.
// Requires the sample to carry a box.
bool grounding_correct(const Prediction& pred, const TaskSample& sample);

// The 14%-of-screen-diagonal rule against the gt box center.
bool distance_correct(const Prediction& pred, const TaskSample& sample,
                      double ratio = 0.14);

// Single-sample correctness rule shared by training traces and the
// difficulty filter: grounding for click samples, type match otherwise.
bool sample_correct(const Prediction& pred, const TaskSample& sample);

// ScreenSpot: grounding accuracy via box containment. AndroidControl: type
// accuracy over all samples plus grounding via the distance rule. Throws
// std::runtime_error listing prediction ids without a matching sample.
MetricReport score(std::span<const Prediction> predictions,
                   std::span<const TaskSample> samples, Protocol protocol,
                   double distance_ratio = 0.14, int jobs = 1);

std::string render_table(const MetricReport& report);

}  // namespace uirft::evalh
