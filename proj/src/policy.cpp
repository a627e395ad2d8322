#include "uirft/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace uirft {

int PolicyShape::vocab(Slot s) const {
  switch (s) {
    case Slot::ThinkLen: return think_vocab;
    case Slot::ActionKind: return action_vocab;
    case Slot::XCell:
    case Slot::YCell: return grid;
  }
  return 0;
}

int PolicyShape::slot_offset(Slot s) const {
  switch (s) {
    case Slot::ThinkLen: return 0;
    case Slot::ActionKind: return think_vocab;
    case Slot::XCell: return think_vocab + action_vocab;
    case Slot::YCell: return think_vocab + action_vocab + grid;
  }
  return 0;
}

void validate(const PolicyShape& shape) {
  if (shape.feature_count < 1) throw std::invalid_argument("PolicyShape: feature_count must be >= 1");
  if (shape.think_vocab < 1) throw std::invalid_argument("PolicyShape: think_vocab must be >= 1");
  if (shape.action_vocab != 5) throw std::invalid_argument("PolicyShape: action_vocab must be 5");
  if (shape.grid < 2) throw std::invalid_argument("PolicyShape: grid must be >= 2");
}

PolicyParams::PolicyParams(PolicyShape shape, double temperature)
    : shape_(shape), temperature_(temperature) {
  validate(shape);
  set_temperature(temperature);
  logits_.assign(static_cast<std::size_t>(shape_.total()), 0.0);
}

void PolicyParams::set_temperature(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("PolicyParams: temperature must be positive and finite");
  }
  temperature_ = t;
}

PolicyParams PolicyParams::random_init(PolicyShape shape, std::uint64_t seed,
                                       double scale, double temperature) {
  PolicyParams p(shape, temperature);
  Rng rng(seed);
  for (double& v : p.logits_) v = scale * rng.next_normal();
  return p;
}

std::span<const double> PolicyParams::logits(int feature, Slot s) const {
  if (feature < 0 || feature >= shape_.feature_count) {
    throw std::out_of_range("PolicyParams: feature out of range");
  }
  std::size_t off = static_cast<std::size_t>(feature) * shape_.per_feature() +
                    shape_.slot_offset(s);
  return {logits_.data() + off, static_cast<std::size_t>(shape_.vocab(s))};
}

std::span<double> PolicyParams::logits(int feature, Slot s) {
  auto view = std::as_const(*this).logits(feature, s);
  return {logits_.data() + (view.data() - logits_.data()), view.size()};
}

std::vector<double> PolicyParams::log_probs(int feature, Slot s) const {
  auto view = logits(feature, s);
  std::vector<double> out(view.size());
  double max_logit = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < view.size(); ++i) {
    out[i] = view[i] / temperature_;
    max_logit = std::max(max_logit, out[i]);
  }
  double sum = 0.0;
  for (double v : out) sum += std::exp(v - max_logit);
  double log_z = max_logit + std::log(sum);
  for (double& v : out) v -= log_z;
  return out;
}

std::vector<double> PolicyParams::probs(int feature, Slot s) const {
  std::vector<double> out = log_probs(feature, s);
  for (double& v : out) v = std::exp(v);
  return out;
}

double PolicyParams::log_prob_of(int feature, Slot s, int choice) const {
  std::vector<double> lp = log_probs(feature, s);
  if (choice < 0 || choice >= static_cast<int>(lp.size())) {
    throw std::out_of_range("PolicyParams: choice out of range");
  }
  return lp[static_cast<std::size_t>(choice)];
}

int PolicyParams::greedy(int feature, Slot s) const {
  auto view = logits(feature, s);
  return static_cast<int>(std::max_element(view.begin(), view.end()) - view.begin());
}

int PolicyParams::sample(int feature, Slot s, Rng& rng, double* logprob) const {
  std::vector<double> lp = log_probs(feature, s);
  std::vector<double> p(lp.size());
  for (std::size_t i = 0; i < lp.size(); ++i) p[i] = std::exp(lp[i]);
  int choice = rng.sample_index(p);
  if (logprob) *logprob = lp[static_cast<std::size_t>(choice)];
  return choice;
}

int PolicyParams::flat_index(int feature, Slot s, int choice) const {
  if (feature < 0 || feature >= shape_.feature_count ||
      choice < 0 || choice >= shape_.vocab(s)) {
    throw std::out_of_range("PolicyParams: flat index out of range");
  }
  return feature * shape_.per_feature() + shape_.slot_offset(s) + choice;
}

}  // namespace uirft
