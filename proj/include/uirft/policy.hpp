#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uirft/rng.hpp"

namespace uirft {

// Decision slots of the surrogate policy. A rollout is a short sequence of
// categorical choices, one per slot actually used.
enum class Slot : int { ThinkLen = 0, ActionKind = 1, XCell = 2, YCell = 3 };

struct TokenRef {
  Slot slot = Slot::ActionKind;
  int feature = 0;
  int choice = 0;
  bool operator==(const TokenRef&) const = default;
};

using TokenSeq = std::vector<TokenRef>;

struct PolicyShape {
  int feature_count = 1;
  int think_vocab = 9;   // think lengths 0..think_vocab-1
  int action_vocab = 5;
  int grid = 16;

  int vocab(Slot s) const;
  int slot_offset(Slot s) const;
  int per_feature() const { return think_vocab + action_vocab + 2 * grid; }
  int total() const { return feature_count * per_feature(); }
  bool operator==(const PolicyShape&) const = default;
};

void validate(const PolicyShape& shape);

// Per-feature logit tables over think length, action kind, and the x/y grid
// cells. Differentiable by construction: distributions are plain softmax of
// the stored logits (scaled by temperature), and the flat parameter view is
// what gradients and finite differences index into.
class PolicyParams {
 public:
  PolicyParams() : PolicyParams(PolicyShape{}) {}
  explicit PolicyParams(PolicyShape shape, double temperature = 1.0);

  static PolicyParams random_init(PolicyShape shape, std::uint64_t seed,
                                  double scale = 1.0, double temperature = 1.0);

  const PolicyShape& shape() const { return shape_; }
  double temperature() const { return temperature_; }
  void set_temperature(double t);

  std::span<const double> logits(int feature, Slot s) const;
  std::span<double> logits(int feature, Slot s);

  std::vector<double> log_probs(int feature, Slot s) const;
  std::vector<double> probs(int feature, Slot s) const;
  double log_prob_of(int feature, Slot s, int choice) const;

  // argmax; lowest index wins ties
  int greedy(int feature, Slot s) const;
  int sample(int feature, Slot s, Rng& rng, double* logprob = nullptr) const;

  std::span<double> flat() { return logits_; }
  std::span<const double> flat() const { return logits_; }
  int param_count() const { return static_cast<int>(logits_.size()); }
  int flat_index(int feature, Slot s, int choice) const;

  bool operator==(const PolicyParams&) const = default;

 private:
  PolicyShape shape_;
  double temperature_ = 1.0;
  std::vector<double> logits_;
};

}  // namespace uirft
