#pragma once

#include <span>
#include <string>
#include <vector>

#include "uirft/policy.hpp"

namespace uirft::grpo {

struct Hyper {
  double epsilon = 0.2;
  double beta = 0.04;
  int group_size = 8;
  double learning_rate = 9.98e-7;
};

void validate(const Hyper& hyper);

// Group-normalized advantages: (r - mean) / population std, all zero when the
// rewards are constant.
std::vector<double> compute_advantages(std::span<const double> rewards);

// N rollouts for one task. Old log-probabilities are frozen at rollout time;
// current and reference quantities are recomputed from the policies so the
// exact per-token KL is available.
struct Group {
  std::string sample_id;
  std::vector<TokenSeq> responses;
  std::vector<std::vector<double>> logprobs_old;
  std::vector<double> rewards;
  std::vector<double> advantages;
};

void validate(const Group& group);

struct Objective {
  double value = 0.0;
  double mean_kl = 0.0;  // same 1/(G*|o_i|) weighting as the objective
};

double kl_divergence(std::span<const double> log_p, std::span<const double> log_q);

// Clipped surrogate with exact per-token KL penalty against the reference,
// sequence advantages broadcast to every token.
Objective grpo_objective(const Group& group, const PolicyParams& current,
                         const PolicyParams& reference, const Hyper& hyper);

// Analytic gradient of grpo_objective with respect to the current policy's
// flat parameter vector.
std::vector<double> grpo_gradient(const Group& group, const PolicyParams& current,
                                  const PolicyParams& reference, const Hyper& hyper);

// Gradient ascent step.
void policy_step(PolicyParams& params, std::span<const double> gradient,
                 double learning_rate);

// Linear decay from base to exactly 0 at the final step.
double scheduled_lr(double base, int step, int total_steps);

}  // namespace uirft::grpo
