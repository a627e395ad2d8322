#include "uirft/grpo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uirft::grpo {

void validate(const Hyper& hyper) {
  if (!(hyper.epsilon > 0.0 && hyper.epsilon < 1.0)) {
    throw std::invalid_argument("Hyper: epsilon must be in (0,1)");
  }
  if (hyper.beta < 0.0) throw std::invalid_argument("Hyper: beta must be >= 0");
  if (hyper.group_size < 2) {
    throw std::invalid_argument("Hyper: group_size must be >= 2");
  }
}

std::vector<double> compute_advantages(std::span<const double> rewards) {
  if (rewards.empty()) {
    throw std::invalid_argument("compute_advantages: empty reward list");
  }
  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= static_cast<double>(rewards.size());

  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  var /= static_cast<double>(rewards.size());
  double std_dev = std::sqrt(var);

  std::vector<double> out(rewards.size(), 0.0);
  if (std_dev > 0.0) {
    for (std::size_t i = 0; i < rewards.size(); ++i) {
      out[i] = (rewards[i] - mean) / std_dev;
    }
  }
  return out;
}

void validate(const Group& group) {
  std::size_t n = group.responses.size();
  if (n == 0) throw std::invalid_argument("Group: empty group");
  if (group.logprobs_old.size() != n || group.rewards.size() != n) {
    throw std::invalid_argument("Group: list lengths disagree");
  }
  if (!group.advantages.empty() && group.advantages.size() != n) {
    throw std::invalid_argument("Group: advantage length disagrees");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (group.responses[i].empty()) {
      throw std::invalid_argument("Group: empty token sequence");
    }
    if (group.logprobs_old[i].size() != group.responses[i].size()) {
      throw std::invalid_argument("Group: per-token logprob length disagrees");
    }
  }
}

double kl_divergence(std::span<const double> log_p, std::span<const double> log_q) {
  if (log_p.size() != log_q.size()) {
    throw std::invalid_argument("kl_divergence: size mismatch");
  }
  double kl = 0.0;
  for (std::size_t i = 0; i < log_p.size(); ++i) {
    kl += std::exp(log_p[i]) * (log_p[i] - log_q[i]);
  }
  return std::max(kl, 0.0);
}

namespace {

void check_policies(const PolicyParams& current, const PolicyParams& reference) {
  if (!(current.shape() == reference.shape())) {
    throw std::invalid_argument("grpo: current and reference policy shapes differ");
  }
}

}  // namespace

Objective grpo_objective(const Group& group, const PolicyParams& current,
                         const PolicyParams& reference, const Hyper& hyper) {
  validate(hyper);
  validate(group);
  check_policies(current, reference);
  if (group.advantages.size() != group.responses.size()) {
    throw std::invalid_argument("grpo_objective: advantages not computed");
  }

  double total = 0.0;
  double total_kl = 0.0;
  std::size_t n = group.responses.size();
  for (std::size_t i = 0; i < n; ++i) {
    const TokenSeq& tokens = group.responses[i];
    double adv = group.advantages[i];
    double seq_sum = 0.0;
    double seq_kl = 0.0;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      const TokenRef& tok = tokens[t];
      double lp_cur = current.log_prob_of(tok.feature, tok.slot, tok.choice);
      double ratio = std::exp(lp_cur - group.logprobs_old[i][t]);
      double clipped = std::clamp(ratio, 1.0 - hyper.epsilon, 1.0 + hyper.epsilon);
      seq_sum += std::min(ratio * adv, clipped * adv);

      double kl = kl_divergence(current.log_probs(tok.feature, tok.slot),
                                reference.log_probs(tok.feature, tok.slot));
      seq_sum -= hyper.beta * kl;
      seq_kl += kl;
    }
    total += seq_sum / static_cast<double>(tokens.size());
    total_kl += seq_kl / static_cast<double>(tokens.size());
  }
  return {total / static_cast<double>(n), total_kl / static_cast<double>(n)};
}

std::vector<double> grpo_gradient(const Group& group, const PolicyParams& current,
                                  const PolicyParams& reference, const Hyper& hyper) {
  validate(hyper);
  validate(group);
  check_policies(current, reference);
  if (group.advantages.size() != group.responses.size()) {
    throw std::invalid_argument("grpo_gradient: advantages not computed");
  }

  std::vector<double> grad(static_cast<std::size_t>(current.param_count()), 0.0);
  double inv_temp = 1.0 / current.temperature();
  std::size_t n = group.responses.size();

  for (std::size_t i = 0; i < n; ++i) {
    const TokenSeq& tokens = group.responses[i];
    double adv = group.advantages[i];
    double weight = 1.0 / (static_cast<double>(n) * static_cast<double>(tokens.size()));

    for (std::size_t t = 0; t < tokens.size(); ++t) {
      const TokenRef& tok = tokens[t];
      std::vector<double> lp_cur = current.log_probs(tok.feature, tok.slot);
      double ratio = std::exp(lp_cur[static_cast<std::size_t>(tok.choice)] -
                              group.logprobs_old[i][t]);

      // The clipped branch is a constant in theta whenever the clip is the
      // active minimum, so those tokens contribute nothing.
      bool flows = !((adv > 0.0 && ratio > 1.0 + hyper.epsilon) ||
                     (adv < 0.0 && ratio < 1.0 - hyper.epsilon));

      int vocab = current.shape().vocab(tok.slot);
      double kl = 0.0;
      std::vector<double> lp_ref;
      if (hyper.beta > 0.0) {
        lp_ref = reference.log_probs(tok.feature, tok.slot);
        kl = kl_divergence(lp_cur, lp_ref);
      }

      for (int j = 0; j < vocab; ++j) {
        double p_j = std::exp(lp_cur[static_cast<std::size_t>(j)]);
        double g = 0.0;
        if (flows && adv != 0.0) {
          double indicator = j == tok.choice ? 1.0 : 0.0;
          g += adv * ratio * (indicator - p_j) * inv_temp;
        }
        if (hyper.beta > 0.0) {
          double dkl = p_j * (lp_cur[static_cast<std::size_t>(j)] -
                              lp_ref[static_cast<std::size_t>(j)] - kl) * inv_temp;
          g -= hyper.beta * dkl;
        }
        if (g != 0.0) {
          grad[static_cast<std::size_t>(
              current.flat_index(tok.feature, tok.slot, j))] += weight * g;
        }
      }
    }
  }
  return grad;
}

void policy_step(PolicyParams& params, std::span<const double> gradient,
                 double learning_rate) {
  if (gradient.size() != static_cast<std::size_t>(params.param_count())) {
    throw std::invalid_argument("policy_step: gradient size mismatch");
  }
  auto flat = params.flat();
  for (std::size_t i = 0; i < flat.size(); ++i) {
    flat[i] += learning_rate * gradient[i];
  }
}

double scheduled_lr(double base, int step, int total_steps) {
  if (total_steps < 1) throw std::invalid_argument("scheduled_lr: total_steps must be >= 1");
  if (step < 0 || step >= total_steps) {
    throw std::invalid_argument("scheduled_lr: step out of range");
  }
  if (total_steps == 1) return base;
  return base * (1.0 - static_cast<double>(step) / (total_steps - 1));
}

}  // namespace uirft::grpo
