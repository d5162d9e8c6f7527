#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "neuroami/error.hpp"

namespace neuroami {

enum class RuleMode { AdditiveSubtractive, MultiplicativeDivisive };

struct LearnerConfig {
  std::size_t population_size = 1000;
  double max_deviant_adjust = 2.0;
  RuleMode rule_mode = RuleMode::AdditiveSubtractive;
  double bias = 0.0;  // l_p, added to the deviant mean on an exact prediction
  std::size_t k_winners = 1;
  int class_level = 5;
};

inline void validate(const LearnerConfig& c) {
  if (c.population_size < 1) throw Error(ErrorKind::BadConfig, "population_size must be >= 1");
  if (!(c.max_deviant_adjust > 0.0) || !std::isfinite(c.max_deviant_adjust)) {
    throw Error(ErrorKind::BadConfig, "max_deviant_adjust must be a finite value > 0");
  }
  if (!std::isfinite(c.bias)) throw Error(ErrorKind::BadConfig, "bias must be finite");
  if (c.k_winners < 1 || c.k_winners > c.population_size) {
    throw Error(ErrorKind::BadConfig, "k_winners must be in [1, population_size]");
  }
  if (c.class_level < 1) throw Error(ErrorKind::BadConfig, "class_level must be >= 1");
}

struct LearnerState {
  double deviant_mean = 0.0;
  std::vector<double> adjustment_grid;  // k_adj: A/N, 2A/N, ..., A
  std::size_t steps_seen = 0;
};

struct StepOutcome {
  double raw_prediction = 0.0;
  int predicted_class = 0;
  int expected = 0;
  double signed_diff = 0.0;
  std::vector<double> winner_candidates;
  double new_deviant_mean = 0.0;
  // Set when the multiplicative-divisive rule hit m*k == 0 and the step
  // was taken with the additive-subtractive rule instead.
  bool divisive_fallback = false;
};

inline LearnerState init_state(const LearnerConfig& config) {
  validate(config);
  LearnerState s;
  const auto n = config.population_size;
  s.adjustment_grid.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.adjustment_grid[i] = config.max_deviant_adjust * static_cast<double>(i + 1) / static_cast<double>(n);
  }
  return s;
}

/// Round half away from zero, then clamp into [1, class_level].
inline int clamp_to_class(double raw, int class_level) {
  if (!(raw >= 1.0)) return 1;  // also catches NaN
  if (raw >= static_cast<double>(class_level)) return class_level;
  return std::clamp(static_cast<int>(std::round(raw)), 1, class_level);
}

struct Prediction {
  double raw = 0.0;
  int predicted_class = 0;
};

inline Prediction predict_next(const LearnerState& state, int current_value, int class_level) {
  const double raw = static_cast<double>(current_value) + state.deviant_mean;
  return {raw, clamp_to_class(raw, class_level)};
}

inline bool divisive_degenerate(const LearnerState& state) {
  return std::any_of(state.adjustment_grid.begin(), state.adjustment_grid.end(),
                     [m = state.deviant_mean](double k) { return m * k == 0.0; });
}

/// Candidate deviant means for one mismatch. A positive diff (over-prediction)
/// weakens the mean, a negative one reinforces it.
inline std::vector<double> adjust_candidates(const LearnerState& state, double signed_diff, RuleMode mode) {
  const double m = state.deviant_mean;
  const auto& grid = state.adjustment_grid;
  std::vector<double> out(grid.size());
  if (mode == RuleMode::AdditiveSubtractive) {
    if (signed_diff > 0) {
      std::transform(grid.begin(), grid.end(), out.begin(), [m](double k) { return m - k; });
    } else {
      std::transform(grid.begin(), grid.end(), out.begin(), [m](double k) { return m + k; });
    }
    return out;
  }
  if (divisive_degenerate(state)) {
    throw Error(ErrorKind::DegenerateDivisive, "deviant mean times adjustment is zero");
  }
  if (signed_diff > 0) {
    std::transform(grid.begin(), grid.end(), out.begin(), [m](double k) { return 1.0 / (m * k); });
  } else {
    std::transform(grid.begin(), grid.end(), out.begin(), [m](double k) { return m * k; });
  }
  return out;
}

/// k-winner-take-all over the candidates: the k smallest residuals
/// |previous + candidate - expected|, ascending. Ties go to the smaller
/// |candidate|, then to the earlier candidate.
inline std::vector<double> select_winners(std::span<const double> candidates, int previous_value, int expected,
                                          std::size_t k_winners) {
  const std::size_t k = std::min(k_winners, candidates.size());
  std::vector<double> residual(candidates.size());
  const double prev = previous_value;
  const double exp = expected;
  for (std::size_t i = 0; i < candidates.size(); ++i) residual[i] = std::abs(prev + candidates[i] - exp);

  auto better = [&](std::size_t a, std::size_t b) {
    if (residual[a] != residual[b]) return residual[a] < residual[b];
    const double ma = std::abs(candidates[a]);
    const double mb = std::abs(candidates[b]);
    if (ma != mb) return ma < mb;
    return a < b;
  };

  std::vector<double> winners;
  winners.reserve(k);
  if (k == 1) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
      if (better(i, best)) best = i;
    }
    if (!candidates.empty()) winners.push_back(candidates[best]);
    return winners;
  }
  std::vector<std::size_t> idx(candidates.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(), better);
  for (std::size_t i = 0; i < k; ++i) winners.push_back(candidates[idx[i]]);
  return winners;
}

inline LearnerState apply_bias(LearnerState state, double bias) {
  state.deviant_mean += bias;
  return state;
}

/// One continual-learning update: predict from `previous_value`, compare the
/// raw prediction with `expected`, and move the deviant mean.
inline StepOutcome learn_step(LearnerState& state, int previous_value, int expected, const LearnerConfig& config) {
  StepOutcome out;
  const auto pred = predict_next(state, previous_value, config.class_level);
  out.raw_prediction = pred.raw;
  out.predicted_class = pred.predicted_class;
  out.expected = expected;
  out.signed_diff = pred.raw - static_cast<double>(expected);

  if (out.signed_diff == 0.0) {
    state = apply_bias(std::move(state), config.bias);
  } else {
    RuleMode mode = config.rule_mode;
    if (mode == RuleMode::MultiplicativeDivisive && divisive_degenerate(state)) {
      mode = RuleMode::AdditiveSubtractive;
      out.divisive_fallback = true;
    }
    const auto candidates = adjust_candidates(state, out.signed_diff, mode);
    out.winner_candidates = select_winners(candidates, previous_value, expected, config.k_winners);
    state.deviant_mean = out.winner_candidates.size() == 1
                             ? out.winner_candidates.front()
                             : std::accumulate(out.winner_candidates.begin(), out.winner_candidates.end(), 0.0) /
                                   static_cast<double>(out.winner_candidates.size());
  }
  ++state.steps_seen;
  out.new_deviant_mean = state.deviant_mean;
  return out;
}

}  // namespace neuroami
