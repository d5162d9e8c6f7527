#pragma once

#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <vector>

#include "neuroami/encoder.hpp"
#include "neuroami/error.hpp"
#include "neuroami/learner.hpp"

namespace neuroami {

enum class Phase { Train, Test };

struct RunConfig {
  double train_fraction = 0.35;
  LearnerConfig learner;
  EncoderConfig encoder;
  // Stop updating the deviant mean once the test phase starts.
  bool freeze_after_train = false;
};

inline void validate(const RunConfig& c) {
  if (!(c.train_fraction > 0.0 && c.train_fraction < 1.0)) {
    throw Error(ErrorKind::BadConfig, "train_fraction must lie strictly between 0 and 1");
  }
  check_class_level(c.encoder.class_level);
  validate(c.learner);
}

struct TraceStep {
  std::size_t index = 0;  // position of the expected element, 1..T-1
  Phase phase = Phase::Train;
  int previous_class = 0;
  double raw_prediction = 0.0;
  int predicted_class = 0;
  int expected_class = 0;
  int abs_error = 0;
  double deviant_mean_after = 0.0;
};

struct PredictionTrace {
  std::vector<TraceStep> steps;
  std::vector<double> cumulative_mape;  // one entry per test step
  std::size_t train_elements = 0;

  std::size_t test_steps() const {
    std::size_t n = 0;
    for (const auto& s : steps) n += s.phase == Phase::Test ? 1 : 0;
    return n;
  }
};

/// Number of leading elements used for training: max(1, floor(f * n)).
inline std::size_t split_index(std::size_t sequence_length, double train_fraction) {
  if (sequence_length < 2) {
    throw Error(ErrorKind::TooShort, "sequence needs at least 2 elements, got " + std::to_string(sequence_length));
  }
  const auto train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(sequence_length)));
  return std::clamp<std::size_t>(train, 1, sequence_length - 1);
}

struct MapeSeries {
  double final = 0.0;
  std::vector<double> series;
};

/// Running mean absolute percentage error over the test steps, in percent.
inline MapeSeries mape(const PredictionTrace& trace) {
  MapeSeries out;
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& s : trace.steps) {
    if (s.phase != Phase::Test) continue;
    sum += static_cast<double>(std::abs(s.predicted_class - s.expected_class)) / static_cast<double>(s.expected_class);
    ++n;
    out.series.push_back(100.0 * sum / static_cast<double>(n));
  }
  if (out.series.empty()) throw Error(ErrorKind::NoTestSteps, "trace has no test steps");
  out.final = out.series.back();
  return out;
}

namespace detail {

inline void check_sequence(const ClassSequence& classes) {
  if (classes.size() < 2) {
    throw Error(ErrorKind::TooShort, "sequence needs at least 2 elements, got " + std::to_string(classes.size()));
  }
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const int c = classes.classes[i];
    if (c < 1 || c > classes.class_level) {
      throw Error(ErrorKind::BadClass, "class " + std::to_string(c) + " at position " + std::to_string(i + 1), i);
    }
  }
}

}  // namespace detail

/// Continual train/test run. The learner updates after every observation in
/// both phases; the split only decides where error accounting starts.
inline PredictionTrace run_continual(const ClassSequence& classes, const RunConfig& config) {
  if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) {
    throw Error(ErrorKind::BadConfig, "train_fraction must lie strictly between 0 and 1");
  }
  detail::check_sequence(classes);
  LearnerConfig lc = config.learner;
  lc.class_level = classes.class_level;
  validate(lc);

  PredictionTrace trace;
  trace.train_elements = split_index(classes.size(), config.train_fraction);
  trace.steps.reserve(classes.size() - 1);
  LearnerState state = init_state(lc);

  for (std::size_t t = 1; t < classes.size(); ++t) {
    const int prev = classes.classes[t - 1];
    const int expected = classes.classes[t];
    TraceStep step;
    step.index = t;
    step.phase = t < trace.train_elements ? Phase::Train : Phase::Test;
    step.previous_class = prev;
    if (step.phase == Phase::Test && config.freeze_after_train) {
      const auto p = predict_next(state, prev, lc.class_level);
      step.raw_prediction = p.raw;
      step.predicted_class = p.predicted_class;
    } else {
      try {
        const auto outcome = learn_step(state, prev, expected, lc);
        step.raw_prediction = outcome.raw_prediction;
        step.predicted_class = outcome.predicted_class;
      } catch (const Error& e) {
        throw Error(e.kind(), std::string(e.what()) + " (step " + std::to_string(t) + ")", t);
      }
    }
    step.expected_class = expected;
    step.abs_error = std::abs(step.predicted_class - expected);
    step.deviant_mean_after = state.deviant_mean;
    trace.steps.push_back(step);
  }
  trace.cumulative_mape = mape(trace).series;
  return trace;
}

/// Naive comparison predictor: the next class equals the current one.
inline PredictionTrace baseline_persistence(const ClassSequence& classes, const RunConfig& config) {
  detail::check_sequence(classes);
  PredictionTrace trace;
  trace.train_elements = split_index(classes.size(), config.train_fraction);
  for (std::size_t t = 1; t < classes.size(); ++t) {
    TraceStep step;
    step.index = t;
    step.phase = t < trace.train_elements ? Phase::Train : Phase::Test;
    step.previous_class = classes.classes[t - 1];
    step.raw_prediction = step.previous_class;
    step.predicted_class = step.previous_class;
    step.expected_class = classes.classes[t];
    step.abs_error = std::abs(step.predicted_class - step.expected_class);
    trace.steps.push_back(step);
  }
  trace.cumulative_mape = mape(trace).series;
  return trace;
}

struct DecodedStep {
  std::size_t index = 0;
  DecodedSymbol predicted;
  DecodedSymbol expected;
};

inline std::vector<DecodedStep> decode_trace(const PredictionTrace& trace, const SensorMemory& memory) {
  if (memory.empty()) throw Error(ErrorKind::EmptyMemory, "sensor memory has no filled slots");
  std::vector<DecodedStep> out;
  out.reserve(trace.steps.size());
  for (const auto& s : trace.steps) {
    out.push_back({s.index, decode_class(s.predicted_class, memory), decode_class(s.expected_class, memory)});
  }
  return out;
}

}  // namespace neuroami
