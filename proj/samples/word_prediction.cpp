// Encodes a short word sequence, runs the continual predictor over it and
// prints the decoded test predictions next to what actually came.

#include <iostream>
#include <string>
#include <vector>

#include "neuroami/neuroami.hpp"

int main() {
  const std::vector<std::string> words = {"Car", "Bus", "Bus", "Car", "Car", "Car", "Car", "Car", "Bus"};

  neuroami::RunConfig cfg;  // population 1000, max adjust 2.0, L = 5, 35% train
  const auto enc = neuroami::encode(words, cfg.encoder);
  const auto trace = neuroami::run_continual(enc.classes, cfg);
  const auto decoded = neuroami::decode_trace(trace, enc.memory);

  std::cout << neuroami::io::format_memory(enc.memory) << '\n';
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    if (s.phase != neuroami::Phase::Test) continue;
    std::cout << "step " << s.index << ": predicted " << s.predicted_class << " (" << decoded[i].predicted.symbol
              << "), expected " << s.expected_class << " (" << decoded[i].expected.symbol << ")\n";
  }
  std::cout << "final MAPE " << neuroami::io::fixed6(trace.cumulative_mape.back()) << "%\n";
}
