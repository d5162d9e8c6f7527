#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "neuroami/config.hpp"
#include "neuroami/encoder.hpp"
#include "neuroami/error.hpp"
#include "neuroami/ingest.hpp"
#include "neuroami/pipeline.hpp"
#include "neuroami/trace_io.hpp"

namespace neuroami::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitConfig = 2;

namespace detail {

struct SettingFlags {
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;
  std::vector<std::pair<std::string, CLI::Option*>> switches;
};

inline void add_setting_flags(CLI::App& cmd, SettingFlags& f) {
  const std::vector<std::pair<std::string, std::string>> valued = {
      {"class-level", "Class integer width L, 2..10"},
      {"reference", "Reference row: last, first or a 1-based row number"},
      {"train-fraction", "Fraction of the sequence used for training, in (0,1)"},
      {"population", "Deviant adjustment population size"},
      {"max-adjust", "Largest deviant adjustment in the population"},
      {"rule", "Update rule: addsub or muldiv"},
      {"lp", "Bias added to the deviant mean on an exact prediction"},
      {"k-winners", "Number of winning candidates averaged per step"},
  };
  for (const auto& [name, help] : valued) {
    f.values[name];
    f.options.emplace_back(name, cmd.add_option("--" + name, f.values[name], help));
  }
  f.switches.emplace_back("numeric", cmd.add_flag("--numeric", "Treat input lines as numbers"));
  f.switches.emplace_back("freeze-after-train",
                          cmd.add_flag("--freeze-after-train", "Stop learning once the test phase starts"));
}

inline config::CliConfig resolve_config(const SettingFlags& f, const std::string& config_path) {
  config::Layers layers;
  if (!config_path.empty()) {
    std::string text;
    try {
      text = read_source(config_path);
    } catch (const std::exception& e) {
      throw Error(ErrorKind::BadConfig, e.what());
    }
    config::load_file(layers, text);
  }
  for (const auto& [name, opt] : f.options) {
    if (opt->count() > 0) layers.set(name, f.values.at(name), config::Source::Flag);
  }
  for (const auto& [name, opt] : f.switches) {
    if (opt->count() > 0) layers.set(name, "true", config::Source::Flag);
  }
  return config::resolve(layers);
}

inline void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << text;
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

inline Corpus load_corpus(const std::string& input, bool numeric) {
  const std::string bytes = read_source(input);
  const std::string source = input == "-" ? "<stdin>" : input;
  return numeric ? read_numeric_series(bytes, source) : read_text_corpus(bytes, source);
}

inline int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::BadConfig:
    case ErrorKind::BadClassLevel:
    case ErrorKind::BadReference: return kExitConfig;
    default: return kExitInput;
  }
}

inline std::string summary(const PredictionTrace& trace, const std::optional<PredictionTrace>& baseline) {
  std::map<int, std::size_t> exact_by_class;
  std::size_t exact = 0;
  for (const auto& s : trace.steps) {
    if (s.phase != Phase::Test || s.predicted_class != s.expected_class) continue;
    ++exact;
    ++exact_by_class[s.expected_class];
  }
  std::string out;
  out += "train_elements=" + std::to_string(trace.train_elements) + '\n';
  out += "train_steps=" + std::to_string(trace.steps.size() - trace.test_steps()) + '\n';
  out += "test_steps=" + std::to_string(trace.test_steps()) + '\n';
  out += "exact_test_matches=" + std::to_string(exact) + '\n';
  out += "exact_matches_by_class=";
  bool first = true;
  for (const auto& [c, n] : exact_by_class) {
    if (!first) out += ';';
    out += std::to_string(c) + ':' + std::to_string(n);
    first = false;
  }
  out += '\n';
  out += "final_mape=" + io::fixed6(trace.cumulative_mape.back()) + '\n';
  out += "final_deviant_mean=" + io::fixed6(trace.steps.back().deviant_mean_after) + '\n';
  if (baseline) out += "baseline_final_mape=" + io::fixed6(baseline->cumulative_mape.back()) + '\n';
  return out;
}

}  // namespace detail

/// Runs the tool on already-split arguments (without the program name).
/// Returns the process exit code.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Integer-class continual sequence predictor", "neuroami"};
  app.require_subcommand(1);

  std::string input = "-";
  std::string out_path;
  std::string config_path;
  std::string svg_path;
  bool baseline = false;
  bool decode = false;

  auto* encode_cmd = app.add_subcommand("encode", "Encode a corpus into integer classes");
  auto* predict_cmd = app.add_subcommand("predict", "Continual train/test prediction over an encoded corpus");
  auto* report_cmd = app.add_subcommand("report", "Error-response series from a prediction trace");

  detail::SettingFlags encode_flags;
  detail::SettingFlags predict_flags;
  for (auto [cmd, flags] : {std::pair{encode_cmd, &encode_flags}, std::pair{predict_cmd, &predict_flags}}) {
    cmd->add_option("--input,input", input, "Input file, or - for standard input");
    cmd->add_option("--out", out_path, "Output file (default: standard output)");
    cmd->add_option("--config", config_path, "key = value configuration file");
    detail::add_setting_flags(*cmd, *flags);
  }
  predict_cmd->add_flag("--baseline", baseline, "Append the persistence baseline trace");
  predict_cmd->add_flag("--decode", decode, "Append decoded symbol pairs");

  report_cmd->add_option("--input,input", input, "Trace file, or - for standard input");
  report_cmd->add_option("--out", out_path, "Output file (default: standard output)");
  report_cmd->add_option("--svg", svg_path, "Also write the series as an SVG line chart to this path");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "neuroami: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (*encode_cmd) {
      const auto cfg = detail::resolve_config(encode_flags, config_path);
      const auto corpus = detail::load_corpus(input, cfg.numeric);
      const auto enc = encode(corpus.items, cfg.run.encoder);
      detail::write_output(out_path, io::format_encoding(corpus.items, enc), out);
      return kExitOk;
    }
    if (*predict_cmd) {
      const auto cfg = detail::resolve_config(predict_flags, config_path);
      const auto corpus = detail::load_corpus(input, cfg.numeric);
      const auto enc = encode(corpus.items, cfg.run.encoder);
      const auto trace = run_continual(enc.classes, cfg.run);
      std::optional<PredictionTrace> base;
      std::string text = io::format_trace(trace);
      if (baseline) {
        base = baseline_persistence(enc.classes, cfg.run);
        text += "\n# baseline persistence\n" + io::format_trace(*base);
      }
      if (decode) text += "\n# decoded\n" + io::format_decoded(decode_trace(trace, enc.memory));
      detail::write_output(out_path, text, out);
      (out_path.empty() || out_path == "-" ? err : out) << detail::summary(trace, base);
      return kExitOk;
    }
    if (*report_cmd) {
      const auto trace = io::parse_trace(read_source(input));
      const auto series = mape(trace).series;
      detail::write_output(out_path, io::format_series(series), out);
      if (!svg_path.empty()) detail::write_output(svg_path, io::series_svg(series), out);
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "neuroami: " << e.what() << '\n';
    return detail::exit_code_for(e);
  } catch (const std::exception& e) {
    err << "neuroami: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitConfig;
}

}  // namespace neuroami::cli
