#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "neuroami/error.hpp"
#include "neuroami/ingest.hpp"
#include "neuroami/pipeline.hpp"

// Layered settings for the command-line tool: built-in defaults, then a flat
// `key = value` file, then command-line flags. A higher layer replaces a
// lower one key by key.
namespace neuroami::config {

enum class Source { Default, File, Flag };

struct Setting {
  std::string value;
  Source source = Source::Default;
  std::size_t line = 0;  // config-file line, when source == File
};

struct CliConfig {
  RunConfig run;
  bool numeric = false;
};

inline const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {"class_level", "reference", "train_fraction", "population", "max_adjust",
                                                "rule",        "lp",        "k_winners",      "numeric",    "freeze_after_train"};
  return keys;
}

inline std::string normalize_key(std::string_view key) {
  std::string k(key);
  std::replace(k.begin(), k.end(), '-', '_');
  return k;
}

inline std::string describe(const Setting& s, std::string_view key) {
  std::string flag(key);
  std::replace(flag.begin(), flag.end(), '_', '-');
  switch (s.source) {
    case Source::Flag: return "flag --" + flag;
    case Source::File: return "config file line " + std::to_string(s.line) + " (" + std::string(key) + ")";
    case Source::Default: return "default " + std::string(key);
  }
  return std::string(key);
}

class Layers {
public:
  Layers() {
    set("class_level", "5", Source::Default);
    set("reference", "last", Source::Default);
    set("train_fraction", "0.35", Source::Default);
    set("population", "1000", Source::Default);
    set("max_adjust", "2.0", Source::Default);
    set("rule", "addsub", Source::Default);
    set("lp", "0.0", Source::Default);
    set("k_winners", "1", Source::Default);
    set("numeric", "false", Source::Default);
    set("freeze_after_train", "false", Source::Default);
  }

  /// Stores `value` unless a higher-precedence layer already set the key.
  void set(std::string_view key, std::string value, Source source, std::size_t line = 0) {
    const auto k = normalize_key(key);
    if (std::find(known_keys().begin(), known_keys().end(), k) == known_keys().end()) {
      throw Error(ErrorKind::BadConfig, "unknown setting '" + std::string(key) + "'", line);
    }
    auto it = settings_.find(k);
    if (it != settings_.end() && it->second.source > source) return;
    settings_[k] = Setting{std::move(value), source, line};
  }

  const Setting& get(std::string_view key) const { return settings_.at(std::string(key)); }

private:
  std::map<std::string, Setting> settings_;
};

/// Loads `key = value` lines; '#' starts a comment, blank lines are ignored.
inline void load_file(Layers& layers, std::string_view text) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = neuroami::detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::BadConfig, "config file line " + std::to_string(line_no) + ": expected key = value",
                  line_no);
    }
    const auto key = neuroami::detail::trim(line.substr(0, eq));
    const auto value = neuroami::detail::trim(line.substr(eq + 1));
    if (key.empty()) {
      throw Error(ErrorKind::BadConfig, "config file line " + std::to_string(line_no) + ": missing key", line_no);
    }
    try {
      layers.set(key, std::string(value), Source::File, line_no);
    } catch (const Error& e) {
      throw Error(ErrorKind::BadConfig, "config file line " + std::to_string(line_no) + ": " + e.what(), line_no);
    }
  }
}

namespace detail {

[[noreturn]] inline void reject(const Setting& s, std::string_view key, const std::string& why) {
  throw Error(ErrorKind::BadConfig, describe(s, key) + ": '" + s.value + "' " + why, s.line);
}

inline long long as_integer(const Setting& s, std::string_view key) {
  long long v = 0;
  const auto& t = s.value;
  const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || r.ec != std::errc{} || r.ptr != t.data() + t.size()) reject(s, key, "is not an integer");
  return v;
}

inline double as_real(const Setting& s, std::string_view key) {
  double v = 0;
  const auto& t = s.value;
  const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || r.ec != std::errc{} || r.ptr != t.data() + t.size() || !std::isfinite(v)) {
    reject(s, key, "is not a finite number");
  }
  return v;
}

inline bool as_bool(const Setting& s, std::string_view key) {
  if (s.value == "true" || s.value == "1" || s.value == "yes" || s.value == "on") return true;
  if (s.value == "false" || s.value == "0" || s.value == "no" || s.value == "off") return false;
  reject(s, key, "is not a boolean");
}

}  // namespace detail

inline Reference parse_reference(const Setting& s) {
  if (s.value == "last") return Reference::last();
  if (s.value == "first") return Reference::first();
  const auto n = detail::as_integer(s, "reference");
  if (n < 1) detail::reject(s, "reference", "must be last, first or a row number >= 1");
  return Reference::row(static_cast<std::size_t>(n));
}

/// Validates every field before anything runs; errors name the source layer.
inline CliConfig resolve(const Layers& layers) {
  CliConfig c;
  auto& run = c.run;

  const auto& level = layers.get("class_level");
  const auto l = detail::as_integer(level, "class_level");
  if (l < kMinClassLevel || l > kMaxClassLevel) detail::reject(level, "class_level", "must be in [2, 10]");
  run.encoder.class_level = static_cast<int>(l);
  run.learner.class_level = static_cast<int>(l);

  run.encoder.reference = parse_reference(layers.get("reference"));

  const auto& tf = layers.get("train_fraction");
  run.train_fraction = detail::as_real(tf, "train_fraction");
  if (!(run.train_fraction > 0.0 && run.train_fraction < 1.0)) {
    detail::reject(tf, "train_fraction", "must lie strictly between 0 and 1");
  }

  const auto& pop = layers.get("population");
  const auto n = detail::as_integer(pop, "population");
  if (n < 1) detail::reject(pop, "population", "must be >= 1");
  run.learner.population_size = static_cast<std::size_t>(n);

  const auto& adj = layers.get("max_adjust");
  run.learner.max_deviant_adjust = detail::as_real(adj, "max_adjust");
  if (!(run.learner.max_deviant_adjust > 0.0)) detail::reject(adj, "max_adjust", "must be > 0");

  const auto& rule = layers.get("rule");
  if (rule.value == "addsub") {
    run.learner.rule_mode = RuleMode::AdditiveSubtractive;
  } else if (rule.value == "muldiv") {
    run.learner.rule_mode = RuleMode::MultiplicativeDivisive;
  } else {
    detail::reject(rule, "rule", "must be addsub or muldiv");
  }

  run.learner.bias = detail::as_real(layers.get("lp"), "lp");

  const auto& kw = layers.get("k_winners");
  const auto k = detail::as_integer(kw, "k_winners");
  if (k < 1 || k > n) detail::reject(kw, "k_winners", "must be in [1, population]");
  run.learner.k_winners = static_cast<std::size_t>(k);

  c.numeric = detail::as_bool(layers.get("numeric"), "numeric");
  run.freeze_after_train = detail::as_bool(layers.get("freeze_after_train"), "freeze_after_train");
  return c;
}

}  // namespace neuroami::config
