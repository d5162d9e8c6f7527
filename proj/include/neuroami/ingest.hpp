#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "neuroami/error.hpp"
#include "neuroami/utf8.hpp"

namespace neuroami {

struct Corpus {
  std::vector<std::string> items;
  std::string source;
};

namespace detail {

// Splits on '\n', dropping a trailing '\r' from each line.
template <typename F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    const bool last = end == std::string_view::npos;
    if (last) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    f(++line_no, line);
    start = end + 1;
  }
}

inline std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace detail

inline Corpus read_text_corpus(std::string_view bytes, std::string source = "<memory>") {
  if (const auto d = utf8::decode(bytes); d.error_offset) {
    throw Error(ErrorKind::BadEncoding, "invalid UTF-8 at byte offset " + std::to_string(*d.error_offset),
                *d.error_offset);
  }
  Corpus c;
  c.source = std::move(source);
  detail::for_each_line(bytes, [&](std::size_t, std::string_view line) {
    if (!line.empty()) c.items.emplace_back(line);
  });
  if (c.items.empty()) throw Error(ErrorKind::EmptyCorpus, "no non-empty lines in " + c.source);
  return c;
}

/// Canonical text for a number: integral values without a decimal point,
/// everything else as the shortest round-trip decimal.
inline std::string canonical_number(double v) {
  constexpr double kExactIntegerLimit = 9007199254740992.0;  // 2^53
  std::array<char, 64> buf{};
  if (std::trunc(v) == v && std::abs(v) < kExactIntegerLimit) {
    const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), static_cast<std::int64_t>(v));
    return {buf.data(), r.ptr};
  }
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), r.ptr};
}

inline Corpus read_numeric_series(std::string_view bytes, std::string source = "<memory>") {
  if (const auto d = utf8::decode(bytes); d.error_offset) {
    throw Error(ErrorKind::BadEncoding, "invalid UTF-8 at byte offset " + std::to_string(*d.error_offset),
                *d.error_offset);
  }
  Corpus c;
  c.source = std::move(source);
  detail::for_each_line(bytes, [&](std::size_t line_no, std::string_view line) {
    std::string_view t = detail::trim(line);
    if (t.empty()) return;
    if (t.front() == '+') t.remove_prefix(1);
    double v = 0.0;
    const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || r.ec != std::errc{} || r.ptr != t.data() + t.size() || !std::isfinite(v)) {
      throw Error(ErrorKind::BadNumber, "line " + std::to_string(line_no) + ": '" + std::string(line) +
                                            "' is not a decimal number",
                  line_no);
    }
    c.items.push_back(canonical_number(v));
  });
  if (c.items.empty()) throw Error(ErrorKind::EmptyCorpus, "no non-empty lines in " + c.source);
  return c;
}

/// Reads all bytes from a path, or from standard input when path is "-".
inline std::string read_source(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string write_corpus(const Corpus& corpus) {
  std::string out;
  for (const auto& item : corpus.items) {
    out += item;
    // A trailing '\r' would otherwise be taken for part of the terminator.
    out += item.ends_with('\r') ? "\r\n" : "\n";
  }
  return out;
}

}  // namespace neuroami
