#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "neuroami/encoder.hpp"
#include "neuroami/error.hpp"
#include "neuroami/pipeline.hpp"

// Text formats shared by the CLI: encoded tables, prediction traces and the
// error-response series. All number formatting goes through std::to_chars so
// output never depends on the process locale.
namespace neuroami::io {

inline constexpr std::string_view kTraceHeader =
    "step,phase,prev_class,raw_prediction,predicted_class,expected_class,abs_error,cumulative_mape,deviant_mean";
inline constexpr std::string_view kEncodedHeader = "row_index,symbol,match_value,scale,class";
inline constexpr std::string_view kMemoryHeader = "class,symbol";
inline constexpr std::string_view kSeriesHeader = "test_step,cumulative_mape";

inline std::string fixed6(double v) {
  if (v == 0.0) v = 0.0;  // no "-0.000000"
  std::array<char, 128> buf{};
  auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, 6);
  if (r.ec != std::errc{}) return "nan";
  std::string s(buf.data(), r.ptr);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string_view to_string(Phase p) { return p == Phase::Train ? "train" : "test"; }

inline std::string format_memory(const SensorMemory& memory) {
  std::string out(kMemoryHeader);
  out += '\n';
  for (int c = 1; c <= memory.class_level(); ++c) {
    const auto& slot = memory.slot(c);
    out += std::to_string(c) + ',' + (slot ? csv_field(*slot) : std::string("[]")) + '\n';
  }
  return out;
}

inline std::string format_encoding(std::span<const std::string> corpus, const Encoding& e) {
  std::string out(kEncodedHeader);
  out += '\n';
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& s = e.scores[i];
    out += std::to_string(i + 1) + ',' + csv_field(corpus[i]) + ',' + s.value.str() + ',' +
           fixed6(s.scale.convert_to<double>()) + ',' + std::to_string(e.classes.classes[i]) + '\n';
  }
  out += '\n';
  out += format_memory(e.memory);
  return out;
}

inline std::string format_trace(const PredictionTrace& trace) {
  std::string out(kTraceHeader);
  out += '\n';
  std::size_t test_i = 0;
  for (const auto& s : trace.steps) {
    std::string mape_cell;
    if (s.phase == Phase::Test && test_i < trace.cumulative_mape.size()) {
      mape_cell = fixed6(trace.cumulative_mape[test_i++]);
    }
    out += std::to_string(s.index) + ',' + std::string(to_string(s.phase)) + ',' + std::to_string(s.previous_class) +
           ',' + fixed6(s.raw_prediction) + ',' + std::to_string(s.predicted_class) + ',' +
           std::to_string(s.expected_class) + ',' + std::to_string(s.abs_error) + ',' + mape_cell + ',' +
           fixed6(s.deviant_mean_after) + '\n';
  }
  return out;
}

inline std::string format_decoded(const std::vector<DecodedStep>& decoded) {
  std::string out = "step,predicted_symbol,expected_symbol,exact\n";
  for (const auto& d : decoded) {
    out += std::to_string(d.index) + ',' + csv_field(d.predicted.symbol) + ',' + csv_field(d.expected.symbol) + ',' +
           (d.predicted.exact ? "true" : "false") + '\n';
  }
  return out;
}

inline std::string format_series(std::span<const double> series) {
  std::string out(kSeriesHeader);
  out += '\n';
  for (std::size_t i = 0; i < series.size(); ++i) out += std::to_string(i + 1) + ',' + fixed6(series[i]) + '\n';
  return out;
}

namespace detail {

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

template <typename T>
T parse_cell(std::string_view cell, std::size_t line_no, std::string_view column) {
  T v{};
  const auto r = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || r.ec != std::errc{} || r.ptr != cell.data() + cell.size()) {
    throw Error(ErrorKind::BadTrace,
                "line " + std::to_string(line_no) + ": bad " + std::string(column) + " '" + std::string(cell) + "'",
                line_no);
  }
  return v;
}

}  // namespace detail

/// Parses the first trace section of `text` (up to a blank or '#' line).
/// Columns are re-validated; cumulative MAPE is recomputed, not trusted.
inline PredictionTrace parse_trace(std::string_view text) {
  PredictionTrace trace;
  trace.train_elements = 1;
  std::size_t line_no = 0;
  std::size_t start = 0;
  bool header_seen = false;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    const bool at_eof = end == std::string_view::npos;
    if (at_eof) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (at_eof && line.empty()) break;
    if (!header_seen) {
      if (line != kTraceHeader) {
        throw Error(ErrorKind::BadTrace, "line " + std::to_string(line_no) + ": expected trace header", line_no);
      }
      header_seen = true;
      continue;
    }
    if (line.empty() || line.front() == '#') break;
    if (at_eof) {
      throw Error(ErrorKind::BadTrace, "line " + std::to_string(line_no) + ": truncated (no line terminator)",
                  line_no);
    }
    const auto cells = detail::split_commas(line);
    if (cells.size() != 9) {
      throw Error(ErrorKind::BadTrace,
                  "line " + std::to_string(line_no) + ": expected 9 columns, found " + std::to_string(cells.size()),
                  line_no);
    }
    TraceStep s;
    s.index = detail::parse_cell<std::size_t>(cells[0], line_no, "step");
    if (cells[1] == "train") {
      s.phase = Phase::Train;
    } else if (cells[1] == "test") {
      s.phase = Phase::Test;
    } else {
      throw Error(ErrorKind::BadTrace, "line " + std::to_string(line_no) + ": bad phase", line_no);
    }
    s.previous_class = detail::parse_cell<int>(cells[2], line_no, "prev_class");
    s.raw_prediction = detail::parse_cell<double>(cells[3], line_no, "raw_prediction");
    s.predicted_class = detail::parse_cell<int>(cells[4], line_no, "predicted_class");
    s.expected_class = detail::parse_cell<int>(cells[5], line_no, "expected_class");
    s.abs_error = detail::parse_cell<int>(cells[6], line_no, "abs_error");
    if (s.phase == Phase::Test) detail::parse_cell<double>(cells[7], line_no, "cumulative_mape");
    s.deviant_mean_after = detail::parse_cell<double>(cells[8], line_no, "deviant_mean");
    if (s.expected_class < 1) {
      throw Error(ErrorKind::BadTrace, "line " + std::to_string(line_no) + ": expected_class must be >= 1", line_no);
    }
    if (!trace.steps.empty() && trace.steps.back().phase == Phase::Test && s.phase == Phase::Train) {
      throw Error(ErrorKind::BadTrace, "line " + std::to_string(line_no) + ": train step after test steps", line_no);
    }
    if (s.phase == Phase::Train) trace.train_elements = s.index + 1;
    trace.steps.push_back(s);
  }
  if (!header_seen) throw Error(ErrorKind::BadTrace, "line 1: empty trace file", 1);
  trace.cumulative_mape = mape(trace).series;
  return trace;
}

/// Minimal standalone SVG line chart of an error-response series.
inline std::string series_svg(std::span<const double> series) {
  constexpr double kW = 640, kH = 360, kPad = 40;
  double ymax = 0.0;
  for (double v : series) ymax = std::max(ymax, v);
  if (ymax <= 0.0) ymax = 1.0;
  const double xspan = series.size() > 1 ? static_cast<double>(series.size() - 1) : 1.0;
  auto x = [&](std::size_t i) { return kPad + (kW - 2 * kPad) * static_cast<double>(i) / xspan; };
  auto y = [&](double v) { return kH - kPad - (kH - 2 * kPad) * v / ymax; };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"360\" viewBox=\"0 0 640 360\">\n";
  svg += "<rect width=\"640\" height=\"360\" fill=\"white\"/>\n";
  svg += "<line x1=\"40\" y1=\"320\" x2=\"600\" y2=\"320\" stroke=\"black\"/>\n";
  svg += "<line x1=\"40\" y1=\"40\" x2=\"40\" y2=\"320\" stroke=\"black\"/>\n";
  svg += "<text x=\"320\" y=\"352\" font-size=\"12\" text-anchor=\"middle\">test step</text>\n";
  svg += "<text x=\"44\" y=\"34\" font-size=\"12\">cumulative MAPE (%), max " + fixed6(ymax) + "</text>\n";
  svg += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (i) svg += ' ';
    svg += fixed6(x(i)) + ',' + fixed6(y(series[i]));
  }
  svg += "\"/>\n</svg>\n";
  return svg;
}

}  // namespace neuroami::io
