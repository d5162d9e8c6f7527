#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "neuroami/error.hpp"
#include "neuroami/utf8.hpp"

namespace neuroami {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr int kMinClassLevel = 2;
inline constexpr int kMaxClassLevel = 10;

/// Corpus rows as code points, zero padded on the right to the longest row.
struct SymbolMatrix {
  std::size_t rows = 0;
  std::size_t width = 0;
  std::vector<std::uint32_t> codes;  // row-major, rows * width
  std::vector<std::size_t> lengths;

  std::uint32_t at(std::size_t row, std::size_t col) const { return codes[row * width + col]; }
};

/// Positional agreement of one row with the reference row.
struct MatchScore {
  std::vector<std::uint8_t> bits;  // most significant first
  BigInt value;
  Rational scale;  // value / max value over all rows
};

struct ClassSequence {
  std::vector<int> classes;
  int class_level = 0;

  std::size_t size() const { return classes.size(); }
};

/// Which corpus row the others are swap-matched against.
struct Reference {
  enum class Kind { Last, First, Index };
  Kind kind = Kind::Last;
  std::size_t index = 0;  // 1-based, used when kind == Index

  static Reference last() { return {Kind::Last, 0}; }
  static Reference first() { return {Kind::First, 0}; }
  static Reference row(std::size_t one_based) { return {Kind::Index, one_based}; }

  friend bool operator==(const Reference&, const Reference&) = default;
};

/// Class index -> symbol table used to decode predictions. Slot c lives at
/// `slots[c - 1]`; an empty optional is a redundant class cell.
struct SensorMemory {
  std::vector<std::optional<std::string>> slots;

  int class_level() const { return static_cast<int>(slots.size()); }
  const std::optional<std::string>& slot(int c) const { return slots.at(static_cast<std::size_t>(c - 1)); }
  bool empty() const {
    return std::none_of(slots.begin(), slots.end(), [](const auto& s) { return s.has_value(); });
  }
};

struct DecodedSymbol {
  std::string symbol;
  bool exact = false;
};

inline SymbolMatrix symbol_integer_transform(std::span<const std::string> corpus) {
  if (corpus.empty()) throw Error(ErrorKind::EmptyCorpus, "corpus has no rows");

  std::vector<std::vector<char32_t>> decoded;
  decoded.reserve(corpus.size());
  for (std::size_t r = 0; r < corpus.size(); ++r) {
    if (corpus[r].empty()) {
      throw Error(ErrorKind::EmptyRow, "row " + std::to_string(r + 1) + " is empty", r);
    }
    auto d = utf8::decode(corpus[r]);
    if (d.error_offset) {
      throw Error(ErrorKind::BadEncoding,
                  "row " + std::to_string(r + 1) + " is not valid UTF-8 at byte " +
                      std::to_string(*d.error_offset),
                  *d.error_offset);
    }
    decoded.push_back(std::move(d.code_points));
  }

  SymbolMatrix m;
  m.rows = decoded.size();
  for (const auto& row : decoded) m.width = std::max(m.width, row.size());
  m.codes.assign(m.rows * m.width, 0);
  m.lengths.reserve(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) {
    m.lengths.push_back(decoded[r].size());
    std::copy(decoded[r].begin(), decoded[r].end(), m.codes.begin() + static_cast<std::ptrdiff_t>(r * m.width));
  }
  return m;
}

/// Resolves a reference selector to a 0-based row index.
inline std::size_t resolve_reference(Reference ref, std::size_t rows) {
  switch (ref.kind) {
    case Reference::Kind::Last: return rows - 1;
    case Reference::Kind::First: return 0;
    case Reference::Kind::Index:
      if (ref.index < 1 || ref.index > rows) {
        throw Error(ErrorKind::BadReference,
                    "reference row " + std::to_string(ref.index) + " outside 1.." + std::to_string(rows),
                    ref.index);
      }
      return ref.index - 1;
  }
  throw Error(ErrorKind::BadReference, "unknown reference kind");
}

/// Max-max scales the matrix, compares every row position-wise with the
/// reference row and reads the agreement bits as a base-2 integer.
inline std::vector<MatchScore> swap_match(const SymbolMatrix& matrix, Reference reference = Reference::last()) {
  if (matrix.rows == 0) throw Error(ErrorKind::EmptyCorpus, "matrix has no rows");
  const std::size_t ref = resolve_reference(reference, matrix.rows);

  std::uint32_t column_max_max = 0;
  for (std::size_t c = 0; c < matrix.width; ++c) {
    std::uint32_t col_max = 0;
    for (std::size_t r = 0; r < matrix.rows; ++r) col_max = std::max(col_max, matrix.at(r, c));
    column_max_max = std::max(column_max_max, col_max);
  }
  const double denom = static_cast<double>(column_max_max);

  std::vector<double> scaled(matrix.codes.size());
  std::transform(matrix.codes.begin(), matrix.codes.end(), scaled.begin(),
                 [denom](std::uint32_t code) { return static_cast<double>(code) / denom; });

  std::vector<MatchScore> scores(matrix.rows);
  BigInt max_value = 0;
  for (std::size_t r = 0; r < matrix.rows; ++r) {
    auto& s = scores[r];
    s.bits.resize(matrix.width);
    for (std::size_t c = 0; c < matrix.width; ++c) {
      s.bits[c] = scaled[ref * matrix.width + c] == scaled[r * matrix.width + c] ? 1 : 0;
      s.value <<= 1;
      s.value += s.bits[c];
    }
    max_value = std::max(max_value, s.value);
  }
  for (auto& s : scores) s.scale = Rational(s.value, max_value);
  return scores;
}

inline void check_class_level(int class_level) {
  if (class_level < kMinClassLevel || class_level > kMaxClassLevel) {
    throw Error(ErrorKind::BadClassLevel,
                "class level " + std::to_string(class_level) + " outside [2, 10]");
  }
}

/// class = floor(L ^ scale), evaluated in double precision.
inline int class_of_scale(const Rational& scale, int class_level) {
  const double s = scale.convert_to<double>();
  return static_cast<int>(std::floor(std::pow(static_cast<double>(class_level), s)));
}

inline ClassSequence class_encode(std::span<const MatchScore> scores, int class_level) {
  check_class_level(class_level);
  if (scores.empty()) throw Error(ErrorKind::EmptyCorpus, "no match scores to encode");
  ClassSequence out;
  out.class_level = class_level;
  out.classes.reserve(scores.size());
  for (const auto& s : scores) out.classes.push_back(class_of_scale(s.scale, class_level));
  return out;
}

inline SensorMemory build_sensor_memory(std::span<const std::string> corpus, const ClassSequence& classes) {
  if (corpus.size() != classes.size()) {
    throw Error(ErrorKind::LengthMismatch, "corpus has " + std::to_string(corpus.size()) + " rows but " +
                                               std::to_string(classes.size()) + " classes");
  }
  check_class_level(classes.class_level);
  SensorMemory mem;
  mem.slots.resize(static_cast<std::size_t>(classes.class_level));
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const int c = classes.classes[i];
    if (c < 1 || c > classes.class_level) {
      throw Error(ErrorKind::BadClass, "class " + std::to_string(c) + " at row " + std::to_string(i + 1), i);
    }
    mem.slots[static_cast<std::size_t>(c - 1)] = corpus[i];
  }
  return mem;
}

/// Looks up class `c`. An empty slot decodes to the nearest filled slot,
/// ties going to the lower class, and is reported as inexact.
inline DecodedSymbol decode_class(int c, const SensorMemory& memory) {
  const int level = memory.class_level();
  if (c < 1 || c > level) {
    throw Error(ErrorKind::BadClass, "class " + std::to_string(c) + " outside 1.." + std::to_string(level));
  }
  if (memory.empty()) throw Error(ErrorKind::EmptyMemory, "sensor memory has no filled slots");
  if (const auto& s = memory.slot(c)) return {*s, true};
  for (int d = 1; d < level; ++d) {
    if (c - d >= 1) {
      if (const auto& s = memory.slot(c - d)) return {*s, false};
    }
    if (c + d <= level) {
      if (const auto& s = memory.slot(c + d)) return {*s, false};
    }
  }
  throw Error(ErrorKind::EmptyMemory, "sensor memory has no filled slots");
}

struct EncoderConfig {
  int class_level = 5;
  Reference reference = Reference::last();
};

/// Everything the three encoding passes produce for one corpus.
struct Encoding {
  SymbolMatrix matrix;
  std::vector<MatchScore> scores;
  ClassSequence classes;
  SensorMemory memory;
};

inline Encoding encode(std::span<const std::string> corpus, const EncoderConfig& config = {}) {
  check_class_level(config.class_level);
  Encoding e;
  e.matrix = symbol_integer_transform(corpus);
  e.scores = swap_match(e.matrix, config.reference);
  e.classes = class_encode(e.scores, config.class_level);
  e.memory = build_sensor_memory(corpus, e.classes);
  return e;
}

}  // namespace neuroami
