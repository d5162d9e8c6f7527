#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace neuroami::utf8 {

struct DecodeResult {
  std::vector<char32_t> code_points;
  // Byte offset of the first malformed sequence, if any.
  std::optional<std::size_t> error_offset;
};

/// Strict UTF-8 decode: rejects overlong forms, surrogates and values
/// above U+10FFFF.
inline DecodeResult decode(std::string_view bytes) {
  DecodeResult out;
  out.code_points.reserve(bytes.size());
  std::size_t i = 0;
  const std::size_t n = bytes.size();
  while (i < n) {
    const auto b0 = static_cast<std::uint8_t>(bytes[i]);
    if (b0 < 0x80) {
      out.code_points.push_back(b0);
      ++i;
      continue;
    }
    std::size_t len = 0;
    char32_t cp = 0;
    char32_t min = 0;
    if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
      min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
      min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
      min = 0x10000;
    } else {
      out.error_offset = i;
      return out;
    }
    if (i + len > n) {
      out.error_offset = i;
      return out;
    }
    for (std::size_t k = 1; k < len; ++k) {
      const auto b = static_cast<std::uint8_t>(bytes[i + k]);
      if ((b & 0xC0) != 0x80) {
        out.error_offset = i;
        return out;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      out.error_offset = i;
      return out;
    }
    out.code_points.push_back(cp);
    i += len;
  }
  return out;
}

}  // namespace neuroami::utf8
