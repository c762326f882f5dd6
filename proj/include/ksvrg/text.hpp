#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

namespace ksvrg {

// Shortest decimal form that round-trips through binary64. NaN is always
// rendered as "nan" regardless of sign.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Strict full-token parses: the whole token must be consumed.
inline bool parse_double(std::string_view tok, double& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (first == last) return false;
  // from_chars rejects a leading '+', svmlight labels commonly carry one.
  if (*first == '+') ++first;
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc{} && res.ptr == last;
}

inline bool parse_int(std::string_view tok, int& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (first == last) return false;
  if (*first == '+') ++first;
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc{} && res.ptr == last;
}

inline bool parse_uint64(std::string_view tok, std::uint64_t& out) {
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return res.ec == std::errc{} && res.ptr == tok.data() + tok.size();
}

}  // namespace ksvrg
