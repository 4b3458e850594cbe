#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace greenpod::detail {

/// Round half away from zero at `decimals` places.
inline double round_to(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

inline std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, round_to(value, decimals));
  std::string s(buf);
  if (s.rfind("-0", 0) == 0 && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

/// Whole number with thousands separators, e.g. 13795.2 -> "13,795".
inline std::string grouped(double value) {
  const long long whole = std::llround(value);
  std::string digits = std::to_string(whole < 0 ? -whole : whole);
  std::string out;
  const int n = static_cast<int>(digits.size());
  for (int i = 0; i < n; ++i) {
    out += digits[i];
    const int left = n - 1 - i;
    if (left > 0 && left % 3 == 0) out += ',';
  }
  return whole < 0 ? "-" + out : out;
}

}  // namespace greenpod::detail
