#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include <nlohmann/json.hpp>

namespace autolike {

using json = nlohmann::ordered_json;

// Rounds to 9 significant digits so serialized reals are short and
// byte-stable across runs.
inline double round9(double v) {
  if (!std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return std::strtod(buf, nullptr);
}

}  // namespace autolike
