#pragma once

// Output plumbing: config hashing, 15-digit number formatting, and atomic
// file writes (write to a temporary sibling, then rename over the target).

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

#include "json.hpp"
#include "trap_lab/error.hpp"

namespace trap_lab::output {

using ordered_json = nlohmann::ordered_json;

// 64-bit FNV-1a, rendered as "fnv1a64:<16 hex digits>".
inline std::string content_hash(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

// A double holding exactly the 15-significant-digit rounding of v, so the
// JSON serializer (shortest round-trip form) prints at most 15 digits.
inline double round15(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(fmt(v).c_str(), nullptr);
}

inline std::string csv_preamble(const std::string& scenario, const std::string& hash) {
  return "# scenario: " + scenario + "\n# config_hash: " + hash + "\n";
}

inline void atomic_write(const std::filesystem::path& target, const std::string& content) {
  std::filesystem::create_directories(target.parent_path().empty() ? "." : target.parent_path());
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw error("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw error("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, target);
}

inline std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace trap_lab::output
