#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace airan::sim {

/// Streaming FNV-1a 64. The digest of a run hashes the full ordered
/// event-effect stream through one of these.
class Fnv64 {
 public:
  void update(std::string_view bytes) {
    for (unsigned char c : bytes) {
      hash_ ^= c;
      hash_ *= 0x100000001b3ULL;
    }
  }

  std::uint64_t value() const { return hash_; }

  std::string hex() const;

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

/// Ordered trace of event effects. Every processed event and every module
/// side effect appends one line; the hash over those lines is the
/// determinism witness for a run. Line retention is optional (hashing
/// alone is enough for digests; retention feeds trace audits in tests).
class Trace {
 public:
  explicit Trace(bool retain_lines = false) : retain_(retain_lines) {}

  void line(std::string_view s) {
    hasher_.update(s);
    hasher_.update("\n");
    ++lines_;
    if (retain_) retained_.push_back(std::string(s));
  }

  std::uint64_t hash() const { return hasher_.value(); }
  std::string hash_hex() const { return hasher_.hex(); }
  std::uint64_t line_count() const { return lines_; }
  const std::vector<std::string>& lines() const { return retained_; }

 private:
  Fnv64 hasher_;
  std::uint64_t lines_ = 0;
  bool retain_ = false;
  std::vector<std::string> retained_;
};

/// Canonical float formatting for digests and exports: shortest form that
/// round-trips a double, so digests are stable across runs.
std::string fmt_double(double v);

}  // namespace airan::sim
