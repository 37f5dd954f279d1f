// Deterministic CSV formatting: every numeric cell goes through the same
// 9-significant-digit conversion so files compare byte-for-byte.

#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

namespace gripsim {

// Shortest round-trip-ish decimal at 9 significant digits.
inline std::string format_g9(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

inline std::string format_int(long long value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%lld", value);
  return buf;
}

inline std::string format_u64(std::uint64_t value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%llu",
                static_cast<unsigned long long>(value));
  return buf;
}

// Row builder that inserts commas and a trailing newline.
class CsvRow {
 public:
  CsvRow& add(const std::string& cell) {
    if (!line_.empty()) {
      line_ += ',';
    }
    line_ += cell;
    return *this;
  }
  CsvRow& add(double value) { return add(format_g9(value)); }
  CsvRow& add_int(long long value) { return add(format_int(value)); }
  CsvRow& add_u64(std::uint64_t value) { return add(format_u64(value)); }

  std::string str() const { return line_ + "\n"; }

 private:
  std::string line_;
};

}  // namespace gripsim
