#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pblab {

/// Fixed 17-significant-digit decimal formatting.  17 digits round-trip any
/// IEEE double, and a fixed rule keeps repeated runs byte-identical.
inline std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt_int(long long v) { return std::to_string(v); }

/// Minimal order-preserving JSON writer.  Field order is part of the output
/// contract, so a map-based library serializer is not used here.
class JsonWriter {
public:
  JsonWriter& begin_object() {
    sep();
    out_ += '{';
    first_ = true;
    return *this;
  }
  JsonWriter& end_object() {
    out_ += '}';
    first_ = false;
    return *this;
  }
  JsonWriter& begin_array() {
    sep();
    out_ += '[';
    first_ = true;
    return *this;
  }
  JsonWriter& end_array() {
    out_ += ']';
    first_ = false;
    return *this;
  }
  JsonWriter& key(const std::string& k) {
    sep();
    out_ += '"';
    escape(k);
    out_ += "\":";
    first_ = true;  // suppress the comma before the value
    return *this;
  }
  JsonWriter& value(double v) {
    sep();
    out_ += fmt_g17(v);
    return *this;
  }
  JsonWriter& value(long long v) {
    sep();
    out_ += fmt_int(v);
    return *this;
  }
  JsonWriter& value(int v) { return value(static_cast<long long>(v)); }
  JsonWriter& value(bool v) {
    sep();
    out_ += v ? "true" : "false";
    return *this;
  }
  JsonWriter& value(const std::string& s) {
    sep();
    out_ += '"';
    escape(s);
    out_ += '"';
    return *this;
  }
  JsonWriter& value(const char* s) { return value(std::string(s)); }

  const std::string& str() const { return out_; }

private:
  void sep() {
    if (!first_) out_ += ',';
    first_ = false;
  }
  void escape(const std::string& s) {
    for (char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        default: out_ += c;
      }
    }
  }

  std::string out_;
  bool first_ = true;
};

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

/// FNV-1a 64-bit digest, hex encoded.  Used for manifest integrity checks.
inline std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace pblab
