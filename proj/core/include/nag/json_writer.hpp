#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nag {

/// Minimal JSON emitter with a pinned number format.
///
/// Finite doubles are printed with 17 significant digits (%.17g), which
/// round-trips exactly through strtod; NaN and infinities are emitted as the
/// strings "nan", "inf" and "-inf". Key order is exactly the insertion
/// order, so equal records serialize byte-identically.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();

  JsonWriter& key(const std::string& k);

  JsonWriter& value(double v);
  JsonWriter& value(std::int64_t v);
  JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
  JsonWriter& value(std::uint64_t v);
  JsonWriter& value(bool v);
  JsonWriter& value(const std::string& v);
  JsonWriter& value(const char* v) { return value(std::string(v)); }
  JsonWriter& value(const std::vector<double>& v);
  JsonWriter& value(const std::vector<std::int64_t>& v);
  JsonWriter& null_value();

  template <typename T>
  JsonWriter& kv(const std::string& k, const T& v) {
    key(k);
    return value(v);
  }

  const std::string& str() const { return out_; }

  static std::string format_double(double v);

 private:
  void comma();

  std::string out_;
  std::vector<bool> has_item_;  // per open scope
  bool pending_key_ = false;
};

/// Parses a double emitted by JsonWriter, including the "inf"/"nan" strings.
double parse_double_token(const std::string& token);

}  // namespace nag
