#pragma once

// Minimal JSON emitter: insertion-ordered objects, %.17g numbers, null for
// non-finite values.  Output is a pure function of the inserted values,
// which the reproducibility contract of the JSON artifacts relies on.

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "hierband/csv.hpp"

namespace hierband {

class JsonWriter {
 public:
  JsonWriter& begin_object() { return token("{", true); }
  JsonWriter& end_object() { return close("}"); }
  JsonWriter& begin_array() { return token("[", true); }
  JsonWriter& end_array() { return close("]"); }

  JsonWriter& key(const std::string& k) {
    comma();
    os_ << quote(k) << ':';
    pending_value_ = true;
    return *this;
  }

  JsonWriter& value(double v) {
    comma();
    if (std::isfinite(v))
      os_ << format_double(v);
    else
      os_ << "null";
    return *this;
  }
  JsonWriter& value(int v) { return value_raw(std::to_string(v)); }
  JsonWriter& value(long v) { return value_raw(std::to_string(v)); }
  JsonWriter& value(unsigned long v) { return value_raw(std::to_string(v)); }
  JsonWriter& value(unsigned long long v) { return value_raw(std::to_string(v)); }
  JsonWriter& value(bool v) { return value_raw(v ? "true" : "false"); }
  JsonWriter& value(const std::string& v) { return value_raw(quote(v)); }
  JsonWriter& value(const char* v) { return value_raw(quote(v)); }

  template <typename T>
  JsonWriter& array(const std::vector<T>& xs) {
    begin_array();
    for (const T& x : xs) value(x);
    return end_array();
  }

  std::string str() const { return os_.str(); }

 private:
  JsonWriter& value_raw(const std::string& s) {
    comma();
    os_ << s;
    return *this;
  }
  JsonWriter& token(const char* t, bool opens) {
    comma();
    os_ << t;
    if (opens) first_in_scope_ = true;
    return *this;
  }
  JsonWriter& close(const char* t) {
    os_ << t;
    first_in_scope_ = false;
    pending_value_ = false;
    return *this;
  }
  void comma() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (!first_in_scope_)
      os_ << ',';
    else
      first_in_scope_ = false;
  }
  static std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default: out += c;
      }
    }
    out += '"';
    return out;
  }

  std::ostringstream os_;
  bool first_in_scope_ = true;
  bool pending_value_ = false;
};

}  // namespace hierband
