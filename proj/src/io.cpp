#include "charsieve/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace charsieve {

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fmt_g(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string json_escape(const std::string& s) {
  std::string out;
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
  return out;
}

void JsonWriter::comma() {
  if (!need_comma_.empty()) {
    if (need_comma_.back()) out_ += ",";
    need_comma_.back() = true;
  }
}

JsonWriter& JsonWriter::begin_object() {
  comma();
  out_ += "{";
  need_comma_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += "}";
  need_comma_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::begin_array(const std::string& key) {
  comma();
  if (!key.empty()) out_ += "\"" + json_escape(key) + "\":";
  out_ += "[";
  need_comma_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += "]";
  need_comma_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, const std::string& value) {
  comma();
  out_ += "\"" + json_escape(key) + "\":\"" + json_escape(value) + "\"";
  return *this;
}

JsonWriter& JsonWriter::field_raw(const std::string& key, const std::string& raw) {
  comma();
  out_ += "\"" + json_escape(key) + "\":" + raw;
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, double value) {
  return field_raw(key, fmt17(value));
}

JsonWriter& JsonWriter::field(const std::string& key, i64 value) {
  return field_raw(key, std::to_string(value));
}

JsonWriter& JsonWriter::field(const std::string& key, u64 value) {
  return field_raw(key, std::to_string(value));
}

JsonWriter& JsonWriter::element_object() { return begin_object(); }

}  // namespace charsieve
