#pragma once

#include <string>
#include <vector>

#include "charsieve/common.hpp"

namespace charsieve {

// 17 significant digits, locale-free
std::string fmt17(double x);
// shortest %g form, for config echo
std::string fmt_g(double x);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// minimal JSON emitter (objects/arrays/strings/raw numbers), deterministic
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array(const std::string& key = "");
  JsonWriter& end_array();
  JsonWriter& field(const std::string& key, const std::string& value);
  JsonWriter& field_raw(const std::string& key, const std::string& raw);
  JsonWriter& field(const std::string& key, double value);  // 17 significant digits
  JsonWriter& field(const std::string& key, i64 value);
  JsonWriter& field(const std::string& key, u64 value);
  JsonWriter& element_object();
  std::string str() const { return out_; }

 private:
  void comma();
  std::string out_;
  std::vector<bool> need_comma_;
};

std::string json_escape(const std::string& s);

}  // namespace charsieve
