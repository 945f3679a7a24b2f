#pragma once

#include <map>
#include <string>

namespace bvlab {

/// Flat key = value configuration with [section] headers; keys are stored as
/// "section.key". Unsectioned keys keep their bare name.
class ExperimentConfig {
 public:
  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_text(const std::string& text);

  void set(const std::string& key, const std::string& value) { kv_[key] = value; }
  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  std::string get(const std::string& key, const std::string& fallback) const;
  double get_real(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;

  /// Canonical serialization (sorted keys) used for the config echo.
  std::string echo() const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace bvlab
