#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace sg {

/// Flat key = value settings: optional config file plus command-line
/// overrides. Booleans are true/false, lists comma-separated.
class Config {
 public:
  Config() = default;

  /// Parse a `key = value` file; '#' starts a comment.
  static Config from_file(const std::string& path);

  /// Apply a key=value override (command-line form).
  void set(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_list(const std::string& key,
                               const std::vector<double>& fallback) const;
  std::vector<std::string> get_string_list(const std::string& key,
                                           const std::vector<std::string>& fallback) const;

  /// Reject keys outside the subcommand's schema.
  void validate(const std::set<std::string>& allowed) const;

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace sg
