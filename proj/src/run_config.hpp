#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rrte/medium.hpp"

namespace rrte::cli {

// Flat dotted key-value config ("medium.mu_a = 0.5", '#' comments).
class KeyValueConfig {
 public:
  static KeyValueConfig parse_file(const std::filesystem::path& p);
  static KeyValueConfig parse_string(const std::string& text);

  bool has(const std::string& key) const { return kv_.count(key) > 0; }
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& dflt) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double dflt) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int dflt) const;
  bool get_bool(const std::string& key, bool dflt) const;
  std::vector<double> get_list(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

struct RunConfig {
  OpticalMedium medium;      // rescaled so lengths are in transport mfp units
  int l_max = 8;
  int block_dim = 1000;
  int n_modes = -1;
  double q_max = -1.0;
  int n_q = 64;
  int n_phi = -1;
  int n_angles = 101;
  bool subtract_ballistic = true;
  KeyValueConfig raw;

  static RunConfig from_config(const KeyValueConfig& c);
};

// configuration problem (missing/invalid keys): CLI exit code 2
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rrte::cli
