#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace rrte::cli {

namespace {
std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}
}  // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::filesystem::path& p) {
  std::ifstream is(p);
  if (!is) throw config_error("cannot open config file: " + p.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_string(ss.str());
}

KeyValueConfig KeyValueConfig::parse_string(const std::string& text) {
  KeyValueConfig c;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw config_error("config line " + std::to_string(lineno) + ": empty key");
    c.kv_[key] = val;
  }
  return c;
}

std::string KeyValueConfig::get_string(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) throw config_error("missing config key: " + key);
  return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& dflt) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? dflt : it->second;
}

double KeyValueConfig::get_double(const std::string& key) const {
  const std::string s = get_string(key);
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw config_error("config key " + key + ": not a number: " + s);
  }
}

double KeyValueConfig::get_double(const std::string& key, double dflt) const {
  return has(key) ? get_double(key) : dflt;
}

int KeyValueConfig::get_int(const std::string& key) const {
  const double v = get_double(key);
  if (v != std::floor(v)) throw config_error("config key " + key + ": not an integer");
  return int(v);
}

int KeyValueConfig::get_int(const std::string& key, int dflt) const {
  return has(key) ? get_int(key) : dflt;
}

bool KeyValueConfig::get_bool(const std::string& key, bool dflt) const {
  if (!has(key)) return dflt;
  const std::string s = get_string(key);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw config_error("config key " + key + ": not a boolean: " + s);
}

std::vector<double> KeyValueConfig::get_list(const std::string& key) const {
  const std::string s = get_string(key);
  std::vector<double> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw config_error("config key " + key + ": bad list element: " + tok);
    }
  }
  if (out.empty()) throw config_error("config key " + key + ": empty list");
  return out;
}

RunConfig RunConfig::from_config(const KeyValueConfig& c) {
  const double mu_a = c.get_double("medium.mu_a");
  const double mu_s = c.get_double("medium.mu_s");
  if (mu_a <= 0.0) throw config_error("medium.mu_a must be > 0");
  if (mu_s < 0.0) throw config_error("medium.mu_s must be >= 0");
  OpticalMedium raw_medium = [&] {
    if (c.has("medium.A")) {
      return OpticalMedium::with_phase_coeffs(mu_a, mu_s, c.get_list("medium.A"));
    }
    const double g = c.get_double("medium.g", 0.0);
    if (g < 0.0 || g >= 1.0) throw config_error("medium.g must be in [0, 1)");
    return OpticalMedium::henyey_greenstein(mu_a, mu_s, g);
  }();
  // rescale so that the transport mean free path is the unit of length;
  // positions in the config are given in these units and the intensity is
  // reported as (l*)^2 I
  const double lstar = raw_medium.transport_mfp();
  OpticalMedium medium = raw_medium.is_henyey_greenstein()
                             ? OpticalMedium::henyey_greenstein(
                                   mu_a * lstar, mu_s * lstar, raw_medium.g())
                             : OpticalMedium::with_phase_coeffs(
                                   mu_a * lstar, mu_s * lstar,
                                   [&] {
                                     std::vector<double> a;
                                     for (int l = 0;; ++l) {
                                       double v = raw_medium.phase_coeff(l);
                                       if (l > 0 && v == 0.0) break;
                                       a.push_back(v);
                                       if (l > 4096) break;
                                     }
                                     return a;
                                   }());
  RunConfig rc{medium};
  rc.l_max = c.get_int("run.l_max", 8);
  rc.block_dim = c.get_int("run.block_dim", 1000);
  rc.n_modes = c.get_int("run.n_modes", -1);
  rc.q_max = c.get_double("quad.q_max", -1.0);
  rc.n_q = c.get_int("quad.n_q", 64);
  rc.n_phi = c.get_int("quad.n_phi", -1);
  rc.n_angles = c.get_int("run.n_angles", 101);
  rc.subtract_ballistic = c.get_bool("run.ballistic_subtraction", true);
  rc.raw = c;
  if (rc.l_max < 0) throw config_error("run.l_max must be >= 0");
  if (rc.block_dim < 2 || rc.block_dim % 2 != 0)
    throw config_error("run.block_dim must be even and >= 2");
  if (rc.n_angles < 2) throw config_error("run.n_angles must be >= 2");
  return rc;
}

}  // namespace rrte::cli
