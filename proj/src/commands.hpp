#pragma once

#include <filesystem>
#include <iosfwd>

#include "run_config.hpp"

namespace rrte::cli {

struct CommonOptions {
  std::filesystem::path config_path;
  std::filesystem::path out_path;    // empty: stdout
  std::filesystem::path cache_path;  // empty: no cache
  int threads = 1;
  int lmax_override = -1;
  bool no_ballistic_subtraction = false;
};

// each returns the process exit code (0 ok, 4 diagnostics present)
int cmd_spectrum(const RunConfig& rc, const CommonOptions& opt, std::ostream& os);
int cmd_profile(const RunConfig& rc, const CommonOptions& opt, std::ostream& os);
int cmd_peak_scan(const RunConfig& rc, const CommonOptions& opt, std::ostream& os);
int cmd_kappa_table(const RunConfig& rc, const CommonOptions& opt, std::ostream& os);
int cmd_boundary(const RunConfig& rc, const CommonOptions& opt, std::ostream& os);

}  // namespace rrte::cli
