#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "commands.hpp"
#include "rrte/errors.hpp"
#include "rrte/parallel.hpp"

using namespace rrte::cli;

int main(int argc, char** argv) {
  CLI::App app{"Spectral solver for the steady-state radiative transport equation"};
  app.require_subcommand(1);

  CommonOptions opt;
  app.add_option("--config", opt.config_path, "config file (key = value)")->required();
  app.add_option("--out", opt.out_path, "output CSV path (default: stdout)");
  app.add_option("--cache", opt.cache_path, "spectral decomposition cache file");
  app.add_option("--threads", opt.threads, "worker threads for block/q-node work");
  app.add_option("--lmax", opt.lmax_override, "override run.l_max");
  app.add_flag("--no-ballistic-subtraction", opt.no_ballistic_subtraction,
               "keep the ballistic moments in profiles");

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalue report per block");
  auto* profile = app.add_subcommand("profile", "angular intensity profile");
  auto* peak = app.add_subcommand("peak-scan", "position of the off-axis maximum");
  auto* ktab = app.add_subcommand("kappa-table", "plane-wave kernel elements");
  auto* boundary = app.add_subcommand("boundary", "half-space/slab boundary problems");

  CLI11_PARSE(app, argc, argv);

  try {
    KeyValueConfig kv = KeyValueConfig::parse_file(opt.config_path);
    RunConfig rc = RunConfig::from_config(kv);
    if (opt.lmax_override >= 0) rc.l_max = opt.lmax_override;
    rrte::parallel::set_threads(opt.threads);

    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!opt.out_path.empty()) {
      file.open(opt.out_path, std::ios::trunc);
      if (!file) throw config_error("cannot open output file: " + opt.out_path.string());
      os = &file;
    }

    int rcode = 0;
    if (spectrum->parsed()) rcode = cmd_spectrum(rc, opt, *os);
    else if (profile->parsed()) rcode = cmd_profile(rc, opt, *os);
    else if (peak->parsed()) rcode = cmd_peak_scan(rc, opt, *os);
    else if (ktab->parsed()) rcode = cmd_kappa_table(rc, opt, *os);
    else if (boundary->parsed()) rcode = cmd_boundary(rc, opt, *os);
    return rcode;
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const rrte::numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
