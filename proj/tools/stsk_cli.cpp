// Command-line front end: SER campaigns, capacity sweeps, coding-gain
// tables, structural verification, and dispersion-matrix export.
//
// Exit codes: 0 success, 1 invariant/verification failure, 2 config error.

#include "stsk/stsk.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::optional<std::string> snr_list;
  std::string out_path;
  int threads = 1;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags, bool with_snr = true) {
  cmd->add_option("--config", flags.config_path, "key = value config file");
  cmd->add_option("--seed", flags.seed, "master seed override");
  if (with_snr)
    cmd->add_option("--snr", flags.snr_list, "comma-separated SNR grid in dB (override)");
  cmd->add_option("--out", flags.out_path, "output path (default: stdout)");
  cmd->add_option("--threads", flags.threads, "worker threads")->check(CLI::PositiveNumber);
}

stsk::SimConfig resolve_config(const CommonFlags& flags) {
  stsk::SimConfig cfg;
  if (!flags.config_path.empty()) cfg = stsk::load_config_file(flags.config_path);
  if (flags.seed) cfg.master_seed = *flags.seed;
  if (flags.snr_list)
    cfg.snr_grid_db = stsk::detail::parse_real_list(*flags.snr_list, "--snr");
  return cfg;
}

// Writes through a file when --out is given, else stdout.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw stsk::ConfigError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Space-time shift keying simulator with structured dispersion matrices"};
  app.require_subcommand(1);

  CommonFlags ser_flags, cap_flags, gains_flags, verify_flags, export_flags;

  auto* ser_cmd = app.add_subcommand("ser", "symbol-error-rate campaign over an SNR grid");
  add_common_flags(ser_cmd, ser_flags);

  auto* cap_cmd = app.add_subcommand("capacity", "DCMC capacity sweep over an SNR grid");
  add_common_flags(cap_cmd, cap_flags);

  auto* gains_cmd =
      app.add_subcommand("gains", "coding gain / diversity table for one or more DM specs");
  add_common_flags(gains_cmd, gains_flags, /*with_snr=*/false);
  std::vector<std::string> gain_specs;
  gains_cmd->add_option("--dm", gain_specs,
                        "extra dm spec(s) to tabulate (repeatable); defaults to the "
                        "config's dm when omitted");

  auto* verify_cmd =
      app.add_subcommand("verify", "structural verification of the configured construction");
  add_common_flags(verify_cmd, verify_flags, /*with_snr=*/false);

  auto* export_cmd = app.add_subcommand("export-dms", "emit the configured DM set as text");
  add_common_flags(export_cmd, export_flags, /*with_snr=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (ser_cmd->parsed()) {
      const auto cfg = resolve_config(ser_flags);
      const auto points = stsk::run_ser_campaign(cfg, ser_flags.threads);
      OutputTarget out(ser_flags.out_path);
      stsk::write_ser_csv(out.stream(), cfg, points);
      return 0;
    }
    if (cap_cmd->parsed()) {
      const auto cfg = resolve_config(cap_flags);
      const auto points = stsk::run_capacity_campaign(cfg, cap_flags.threads);
      OutputTarget out(cap_flags.out_path);
      stsk::write_capacity_csv(out.stream(), cfg, points);
      return 0;
    }
    if (gains_cmd->parsed()) {
      const auto base = resolve_config(gains_flags);
      std::vector<stsk::SimConfig> configs;
      if (gain_specs.empty()) {
        configs.push_back(base);
      } else {
        for (const auto& spec : gain_specs) {
          stsk::SimConfig cfg = base;
          stsk::apply_config_entry(cfg, "dm", spec, "--dm");
          configs.push_back(cfg);
        }
      }
      const auto rows = stsk::run_gain_table(configs);
      OutputTarget out(gains_flags.out_path);
      stsk::write_gain_csv(out.stream(), rows);
      for (const auto& r : rows)
        if (!r.error.empty()) {
          std::cerr << "row '" << r.label << "' failed: " << r.error << "\n";
          return 1;
        }
      return 0;
    }
    if (verify_cmd->parsed()) {
      const auto cfg = resolve_config(verify_flags);
      const auto report = stsk::run_verify(cfg);
      OutputTarget out(verify_flags.out_path);
      out.stream() << "check,domain_size,image_size,collisions,pass\n";
      for (const auto& line : report.csv_lines) out.stream() << line << "\n";
      for (const auto& line : report.lines) std::cerr << line << "\n";
      return report.pass ? 0 : 1;
    }
    if (export_cmd->parsed()) {
      const auto cfg = resolve_config(export_flags);
      const auto cb = stsk::build_codebook(cfg);
      OutputTarget out(export_flags.out_path);
      stsk::write_dm_set(out.stream(), cb.dms);
      return 0;
    }
  } catch (const stsk::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const stsk::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
