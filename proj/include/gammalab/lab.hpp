#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace gammalab {

/// Command implementations behind the CLI. Each returns a process exit code:
/// 0 success, 1 usage/config error, 2 inadmissible kernel, 3 verification
/// failure. Artifacts (CSV/SVG/PGM) are written under `out_dir`.
int run_gamma_crit(const std::string& kernel_spec, int dim);
int run_sweep(const std::string& config_path, const std::string& out_dir);
int run_anneal(const std::string& config_path, const std::string& out_dir,
               std::optional<std::uint64_t> seed_override);
int run_autocorr(const std::string& config_path, const std::string& out_dir);
int run_verify(const std::string& level, const std::string& out_dir);

}  // namespace gammalab
