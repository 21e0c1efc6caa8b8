#pragma once

// Command implementations behind the `adrc` executable. Each returns the
// process exit status: 0 success, 2 usage/config error, 3 simulation failure.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace adrc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitSimulation = 3;

struct CommonOptions {
  std::string out_dir;  // empty: print only
  std::optional<unsigned long long> seed;
  std::optional<double> dt;
  std::optional<double> horizon;
};

// "A:STEP:B" inclusive grid, values rounded to 1e-12. Throws
// std::invalid_argument on malformed text.
std::vector<double> parse_grid(const std::string& text);

int cmd_run(const std::string& target, const CommonOptions& opts, std::ostream& out,
            std::ostream& err);

int cmd_certify(const std::string& target, std::optional<double> k,
                std::optional<std::string> k_grid, const CommonOptions& opts, std::ostream& out,
                std::ostream& err);

int cmd_sweep(const std::string& target, std::optional<std::string> alpha_grid,
              const CommonOptions& opts, std::ostream& out, std::ostream& err);

// Parses argv with CLI11 and dispatches.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace adrc::cli
