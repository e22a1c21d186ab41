#pragma once

// Command-line front end. Exit codes: 0 success, 1 verification or runtime
// failure, 2 usage or configuration error.

#include <ostream>
#include <string>
#include <vector>

namespace hk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

//! `args` excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

//! "lo:hi:n", n log-spaced points with both ends included.
std::vector<double> parse_log_grid(const std::string &spec);
//! Comma-separated reals.
std::vector<double> parse_reals(const std::string &list);
//! Shortest round-trip-safe text for a double (17 significant digits).
std::string format_real(double v);

} // namespace hk::cli
