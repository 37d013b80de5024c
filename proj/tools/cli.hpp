#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "table.hpp"

namespace orthoplex::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitGuard = 2;
inline constexpr int kExitVerifyFailed = 3;

// Relative --out paths are resolved against this directory when it is set.
inline constexpr const char* kOutputDirEnv = "ORTHOPLEX_OUTPUT_DIR";

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "7", "1:10", "1:10:3" or "2,4,8". Throws std::invalid_argument.
std::vector<std::uint64_t> parse_range(std::string_view text);
// "0.5", "0.1,0.2" or "lo:hi:step" with a positive real step.
std::vector<double> parse_real_list(std::string_view text);

enum class NOfD { sqrt, linear, pow32, square };
NOfD parse_n_of_d(std::string_view name);
// floor(scale * f(d)); exact integer arithmetic when scale == 1.
std::uint64_t n_of_d(NOfD rule, std::uint64_t d, double scale = 1.0);

// Runs task(i) for i in [0, count) on up to `threads` workers and returns the
// results concatenated in index order. If tasks throw, the exception of the
// lowest index is rethrown.
std::vector<Row> parallel_rows(std::size_t count, unsigned threads,
                               const std::function<std::vector<Row>(std::size_t)>& task);

struct VerifyOptions {
  std::string suite = "all";  // counts | asymptotics | contour | lattice | concentration | all
  unsigned max_d = 5;
  unsigned max_n = 7;
  unsigned threads = 1;
};

// One row per check: suite, check, status, cases, detail.
std::vector<Row> run_verify(const VerifyOptions& options, bool& all_passed);

}  // namespace orthoplex::cli
