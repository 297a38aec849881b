#pragma once

// twcalc: evaluation, tabulation and verification front end.
// Exit codes: 0 ok, 1 a check failed or a computation lost precision, 2 bad input.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tw::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;

enum class Command { eval, table, constants, verify, oracle_compare, toeplitz_scan, toeplitz_limits };
enum class Format { csv, json };
enum class Side { f, e, both };

struct Tolerances {
  double representation = 1e-8;
  double total_integral = 1e-6;
  double tau2_fit = 1e-3;
  double tau14_fit = 1e-2;
  double verblunsky = 1e-25;
  double telescoping = 1e-20;
  double oracle = 1e-10;
};

struct RunConfig {
  Command command = Command::constants;
  std::optional<double> x, t;
  std::optional<int> beta;
  std::optional<int> L, M;
  std::optional<long> precision_bits;
  std::optional<double> tolerance;
  int m_quad = 80;
  Format format = Format::json;
  std::optional<std::string> output_path;
  int digits = 25;

  double xmin = -8.0, xmax = 4.0, step = 1.0;
  int q_min = 1;
  std::optional<int> q_max;
  Side side = Side::both;

  int hm_nodes = 2000;
  std::optional<std::string> cache_dir;
  bool use_cache = true;

  Tolerances tol;
};

// Thrown for invalid flags or flag combinations.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses argv (including the program name). UsageError on bad input;
// returns nullopt when help was printed.
std::optional<RunConfig> parse_args(const std::vector<std::string>& args, std::ostream& out);

// Checks the per-command requirements; UsageError when something is missing.
void validate(const RunConfig& cfg);

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// ${XDG_CACHE_HOME:-$HOME/.cache}/tw-painleve unless overridden
std::string default_cache_dir();

}  // namespace tw::cli
