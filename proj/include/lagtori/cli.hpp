// Command drivers behind the lagtori executable. Each command writes its
// table to `out` (or to --out), diagnostics to `err`, and returns the
// process exit code:
//   0 success / criterion satisfied, 1 criterion unsatisfied,
//   2 usage error, 3 numerical failure.

#ifndef LAGTORI_CLI_HPP
#define LAGTORI_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lagtori/criterion.hpp"

namespace lagtori {

enum ExitCode : int { kExitOk = 0, kExitUnsatisfied = 1, kExitUsage = 2, kExitNumerical = 3 };

struct RunConfig {
  std::string command;
  int d = 2;
  std::vector<int> n_list;
  double eps = 0.1;
  double sigma = 0.01;
  int resolution = 0;  ///< 0: per-family default
  std::filesystem::path out;
  std::string format = "csv";
  std::uint64_t seed = 0;
  int omegas = 64;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

struct SweepRow {
  int n = 0;
  int m = 0;
  int N = 0;
  int resolution = 0;
  double R_n = 0.0;
  double minus_amplitude = 0.0;
  std::vector<double> cr_T;    ///< orders 0..k
  double max_p = 0.0;
  double min_p = 0.0;
  std::vector<double> cr_p;    ///< orders 0..d+1
  std::vector<double> cr_psi;  ///< orders 0..d+1
  CriterionReport criterion;
};

struct SlopeCheck {
  std::string quantity;
  std::string target_label;
  double target = 0.0;  ///< NaN for a pure decay check (slope < 0)
  double tolerance = 0.15;
  double measured = 0.0;
  bool pass = false;
};

/// One row per n (ascending) of the analytic-path pipeline.
std::vector<SweepRow> sweep_family(int d, std::vector<int> n_list, double eps, double sigma, int resolution = 0);
std::vector<SlopeCheck> sweep_slopes(const std::vector<SweepRow>& rows, int d, double eps);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, const std::vector<SlopeCheck>& slopes,
                     int d, double eps);

int run_toy(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_construct(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_graphsearch(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Dispatches on cfg.command and maps exceptions to exit codes.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace lagtori

#endif  // LAGTORI_CLI_HPP
