#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace parawork::tools {

enum class OutputFormat { Json, Csv, Table };

/// Everything one invocation needs, filled by the argument parser and
/// checked by validate() before any work starts.
struct RunConfig {
  std::string subcommand;
  std::string field;
  std::string set;      ///< PointSet2 or GridSet spec, see --help
  std::string measure;  ///< GridMeasure spec
  std::string mode = "exact";
  std::string B = "auto";
  std::string encoding = "rational";
  double s = 2.9;
  double sigma = 10.0 / 6.0;
  double A = 10.0;
  double C = 1.0;
  double C_sigma = 1.0;
  double delta = 0.0;  ///< 0 selects the command's default
  int T = 1;
  std::uint64_t seed = 0;
  std::uint64_t iterations = 2000;
  std::uint64_t trials = 1;
  std::uint64_t nodes = 4096;
  bool fourier = false;
  bool quick = false;
  std::vector<int> only;
  std::string out;
  OutputFormat format = OutputFormat::Json;

  /// Throws the owning module's error kind for any out-of-range value.
  void validate() const;
};

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"count",   "error-bound", "gauss-scan",   "threshold",
                                                 "avoid",   "content",     "frostman",     "energy",
                                                 "gap-pipeline", "functional", "suite"};
  return names;
}

/// Parses argv (argv[0] is the program name), runs the command and returns
/// the exit code: 0 success, 1 internal invariant violation, 2 bad input.
/// The suite exits 1 when a criterion fails.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err, bool color = false);

}  // namespace parawork::tools
