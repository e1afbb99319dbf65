#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace drh::cli {

// start * factor^i rounded to integers, i < count; duplicates dropped.
struct GeometricGrid {
  double start = 100.0;
  double factor = 1.7782794100389228;  // 10^{1/4}
  std::size_t count = 0;

  [[nodiscard]] std::vector<double> points() const;
};

GeometricGrid parse_grid(const std::string& spec);  // "start:factor:count"

struct RunConfig {
  std::string command;
  std::uint64_t x_max = 1000000;
  std::uint64_t tau_n = 0;  // 0: follow x_max where a tau table is needed
  std::string family = "chi4";
  double s = 0.0;
  std::vector<double> grid;  // resolved checkpoints, ascending
  unsigned threads = 1;
  std::string output_path = "-";
  std::string summary_path;
  std::string cache_dir = ".drh-cache";
  bool validate = false;
  double tau0 = 0.0;
  unsigned m = 0;
  bool psi = false;
  double lower = 2.0;
  int sign = 1;
};

// Exit codes: 0 success, 2 configuration error, 3 ceiling exceeded,
// 4 validation failure, 1 anything else.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Executes an already-resolved configuration (no exit-code mapping).
void execute(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace drh::cli
