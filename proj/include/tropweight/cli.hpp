#ifndef TROPWEIGHT_CLI_HPP
#define TROPWEIGHT_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>

#include "tropweight/weights.hpp"

namespace tropweight {

struct GridSpec {
  double x_min = 0.0;
  double x_max = 0.0;
  std::size_t points = 1000;
  bool user_set = false;  // false: span [x_floor, k_max-th breakpoint]
};

enum class OutputFormat { json, csv };

struct RunConfig {
  WeightSpec weight;
  double h = 4.0;
  std::size_t k_max = 64;  // certified breakpoint count for build/export
  GridSpec grid;
  int phases = 64;
  std::uint64_t seed = 12345;
  std::string out;
  OutputFormat format = OutputFormat::json;
};

/// Entry point behind the `tropweight` binary. Exit codes: 0 success /
/// evidence obtained, 1 invalid input (nothing written), 2 inconclusive
/// classification, 3 verification failure (artifacts still written).
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace tropweight

#endif
