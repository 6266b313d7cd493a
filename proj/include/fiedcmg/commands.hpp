#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace fiedcmg {

// Flags shared by every subcommand.
struct CommonOptions {
  std::uint64_t seed = 0;
  double tol = 1e-8;
  std::size_t coarsest_size = 25;
  bool csv = false;
  std::string out;  // write the command's output here instead of stdout
};

struct GraphInput {
  std::string path;
  std::string format = "auto";
};

struct FiedlerOptions {
  GraphInput input;
  std::string vector_path;
  bool oracle = false;
};

struct BenchOptions {
  std::string dir;
  std::vector<std::uint64_t> seeds;  // empty: the common seed only
};

struct GcmgOptions {
  std::size_t n = 1025;
  std::size_t levels = 0;
  std::size_t max_coarsest = 33;
  double beta = 4.0;
  std::size_t k0 = 1;
};

struct RateOptions {
  std::vector<std::size_t> sizes{65, 129, 257};
  double beta = 8.0;
  std::size_t k0 = 4;
  std::size_t coarsest = 17;
};

// Exit codes: 0 success (finest level converged), 2 finished but not
// converged, 1 input or usage error. Errors go to err only.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUnconverged = 2;

int cmd_fiedler(const CommonOptions& common, const FiedlerOptions& opt, std::ostream& out,
                std::ostream& err);
int cmd_hierarchy(const CommonOptions& common, const GraphInput& in, std::ostream& out,
                  std::ostream& err);
int cmd_bisect(const CommonOptions& common, const GraphInput& in, std::ostream& out,
               std::ostream& err);
int cmd_bench(const CommonOptions& common, const BenchOptions& opt, std::ostream& out,
              std::ostream& err);
int cmd_gcmg(const CommonOptions& common, const GcmgOptions& opt, std::ostream& out,
             std::ostream& err);
int cmd_gcmg_rates(const CommonOptions& common, const RateOptions& opt, std::ostream& out,
                   std::ostream& err);

}  // namespace fiedcmg
