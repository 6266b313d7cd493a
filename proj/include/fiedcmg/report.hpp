#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "fiedcmg/cascadic.hpp"
#include "fiedcmg/coarsening.hpp"
#include "fiedcmg/dense_oracle.hpp"
#include "fiedcmg/gcmg.hpp"

namespace fiedcmg {

using Json = nlohmann::ordered_json;

struct OracleCheck {
  double lambda2 = 0.0;
  double lambda3 = 0.0;
  std::size_t multiplicity = 0;
  double angle = 0.0;          // solver vector vs oracle eigenspace
  double lambda2_error = 0.0;  // |solver - oracle|
};

OracleCheck check_against_oracle(const FiedlerResult& res, const FiedlerOracle& oracle);

// Result document of the fiedler command. Keys ending in "time_s" are wall
// clock measurements; everything else is a function of (graph, config).
Json fiedler_json(const FiedlerResult& res, const SparseLaplacian& L, double parse_time_s,
                  const std::string& vector_path = {},
                  const std::optional<OracleCheck>& oracle = std::nullopt);

// Copy of j with every "*time_s" key removed at any depth.
Json without_time_fields(const Json& j);

struct BenchRecord {
  std::string name;
  std::optional<std::size_t> n;
  std::optional<std::size_t> m;
  std::uint64_t seed = 0;
  std::optional<double> time_s;
  std::optional<double> lambda2;
  std::optional<double> residual;
  bool converged = false;
  std::string error;  // empty on success; reported on stderr, not in the CSV
};

inline constexpr const char* kBenchHeader = "name,n,m,seed,time_s,lambda2,residual,converged";

// One CSV line (no trailing newline); unknown fields are left blank.
std::string bench_csv_row(const BenchRecord& r);

// Per-level table: level, n, nnz, rate, and the smoothing iterations of the
// solve when one is given.
void print_hierarchy(std::ostream& os, const Hierarchy& h, const FiedlerResult* solve, bool csv);

// i, N_i, k_i, err_pre, err_post, followed by the total work.
void print_gcmg(std::ostream& os, const GcmgReport& rep, bool csv);

void print_rates(std::ostream& os, const RateTable& t, bool csv);

}  // namespace fiedcmg
