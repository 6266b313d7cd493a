#include "fiedcmg/report.hpp"

#include <cmath>
#include <string_view>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace fiedcmg {

OracleCheck check_against_oracle(const FiedlerResult& res, const FiedlerOracle& oracle) {
  OracleCheck c;
  c.lambda2 = oracle.lambda2;
  c.lambda3 = oracle.lambda3;
  c.multiplicity = oracle.eigenspace.size();
  c.angle = subspace_angle(res.vector, oracle.eigenspace);
  c.lambda2_error = std::abs(res.lambda2 - oracle.lambda2);
  return c;
}

Json fiedler_json(const FiedlerResult& res, const SparseLaplacian& L, double parse_time_s,
                  const std::string& vector_path, const std::optional<OracleCheck>& oracle) {
  Json j;
  j["n"] = L.size();
  j["nnz"] = L.nnz();
  j["edges"] = L.edge_count();
  j["seed"] = res.seed;
  j["lambda2"] = res.lambda2;
  j["residual"] = res.residual;
  j["converged"] = res.converged();
  j["wall_time_s"] = res.wall_time_s;
  j["setup_time_s"] = res.setup_time_s;
  j["solve_time_s"] = res.solve_time_s;
  j["parse_time_s"] = parse_time_s;
  Json levels = Json::array();
  for (const auto& lv : res.per_level) {
    levels.push_back({{"level", lv.level},
                      {"n", lv.n},
                      {"nnz", lv.nnz},
                      {"iterations", lv.iterations},
                      {"converged", lv.converged}});
  }
  j["levels"] = std::move(levels);
  if (!vector_path.empty()) j["vector_path"] = vector_path;
  if (oracle) {
    j["oracle"] = {{"lambda2", oracle->lambda2},
                   {"lambda3", oracle->lambda3},
                   {"multiplicity", oracle->multiplicity},
                   {"angle", oracle->angle},
                   {"lambda2_error", oracle->lambda2_error}};
  }
  return j;
}

Json without_time_fields(const Json& j) {
  if (j.is_object()) {
    Json out = Json::object();
    for (const auto& [key, value] : j.items()) {
      if (std::string_view(key).ends_with("time_s")) continue;
      out[key] = without_time_fields(value);
    }
    return out;
  }
  if (j.is_array()) {
    Json out = Json::array();
    for (const auto& v : j) out.push_back(without_time_fields(v));
    return out;
  }
  return j;
}

namespace {

template <class T>
std::string opt(const std::optional<T>& v) {
  return v ? fmt::format("{}", *v) : std::string{};
}

}  // namespace

std::string bench_csv_row(const BenchRecord& r) {
  // graph names come from file stems; quote the rare one that needs it
  std::string name = r.name;
  if (name.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (const char c : name) {
      if (c == '"') q += '"';
      q += c;
    }
    name = q + "\"";
  }
  return fmt::format("{},{},{},{},{},{},{},{}", name, opt(r.n), opt(r.m), r.seed, opt(r.time_s),
                     opt(r.lambda2), opt(r.residual), r.converged ? "true" : "false");
}

void print_hierarchy(std::ostream& os, const Hierarchy& h, const FiedlerResult* solve, bool csv) {
  const auto iters = [&](std::size_t i) -> std::string {
    if (!solve || i >= solve->per_level.size()) return "-";
    return fmt::format("{}", solve->per_level[i].iterations);
  };
  if (csv) {
    fmt::print(os, "level,n,nnz,rate,iterations\n");
    for (std::size_t i = 0; i < h.depth(); ++i) {
      const auto& s = h.stats[i];
      fmt::print(os, "{},{},{},{},{}\n", i, s.n, s.nnz, s.rate ? fmt::format("{}", *s.rate) : "",
                 iters(i) == "-" ? "" : iters(i));
    }
    return;
  }
  fmt::print(os, "{:>5} {:>10} {:>12} {:>8} {:>10}\n", "level", "n", "nnz", "rate", "iterations");
  for (std::size_t i = 0; i < h.depth(); ++i) {
    const auto& s = h.stats[i];
    fmt::print(os, "{:>5} {:>10} {:>12} {:>8} {:>10}\n", i, s.n, s.nnz,
               s.rate ? fmt::format("{:.4f}", *s.rate) : "-", iters(i));
  }
}

void print_gcmg(std::ostream& os, const GcmgReport& rep, bool csv) {
  if (csv) {
    fmt::print(os, "i,N,n,k,lambda,err_pre,err_post\n");
    for (const auto& r : rep.rows) {
      fmt::print(os, "{},{},{},{},{},{},{}\n", r.level, r.n_side, r.n, r.k_steps, r.lambda_exact,
                 r.err_pre, r.err_post);
    }
    fmt::print(os, "# work,{}\n", rep.work);
    return;
  }
  fmt::print(os, "{:>3} {:>6} {:>6} {:>12} {:>12}\n", "i", "N_i", "k_i", "err_pre", "err_post");
  for (const auto& r : rep.rows) {
    if (r.coarsest) {
      fmt::print(os, "{:>3} {:>6} {:>6} {:>12.4e} {:>12}\n", r.level, r.n_side, "-", r.err_post,
                 "(coarsest)");
    } else {
      fmt::print(os, "{:>3} {:>6} {:>6} {:>12.4e} {:>12.4e}\n", r.level, r.n_side, r.k_steps,
                 r.err_pre, r.err_post);
    }
  }
  fmt::print(os, "work (sum k_j n_j): {}\n", rep.work);
}

void print_rates(std::ostream& os, const RateTable& t, bool csv) {
  if (csv) {
    fmt::print(os, "N,h,levels,error,scaled_error,work\n");
    for (const auto& p : t.points) {
      fmt::print(os, "{},{},{},{},{},{}\n", p.n_side, p.h, p.levels, p.error, p.scaled_error, p.work);
    }
    fmt::print(os, "# order,{}\n", t.order);
    return;
  }
  fmt::print(os, "{:>6} {:>12} {:>7} {:>12} {:>12} {:>14}\n", "N", "h", "levels", "error",
             "error/h^2", "work");
  for (const auto& p : t.points) {
    fmt::print(os, "{:>6} {:>12.4e} {:>7} {:>12.4e} {:>12.4e} {:>14}\n", p.n_side, p.h, p.levels,
               p.error, p.scaled_error, p.work);
  }
  fmt::print(os, "fitted order p (error/h^2 ~ h^p): {:.3f}\n", t.order);
}

}  // namespace fiedcmg
