// Acceptance checks. Usage: fiedcmg_acceptance [criterion...]; no argument runs all.
// Prints one "criterion N: PASS|FAIL ..." line per criterion and exits 1 if any failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "fiedcmg/cascadic.hpp"
#include "fiedcmg/coarsening.hpp"
#include "fiedcmg/commands.hpp"
#include "fiedcmg/dense_oracle.hpp"
#include "fiedcmg/gcmg.hpp"
#include "fiedcmg/graph_io.hpp"
#include "fiedcmg/power_iteration.hpp"
#include "fiedcmg/report.hpp"
#include "support/graphs.hpp"

using namespace fiedcmg;
using namespace fiedcmg::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double relative_gap(const FiedlerOracle& o) { return (o.lambda3 - o.lambda2) / o.lambda3; }

// 1: solver vs dense oracle on gap-separated random graphs, default configuration.
Outcome oracle_agreement() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  int graphs = 0, failures = 0;
  double worst_angle = 0.0, worst_rel = 0.0;
  std::uint64_t draw = 0;
  while (graphs < 50) {
    const std::size_t n = 10 + rng() % 191;
    const double degree = 1.0 + static_cast<double>(rng() % 8);
    const auto L = random_connected(n, degree, 1000 + draw++);
    const auto o = fiedler_oracle(L);
    if (relative_gap(o) < 0.05) continue;
    ++graphs;
    SolverConfig cfg;
    cfg.seed = draw;
    const auto r = solve_fiedler(L, cfg);
    const double angle = subspace_angle(r.vector, o.eigenspace);
    const double rel = std::abs(r.lambda2 - o.lambda2) / o.lambda2;
    worst_angle = std::max(worst_angle, angle);
    worst_rel = std::max(worst_rel, rel);
    if (angle > 1e-2 || rel > 1e-4) ++failures;
  }
  const double t = seconds_since(t0);
  return {failures == 0 && t < 60.0,
          fmt::format("{} of {} graphs outside bounds, worst angle {:.3e} rad (<= 1e-2), worst relative "
                      "lambda2 error {:.3e} (<= 1e-4), {:.1f} s (< 60)",
                      failures, graphs, worst_angle, worst_rel, t)};
}

std::vector<SparseLaplacian> twenty_graphs() {
  std::vector<SparseLaplacian> g{path_graph(2),     path_graph(50),      cycle_graph(31),
                                 star_graph(40),    complete_graph(12),  grid_laplacian(30),
                                 two_block_graph(30, 0.3, 0.02, 4)};
  for (std::uint64_t s = 0; g.size() < 20; ++s) {
    g.push_back(random_connected(40 + 150 * s, 1.0 + static_cast<double>(s % 6), 77 + s));
  }
  return g;
}

// 2: every coarsening rate n_{i+1} / n_i lies in (0, 0.5].
Outcome coarsening_rates() {
  const auto graphs = twenty_graphs();
  std::size_t checked = 0, violations = 0;
  double lo = 1.0, hi = 0.0;
  for (const auto& L : graphs) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto h = build_hierarchy(L, 25, seed);
      for (const auto& st : h.stats) {
        if (!st.rate) continue;
        ++checked;
        lo = std::min(lo, *st.rate);
        hi = std::max(hi, *st.rate);
        if (!(*st.rate > 0.0 && *st.rate <= 0.5)) ++violations;
      }
    }
  }
  return {violations == 0 && checked > 0,
          fmt::format("{} violations over {} coarsening steps (20 graphs x 100 seeds), rates in [{:.4f}, {:.4f}]",
                      violations, checked, lo, hi)};
}

bool laplacian_invariants(const SparseLaplacian& L) {
  const auto rows = L.row_offsets();
  const auto cols = L.col_indices();
  const auto vals = L.values();
  const double tol = 1e-12 * std::max(L.max_diagonal(), 1e-300);
  for (std::size_t i = 0; i < L.size(); ++i) {
    double row = 0.0;
    bool diag = false;
    for (std::size_t k = rows[i]; k < rows[i + 1]; ++k) {
      const std::size_t j = cols[k];
      row += vals[k];
      if (j == i) {
        diag = true;
        continue;
      }
      if (vals[k] > 0.0) return false;
      // mirrored entry must exist with the same value
      const auto b = cols.begin() + static_cast<std::ptrdiff_t>(rows[j]);
      const auto e = cols.begin() + static_cast<std::ptrdiff_t>(rows[j + 1]);
      const auto it = std::lower_bound(b, e, static_cast<VertexId>(i));
      if (it == e || *it != i || vals[static_cast<std::size_t>(it - cols.begin())] != vals[k]) return false;
    }
    if (!diag || std::abs(row) > tol) return false;
  }
  return true;
}

// 3: Galerkin operators are Laplacians, prolongation keeps constants,
// restriction keeps 1-perp, and prolongation does not.
Outcome galerkin_suite() {
  std::size_t levels = 0, failures = 0;
  std::mt19937_64 rng(31);
  std::normal_distribution<double> normal;
  for (const auto& L : twenty_graphs()) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto h = build_hierarchy(L, 25, seed);
      for (std::size_t i = 0; i < h.maps.size(); ++i) {
        ++levels;
        const auto& m = h.maps[i];
        if (!laplacian_invariants(h.levels[i + 1])) ++failures;
        const auto p1 = prolongate(m, Vector(m.coarse_n, 1.0));
        if (!std::all_of(p1.begin(), p1.end(), [](double v) { return v == 1.0; })) ++failures;
        Vector x(m.fine_n);
        for (auto& v : x) v = normal(rng);
        project_out_ones_inplace(x);
        if (std::abs(sum(restrict_to_coarse(m, x))) > 1e-10 * norm2(x)) ++failures;
      }
    }
  }
  AggregateMap w;
  w.fine_n = 5;
  w.coarse_n = 2;
  w.assign = {0, 0, 1, 1, 1};
  const auto witness = prolongate(w, std::vector<double>{1.0, -1.0});
  const bool witness_ok = sum(witness) != 0.0;
  return {failures == 0 && witness_ok && levels > 0,
          fmt::format("{} failures over {} coarse levels; witness (sizes 2, 3; y = (1, -1)) gives 1^T R^T y = {}",
                      failures, levels, sum(witness))};
}

// 4: sin(u^k, phi) <= rho^k tan(u^0, phi) + 1e-10.
Outcome power_rate_bound() {
  int graphs = 0;
  std::size_t steps = 0, violations = 0;
  for (std::uint64_t s = 0; graphs < 20 && s < 1000; ++s) {
    const auto L = random_connected(8 + s % 40, 2.0, 5000 + s);
    const auto o = fiedler_oracle(L);
    if (o.eigenspace.size() != 1 || relative_gap(o) < 1e-3) continue;
    ++graphs;
    const double g = gershgorin_bound(L);
    const double rho = (g - o.lambda3) / (g - o.lambda2);
    const auto& phi = o.eigenspace.front();
    double tan0 = 0.0;
    SmootherConfig cfg;
    cfg.tol = 1e-14;
    cfg.max_iters = 500;
    power_iterate(L, gaussian_vector(L.size(), s), cfg, [&](std::size_t k, std::span<const double> u) {
      const double c = dot(u, phi);
      double r2 = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) r2 += (u[i] - c * phi[i]) * (u[i] - c * phi[i]);
      const double sn = std::sqrt(r2) / norm2(u);
      if (k == 0) tan0 = std::sqrt(r2) / std::abs(c);
      ++steps;
      if (sn > std::pow(rho, static_cast<double>(k)) * tan0 + 1e-10) ++violations;
    });
  }
  return {graphs == 20 && violations == 0,
          fmt::format("{} violations over {} iterates on {} graphs with simple lambda2", violations, steps, graphs)};
}

// 5: residual and time on the benchmark graphs, read from a local corpus directory.
Outcome corpus_reproduction() {
  const char* env = std::getenv("FIEDCMG_CORPUS_DIR");
  const fs::path dir = env ? fs::path(env) : fs::path(FIEDCMG_SOURCE_DIR) / "corpus";
  const std::vector<std::string> names{"144",   "598a", "auto",         "brack2", "cs4",
                                       "cti",   "delaunay_n15", "m14b", "PGPgiantcompo", "wing"};
  std::vector<std::string> missing, bad;
  std::string report;
  for (const auto& name : names) {
    const auto path = dir / (name + ".mtx");
    if (!fs::exists(path)) {
      missing.push_back(name);
      continue;
    }
    try {
      const auto t0 = Clock::now();
      const auto L = build_laplacian(load_graph(path));
      const auto r = solve_fiedler(L);
      const double t = seconds_since(t0);
      report += fmt::format(" {}: residual {:.2e}, {:.2f} s;", name, r.residual, t);
      if (!(r.residual <= 1e-1) || t > 60.0) bad.push_back(name);
    } catch (const std::exception& e) {
      report += fmt::format(" {}: {};", name, e.what());
      bad.push_back(name);
    }
  }
  std::string detail = fmt::format("corpus {}:{}", dir.string(), report);
  if (!missing.empty()) {
    detail += " missing";
    for (const auto& m : missing) detail += " " + m;
    detail += " (run tools/fetch_corpus.sh)";
  }
  return {missing.empty() && bad.empty(), detail};
}

// 6: 100 x 100 grid hierarchy shape and per-level iteration counts.
Outcome grid_profile() {
  const auto L = grid_laplacian(100);
  SolverConfig cfg;
  cfg.smoother.tol = 1e-6;
  const auto h = build_hierarchy(L, cfg.coarsest_size, cfg.seed);
  const auto r = solve_fiedler(h, cfg);
  const std::vector<double> ref{3, 7, 10, 17, 26, 44};
  bool ok = h.depth() >= 6 && h.depth() <= 8;
  std::string rates, iters;
  for (const auto& st : h.stats) {
    if (!st.rate) continue;
    rates += fmt::format(" {:.3f}", *st.rate);
    ok = ok && *st.rate >= 0.1 && *st.rate <= 0.5;
  }
  for (std::size_t i = 0; i < r.per_level.size(); ++i) {
    const double k = static_cast<double>(r.per_level[i].iterations);
    iters += fmt::format(" {}", r.per_level[i].iterations);
    if (i > 0 && r.per_level[i].iterations < r.per_level[i - 1].iterations) ok = false;
    if (i < ref.size() && (k < ref[i] / 2.0 || k > ref[i] * 2.0)) ok = false;
  }
  return {ok, fmt::format("{} levels (6-8), rates{} (in [0.1, 0.5]), iterations{} vs 3 7 10 17 26 44 within 2x, "
                          "tol 1e-6, seed 0",
                          h.depth(), rates, iters)};
}

// 7: fitted order of the scaled GCMG eigenvalue error.
Outcome gcmg_rate() {
  const auto t0 = Clock::now();
  const std::vector<std::size_t> sides{65, 129, 257};
  const auto t = rate_experiment(sides, 8.0, 4);
  const double secs = seconds_since(t0);
  std::string pts;
  for (const auto& p : t.points) pts += fmt::format(" N={} err/h^2={:.4e};", p.n_side, p.scaled_error);
  return {t.order >= 1.6 && t.order <= 2.4 && secs < 30.0,
          fmt::format("fitted order {:.3f} (in [1.6, 2.4]);{} {:.1f} s (< 30)", t.order, pts, secs)};
}

// 8: N = 1025, beta 4, k0 1 error table.
Outcome gcmg_table() {
  const auto t0 = Clock::now();
  GcmgConfig cfg;
  cfg.n_side_finest = 1025;
  cfg.beta = 4.0;
  cfg.k0 = 1;
  const auto rep = gcmg_solve(cfg);
  const double secs = seconds_since(t0);
  bool ok = secs < 60.0;
  std::string rows;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& row = rep.rows[i];
    if (row.coarsest) continue;
    rows += fmt::format(" [{} {:.4e} {:.4e}]", row.n_side, row.err_pre, row.err_post);
    if (row.err_post > row.err_pre) ok = false;
    if (i + 1 < rep.rows.size() && !rep.rows[i + 1].coarsest && !(row.err_post < rep.rows[i + 1].err_post)) ok = false;
  }
  const double fin = rep.finest().err_post;
  ok = ok && fin >= 3.0e-11 && fin <= 3.0e-7;
  return {ok, fmt::format("levels [N err_pre err_post]:{}; finest err_post {:.4e} (3.0e-9 within 100x), {:.1f} s (< 60)",
                          rows, fin, secs)};
}

// 9: work accounting and linear growth in J for beta = 4.
Outcome gcmg_work() {
  bool ok = true;
  std::vector<double> per_level;
  std::string detail;
  for (std::size_t J : {3, 4, 5}) {
    GcmgConfig cfg;
    cfg.n_side_finest = 1025;
    cfg.levels = J + 1;
    cfg.beta = 4.0;
    cfg.k0 = 1;
    const auto rep = gcmg_solve(cfg);
    double w = 0.0;
    for (const auto& row : rep.rows) w += static_cast<double>(row.k_steps) * static_cast<double>(row.n);
    if (w != rep.work) ok = false;
    const double normalised = rep.work / (static_cast<double>(cfg.k0) * static_cast<double>(rep.rows.front().n));
    per_level.push_back(normalised / static_cast<double>(J));
    detail += fmt::format(" J={}: work/(k0 n0)={:.4f};", J, normalised);
  }
  const auto [lo, hi] = std::minmax_element(per_level.begin(), per_level.end());
  ok = ok && *hi <= 1.1 * *lo;
  return {ok, fmt::format("work equals sum k_j n_j;{} per-J ratio spread {:.4f} (<= 1.10)", detail, *hi / *lo)};
}

std::string drop_csv_column(const std::string& text, std::size_t col) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    std::istringstream cells(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(cells, cell, ',')) {
      if (c++ != col) out += cell + ",";
    }
    out += "\n";
  }
  return out;
}

// 10: repeated commands give identical vectors and JSON.
Outcome determinism() {
  const auto dir = fs::temp_directory_path() / "fiedcmg_acceptance";
  fs::create_directories(dir);
  const auto graph = dir / "graph.mtx";
  {
    std::ofstream f(graph);
    write_matrix_market(f, random_connected(3000, 3.0, 10).to_edge_list());
  }
  CommonOptions common;
  common.seed = 42;
  bool ok = true;
  std::string notes;
  auto capture = [&](auto fn, const auto& opt) {
    std::ostringstream out, err;
    const int code = fn(common, opt, out, err);
    if (code != kExitOk) {
      ok = false;
      notes += fmt::format(" exit {}: {};", code, err.str());
    }
    return out.str();
  };

  FiedlerOptions fo;
  fo.input.path = graph.string();
  fo.vector_path = (dir / "a.f64").string();
  auto ja = without_time_fields(Json::parse(capture(cmd_fiedler, fo)));
  fo.vector_path = (dir / "b.f64").string();
  auto jb = without_time_fields(Json::parse(capture(cmd_fiedler, fo)));
  ja.erase("vector_path");
  jb.erase("vector_path");
  const bool json_same = ja == jb;
  const auto va = read_vector_f64(dir / "a.f64");
  const auto vb = read_vector_f64(dir / "b.f64");
  const bool vec_same = va.size() == vb.size() &&
                        std::memcmp(va.data(), vb.data(), va.size() * sizeof(double)) == 0;

  const GraphInput gi{graph.string(), "auto"};
  const bool bisect_same = capture(cmd_bisect, gi) == capture(cmd_bisect, gi);
  const bool hierarchy_same = capture(cmd_hierarchy, gi) == capture(cmd_hierarchy, gi);
  GcmgOptions go;
  go.n = 129;
  const bool gcmg_same = capture(cmd_gcmg, go) == capture(cmd_gcmg, go);
  const auto bench_dir = dir / "bench";
  fs::create_directories(bench_dir);
  fs::copy_file(graph, bench_dir / "graph.mtx", fs::copy_options::overwrite_existing);
  const BenchOptions bo{bench_dir.string(), {1, 2}};
  const bool bench_same = drop_csv_column(capture(cmd_bench, bo), 4) == drop_csv_column(capture(cmd_bench, bo), 4);

  ok = ok && json_same && vec_same && bisect_same && hierarchy_same && gcmg_same && bench_same;
  return {ok, fmt::format("fiedler json {}, vector bytes {}, bisect {}, hierarchy {}, gcmg {}, bench {}{}",
                          json_same, vec_same, bisect_same, hierarchy_same, gcmg_same, bench_same, notes)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{
      oracle_agreement, coarsening_rates, galerkin_suite, power_rate_bound, corpus_reproduction,
      grid_profile,     gcmg_rate,        gcmg_table,     gcmg_work,        determinism};
  std::vector<std::size_t> which;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "all") continue;
    const int k = std::atoi(a.c_str());
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::cerr << "unknown criterion " << a << "\n";
      return 1;
    }
    which.push_back(static_cast<std::size_t>(k));
  }
  if (which.empty()) {
    for (std::size_t k = 1; k <= criteria.size(); ++k) which.push_back(k);
  }
  bool all = true;
  for (const auto k : which) {
    Outcome o;
    try {
      o = criteria[k - 1]();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    all = all && o.pass;
    std::cout << fmt::format("criterion {}: {} {}", k, o.pass ? "PASS" : "FAIL", o.detail) << std::endl;
  }
  return all ? 0 : 1;
}
