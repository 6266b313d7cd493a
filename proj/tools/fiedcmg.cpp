#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fiedcmg/commands.hpp"
#include "fiedcmg/laplacian.hpp"

namespace {

void apply_thread_env() {
  const char* env = std::getenv("FIEDCMG_THREADS");
  if (!env || !*env) return;
  try {
    const long v = std::stol(env);
    if (v >= 1) fiedcmg::set_thread_count(static_cast<unsigned>(v));
  } catch (const std::exception&) {
    std::cerr << "warning: ignoring FIEDCMG_THREADS=" << env << "\n";
  }
}

void add_graph_input(CLI::App* sub, fiedcmg::GraphInput& in) {
  sub->add_option("input", in.path, "graph file (Matrix Market or edge list)")->required();
  sub->add_option("--format", in.format, "auto, mtx or edgelist")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace fiedcmg;
  apply_thread_env();

  CLI::App app{"Fiedler vectors of graph Laplacians by cascadic multigrid"};
  app.require_subcommand(1);

  CommonOptions common;
  app.add_option("--seed", common.seed, "master seed")->capture_default_str();
  app.add_option("--tol", common.tol, "smoother tolerance: stop once u^T v > 1 - tol")
      ->capture_default_str();
  app.add_option("--coarsest-size", common.coarsest_size, "stop coarsening at this many vertices")
      ->capture_default_str();
  app.add_flag("--csv", common.csv, "CSV tables instead of aligned text");
  app.add_option("--out", common.out, "write output to this file");

  FiedlerOptions fied;
  auto* c_fiedler = app.add_subcommand("fiedler", "approximate Fiedler vector, JSON report");
  add_graph_input(c_fiedler, fied.input);
  c_fiedler->add_option("--vector", fied.vector_path, "store the vector as little-endian float64");
  c_fiedler->add_flag("--oracle", fied.oracle, "compare with a dense eigensolver (n <= 2048)");

  GraphInput hier_in;
  auto* c_hier = app.add_subcommand("hierarchy", "per-level sizes, rates and smoothing steps");
  add_graph_input(c_hier, hier_in);

  GraphInput bis_in;
  auto* c_bis = app.add_subcommand("bisect", "median split of the Fiedler vector");
  add_graph_input(c_bis, bis_in);

  BenchOptions bench;
  auto* c_bench = app.add_subcommand("bench", "solve every graph in a directory, CSV out");
  c_bench->add_option("dir", bench.dir, "directory of graph files")->required();
  c_bench->add_option("--seeds", bench.seeds, "seeds to run (default: --seed)")->delimiter(',');

  GcmgOptions gcmg;
  auto* c_gcmg = app.add_subcommand("gcmg", "geometric cascadic multigrid on the N x N grid");
  c_gcmg->add_option("--n", gcmg.n, "finest grid side")->capture_default_str();
  c_gcmg->add_option("--levels", gcmg.levels, "number of grids, 0 = auto")->capture_default_str();
  c_gcmg->add_option("--max-coarsest", gcmg.max_coarsest, "auto levels stop at this side")
      ->capture_default_str();
  c_gcmg->add_option("--beta", gcmg.beta, "smoothing growth per level")->capture_default_str();
  c_gcmg->add_option("--k0", gcmg.k0, "smoothing steps on the finest grid")->capture_default_str();

  RateOptions rates;
  auto* c_rates = app.add_subcommand("gcmg-rates", "fit the eigenvalue error order in h");
  c_rates->add_option("--sizes", rates.sizes, "finest grid sides")->delimiter(',');
  c_rates->add_option("--beta", rates.beta)->capture_default_str();
  c_rates->add_option("--k0", rates.k0)->capture_default_str();
  c_rates->add_option("--coarsest", rates.coarsest, "common coarsest side")->capture_default_str();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitError;
  }

  auto& out = std::cout;
  auto& err = std::cerr;
  if (c_fiedler->parsed()) return cmd_fiedler(common, fied, out, err);
  if (c_hier->parsed()) return cmd_hierarchy(common, hier_in, out, err);
  if (c_bis->parsed()) return cmd_bisect(common, bis_in, out, err);
  if (c_bench->parsed()) return cmd_bench(common, bench, out, err);
  if (c_gcmg->parsed()) return cmd_gcmg(common, gcmg, out, err);
  if (c_rates->parsed()) return cmd_gcmg_rates(common, rates, out, err);
  return kExitError;
}
