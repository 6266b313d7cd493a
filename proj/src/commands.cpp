#include "fiedcmg/commands.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "fiedcmg/cascadic.hpp"
#include "fiedcmg/dense_oracle.hpp"
#include "fiedcmg/gcmg.hpp"
#include "fiedcmg/graph_io.hpp"
#include "fiedcmg/report.hpp"

namespace fiedcmg {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

SolverConfig solver_config(const CommonOptions& c) {
  SolverConfig cfg;
  cfg.coarsest_size = c.coarsest_size;
  cfg.smoother.tol = c.tol;
  cfg.seed = c.seed;
  return cfg;
}

struct Loaded {
  SparseLaplacian L;
  double parse_time_s = 0.0;
};

Loaded load(const GraphInput& in, std::ostream& err) {
  const auto t0 = Clock::now();
  const auto g = load_graph(in.path, parse_format(in.format),
                            [&err](std::string_view msg) { fmt::print(err, "warning: {}\n", msg); });
  Loaded out;
  out.L = build_laplacian(g);
  out.parse_time_s = std::chrono::duration<double>(Clock::now() - t0).count();
  return out;
}

// The whole text is produced before anything is written, so a failure never
// leaves a truncated document behind.
void emit(const CommonOptions& c, std::ostream& out, const std::string& text) {
  if (c.out.empty()) {
    out << text;
    out.flush();
    return;
  }
  std::ofstream f(c.out, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(fmt::format("cannot open {} for writing", c.out));
  f << text;
  if (!f) throw Error(fmt::format("write to {} failed", c.out));
}

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitError;
  }
}

bool is_graph_file(const fs::directory_entry& e) {
  if (!e.is_regular_file()) return false;
  const auto ext = e.path().extension().string();
  return ext == ".mtx" || ext == ".edges" || ext == ".el" || ext == ".txt";
}

}  // namespace

int cmd_fiedler(const CommonOptions& common, const FiedlerOptions& opt, std::ostream& out,
                std::ostream& err) {
  return guarded(err, [&] {
    const auto cfg = solver_config(common);
    cfg.validate();
    const auto in = load(opt.input, err);
    const auto res = solve_fiedler(in.L, cfg);
    std::optional<OracleCheck> check;
    if (opt.oracle) check = check_against_oracle(res, fiedler_oracle(in.L));
    if (!opt.vector_path.empty()) write_vector_f64(opt.vector_path, res.vector);
    const auto doc = fiedler_json(res, in.L, in.parse_time_s, opt.vector_path, check);
    emit(common, out, doc.dump(2) + "\n");
    return res.converged() ? kExitOk : kExitUnconverged;
  });
}

int cmd_hierarchy(const CommonOptions& common, const GraphInput& input, std::ostream& out,
                  std::ostream& err) {
  return guarded(err, [&] {
    const auto cfg = solver_config(common);
    cfg.validate();
    const auto in = load(input, err);
    if (!is_connected(in.L)) throw Error("graph is disconnected");
    const auto h = build_hierarchy(in.L, cfg.coarsest_size, cfg.seed);
    const auto res = solve_fiedler(h, cfg);
    std::ostringstream text;
    print_hierarchy(text, h, &res, common.csv);
    emit(common, out, text.str());
    return res.converged() ? kExitOk : kExitUnconverged;
  });
}

int cmd_bisect(const CommonOptions& common, const GraphInput& input, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&] {
    const auto cfg = solver_config(common);
    cfg.validate();
    const auto in = load(input, err);
    const auto b = spectral_bisect(in.L, cfg);
    const auto ones = static_cast<std::size_t>(std::count(b.part.begin(), b.part.end(), 1));
    std::string text = fmt::format("# parts {} {}\n# cut {}\n# lambda2 {}\n", b.part.size() - ones,
                                   ones, b.cut_weight, b.fiedler.lambda2);
    for (const auto p : b.part) text += p ? "1\n" : "0\n";
    emit(common, out, text);
    return b.fiedler.converged() ? kExitOk : kExitUnconverged;
  });
}

int cmd_bench(const CommonOptions& common, const BenchOptions& opt, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&] {
    const auto cfg0 = solver_config(common);
    cfg0.validate();
    if (!fs::is_directory(opt.dir)) throw Error(fmt::format("{} is not a directory", opt.dir));
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(opt.dir)) {
      if (is_graph_file(e)) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    const std::vector<std::uint64_t> seeds =
        opt.seeds.empty() ? std::vector<std::uint64_t>{common.seed} : opt.seeds;

    std::string text = std::string(kBenchHeader) + "\n";
    bool all_ok = true;
    for (const auto& file : files) {
      const std::string name = file.stem().string();
      std::optional<Loaded> in;
      std::string load_error;
      try {
        in = load({file.string(), "auto"}, err);
      } catch (const std::exception& e) {
        load_error = e.what();
      }
      for (const auto seed : seeds) {
        BenchRecord r;
        r.name = name;
        r.seed = seed;
        if (!in) {
          r.error = load_error;
        } else {
          r.n = in->L.size();
          r.m = in->L.edge_count();
          try {
            auto cfg = cfg0;
            cfg.seed = seed;
            const auto res = solve_fiedler(in->L, cfg);
            r.time_s = res.wall_time_s;
            r.lambda2 = res.lambda2;
            r.residual = res.residual;
            r.converged = res.converged();
          } catch (const std::exception& e) {
            r.error = e.what();
          }
        }
        if (!r.error.empty()) fmt::print(err, "{} (seed {}): {}\n", name, seed, r.error);
        all_ok = all_ok && r.converged;
        text += bench_csv_row(r) + "\n";
      }
    }
    emit(common, out, text);
    return all_ok ? kExitOk : kExitUnconverged;
  });
}

int cmd_gcmg(const CommonOptions& common, const GcmgOptions& opt, std::ostream& out,
             std::ostream& err) {
  return guarded(err, [&] {
    GcmgConfig cfg;
    cfg.n_side_finest = opt.n;
    cfg.levels = opt.levels;
    cfg.max_coarsest_side = opt.max_coarsest;
    cfg.beta = opt.beta;
    cfg.k0 = opt.k0;
    cfg.seed = common.seed;
    const auto rep = gcmg_solve(cfg);
    std::ostringstream text;
    print_gcmg(text, rep, common.csv);
    emit(common, out, text.str());
    return kExitOk;
  });
}

int cmd_gcmg_rates(const CommonOptions& common, const RateOptions& opt, std::ostream& out,
                   std::ostream& err) {
  return guarded(err, [&] {
    const auto t = rate_experiment(opt.sizes, opt.beta, opt.k0, opt.coarsest, common.seed);
    std::ostringstream text;
    print_rates(text, t, common.csv);
    emit(common, out, text.str());
    return kExitOk;
  });
}

}  // namespace fiedcmg
