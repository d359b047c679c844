#include "gapidx/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "gapidx/report.hpp"
#include "gapidx/serialize.hpp"
#include "gapidx/synthetic.hpp"

namespace gapidx {

namespace {

struct DatasetArgs {
  std::string path;
  std::string format = "auto";
  double csv_scale = 1.0;

  void add(CLI::App* app) {
    app->add_option("--dataset", path, "Dataset file (binary or CSV)")->required();
    app->add_option("--dataset-format", format, "auto, binary or csv")
        ->check(CLI::IsMember({"auto", "binary", "csv"}));
    app->add_option("--csv-scale", csv_scale, "Multiply fractional CSV values by this before rounding");
  }

  Dataset load(std::ostream& err) const {
    LoadResult r = format == "auto"
                       ? load_dataset_auto(path)
                       : load_dataset(path, format == "csv" ? DatasetFormat::csv : DatasetFormat::binary, csv_scale);
    if (r.duplicates_removed) err << "note: removed " << r.duplicates_removed << " duplicate keys\n";
    return std::move(r.dataset);
  }
};

struct MdlArgs {
  double alpha = 1.0;
  std::string model_cost = "param-count";
  std::string data_cost = "log2-correction";
  std::size_t queries = 10'000;
  int repetitions = 5;

  void add(CLI::App* app, bool single_alpha) {
    if (single_alpha) app->add_option("--alpha", alpha, "Weight of the data cost");
    app->add_option("--model-cost", model_cost, "param-count, size-bytes or predict-time-ns");
    app->add_option("--data-cost", data_cost, "log2-correction or mae");
    app->add_option("--queries", queries, "Timed queries per repetition (0 disables timing)");
    app->add_option("--repetitions", repetitions, "Timing repetitions (median is reported)");
  }

  MdlConfig config(std::uint64_t seed) const {
    MdlConfig c;
    c.alpha = alpha;
    c.model_cost = parse_model_cost_kind(model_cost);
    c.data_cost = parse_data_cost_kind(data_cost);
    c.query_sample_size = queries;
    c.repetitions = repetitions;
    c.seed = seed;
    return c;
  }
};

// Writes to --out, or to `out` when no path was given.
template <typename Fn>
void emit(const std::string& path, std::ostream& out, Fn write) {
  if (path.empty() || path == "-") {
    write(out);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open output file: " + path);
  write(f);
  if (!f) throw DataError("failed writing output file: " + path);
}

std::int64_t elapsed_ns(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learned index construction, MDL evaluation and gapped-array workloads"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::uint64_t seed = 0;
  std::string out_path;

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset");
  std::string kind = "piecewise";
  std::size_t gen_n = 100'000;
  std::uint64_t noise = 0;
  std::size_t breakpoints = 8;
  std::string gen_format = "binary";
  gen->add_option("--kind", kind, "linear, piecewise, lognormal or staircase");
  gen->add_option("--n", gen_n, "Number of keys");
  gen->add_option("--noise", noise, "Uniform jitter radius");
  gen->add_option("--breakpoints", breakpoints, "Slope changes (piecewise, staircase)");
  gen->add_option("--format", gen_format, "binary or csv")->check(CLI::IsMember({"binary", "csv"}));
  gen->add_option("--out", out_path, "Output path")->required();
  gen->add_option("--seed", seed, "Random seed");

  // fit
  auto* fit = app.add_subcommand("fit", "Build one index and print its MDL report");
  DatasetArgs fit_ds;
  MdlArgs fit_mdl;
  std::string method = "optimal";
  std::int64_t epsilon = 64;
  std::size_t leaves = 1024;
  std::size_t fanout = 16;
  double rate = 1.0;
  double rho = 0.0;
  std::string format = "json";
  std::string index_out;
  fit_ds.add(fit);
  fit_mdl.add(fit, true);
  fit->add_option("--method", method, "greedy, optimal, rmi, btree or binary");
  fit->add_option("--epsilon", epsilon, "Error bound (B+ tree page size is 2*epsilon)");
  fit->add_option("--leaf-models", leaves, "RMI leaf count");
  fit->add_option("--fanout", fanout, "B+ tree fanout");
  fit->add_option("--rate", rate, "Sample rate in (0, 1]");
  fit->add_option("--rho", rho, "Gap ratio");
  fit->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  fit->add_option("--out", out_path, "Report path (default stdout)");
  fit->add_option("--save-index", index_out, "Also write the index image here");
  fit->add_option("--seed", seed, "Random seed");

  // eval
  auto* eval = app.add_subcommand("eval", "Score a saved index on a dataset");
  DatasetArgs eval_ds;
  MdlArgs eval_mdl;
  std::string index_path;
  eval_ds.add(eval);
  eval_mdl.add(eval, true);
  eval->add_option("--index", index_path, "Index image written by fit --save-index")->required();
  eval->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  eval->add_option("--out", out_path, "Report path (default stdout)");
  eval->add_option("--seed", seed, "Random seed");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Grid of builds, one MDL report row per point");
  DatasetArgs sweep_ds;
  MdlArgs sweep_mdl;
  std::vector<std::string> methods{"optimal"};
  SweepConfig sc;
  std::string sweep_format = "csv";
  sweep_ds.add(sweep);
  sweep_mdl.add(sweep, false);
  sweep->add_option("--methods,--method", methods, "Comma-separated methods")->delimiter(',');
  sweep->add_option("--epsilons,--epsilon", sc.epsilons, "Comma-separated error bounds")->delimiter(',');
  sweep->add_option("--leaf-models", sc.leaf_counts, "Comma-separated RMI leaf counts")->delimiter(',');
  sweep->add_option("--alphas,--alpha", sc.alphas, "Comma-separated alphas")->delimiter(',');
  sweep->add_option("--rates,--rate", sc.rates, "Comma-separated sample rates")->delimiter(',');
  sweep->add_option("--rhos,--rho", sc.rhos, "Comma-separated gap ratios")->delimiter(',');
  sweep->add_option("--repetitions-per-cell", sc.repetitions, "Builds per grid point");
  sweep->add_option("--fanout", sc.btree_fanout, "B+ tree fanout");
  sweep->add_flag("--sequential", sc.sequential, "Run grid cells one at a time");
  sweep->add_option("--format", sweep_format, "csv or json")->check(CLI::IsMember({"json", "csv"}));
  sweep->add_option("--out", out_path, "Report path (default stdout)");
  sweep->add_option("--seed", seed, "Random seed");

  // dynamic
  auto* dyn = app.add_subcommand("dynamic", "Insert batches into a gapped index and query after each");
  DatasetArgs dyn_ds;
  WorkloadConfig wc;
  std::string dyn_method = "optimal";
  std::string dyn_format = "json";
  double dyn_rho = 0.5;
  double dyn_rate = 1.0;
  dyn_ds.add(dyn);
  dyn->add_option("--method", dyn_method, "greedy, optimal or rmi");
  dyn->add_option("--epsilon", epsilon, "Error bound");
  dyn->add_option("--leaf-models", leaves, "RMI leaf count");
  dyn->add_option("--w", wc.write_proportion, "Write proportion in [0, 1)");
  dyn->add_option("--batches", wc.batches, "Number of insert batches");
  dyn->add_option("--rho", dyn_rho, "Gap ratio");
  dyn->add_option("--rate", dyn_rate, "Sample rate in (0, 1]");
  dyn->add_option("--queries", wc.query_sample_size, "Queries after each batch");
  dyn->add_option("--negative-fraction", wc.negative_fraction, "Share of queries for keys not inserted yet");
  dyn->add_option("--repetitions", wc.repetitions, "Timing repetitions");
  dyn->add_option("--format", dyn_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  dyn->add_option("--out", out_path, "Report path (default stdout)");
  dyn->add_option("--seed", seed, "Random seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, x;
    int code = app.exit(e, o, x);
    out << o.str();
    err << x.str();
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gen) {
      SyntheticSpec spec;
      spec.kind = parse_synthetic_kind(kind);
      spec.n = gen_n;
      spec.noise = noise;
      spec.breakpoints = breakpoints;
      spec.seed = seed;
      auto ds = generate_synthetic(spec);
      save_dataset(ds, out_path, gen_format == "csv" ? DatasetFormat::csv : DatasetFormat::binary);
      err << "wrote " << ds.size() << " keys to " << out_path << '\n';
      return 0;
    }

    if (*fit) {
      const auto ds = fit_ds.load(err);
      if (ds.empty()) throw DataError("dataset is empty");
      auto cfg = fit_mdl.config(seed);
      validate(cfg);
      MdlReport report;
      AnyIndex index;
      if (method == "binary" || method == "btree") {
        const auto t0 = std::chrono::steady_clock::now();
        index = method == "binary" ? BaselineIndex::binary_search(ds.size())
                                   : BaselineIndex::btree(ds.keys(),
                                                          static_cast<std::size_t>(std::max<std::int64_t>(1, 2 * epsilon)),
                                                          fanout);
        report = mdl_score(index, ds, cfg, elapsed_ns(t0));
      } else {
        LearnParams p{epsilon, leaves};
        const auto lm = parse_learn_method(method);
        if (rho > 0) {
          auto built = learn_with_gaps(ds, {rate, seed}, lm, p, rho);
          report = score_gapped(built, ds, cfg);
          index = built.model;
        } else {
          auto built = learn_with_sampling(ds, {rate, seed}, lm, p);
          report = mdl_score(built.index, ds, cfg, built.build_ns);
          index = std::move(built.index);
        }
      }
      if (!index_out.empty()) save_index(index, index_out);
      emit(out_path, out, [&](std::ostream& os) {
        if (format == "csv")
          write_csv(os, std::span<const MdlReport>(&report, 1));
        else
          os << to_json(report).dump(2) << '\n';
      });
      return report.status == "ok" ? 0 : 3;
    }

    if (*eval) {
      const auto ds = eval_ds.load(err);
      if (ds.empty()) throw DataError("dataset is empty");
      const auto index = load_index(index_path);
      auto report = mdl_score(index, ds, eval_mdl.config(seed));
      emit(out_path, out, [&](std::ostream& os) {
        if (format == "csv")
          write_csv(os, std::span<const MdlReport>(&report, 1));
        else
          os << to_json(report).dump(2) << '\n';
      });
      return report.status == "ok" ? 0 : 3;
    }

    if (*sweep) {
      const auto ds = sweep_ds.load(err);
      if (ds.empty()) throw DataError("dataset is empty");
      sc.methods.clear();
      for (const auto& m : methods) sc.methods.push_back(parse_sweep_method(m));
      sc.seed = seed;
      sc.mdl = sweep_mdl.config(seed);
      auto rows = run_sweep(ds, sc);
      emit(out_path, out, [&](std::ostream& os) {
        if (sweep_format == "csv") {
          write_csv(os, std::span<const MdlReport>(rows));
        } else {
          auto arr = nlohmann::ordered_json::array();
          for (const auto& r : rows) arr.push_back(to_json(r));
          os << arr.dump(2) << '\n';
        }
      });
      return 0;
    }

    if (*dyn) {
      const auto ds = dyn_ds.load(err);
      if (ds.empty()) throw DataError("dataset is empty");
      wc.seed = seed;
      auto result = run_dynamic(ds, wc, parse_learn_method(dyn_method), LearnParams{epsilon, leaves}, dyn_rho, dyn_rate);
      emit(out_path, out, [&](std::ostream& os) {
        if (dyn_format == "csv")
          write_csv(os, std::span<const BatchReport>(result.batches));
        else
          os << to_json(result).dump(2) << '\n';
      });
      bool ok = result.model_unchanged && !result.audit_failure;
      for (const auto& b : result.batches) ok = ok && b.all_correct;
      if (!ok) err << "error: dynamic workload check failed\n";
      return ok ? 0 : 3;
    }
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 1;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace gapidx
