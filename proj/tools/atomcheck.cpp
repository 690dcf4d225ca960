#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "atomcheck/atomcheck.hpp"

namespace ac = atomcheck;

namespace {

constexpr int kSerializable = 0;
constexpr int kViolation = 1;
constexpr int kInputError = 2;

struct Loaded {
  ac::Trace trace;
  double parse_ms = 0;
};

Loaded load(const std::string& path) {
  auto start = std::chrono::steady_clock::now();
  Loaded l{ac::parse_trace_file(path)};
  l.parse_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return l;
}

// Runs `body`, mapping input problems to exit code 2 with a message on `err`.
template <class F>
int guarded(const std::string& path, std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    // Parse errors carry "line N: ..." in their message.
    err << path << ": " << e.what() << '\n';
  }
  return kInputError;
}

int cmd_metainfo(const std::string& path) {
  return guarded(path, std::cerr, [&] {
    std::cout << ac::render_metainfo(ac::compute_metainfo(load(path).trace));
    return kSerializable;
  });
}

struct AnalyzeArgs {
  std::vector<std::string> files;
  std::string engine = "aerodrome-opt";
  bool no_gc = false;
  bool verbose = false;
  std::size_t oracle_cap = 10000;
  std::size_t jobs = 1;
};

int analyze_one(const std::string& path, ac::EngineKind kind, const AnalyzeArgs& a, std::ostream& out,
                std::ostream& err) {
  return guarded(path, err, [&] {
    Loaded l = load(path);
    ac::AnalysisOptions opt;
    opt.gc = !a.no_gc;
    opt.oracle_cap = a.oracle_cap;
    ac::AnalysisReport r = ac::analyze_trace(l.trace, kind, opt);
    out << path << ": " << r.verdict.to_string() << '\n';
    out << "  engine=" << ac::engine_name(kind) << " events=" << l.trace.size()
        << " events_processed=" << r.events_processed << '\n';
    out << std::fixed;
    out.precision(3);
    out << "  parse_ms=" << l.parse_ms << " wall_ms=" << r.wall_ms << '\n';
    if (a.verbose) {
      out << "  vc_joins=" << r.counters.joins << " vc_compares=" << r.counters.compares << '\n';
      if (r.verdict.violation()) {
        const ac::Event& e = l.trace.events[r.verdict.at_idx - 1];
        out << "  at: " << l.trace.render(e) << '\n';
      }
      if (!r.witness.empty()) {
        out << "  witness:";
        for (std::size_t b : r.witness) out << " txn@" << b;
        out << '\n';
      }
    }
    return r.verdict.violation() ? kViolation : kSerializable;
  });
}

int cmd_analyze(const AnalyzeArgs& a) {
  auto kind = ac::parse_engine(a.engine);
  if (!kind) {
    std::cerr << "unknown engine '" << a.engine << "'\n";
    return kInputError;
  }
  const std::size_t n = a.files.size();
  std::vector<std::string> outs(n), errs(n);
  std::vector<int> codes(n, 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) {
      std::ostringstream o, e;
      codes[i] = analyze_one(a.files[i], *kind, a, o, e);
      outs[i] = o.str();
      errs[i] = e.str();
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < std::min(std::max<std::size_t>(a.jobs, 1), n); ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  int code = kSerializable;
  for (std::size_t i = 0; i < n; ++i) {
    std::cout << outs[i];
    std::cerr << errs[i];
    code = std::max(code, codes[i]);
  }
  return code;
}

int write_trace(const ac::Trace& t, const std::string& out) {
  if (out == "-") {
    ac::serialize_trace(t, std::cout);
    return 0;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) {
    std::cerr << "cannot write " << out << '\n';
    return kInputError;
  }
  ac::serialize_trace(t, f);
  return 0;
}

int cmd_filter(const std::string& path, const std::string& spec_path, const std::string& out) {
  return guarded(path, std::cerr, [&] {
    std::ifstream sf(spec_path);
    if (!sf) throw std::runtime_error("cannot open spec " + spec_path);
    ac::AtomicitySpec spec = ac::AtomicitySpec::parse(sf);
    ac::Trace t = load(path).trace;
    ac::require_well_formed(t);
    return write_trace(ac::filter_trace(t, spec), out);
  });
}

struct BenchArgs {
  std::string family = "linear";
  std::vector<std::size_t> sizes{10000, 20000};
  std::vector<std::string> engines{"aerodrome-opt"};
  std::uint64_t seed = 1;
  std::size_t repeats = 3;
  std::size_t oracle_cap = 10000;
  std::string out = "-";
};

int cmd_bench(const BenchArgs& a) {
  auto fam = ac::parse_family(a.family);
  if (!fam) {
    std::cerr << "unknown family '" << a.family << "'\n";
    return kInputError;
  }
  std::vector<ac::EngineKind> kinds;
  for (const auto& e : a.engines) {
    auto k = ac::parse_engine(e);
    if (!k) {
      std::cerr << "unknown engine '" << e << "'\n";
      return kInputError;
    }
    kinds.push_back(*k);
  }
  std::ofstream file;
  if (a.out != "-") {
    file.open(a.out);
    if (!file) {
      std::cerr << "cannot write " << a.out << '\n';
      return kInputError;
    }
  }
  std::ostream& out = a.out == "-" ? std::cout : file;
  out << ac::kBenchHeader << '\n';
  ac::AnalysisOptions opt;
  opt.oracle_cap = a.oracle_cap;
  for (std::size_t size : a.sizes) {
    ac::Trace t = ac::make_bench_trace(*fam, size, a.seed);
    for (ac::EngineKind k : kinds)
      out << ac::render_bench_row(ac::bench_one(t, *fam, size, k, a.seed, a.repeats, opt)) << '\n' << std::flush;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conflict-serializability checker for concurrent execution traces"};
  app.require_subcommand(1);

  std::string meta_file;
  auto* meta = app.add_subcommand("metainfo", "Print trace statistics");
  meta->add_option("file", meta_file, "Trace file")->required();

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Check traces for atomicity violations");
  analyze->add_option("files", an.files, "Trace files")->required();
  analyze->add_option("--engine", an.engine, "aerodrome | aerodrome-opt | velodrome | oracle")
      ->capture_default_str();
  analyze->add_flag("--no-gc", an.no_gc, "Disable transaction garbage collection");
  analyze->add_flag("--verbose,-v", an.verbose, "Print counters and violation details");
  analyze->add_option("--oracle-cap", an.oracle_cap, "Largest trace the oracle engine accepts")->capture_default_str();
  analyze->add_option("--jobs,-j", an.jobs, "Analyze this many files in parallel")->capture_default_str();

  std::string filter_file, spec_file, filter_out = "-";
  auto* filter = app.add_subcommand("filter", "Keep only begin/end pairs of atomic methods");
  filter->add_option("file", filter_file, "Trace file")->required();
  filter->add_option("--spec", spec_file, "Atomicity specification (one label per line)")->required();
  filter->add_option("-o,--output", filter_out, "Output file, '-' for stdout")->capture_default_str();

  ac::GeneratorConfig gc;
  std::string gen_out = "-";
  auto* gen = app.add_subcommand("gen", "Generate a random well-formed trace");
  gen->add_option("--threads", gc.threads)->capture_default_str();
  gen->add_option("--events", gc.events)->capture_default_str();
  gen->add_option("--vars", gc.vars)->capture_default_str();
  gen->add_option("--locks", gc.locks)->capture_default_str();
  gen->add_option("--txn-min", gc.txn_min)->capture_default_str();
  gen->add_option("--txn-max", gc.txn_max)->capture_default_str();
  gen->add_option("--seed", gc.seed)->capture_default_str();
  gen->add_option("-o,--output", gen_out, "Output file, '-' for stdout")->capture_default_str();

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Time engines on generated workloads (CSV)");
  bench->add_option("--family", ba.family, "linear | adversarial")->capture_default_str();
  bench->add_option("--sizes", ba.sizes, "Events (linear) or transactions (adversarial)")->delimiter(',');
  bench->add_option("--engines", ba.engines, "Engines to run")->delimiter(',');
  bench->add_option("--seed", ba.seed)->capture_default_str();
  bench->add_option("--repeats", ba.repeats, "Best of this many runs")->capture_default_str();
  bench->add_option("--oracle-cap", ba.oracle_cap)->capture_default_str();
  bench->add_option("-o,--output", ba.out, "Output file, '-' for stdout")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  if (*meta) return cmd_metainfo(meta_file);
  if (*analyze) return cmd_analyze(an);
  if (*filter) return cmd_filter(filter_file, spec_file, filter_out);
  if (*gen) {
    try {
      return write_trace(ac::generate_trace(gc), gen_out);
    } catch (const std::exception& e) {
      std::cerr << e.what() << '\n';
      return kInputError;
    }
  }
  if (*bench) return cmd_bench(ba);
  return kInputError;
}
