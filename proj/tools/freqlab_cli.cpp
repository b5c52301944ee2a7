// freqlab command line: construct, analyze, emit-plot.
//
// Exit codes: 0 success, 1 configuration or I/O error, 2 construction bound
// violation (an internal consistency failure).

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "freqlab/freqlab.h"

namespace {

struct UserError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(fq_status s) {
  if (s != FQ_OK) throw UserError(std::string(fq_status_string(s)) + ": " + fq_last_error());
}

struct SeqDeleter {
  void operator()(fq_sequence* s) const { fq_sequence_free(s); }
};
struct TraceDeleter {
  void operator()(fq_trace* t) const { fq_trace_free(t); }
};
struct CredalDeleter {
  void operator()(fq_credal* c) const { fq_credal_free(c); }
};
struct StringDeleter {
  void operator()(char* s) const { fq_string_free(s); }
};
using SeqPtr = std::unique_ptr<fq_sequence, SeqDeleter>;
using TracePtr = std::unique_ptr<fq_trace, TraceDeleter>;
using CredalPtr = std::unique_ptr<fq_credal, CredalDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UserError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Inline JSON, a bare point list, or a path to a JSON file.
std::string json_argument(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) return arg;
  return slurp(arg);
}

struct ConstructOptions {
  std::string curve;
  std::string polygon;
  bool extreme = false;
  bool doubling = false;
  bool counterexample = false;
  std::size_t k = 3;
  double alpha = 1.5;
  std::int64_t segments = 0;
  std::uint64_t length = 0;
  std::optional<std::int64_t> V;
  std::string V_schedule;
  std::optional<std::int64_t> T;
  std::string T_schedule;
  std::int64_t generations = 0;
  std::uint64_t max_length = 0;
  bool binary = false;
  bool runs = false;
  std::string out;
};

int cmd_construct(const ConstructOptions& o) {
  const int modes = !o.curve.empty() + !o.polygon.empty() + o.extreme + o.doubling + o.counterexample;
  if (modes != 1)
    throw UserError("choose exactly one of --curve, --polygon, --extreme, --doubling, --counterexample");

  const auto t0 = std::chrono::steady_clock::now();
  fq_sequence* raw = nullptr;
  fq_trace* raw_trace = nullptr;
  if (!o.curve.empty() || !o.polygon.empty()) {
    std::string curve_json;
    if (o.curve == "lemniscate3") {
      curve_json = R"({"parametric":{"name":"lemniscate3"}})";
    } else if (!o.curve.empty()) {
      curve_json = json_argument(o.curve);
    } else {
      curve_json = json_argument(o.polygon);
      if (curve_json.find_first_not_of(" \t\n") != std::string::npos &&
          curve_json[curve_json.find_first_not_of(" \t\n")] == '[')
        curve_json = "{\"polygon\":" + curve_json + "}";
    }
    fq_schedule sched = fq_default_schedule();
    const std::string vs = o.V_schedule.empty() ? (o.V ? "const" : "linear") : o.V_schedule;
    const std::string ts = o.T_schedule.empty() ? (o.T ? "const" : "sqrt") : o.T_schedule;
    if (vs != "const" && vs != "linear") throw UserError("--V-schedule must be const or linear");
    if (ts != "const" && ts != "sqrt") throw UserError("--T-schedule must be sqrt or const");
    sched.v_linear = vs == "linear";
    sched.v_base = o.V.value_or(30);
    sched.t_sqrt = ts == "sqrt";
    if (!sched.t_sqrt && !o.T) throw UserError("--T-schedule const needs --T");
    sched.t_value = o.T.value_or(0);
    const fq_budget budget{o.generations, o.max_length};
    check(fq_construct_curve(curve_json.c_str(), &sched, &budget, &raw, &raw_trace));
  } else if (o.extreme) {
    check(fq_construct_extreme(o.k, o.alpha, o.segments, &raw));
  } else if (o.doubling) {
    check(fq_construct_doubling(o.length, &raw));
  } else {
    check(fq_construct_counterexample(o.length, &raw));
  }
  SeqPtr seq(raw);
  TracePtr trace(raw_trace);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (!o.out.empty()) {
    const fq_format fmt = o.binary ? FQ_FORMAT_BINARY : o.runs ? FQ_FORMAT_RUNS : FQ_FORMAT_TEXT;
    check(fq_sequence_save(seq.get(), o.out.c_str(), fmt));
    if (trace) check(fq_trace_write_jsonl(trace.get(), (o.out + ".trace.jsonl").c_str()));
  }

  const std::uint64_t violations = trace ? fq_trace_violations(trace.get()) : 0;
  std::printf("{\"k\": %zu, \"length\": %llu, \"seconds\": %.3f", fq_sequence_k(seq.get()),
              static_cast<unsigned long long>(fq_sequence_length(seq.get())), seconds);
  if (trace)
    std::printf(", \"segments\": %zu, \"violations\": %llu, \"budget_exceeded\": %s",
                fq_trace_segments(trace.get()), static_cast<unsigned long long>(violations),
                fq_trace_budget_exceeded(trace.get()) ? "true" : "false");
  if (!o.out.empty()) std::printf(", \"out\": \"%s\"", o.out.c_str());
  std::printf("}\n");
  if (violations > 0) {
    std::fprintf(stderr, "error: %llu construction bound violation(s)\n",
                 static_cast<unsigned long long>(violations));
    return 2;
  }
  return 0;
}

struct AnalyzeOptions {
  std::string in;
  std::string inputs;
  std::string credal;
  std::optional<double> tail_beta;
  std::optional<std::uint64_t> tail_start;
  double tol = 0.02;
  double eps = 0.05;
  double cond_threshold = 0.01;
  std::string out;
};

void write_output(const std::string& path, const char* text) {
  if (path.empty() || path == "-") {
    std::fputs(text, stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UserError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw UserError("failed writing " + path);
}

int cmd_analyze(const AnalyzeOptions& o) {
  fq_sequence* raw = nullptr;
  check(fq_sequence_load(o.in.c_str(), &raw));
  SeqPtr seq(raw);
  const std::string inputs = json_argument(o.inputs);
  CredalPtr credal;
  if (!o.credal.empty()) {
    fq_credal* c = nullptr;
    check(fq_credal_from_json(json_argument(o.credal).c_str(), &c));
    credal.reset(c);
  }
  fq_analysis_config cfg = fq_default_analysis_config();
  if (o.tail_start) {
    cfg.tail.fixed_start = 1;
    cfg.tail.start = *o.tail_start;
  }
  if (o.tail_beta) cfg.tail.beta = *o.tail_beta;
  cfg.tol = o.tol;
  cfg.eps = o.eps;
  cfg.condition_threshold = o.cond_threshold;
  char* report = nullptr;
  check(fq_analyze(seq.get(), inputs.c_str(), credal.get(), &cfg, &report));
  StringPtr owned(report);
  write_output(o.out, report);
  if (o.out.empty() || o.out == "-") std::fputs("\n", stdout);
  return 0;
}

struct PlotOptions {
  std::string in;
  std::uint64_t stride = 100;
  std::optional<std::size_t> k;
  std::string out;
};

int cmd_emit_plot(const PlotOptions& o) {
  fq_sequence* raw = nullptr;
  check(fq_sequence_load(o.in.c_str(), &raw));
  SeqPtr seq(raw);
  if (o.k && *o.k != fq_sequence_k(seq.get()))
    throw UserError("sequence has k=" + std::to_string(fq_sequence_k(seq.get())) +
                    ", expected " + std::to_string(*o.k));
  char* csv = nullptr;
  check(fq_emit_plot(seq.get(), o.stride, &csv));
  StringPtr owned(csv);
  write_output(o.out, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frequentist imprecise probability: constructions and sequence analysis"};
  app.require_subcommand(1);

  ConstructOptions co;
  auto* construct = app.add_subcommand("construct", "Build a sequence and its construction trace");
  construct->add_option("--curve", co.curve, "lemniscate3 or a curve JSON file/string");
  construct->add_option("--polygon", co.polygon, "polygon vertices as JSON (inline or file)");
  construct->add_flag("--extreme", co.extreme, "cluster points covering the whole simplex");
  construct->add_flag("--doubling", co.doubling, "1^1 2^1 1^2 2^2 1^4 2^4 ... (k = 2)");
  construct->add_flag("--counterexample", co.counterexample,
                      "label i repeated 2^(ceil(i/2)-1) times");
  construct->add_option("--k", co.k, "alphabet size for --extreme")->check(CLI::PositiveNumber);
  construct->add_option("--alpha", co.alpha, "growth exponent for --extreme");
  construct->add_option("--segments", co.segments, "segment count for --extreme");
  construct->add_option("--length", co.length, "length for --doubling / --counterexample");
  construct->add_option("--V", co.V, "polygon vertices per generation (base for linear)");
  construct->add_option("--V-schedule", co.V_schedule, "const or linear");
  construct->add_option("--T", co.T, "quantization parameter (constant schedule)");
  construct->add_option("--T-schedule", co.T_schedule, "sqrt or const");
  construct->add_option("--generations", co.generations, "generation budget");
  construct->add_option("--max-length", co.max_length, "length budget");
  construct->add_flag("--binary", co.binary, "write the binary sequence format");
  construct->add_flag("--runs", co.runs, "write the run-length text format");
  construct->add_option("--out", co.out, "sequence path; the trace goes to <out>.trace.jsonl");

  AnalyzeOptions ao;
  auto* analyze = app.add_subcommand("analyze", "Estimate previsions and related quantities");
  analyze->add_option("--in", ao.in, "sequence file")->required();
  analyze->add_option("--inputs", ao.inputs, "gambles/events JSON (inline or file)")->required();
  analyze->add_option("--credal", ao.credal, "credal set JSON to compare against");
  analyze->add_option("--tail-beta", ao.tail_beta, "window starts at floor(beta N)");
  analyze->add_option("--tail-start", ao.tail_start, "fixed window start");
  analyze->add_option("--tol", ao.tol, "precision / irrelevance tolerance")->check(CLI::PositiveNumber);
  analyze->add_option("--eps", ao.eps, "cluster net radius")->check(CLI::PositiveNumber);
  analyze->add_option("--cond-threshold", ao.cond_threshold,
                      "flag conditioning events with lower probability below this")
      ->check(CLI::PositiveNumber);
  analyze->add_option("--out", ao.out, "report path (default stdout)");

  PlotOptions po;
  auto* plot = app.add_subcommand("emit-plot", "Relative-frequency trajectory as CSV");
  plot->add_option("--in", po.in, "sequence file")->required();
  plot->add_option("--stride", po.stride, "row spacing")->check(CLI::PositiveNumber);
  plot->add_option("--k", po.k, "expected alphabet size");
  plot->add_option("--out", po.out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (construct->parsed()) return cmd_construct(co);
    if (analyze->parsed()) return cmd_analyze(ao);
    if (plot->parsed()) return cmd_emit_plot(po);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
