// Exercises the shared library through its C interface only, and the CLI as a
// subprocess.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "freqlab/freqlab.h"
#include "json.hpp"

namespace {

std::filesystem::path scratch() {
  static const auto dir = [] {
    auto d = std::filesystem::temp_directory_path() / "freqlab_capi";
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args, const std::filesystem::path& out) {
  const std::string cmd = std::string(FREQLAB_CLI) + " " + args + " > " + out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("status strings and defaults") {
  CHECK(std::string(fq_status_string(FQ_OK)) == "ok");
  CHECK(std::string(fq_status_string(FQ_ERR_NO_BRACKET)).size() > 0);
  const fq_schedule s = fq_default_schedule();
  CHECK(s.v_linear == 1);
  CHECK(s.v_base == 30);
  CHECK(s.t_sqrt == 1);
  const fq_analysis_config c = fq_default_analysis_config();
  CHECK(c.tail.beta == 0.5);
  CHECK(c.tol > 0.0);
}

TEST_CASE("sequences through the C interface") {
  const uint16_t sym[] = {1, 2, 1, 1};
  fq_sequence* seq = nullptr;
  REQUIRE(fq_sequence_from_symbols(2, sym, 4, &seq) == FQ_OK);
  CHECK(fq_sequence_k(seq) == 2);
  CHECK(fq_sequence_length(seq) == 4);
  uint64_t counts[2];
  CHECK(fq_sequence_counts(seq, 4, counts, 2) == FQ_OK);
  CHECK(counts[0] == 3);
  CHECK(counts[1] == 1);
  CHECK(fq_sequence_counts(seq, 9, counts, 2) == FQ_ERR_OUT_OF_RANGE);
  CHECK(std::string(fq_last_error()).size() > 0);

  const auto path = (scratch() / "seq.bin").string();
  CHECK(fq_sequence_save(seq, path.c_str(), FQ_FORMAT_BINARY) == FQ_OK);
  fq_sequence* back = nullptr;
  REQUIRE(fq_sequence_load(path.c_str(), &back) == FQ_OK);
  CHECK(fq_sequence_length(back) == 4);
  fq_sequence_free(back);
  fq_sequence_free(seq);
  fq_sequence_free(nullptr);

  const uint16_t bad[] = {3};
  fq_sequence* none = nullptr;
  CHECK(fq_sequence_from_symbols(2, bad, 1, &none) == FQ_ERR_OUT_OF_RANGE);
  CHECK(none == nullptr);
  CHECK(fq_sequence_load("/nonexistent/file", &none) == FQ_ERR_IO);
}

TEST_CASE("constructions and estimates") {
  fq_sequence* d = nullptr;
  REQUIRE(fq_construct_doubling(1u << 16, &d) == FQ_OK);
  const uint16_t two[] = {2};
  const fq_tail tail = fq_default_tail();
  double up = 0, lo = 0, width = 0;
  REQUIRE(fq_probability_estimate(d, two, 1, &tail, &up, &lo, &width) == FQ_OK);
  CHECK(lo == doctest::Approx(1.0 / 3).epsilon(1e-3));
  CHECK(up == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(width == doctest::Approx(up - lo));
  const double x[] = {1.0, -1.0};
  REQUIRE(fq_prevision_estimate(d, x, 2, &tail, &up, &lo) == FQ_OK);
  CHECK(up >= lo);
  CHECK(fq_prevision_estimate(d, x, 3, &tail, &up, &lo) == FQ_ERR_DIMENSION_MISMATCH);
  REQUIRE(fq_conditional_estimate(d, x, 2, two, 1, &tail, &up, &lo) == FQ_OK);
  CHECK(up == -1.0);
  fq_sequence_free(d);

  fq_sequence* e = nullptr;
  CHECK(fq_construct_extreme(3, 1.5, 12, &e) == FQ_ERR_OVERFLOW);
  REQUIRE(fq_construct_extreme(3, 1.5, 4, &e) == FQ_OK);
  fq_sequence_free(e);

  fq_sequence* ce = nullptr;
  REQUIRE(fq_construct_counterexample(6, &ce) == FQ_OK);
  CHECK(fq_sequence_k(ce) == 4);
  fq_sequence_free(ce);

  const fq_schedule sched{0, 30, 0, 12};
  const fq_budget budget{2, 0};
  fq_sequence* lem = nullptr;
  fq_trace* trace = nullptr;
  REQUIRE(fq_construct_curve(R"({"parametric":{"name":"lemniscate3"}})", &sched, &budget, &lem, &trace) == FQ_OK);
  CHECK(fq_trace_segments(trace) == 60);
  CHECK(fq_trace_violations(trace) == 0);
  CHECK(fq_trace_budget_exceeded(trace) == 0);
  const auto tpath = scratch() / "trace.jsonl";
  CHECK(fq_trace_write_jsonl(trace, tpath.string().c_str()) == FQ_OK);
  std::ifstream in(tpath);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 60);

  char* csv = nullptr;
  REQUIRE(fq_emit_plot(lem, 100, &csv) == FQ_OK);
  CHECK(std::string(csv).rfind("n,r1,r2,r3,x,y", 0) == 0);
  fq_string_free(csv);
  CHECK(fq_emit_plot(lem, 0, &csv) == FQ_ERR_INVALID_ARGUMENT);
  fq_trace_free(trace);
  fq_sequence_free(lem);

  CHECK(fq_construct_curve("{", &sched, &budget, &lem, nullptr) == FQ_ERR_PARSE);
}

TEST_CASE("credal sets and the generalized Bayes rule") {
  const double pts[] = {0.5, 0.25, 0.25, 0.1, 0.6, 0.3};
  fq_credal* c = nullptr;
  REQUIRE(fq_credal_create(3, pts, 2, &c) == FQ_OK);
  const double x[] = {2.0, 0.0, 5.0};
  const uint16_t b[] = {1, 2};
  double v = 0;
  size_t idx = 9;
  REQUIRE(fq_credal_upper_prevision(c, x, 3, &v, &idx) == FQ_OK);
  CHECK(v == doctest::Approx(2.25));
  CHECK(idx == 0);
  REQUIRE(fq_credal_lower_prevision(c, x, 3, &v, &idx) == FQ_OK);
  CHECK(v == doctest::Approx(1.7));
  CHECK(idx == 1);
  REQUIRE(fq_gbr_credal(c, x, 3, b, 2, &v) == FQ_OK);
  CHECK(v == doctest::Approx(4.0 / 3));
  REQUIRE(fq_gbr_root(c, x, 3, b, 2, &v) == FQ_OK);
  CHECK(std::abs(v - 4.0 / 3) <= 1e-9);
  fq_credal_free(c);

  fq_credal* j = nullptr;
  REQUIRE(fq_credal_from_json(R"({"k":2,"points":[[0,1],[0.5,0.5]]})", &j) == FQ_OK);
  const double y[] = {1.0, 0.0};
  const uint16_t first[] = {1};
  CHECK(fq_gbr_credal(j, y, 2, first, 1, &v) == FQ_ERR_ZERO_LOWER_PROBABILITY);
  fq_credal_free(j);
  const double bad[] = {0.5, 0.6};
  CHECK(fq_credal_create(2, bad, 1, &j) == FQ_ERR_INVALID_POINT);
}

TEST_CASE("analysis through the C interface") {
  fq_sequence* d = nullptr;
  REQUIRE(fq_construct_doubling(4096, &d) == FQ_OK);
  const fq_analysis_config cfg = fq_default_analysis_config();
  char* report = nullptr;
  REQUIRE(fq_analyze(d, R"({"events":{"all":[1,2]}})", nullptr, &cfg, &report) == FQ_OK);
  const auto j = nlohmann::json::parse(report);
  CHECK(j["events"]["all"]["upper"] == 1.0);
  fq_string_free(report);
  CHECK(fq_analyze(d, R"({"events":{"bad":[3]}})", nullptr, &cfg, &report) == FQ_ERR_OUT_OF_RANGE);
  fq_sequence_free(d);
}

TEST_CASE("command line") {
  const auto dir = scratch();
  const auto out = dir / "stdout.txt";
  const auto seq = dir / "lem.txt";

  REQUIRE(run_cli("construct --curve lemniscate3 --V 30 --T 12 --generations 2 --out " + seq.string(), out) == 0);
  const auto info = nlohmann::json::parse(slurp(out));
  CHECK(info["violations"] == 0);
  CHECK(info["length"] == 10369);
  CHECK(std::filesystem::exists(seq.string() + ".trace.jsonl"));

  const auto csv = dir / "lem.csv";
  REQUIRE(run_cli("emit-plot --in " + seq.string() + " --stride 100 --out " + csv.string(), out) == 0);
  const std::string text = slurp(csv);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 104);
  CHECK(run_cli("emit-plot --in " + seq.string() + " --k 2", out) == 1);

  const auto dbl = dir / "dbl.txt";
  REQUIRE(run_cli("construct --doubling --length 1048576 --out " + dbl.string(), out) == 0);
  REQUIRE(run_cli("analyze --in " + dbl.string() + " --inputs '{\"events\":{\"two\":[2],\"all\":[1,2]}}'", out) == 0);
  const auto rep = nlohmann::json::parse(slurp(out));
  CHECK(rep["events"]["two"]["lower"].get<double>() == doctest::Approx(1.0 / 3).epsilon(1e-3));
  CHECK(rep["events"]["all"]["upper"] == 1.0);
  CHECK(rep["events"]["all"]["lower"] == 1.0);
  const std::string plot = dir / "dbl.csv";
  REQUIRE(run_cli("emit-plot --in " + dbl.string() + " --stride 2000000 --out " + plot, out) == 0);
  const std::string one = slurp(plot);
  CHECK(one.rfind("n,r1,r2\n", 0) == 0);
  CHECK(std::count(one.begin(), one.end(), '\n') == 2);

  CHECK(run_cli("construct --extreme --k 3 --alpha 1.5 --segments 12", out) == 1);
  CHECK(slurp(out).find("Overflow") != std::string::npos);
  CHECK(run_cli("construct --doubling --extreme --length 5", out) == 1);
  CHECK(run_cli("analyze --in /nonexistent --inputs '{}'", out) == 1);
  CHECK(run_cli("bogus", out) == 1);
}
