#include "freqlab/freqlab.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "freqlab/builder.hpp"
#include "freqlab/credal.hpp"
#include "freqlab/error.hpp"
#include "freqlab/frequency.hpp"
#include "freqlab/io.hpp"
#include "freqlab/report.hpp"

struct fq_sequence {
  freqlab::SymbolSequence seq;
};

struct fq_trace {
  freqlab::GenerationTrace trace;
  bool budget_exceeded = false;
};

struct fq_credal {
  freqlab::CredalSet set;
};

namespace {

thread_local std::string g_last_error;

fq_status fail(fq_status s, const char* msg) {
  g_last_error = msg;
  return s;
}

template <typename F>
fq_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return FQ_OK;
  } catch (const freqlab::Error& e) {
    return fail(static_cast<fq_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(FQ_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FQ_ERR_INTERNAL, e.what());
  }
}

void require(bool cond, const char* what) {
  if (!cond) throw freqlab::Error(freqlab::ErrorCode::InvalidArgument, what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

freqlab::Gamble gamble_of(const double* values, size_t k) {
  require(values != nullptr && k > 0, "gamble values required");
  return freqlab::Gamble{freqlab::Vec(values, values + k)};
}

freqlab::Event event_of(size_t k, const uint16_t* members, size_t m) {
  require(members != nullptr || m == 0, "event members required");
  return freqlab::Event(k, std::span<const freqlab::Symbol>(members, m));
}

freqlab::TailPolicy policy_of(const fq_tail* t) {
  if (!t) return freqlab::TailPolicy{};
  return t->fixed_start ? freqlab::TailPolicy::fixed_start(t->start)
                        : freqlab::TailPolicy::fraction(t->beta);
}

}  // namespace

extern "C" {

const char* fq_last_error(void) { return g_last_error.c_str(); }

const char* fq_status_string(fq_status status) {
  if (status == FQ_OK) return "ok";
  if (status == FQ_ERR_INTERNAL) return "internal error";
  return freqlab::to_string(static_cast<freqlab::ErrorCode>(status));
}

void fq_string_free(char* s) { std::free(s); }

fq_schedule fq_default_schedule(void) { return fq_schedule{1, 30, 1, 0}; }

fq_tail fq_default_tail(void) { return fq_tail{0, 0.5, 1}; }

fq_analysis_config fq_default_analysis_config(void) {
  return fq_analysis_config{fq_default_tail(), 0.02, 0.05, 0.01};
}

fq_status fq_construct_curve(const char* curve_json, const fq_schedule* schedule,
                             const fq_budget* budget, fq_sequence** out_seq,
                             fq_trace** out_trace) {
  return guarded([&] {
    require(curve_json && schedule && budget && out_seq, "null argument");
    const auto curve = freqlab::parse_curve(curve_json);
    freqlab::Schedules s;
    s.V = schedule->v_linear ? freqlab::VSchedule::linear(schedule->v_base)
                             : freqlab::VSchedule::constant(schedule->v_base);
    s.T = schedule->t_sqrt ? freqlab::TSchedule::sqrt()
                           : freqlab::TSchedule::constant(schedule->t_value);
    auto c = freqlab::construct_for_curve(curve, s, {budget->generations, budget->max_length});
    auto* seq = new fq_sequence{std::move(c.sequence)};
    if (out_trace) {
      try {
        *out_trace = new fq_trace{std::move(c.trace), c.budget_exceeded};
      } catch (...) {
        delete seq;
        throw;
      }
    }
    *out_seq = seq;
  });
}

fq_status fq_construct_extreme(size_t k, double alpha, int64_t segments, fq_sequence** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = new fq_sequence{freqlab::construct_extreme(k, alpha, segments)};
  });
}

fq_status fq_construct_doubling(uint64_t length, fq_sequence** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = new fq_sequence{freqlab::von_mises_doubling(length)};
  });
}

fq_status fq_construct_counterexample(uint64_t length, fq_sequence** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = new fq_sequence{freqlab::pre_dynkin_counterexample(length)};
  });
}

fq_status fq_sequence_from_symbols(size_t k, const uint16_t* symbols, uint64_t n,
                                   fq_sequence** out) {
  return guarded([&] {
    require(out != nullptr && (symbols != nullptr || n == 0), "null argument");
    freqlab::SymbolSequence seq(k);
    for (uint64_t i = 0; i < n; ++i) seq.push_back(symbols[i]);
    *out = new fq_sequence{std::move(seq)};
  });
}

fq_status fq_sequence_load(const char* path, fq_sequence** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new fq_sequence{freqlab::load_sequence(path)};
  });
}

fq_status fq_sequence_save(const fq_sequence* seq, const char* path, fq_format format) {
  return guarded([&] {
    require(seq && path, "null argument");
    const auto f = format == FQ_FORMAT_BINARY ? freqlab::SequenceFormat::Binary
                   : format == FQ_FORMAT_RUNS ? freqlab::SequenceFormat::Runs
                                              : freqlab::SequenceFormat::Text;
    freqlab::save_sequence(seq->seq, path, f);
  });
}

void fq_sequence_free(fq_sequence* seq) { delete seq; }

size_t fq_sequence_k(const fq_sequence* seq) { return seq ? seq->seq.k() : 0; }

uint64_t fq_sequence_length(const fq_sequence* seq) { return seq ? seq->seq.size() : 0; }

fq_status fq_sequence_counts(const fq_sequence* seq, uint64_t n, uint64_t* out, size_t k) {
  return guarded([&] {
    require(seq && out, "null argument");
    seq->seq.counts_into(n, std::span<std::uint64_t>(out, k));
  });
}

void fq_trace_free(fq_trace* trace) { delete trace; }

size_t fq_trace_segments(const fq_trace* trace) { return trace ? trace->trace.segments.size() : 0; }

uint64_t fq_trace_violations(const fq_trace* trace) { return trace ? trace->trace.violations : 0; }

int fq_trace_budget_exceeded(const fq_trace* trace) { return trace && trace->budget_exceeded; }

fq_status fq_trace_write_jsonl(const fq_trace* trace, const char* path) {
  return guarded([&] {
    require(trace && path, "null argument");
    std::ofstream out(path);
    if (!out) throw freqlab::Error(freqlab::ErrorCode::Io, std::string("cannot open ") + path);
    freqlab::write_trace_jsonl(trace->trace, out);
  });
}

fq_status fq_prevision_estimate(const fq_sequence* seq, const double* gamble, size_t k,
                                const fq_tail* tail, double* upper, double* lower) {
  return guarded([&] {
    require(seq && upper && lower, "null argument");
    const auto w = freqlab::prevision_window(seq->seq, gamble_of(gamble, k), policy_of(tail));
    *upper = w.limsup;
    *lower = w.liminf;
  });
}

fq_status fq_probability_estimate(const fq_sequence* seq, const uint16_t* members, size_t m,
                                  const fq_tail* tail, double* upper, double* lower,
                                  double* width) {
  return guarded([&] {
    require(seq && upper && lower, "null argument");
    const auto w = freqlab::probability_window(seq->seq, event_of(seq->seq.k(), members, m),
                                               policy_of(tail));
    *upper = w.limsup;
    *lower = w.liminf;
    if (width) *width = w.width;
  });
}

fq_status fq_conditional_estimate(const fq_sequence* seq, const double* gamble, size_t k,
                                  const uint16_t* members, size_t m, const fq_tail* tail,
                                  double* upper, double* lower) {
  return guarded([&] {
    require(seq && upper && lower, "null argument");
    const auto w = freqlab::conditional_prevision_window(
        seq->seq, gamble_of(gamble, k), event_of(seq->seq.k(), members, m), policy_of(tail));
    *upper = w.limsup;
    *lower = w.liminf;
  });
}

fq_status fq_credal_create(size_t k, const double* points, size_t npoints, fq_credal** out) {
  return guarded([&] {
    require(out && points && k > 0 && npoints > 0, "null or empty argument");
    freqlab::PointSet pts;
    for (size_t i = 0; i < npoints; ++i)
      pts.emplace_back(freqlab::Vec(points + i * k, points + (i + 1) * k));
    *out = new fq_credal{freqlab::CredalSet(std::move(pts))};
  });
}

fq_status fq_credal_from_json(const char* json, fq_credal** out) {
  return guarded([&] {
    require(json && out, "null argument");
    *out = new fq_credal{freqlab::parse_credal(json)};
  });
}

void fq_credal_free(fq_credal* c) { delete c; }

fq_status fq_credal_upper_prevision(const fq_credal* c, const double* gamble, size_t k,
                                    double* value, size_t* argmax) {
  return guarded([&] {
    require(c && value, "null argument");
    const auto r = freqlab::upper_prevision(c->set, gamble_of(gamble, k));
    *value = r.value;
    if (argmax) *argmax = r.argmax;
  });
}

fq_status fq_credal_lower_prevision(const fq_credal* c, const double* gamble, size_t k,
                                    double* value, size_t* argmin) {
  return guarded([&] {
    require(c && value, "null argument");
    const auto r = freqlab::lower_prevision(c->set, gamble_of(gamble, k));
    *value = r.value;
    if (argmin) *argmin = r.argmax;
  });
}

fq_status fq_gbr_credal(const fq_credal* c, const double* gamble, size_t k,
                        const uint16_t* members, size_t m, double* out) {
  return guarded([&] {
    require(c && out, "null argument");
    *out = freqlab::gbr_credal(c->set, gamble_of(gamble, k), event_of(c->set.k(), members, m));
  });
}

fq_status fq_gbr_root(const fq_credal* c, const double* gamble, size_t k,
                      const uint16_t* members, size_t m, double* out) {
  return guarded([&] {
    require(c && out, "null argument");
    *out = freqlab::gbr_root(freqlab::envelope_functional(c->set), gamble_of(gamble, k),
                             event_of(c->set.k(), members, m))
               .value;
  });
}

fq_status fq_analyze(const fq_sequence* seq, const char* inputs_json, const fq_credal* credal,
                     const fq_analysis_config* config, char** report_json) {
  return guarded([&] {
    require(seq && inputs_json && report_json, "null argument");
    freqlab::AnalysisConfig cfg;
    if (config) {
      cfg.policy = policy_of(&config->tail);
      cfg.tol = config->tol;
      cfg.eps = config->eps;
      cfg.condition_threshold = config->condition_threshold;
    }
    const auto inputs = freqlab::parse_analysis_inputs(inputs_json, seq->seq.k());
    std::optional<freqlab::CredalSet> c;
    if (credal) c = credal->set;
    *report_json = dup_string(freqlab::analyze(seq->seq, inputs, c, cfg));
  });
}

fq_status fq_emit_plot(const fq_sequence* seq, uint64_t stride, char** csv) {
  return guarded([&] {
    require(seq && csv, "null argument");
    std::ostringstream out;
    freqlab::write_plot_csv(seq->seq, stride, out);
    *csv = dup_string(out.str());
  });
}

}  // extern "C"
