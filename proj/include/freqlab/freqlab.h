#ifndef FREQLAB_H
#define FREQLAB_H

/* C interface to freqlab. All functions return FQ_OK or an error status;
 * fq_last_error() describes the most recent failure on the calling thread.
 * Strings returned through char** are owned by the caller and released with
 * fq_string_free. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fq_status {
  FQ_OK = 0,
  FQ_ERR_INVALID_ARGUMENT = 1,
  FQ_ERR_INVALID_POINT = 2,
  FQ_ERR_DIMENSION_MISMATCH = 3,
  FQ_ERR_DEGENERATE_PAIR = 4,
  FQ_ERR_ZERO_MASS = 5,
  FQ_ERR_OUT_OF_RANGE = 6,
  FQ_ERR_EMPTY_WINDOW = 7,
  FQ_ERR_NEVER_OCCURRED = 8,
  FQ_ERR_EMPTY_SELECTION = 9,
  FQ_ERR_ZERO_LOWER_PROBABILITY = 10,
  FQ_ERR_NO_BRACKET = 11,
  FQ_ERR_NOT_PI_SYSTEM = 12,
  FQ_ERR_CLOSURE_BUDGET_EXCEEDED = 13,
  FQ_ERR_OVERFLOW = 14,
  FQ_ERR_BUDGET_EXCEEDED = 15,
  FQ_ERR_IO = 16,
  FQ_ERR_PARSE = 17,
  FQ_ERR_INTERNAL = 99
} fq_status;

typedef struct fq_sequence fq_sequence;
typedef struct fq_trace fq_trace;
typedef struct fq_credal fq_credal;

typedef enum fq_format { FQ_FORMAT_TEXT = 0, FQ_FORMAT_RUNS = 1, FQ_FORMAT_BINARY = 2 } fq_format;

typedef struct fq_schedule {
  int v_linear;      /* nonzero: V(g) = v_base * g; zero: V(g) = v_base */
  int64_t v_base;
  int t_sqrt;        /* nonzero: T(n) = ceil(sqrt n); zero: T(n) = t_value */
  int64_t t_value;
} fq_schedule;

typedef struct fq_budget {
  int64_t generations; /* 0: unlimited */
  uint64_t max_length; /* 0: unlimited */
} fq_budget;

typedef struct fq_tail {
  int fixed_start;  /* nonzero: window starts at start; zero: at floor(beta N) */
  double beta;
  uint64_t start;
} fq_tail;

typedef struct fq_analysis_config {
  fq_tail tail;
  double tol;
  double eps;
  double condition_threshold;
} fq_analysis_config;

const char* fq_last_error(void);
const char* fq_status_string(fq_status status);
void fq_string_free(char* s);

fq_schedule fq_default_schedule(void);
fq_tail fq_default_tail(void);
fq_analysis_config fq_default_analysis_config(void);

/* Constructions. out_trace may be NULL. */
fq_status fq_construct_curve(const char* curve_json, const fq_schedule* schedule,
                             const fq_budget* budget, fq_sequence** out_seq,
                             fq_trace** out_trace);
fq_status fq_construct_extreme(size_t k, double alpha, int64_t segments, fq_sequence** out);
fq_status fq_construct_doubling(uint64_t length, fq_sequence** out);
fq_status fq_construct_counterexample(uint64_t length, fq_sequence** out);

/* Sequences. */
fq_status fq_sequence_from_symbols(size_t k, const uint16_t* symbols, uint64_t n,
                                   fq_sequence** out);
fq_status fq_sequence_load(const char* path, fq_sequence** out);
fq_status fq_sequence_save(const fq_sequence* seq, const char* path, fq_format format);
void fq_sequence_free(fq_sequence* seq);
size_t fq_sequence_k(const fq_sequence* seq);
uint64_t fq_sequence_length(const fq_sequence* seq);
/* Counts of each symbol over positions 1..n; out has k entries. */
fq_status fq_sequence_counts(const fq_sequence* seq, uint64_t n, uint64_t* out, size_t k);

/* Construction traces. */
void fq_trace_free(fq_trace* trace);
size_t fq_trace_segments(const fq_trace* trace);
uint64_t fq_trace_violations(const fq_trace* trace);
int fq_trace_budget_exceeded(const fq_trace* trace);
fq_status fq_trace_write_jsonl(const fq_trace* trace, const char* path);

/* Estimates over a tail window. Events are lists of 1-based symbols. */
fq_status fq_prevision_estimate(const fq_sequence* seq, const double* gamble, size_t k,
                                const fq_tail* tail, double* upper, double* lower);
fq_status fq_probability_estimate(const fq_sequence* seq, const uint16_t* members, size_t m,
                                  const fq_tail* tail, double* upper, double* lower,
                                  double* width);
fq_status fq_conditional_estimate(const fq_sequence* seq, const double* gamble, size_t k,
                                  const uint16_t* members, size_t m, const fq_tail* tail,
                                  double* upper, double* lower);

/* Credal sets; points is npoints rows of k coordinates. */
fq_status fq_credal_create(size_t k, const double* points, size_t npoints, fq_credal** out);
fq_status fq_credal_from_json(const char* json, fq_credal** out);
void fq_credal_free(fq_credal* c);
fq_status fq_credal_upper_prevision(const fq_credal* c, const double* gamble, size_t k,
                                    double* value, size_t* argmax);
fq_status fq_credal_lower_prevision(const fq_credal* c, const double* gamble, size_t k,
                                    double* value, size_t* argmin);
fq_status fq_gbr_credal(const fq_credal* c, const double* gamble, size_t k,
                        const uint16_t* members, size_t m, double* out);
fq_status fq_gbr_root(const fq_credal* c, const double* gamble, size_t k,
                      const uint16_t* members, size_t m, double* out);

/* Reports. credal may be NULL. */
fq_status fq_analyze(const fq_sequence* seq, const char* inputs_json, const fq_credal* credal,
                     const fq_analysis_config* config, char** report_json);
fq_status fq_emit_plot(const fq_sequence* seq, uint64_t stride, char** csv);

#ifdef __cplusplus
}
#endif

#endif
