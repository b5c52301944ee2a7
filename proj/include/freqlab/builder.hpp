#pragma once

// Constructions of symbol sequences whose relative-frequency cluster points
// follow a prescribed closed curve, the boundary of a polytope, or cover the
// whole simplex, plus two classical demonstration sequences.

#include <cstdint>
#include <string>
#include <vector>

#include "freqlab/sequence.hpp"
#include "freqlab/simplex.hpp"

namespace freqlab {

/// Number of polygon vertices used in generation g (g >= 1).
struct VSchedule {
  enum class Kind { Constant, Linear };
  Kind kind = Kind::Linear;
  std::int64_t base = 30;

  static VSchedule constant(std::int64_t v) { return {Kind::Constant, v}; }
  static VSchedule linear(std::int64_t v0) { return {Kind::Linear, v0}; }
  std::int64_t operator()(std::int64_t g) const {
    return kind == Kind::Constant ? base : base * g;
  }
};

/// Quantization parameter as a function of the current length n.
struct TSchedule {
  enum class Kind { Constant, Sqrt };
  Kind kind = Kind::Sqrt;
  std::int64_t value = 0;

  static TSchedule constant(std::int64_t t) { return {Kind::Constant, t}; }
  static TSchedule sqrt() { return {Kind::Sqrt, 0}; }
  /// ceil(sqrt(n)) computed exactly in integers.
  std::int64_t operator()(std::uint64_t n) const;
};

struct Schedules {
  VSchedule V;
  TSchedule T;
};

/// Zero means "no limit" for either field; at least one must be set.
struct Budget {
  std::int64_t generations = 0;
  std::uint64_t max_length = 0;
};

/// Hard length cap used when a segment target sits on the simplex boundary
/// and no max_length was given (the ideal repetition count is infinite).
inline constexpr std::uint64_t kImplicitLengthCap = 1ull << 31;

struct SegmentRecord {
  std::int64_t generation = 0;
  std::int64_t vertex = 0;
  std::uint64_t n_start = 0;
  std::uint64_t n_end = 0;
  std::int64_t T = 0;
  double gamma = 0.0;
  bool on_boundary = false;
  Vec p_star;
  std::vector<std::int64_t> iota;
  std::int64_t T_tilde = 0;
  double ell_tilde = 0.0;  // ceil(n / (T (gamma - 1))); +inf on the boundary
  std::uint64_t pieces = 0;  // copies of the block actually appended
  Vec p_new;
  Vec p_hat_new;  // r^x(n_end)
  std::vector<std::uint64_t> counts_end;
  double endpoint_error = 0.0;
  double endpoint_bound = 0.0;  // 4T/n + k/T
  double within_piece_max = 0.0;
  double within_piece_bound = 0.0;  // (2T + k)/n
  bool skipped = false;
  bool clipped = false;
  bool endpoint_violation = false;
  bool within_piece_violation = false;
  std::string note;
};

struct GenerationTrace {
  std::size_t k = 0;
  std::vector<SegmentRecord> segments;
  /// Length of x at the start of each generation.
  std::vector<std::uint64_t> generation_starts;
  std::uint64_t violations = 0;
};

struct Construction {
  SymbolSequence sequence;
  GenerationTrace trace;
  bool budget_exceeded = false;
};

/// Builds x with CP(r^x) tracing the curve: start from x = <1>, then for
/// every generation walk the vertices of the V(g)-gon, heading each segment
/// toward the boundary intercept through the next vertex with a quantized
/// block repeated ceil(n / (T (gamma - 1))) times. All trace bounds are
/// checked while symbols are appended.
Construction construct_for_curve(const CurveSpec& curve, const Schedules& schedules,
                                 const Budget& budget);

/// Cycles the given vertices as a closed polygon.
Construction construct_polytope_boundary(const PointSet& vertices,
                                         const Schedules& schedules,
                                         const Budget& budget);

/// phi(s) = ceil(exp(s^alpha)) for s = 1..num_segments+1. Throws Overflow if
/// a value does not fit in int64.
std::vector<std::uint64_t> extreme_schedule(double alpha, std::int64_t num_segments);

/// Segment s appends phi(s+1) - phi(s) copies of symbol ((s-1) mod k) + 1.
SymbolSequence construct_extreme(std::size_t k, double alpha, std::int64_t num_segments);

/// 1^[1] 2^[1] 1^[2] 2^[2] 1^[4] 2^[4] ... truncated to length.
SymbolSequence von_mises_doubling(std::uint64_t length);

/// Label i repeated 2^(ceil(i/2) - 1) times for i = 1, 2, 3, ...: the
/// sequence 1 2 3 3 4 4 5 5 5 5 ... truncated to length. The alphabet size
/// is the largest label emitted.
SymbolSequence pre_dynkin_counterexample(std::uint64_t length);

}  // namespace freqlab
