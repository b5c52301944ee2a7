#pragma once

// Finite-prefix estimators over symbol sequences. Limits are replaced by the
// extrema of a tail window [start, N]; nothing here claims a true limit.

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "freqlab/sequence.hpp"
#include "freqlab/simplex.hpp"

namespace freqlab {

/// A subset of the outcome set [k].
class Event {
 public:
  Event() = default;
  /// Members are 1-based symbols.
  Event(std::size_t k, std::span<const Symbol> members);
  Event(std::size_t k, std::initializer_list<Symbol> members);

  static Event all(std::size_t k);
  static Event none(std::size_t k);

  std::size_t k() const { return in_.size(); }
  bool contains(Symbol s) const { return s >= 1 && s <= in_.size() && in_[s - 1]; }
  Event complement() const;
  Event intersect(const Event& other) const;
  Event unite(const Event& other) const;
  bool disjoint(const Event& other) const;
  bool empty() const;
  std::vector<Symbol> members() const;

  friend bool operator==(const Event&, const Event&) = default;

 private:
  std::vector<char> in_;
};

/// A bounded real function on [k].
struct Gamble {
  Vec values;

  std::size_t k() const { return values.size(); }
  static Gamble constant(std::size_t k, double c) { return {Vec(k, c)}; }
  static Gamble indicator(const Event& a);
  double sup() const;
  double inf() const;
  Gamble operator-() const;
};

struct TailPolicy {
  enum class Mode { Fraction, FixedStart };
  Mode mode = Mode::Fraction;
  double beta = 0.5;
  std::uint64_t start = 1;

  static TailPolicy fraction(double beta) { return {Mode::Fraction, beta, 1}; }
  static TailPolicy fixed_start(std::uint64_t n0) { return {Mode::FixedStart, 0.5, n0}; }
  /// Window start for a prefix of length N: max(1, floor(beta N)) or n0.
  std::uint64_t start_index(std::uint64_t N) const;
};

/// [liminf, limsup] surrogate over the window [start, end].
struct WindowEstimate {
  double liminf = 0.0;
  double limsup = 0.0;
  std::uint64_t start = 0;
  std::uint64_t end = 0;
  std::uint64_t argmin = 0;
  std::uint64_t argmax = 0;
  /// limsup - liminf; for events evaluated exactly from the extreme fractions.
  double width = 0.0;
};

SimplexPoint relative_frequency(const SymbolSequence& seq, std::uint64_t n);

/// Sigma_X(n) = <X, r^x(n)> for n = 1..N (element n-1 holds n).
std::vector<double> running_average(const SymbolSequence& seq, const Gamble& x);

/// Max / min of series over [start, N]; series[0] is n = 1. Throws
/// EmptyWindow if the window is empty.
double limsup_estimate(std::span<const double> series, const TailPolicy& policy);
double liminf_estimate(std::span<const double> series, const TailPolicy& policy);

/// Window extrema of the running average of X, evaluated in one pass.
WindowEstimate prevision_window(const SymbolSequence& seq, const Gamble& x,
                                const TailPolicy& policy);
double upper_prevision_estimate(const SymbolSequence& seq, const Gamble& x,
                                const TailPolicy& policy);
double lower_prevision_estimate(const SymbolSequence& seq, const Gamble& x,
                                const TailPolicy& policy);

/// Window extrema of the relative frequency of an event. Extrema are
/// selected in exact rational arithmetic so the window of A and of its
/// complement have identical width.
WindowEstimate probability_window(const SymbolSequence& seq, const Event& a,
                                  const TailPolicy& policy);
double upper_probability_estimate(const SymbolSequence& seq, const Event& a,
                                  const TailPolicy& policy);
double lower_probability_estimate(const SymbolSequence& seq, const Event& a,
                                  const TailPolicy& policy);

/// Relative frequencies conditioned on B. Before the first occurrence n_B of
/// B the value is the fallback prior.
struct ConditionalFrequency {
  const SymbolSequence* seq = nullptr;
  Event condition;
  std::uint64_t first_occurrence = 0;  // n_B
  SimplexPoint prior;

  /// P(. | B)(n) as a point of the simplex.
  SimplexPoint at(std::uint64_t n) const;
  /// P(A | B)(n); for n >= n_B the integer ratio count(A and B)/count(B).
  double probability(const Event& a, std::uint64_t n) const;
};

/// Throws NeverOccurred if B does not occur in the prefix.
ConditionalFrequency conditional_frequency(const SymbolSequence& seq, const Event& b,
                                           std::optional<SimplexPoint> prior = std::nullopt);

/// Window extrema of Sigma(X chi_B)(n) / Sigma(chi_B)(n) over n >= max(start, n_B).
WindowEstimate conditional_prevision_window(const SymbolSequence& seq, const Gamble& x,
                                            const Event& b, const TailPolicy& policy);
double conditional_upper_prevision_estimate(const SymbolSequence& seq, const Gamble& x,
                                            const Event& b, const TailPolicy& policy);
double conditional_lower_prevision_estimate(const SymbolSequence& seq, const Gamble& x,
                                            const Event& b, const TailPolicy& policy);

struct IrrelevanceReport {
  bool irrelevant = false;
  double gap = 0.0;
  double upper_conditional = 0.0;    // upper P(A | B)
  double upper_unconditional = 0.0;  // upper P(A)
};

/// B is irrelevant to A when |upper P(A|B) - upper P(A)| <= tol.
IrrelevanceReport irrelevance_check(const SymbolSequence& seq, const Event& a,
                                    const Event& b, const TailPolicy& policy, double tol);

struct IndependenceReport {
  bool independent = false;
  IrrelevanceReport b_to_a;  // B irrelevant to A
  IrrelevanceReport a_to_b;  // A irrelevant to B
};

IndependenceReport independence_check(const SymbolSequence& seq, const Event& a,
                                      const Event& b, const TailPolicy& policy, double tol);

struct GambleIrrelevanceReport {
  bool irrelevant = true;
  double max_gap = 0.0;
  double x_threshold = 0.0;  // violating (or worst) pair {X <= a}, {Y <= b}
  double y_threshold = 0.0;
  std::size_t pairs_checked = 0;
};

/// Irrelevance of Y to X over the threshold events {X <= a}, {Y <= b} for
/// all attained values a, b; pairs whose {Y <= b} never occurs are skipped.
GambleIrrelevanceReport gamble_irrelevance_check(const SymbolSequence& seq, const Gamble& x,
                                                 const Gamble& y, const TailPolicy& policy,
                                                 double tol);

/// A place-selection rule. Index i is 0-based; selection may depend only on
/// the index and on symbols before it.
struct SelectionRule {
  enum class Kind { Mask, Periodic, AfterSymbol };
  Kind kind = Kind::Mask;
  std::vector<bool> mask;
  std::uint64_t period = 1;
  std::uint64_t offset = 0;
  Symbol symbol = 1;

  static SelectionRule from_mask(std::vector<bool> m) { return {Kind::Mask, std::move(m), 1, 0, 1}; }
  static SelectionRule periodic(std::uint64_t p, std::uint64_t off) { return {Kind::Periodic, {}, p, off, 1}; }
  static SelectionRule after_symbol(Symbol s) { return {Kind::AfterSymbol, {}, 1, 0, s}; }
};

struct SelectionGap {
  Event event;
  WindowEstimate full;
  WindowEstimate selected;
  double gap = 0.0;  // max of the liminf and limsup discrepancies
};

struct SelectionReport {
  SymbolSequence subsequence;
  std::vector<SelectionGap> gaps;
  bool admissible = true;
};

/// Throws EmptySelection when no index is selected.
SelectionReport selection_subsequence(const SymbolSequence& seq, const SelectionRule& rule,
                                      std::span<const Event> family, const TailPolicy& policy,
                                      double tol);

/// Greedy eps-net over {r^x(n) : n in the tail window}, scanned by increasing n.
PointSet cluster_point_estimate(const SymbolSequence& seq, const TailPolicy& policy, double eps);

/// Convex hull (ternary coordinates) of {r^x(n) : n in the tail window} for
/// k = 3. Between run ends r^x moves along a straight line, so only run ends
/// are visited and the cost is linear in the number of runs.
std::vector<Point2> tail_hull(const SymbolSequence& seq, const TailPolicy& policy);

struct PrecisionEntry {
  Event event;
  WindowEstimate window;
  bool precise = false;
};

struct PrecisionReport {
  std::vector<PrecisionEntry> entries;
  std::vector<Event> precise;  // the estimated system of precision
};

/// Events of the family whose window width is at most tol.
PrecisionReport precision_system(const SymbolSequence& seq, std::span<const Event> family,
                                 const TailPolicy& policy, double tol);

}  // namespace freqlab
