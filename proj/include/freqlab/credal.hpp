#pragma once

// Finite credal sets: envelope upper/lower previsions, coherence checks and
// the generalized Bayes rule.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "freqlab/frequency.hpp"
#include "freqlab/simplex.hpp"

namespace freqlab {

/// Nonempty finite set of points of the simplex; its convex hull is the
/// represented set of probabilities.
class CredalSet {
 public:
  explicit CredalSet(PointSet points);

  std::size_t k() const { return points_.front().dim(); }
  std::size_t size() const { return points_.size(); }
  const PointSet& points() const { return points_; }
  const SimplexPoint& operator[](std::size_t i) const { return points_[i]; }

 private:
  PointSet points_;
};

/// E_p(X) = sum_i p_i X_i.
double natural_extension(const SimplexPoint& p, const Gamble& x);

struct UpperPrevisionReport {
  double value = 0.0;
  std::size_t argmax = 0;  // for lower previsions, the minimizing point
  Vec expectations;
};

UpperPrevisionReport upper_prevision(const CredalSet& c, const Gamble& x);
/// -upper(-X); value is the minimum of the per-point expectations.
UpperPrevisionReport lower_prevision(const CredalSet& c, const Gamble& x);
double upper_probability(const CredalSet& c, const Event& a);
double lower_probability(const CredalSet& c, const Event& a);

/// Any real functional on gambles, viewed as a candidate upper prevision.
using UpperFunctional = std::function<double(const Gamble&)>;

UpperFunctional envelope_functional(const CredalSet& c);

struct CoherenceSample {
  Gamble x;
  Gamble y;
  double lambda = 1.0;  // >= 0
  double c = 0.0;
};

enum class Axiom { None, Bounds, Homogeneity, Subadditivity, Translation, Monotonicity };
const char* to_string(Axiom a);

struct CoherenceReport {
  bool coherent = true;
  Axiom violated = Axiom::None;
  std::size_t sample = 0;  // index of the violating sample
  double lhs = 0.0;        // the two sides of the failed relation
  double rhs = 0.0;
  std::string witness;
  std::size_t checked = 0;
};

/// Checks per sample, stopping at the first violation:
///   R(X) <= sup X;  R(lambda X) = lambda R(X);  R(X + Y) <= R(X) + R(Y);
///   R(X + c) = R(X) + c;  R(X) <= R(max(X, Y)), and R(X) <= R(Y) when X <= Y.
/// Equalities are tested at tol * max(1, |rhs|).
CoherenceReport coherence_check(const UpperFunctional& r, std::span<const CoherenceSample> samples,
                                double tol = 1e-10);

/// Threshold below which a point's mass on B counts as zero.
inline constexpr double kGbrMassThreshold = 1e-6;

/// max over points of E_p(X chi_B) / p(B). Throws ZeroLowerProbability if
/// some point has p(B) <= threshold.
double gbr_credal(const CredalSet& c, const Gamble& x, const Event& b,
                  double threshold = kGbrMassThreshold);

struct GbrRootResult {
  double value = 0.0;
  int iterations = 0;
};

/// Root of g(alpha) = R(chi_B (X - alpha)) by bisection on [min X, max X],
/// i.e. inf{alpha : g(alpha) <= 0}. Throws NoBracket if g does not change
/// sign there or g is flat beyond max X (lower probability of B near zero).
GbrRootResult gbr_root(const UpperFunctional& r, const Gamble& x, const Event& b);

}  // namespace freqlab
