#include "freqlab/credal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "freqlab/error.hpp"

namespace freqlab {

CredalSet::CredalSet(PointSet points) : points_(std::move(points)) {
  if (points_.empty()) throw Error(ErrorCode::InvalidArgument, "credal set must be nonempty");
  const std::size_t k = points_.front().dim();
  for (const auto& p : points_)
    if (p.dim() != k) throw Error(ErrorCode::DimensionMismatch, "credal points differ in dimension");
}

double natural_extension(const SimplexPoint& p, const Gamble& x) {
  if (p.dim() != x.k()) throw Error(ErrorCode::DimensionMismatch, "gamble and point dimensions differ");
  return dot(p.coords(), x.values);
}

UpperPrevisionReport upper_prevision(const CredalSet& c, const Gamble& x) {
  UpperPrevisionReport r;
  r.expectations.reserve(c.size());
  for (const auto& p : c.points()) r.expectations.push_back(natural_extension(p, x));
  const auto it = std::max_element(r.expectations.begin(), r.expectations.end());
  r.value = *it;
  r.argmax = static_cast<std::size_t>(it - r.expectations.begin());
  return r;
}

UpperPrevisionReport lower_prevision(const CredalSet& c, const Gamble& x) {
  UpperPrevisionReport r = upper_prevision(c, -x);
  r.value = -r.value;
  for (double& e : r.expectations) e = -e;
  return r;
}

double upper_probability(const CredalSet& c, const Event& a) {
  return upper_prevision(c, Gamble::indicator(a)).value;
}

double lower_probability(const CredalSet& c, const Event& a) {
  return lower_prevision(c, Gamble::indicator(a)).value;
}

UpperFunctional envelope_functional(const CredalSet& c) {
  return [c](const Gamble& x) { return upper_prevision(c, x).value; };
}

const char* to_string(Axiom a) {
  switch (a) {
    case Axiom::None: return "none";
    case Axiom::Bounds: return "UP1 bounds";
    case Axiom::Homogeneity: return "UP2 positive homogeneity";
    case Axiom::Subadditivity: return "UP3 subadditivity";
    case Axiom::Translation: return "UP4 translation equivariance";
    case Axiom::Monotonicity: return "UP5 monotonicity";
  }
  return "unknown";
}

namespace {

Gamble combine(const Gamble& a, const Gamble& b, double (*op)(double, double)) {
  Gamble g = a;
  for (std::size_t i = 0; i < g.k(); ++i) g.values[i] = op(a.values[i], b.values[i]);
  return g;
}

std::string show(const Gamble& g) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (std::size_t i = 0; i < g.k(); ++i) os << (i ? ", " : "") << g.values[i];
  os << ")";
  return os.str();
}

}  // namespace

CoherenceReport coherence_check(const UpperFunctional& r, std::span<const CoherenceSample> samples,
                                double tol) {
  CoherenceReport rep;
  auto fail = [&](Axiom a, std::size_t i, double lhs, double rhs, std::string w) {
    rep.coherent = false;
    rep.violated = a;
    rep.sample = i;
    rep.lhs = lhs;
    rep.rhs = rhs;
    rep.witness = std::move(w);
  };
  auto scaled = [tol](double v) { return tol * std::max(1.0, std::abs(v)); };

  for (std::size_t i = 0; i < samples.size(); ++i) {
    const CoherenceSample& s = samples[i];
    if (s.x.k() != s.y.k()) throw Error(ErrorCode::DimensionMismatch, "sample gambles differ in size");
    if (s.lambda < 0.0) throw Error(ErrorCode::InvalidArgument, "lambda must be nonnegative");
    ++rep.checked;
    const double rx = r(s.x);

    if (rx > s.x.sup() + tol) {
      fail(Axiom::Bounds, i, rx, s.x.sup(), "X = " + show(s.x));
      return rep;
    }

    Gamble lx = s.x;
    for (double& v : lx.values) v *= s.lambda;
    const double rlx = r(lx);
    if (std::abs(rlx - s.lambda * rx) > scaled(s.lambda * rx)) {
      std::ostringstream w;
      w << "X = " << show(s.x) << ", lambda = " << s.lambda;
      fail(Axiom::Homogeneity, i, rlx, s.lambda * rx, w.str());
      return rep;
    }

    const double ry = r(s.y);
    const double rxy = r(combine(s.x, s.y, [](double a, double b) { return a + b; }));
    if (rxy > rx + ry + scaled(rx + ry)) {
      fail(Axiom::Subadditivity, i, rxy, rx + ry, "X = " + show(s.x) + ", Y = " + show(s.y));
      return rep;
    }

    Gamble xc = s.x;
    for (double& v : xc.values) v += s.c;
    const double rxc = r(xc);
    if (std::abs(rxc - (rx + s.c)) > scaled(rx + s.c)) {
      std::ostringstream w;
      w << "X = " << show(s.x) << ", c = " << s.c;
      fail(Axiom::Translation, i, rxc, rx + s.c, w.str());
      return rep;
    }

    const Gamble upper = combine(s.x, s.y, [](double a, double b) { return std::max(a, b); });
    const double rup = r(upper);
    if (rx > rup + tol) {
      fail(Axiom::Monotonicity, i, rx, rup, "X = " + show(s.x) + ", max(X, Y) = " + show(upper));
      return rep;
    }
    bool dominated = true;
    for (std::size_t j = 0; j < s.x.k(); ++j) dominated = dominated && s.x.values[j] <= s.y.values[j];
    if (dominated && rx > ry + tol) {
      fail(Axiom::Monotonicity, i, rx, ry, "X = " + show(s.x) + ", Y = " + show(s.y));
      return rep;
    }
  }
  return rep;
}

double gbr_credal(const CredalSet& c, const Gamble& x, const Event& b, double threshold) {
  if (x.k() != c.k() || b.k() != c.k())
    throw Error(ErrorCode::DimensionMismatch, "gamble, event and credal set dimensions differ");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const SimplexPoint& p = c[i];
    double pb = 0.0, pxb = 0.0;
    for (std::size_t j = 0; j < c.k(); ++j)
      if (b.contains(static_cast<Symbol>(j + 1))) {
        pb += p[j];
        pxb += p[j] * x.values[j];
      }
    if (pb <= threshold)
      throw Error(ErrorCode::ZeroLowerProbability,
                  "point " + std::to_string(i) + " gives the conditioning event mass " +
                      std::to_string(pb));
    best = std::max(best, pxb / pb);
  }
  return best;
}

GbrRootResult gbr_root(const UpperFunctional& r, const Gamble& x, const Event& b) {
  if (x.k() != b.k()) throw Error(ErrorCode::DimensionMismatch, "gamble and event dimensions differ");
  const auto on_b = b.members();
  if (on_b.empty()) throw Error(ErrorCode::NoBracket, "conditioning on the empty event");

  const double first = x.values[on_b.front() - 1];
  if (std::all_of(on_b.begin(), on_b.end(), [&](Symbol s) { return x.values[s - 1] == first; }))
    return {first, 0};

  auto g = [&](double alpha) {
    Gamble h{Vec(x.k(), 0.0)};
    for (Symbol s : on_b) h.values[s - 1] = x.values[s - 1] - alpha;
    return r(h);
  };
  double lo = x.inf(), hi = x.sup();
  const double glo = g(lo), ghi = g(hi);
  if (glo < 0.0 || ghi > 0.0)
    throw Error(ErrorCode::NoBracket, "g does not change sign on [min X, max X]");
  if (g(hi + 1.0) > -1e-12)
    throw Error(ErrorCode::NoBracket, "g is flat beyond max X; lower probability of B is ~0");

  int it = 0;
  for (; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi || hi - lo <= 1e-13) break;
    if (g(mid) <= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return {0.5 * (lo + hi), it};
}

}  // namespace freqlab
