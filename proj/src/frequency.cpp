#include "freqlab/frequency.hpp"

#include <algorithm>
#include <cmath>

#include "freqlab/error.hpp"

namespace freqlab {

using u128 = unsigned __int128;
using i128 = __int128;

Event::Event(std::size_t k, std::span<const Symbol> members) : in_(k, 0) {
  for (Symbol s : members) {
    if (s < 1 || s > k)
      throw Error(ErrorCode::OutOfRange, "event member " + std::to_string(s) + " outside [1, " +
                                             std::to_string(k) + "]");
    in_[s - 1] = 1;
  }
}

Event::Event(std::size_t k, std::initializer_list<Symbol> members)
    : Event(k, std::span<const Symbol>(members.begin(), members.size())) {}

Event Event::all(std::size_t k) {
  Event e;
  e.in_.assign(k, 1);
  return e;
}

Event Event::none(std::size_t k) {
  Event e;
  e.in_.assign(k, 0);
  return e;
}

Event Event::complement() const {
  Event e = *this;
  for (auto& b : e.in_) b = !b;
  return e;
}

Event Event::intersect(const Event& other) const {
  if (other.k() != k()) throw Error(ErrorCode::DimensionMismatch, "event alphabet mismatch");
  Event e = *this;
  for (std::size_t i = 0; i < k(); ++i) e.in_[i] = in_[i] && other.in_[i];
  return e;
}

Event Event::unite(const Event& other) const {
  if (other.k() != k()) throw Error(ErrorCode::DimensionMismatch, "event alphabet mismatch");
  Event e = *this;
  for (std::size_t i = 0; i < k(); ++i) e.in_[i] = in_[i] || other.in_[i];
  return e;
}

bool Event::disjoint(const Event& other) const { return intersect(other).empty(); }

bool Event::empty() const {
  return std::none_of(in_.begin(), in_.end(), [](char b) { return b != 0; });
}

std::vector<Symbol> Event::members() const {
  std::vector<Symbol> out;
  for (std::size_t i = 0; i < in_.size(); ++i)
    if (in_[i]) out.push_back(static_cast<Symbol>(i + 1));
  return out;
}

Gamble Gamble::indicator(const Event& a) {
  Gamble g{Vec(a.k(), 0.0)};
  for (std::size_t i = 0; i < a.k(); ++i)
    if (a.contains(static_cast<Symbol>(i + 1))) g.values[i] = 1.0;
  return g;
}

double Gamble::sup() const { return *std::max_element(values.begin(), values.end()); }
double Gamble::inf() const { return *std::min_element(values.begin(), values.end()); }

Gamble Gamble::operator-() const {
  Gamble g = *this;
  for (double& v : g.values) v = -v;
  return g;
}

std::uint64_t TailPolicy::start_index(std::uint64_t N) const {
  if (N == 0) throw Error(ErrorCode::EmptyWindow, "empty sequence");
  if (mode == Mode::FixedStart) {
    if (start < 1 || start > N)
      throw Error(ErrorCode::EmptyWindow, "window start " + std::to_string(start) +
                                              " outside [1, " + std::to_string(N) + "]");
    return start;
  }
  if (!(beta >= 0.0 && beta <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "tail fraction must be in [0, 1]");
  const auto s = static_cast<std::uint64_t>(std::floor(beta * static_cast<double>(N)));
  return std::clamp<std::uint64_t>(s, 1, N);
}

namespace {

void check_gamble(const SymbolSequence& seq, const Gamble& x) {
  if (x.k() != seq.k()) throw Error(ErrorCode::DimensionMismatch, "gamble alphabet mismatch");
  for (double v : x.values)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "gamble values must be finite");
}

void check_event(const SymbolSequence& seq, const Event& a) {
  if (a.k() != seq.k()) throw Error(ErrorCode::DimensionMismatch, "event alphabet mismatch");
}

double weighted(const Vec& x, std::span<const std::uint64_t> c) {
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) s += x[j] * static_cast<double>(c[j]);
  return s;
}

// Evaluates f at the first and last position of every constant-symbol run
// in [from, to]. Running averages of any fixed gamble are monotone inside a
// run, so their window extrema are attained at these points.
template <typename F>
void visit_run_ends(const SymbolSequence& seq, std::uint64_t from, std::uint64_t to, F&& f) {
  std::vector<std::uint64_t> c = seq.counts(from - 1);
  seq.for_each_run(from, to, [&](std::uint64_t first, std::uint64_t last, Symbol s) {
    ++c[s - 1];
    f(first, std::span<const std::uint64_t>(c));
    if (last > first) {
      c[s - 1] += last - first;
      f(last, std::span<const std::uint64_t>(c));
    }
  });
}

struct Frac {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
};

// a < b
bool less(const Frac& a, const Frac& b) {
  return static_cast<u128>(a.num) * b.den < static_cast<u128>(b.num) * a.den;
}

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    const u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

double to_double(const Frac& f) {
  return static_cast<double>(static_cast<long double>(f.num) / static_cast<long double>(f.den));
}

// hi - lo, reduced before rounding so equal rationals give equal doubles.
double exact_difference(const Frac& hi, const Frac& lo) {
  const i128 num = static_cast<i128>(static_cast<u128>(hi.num) * lo.den) -
                   static_cast<i128>(static_cast<u128>(lo.num) * hi.den);
  u128 den = static_cast<u128>(hi.den) * lo.den;
  const bool neg = num < 0;
  u128 mag = neg ? static_cast<u128>(-num) : static_cast<u128>(num);
  const u128 g = gcd128(mag, den);
  if (g > 1) {
    mag /= g;
    den /= g;
  }
  const long double v = static_cast<long double>(mag) / static_cast<long double>(den);
  return static_cast<double>(neg ? -v : v);
}

WindowEstimate finish_series(double lo, double hi, std::uint64_t start, std::uint64_t end,
                             std::uint64_t argmin, std::uint64_t argmax) {
  WindowEstimate w;
  w.liminf = lo;
  w.limsup = hi;
  w.start = start;
  w.end = end;
  w.argmin = argmin;
  w.argmax = argmax;
  w.width = hi - lo;
  return w;
}

std::uint64_t first_occurrence(const SymbolSequence& seq, const Event& b) {
  std::uint64_t found = 0;
  if (seq.empty()) return 0;
  seq.for_each_run(1, seq.size(), [&](std::uint64_t first, std::uint64_t, Symbol s) {
    if (found == 0 && b.contains(s)) found = first;
  });
  return found;
}

}  // namespace

SimplexPoint relative_frequency(const SymbolSequence& seq, std::uint64_t n) {
  return seq.frequency(n);
}

std::vector<double> running_average(const SymbolSequence& seq, const Gamble& x) {
  check_gamble(seq, x);
  std::vector<double> out;
  out.reserve(seq.size());
  seq.walk(1, seq.size(), [&](std::uint64_t n, std::span<const std::uint64_t> c, Symbol) {
    out.push_back(weighted(x.values, c) / static_cast<double>(n));
  });
  return out;
}

double limsup_estimate(std::span<const double> series, const TailPolicy& policy) {
  const std::uint64_t start = policy.start_index(series.size());
  return *std::max_element(series.begin() + static_cast<std::ptrdiff_t>(start - 1), series.end());
}

double liminf_estimate(std::span<const double> series, const TailPolicy& policy) {
  const std::uint64_t start = policy.start_index(series.size());
  return *std::min_element(series.begin() + static_cast<std::ptrdiff_t>(start - 1), series.end());
}

WindowEstimate prevision_window(const SymbolSequence& seq, const Gamble& x,
                                const TailPolicy& policy) {
  check_gamble(seq, x);
  const std::uint64_t N = seq.size();
  const std::uint64_t start = policy.start_index(N);
  double lo = 0.0, hi = 0.0;
  std::uint64_t argmin = 0, argmax = 0;
  visit_run_ends(seq, start, N, [&](std::uint64_t n, std::span<const std::uint64_t> c) {
    const double v = weighted(x.values, c) / static_cast<double>(n);
    if (argmax == 0 || v > hi) hi = v, argmax = n;
    if (argmin == 0 || v < lo) lo = v, argmin = n;
  });
  return finish_series(lo, hi, start, N, argmin, argmax);
}

double upper_prevision_estimate(const SymbolSequence& seq, const Gamble& x,
                                const TailPolicy& policy) {
  return prevision_window(seq, x, policy).limsup;
}

double lower_prevision_estimate(const SymbolSequence& seq, const Gamble& x,
                                const TailPolicy& policy) {
  return prevision_window(seq, x, policy).liminf;
}

WindowEstimate probability_window(const SymbolSequence& seq, const Event& a,
                                  const TailPolicy& policy) {
  check_event(seq, a);
  const std::uint64_t N = seq.size();
  const std::uint64_t start = policy.start_index(N);
  Frac lo, hi;
  std::uint64_t argmin = 0, argmax = 0;
  visit_run_ends(seq, start, N, [&](std::uint64_t n, std::span<const std::uint64_t> c) {
    Frac f{0, n};
    for (std::size_t j = 0; j < c.size(); ++j)
      if (a.contains(static_cast<Symbol>(j + 1))) f.num += c[j];
    if (argmax == 0 || less(hi, f)) hi = f, argmax = n;
    if (argmin == 0 || less(f, lo)) lo = f, argmin = n;
  });
  WindowEstimate w = finish_series(to_double(lo), to_double(hi), start, N, argmin, argmax);
  w.width = exact_difference(hi, lo);
  return w;
}

double upper_probability_estimate(const SymbolSequence& seq, const Event& a,
                                  const TailPolicy& policy) {
  return probability_window(seq, a, policy).limsup;
}

double lower_probability_estimate(const SymbolSequence& seq, const Event& a,
                                  const TailPolicy& policy) {
  return probability_window(seq, a, policy).liminf;
}

SimplexPoint ConditionalFrequency::at(std::uint64_t n) const {
  if (n < 1 || n > seq->size()) throw Error(ErrorCode::OutOfRange, "index out of range");
  if (n < first_occurrence) return prior;
  auto c = seq->counts(n);
  for (std::size_t j = 0; j < c.size(); ++j)
    if (!condition.contains(static_cast<Symbol>(j + 1))) c[j] = 0;
  return SimplexPoint::from_counts(c);
}

double ConditionalFrequency::probability(const Event& a, std::uint64_t n) const {
  if (a.k() != condition.k()) throw Error(ErrorCode::DimensionMismatch, "event alphabet mismatch");
  if (n < 1 || n > seq->size()) throw Error(ErrorCode::OutOfRange, "index out of range");
  if (n < first_occurrence) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.k(); ++j)
      if (a.contains(static_cast<Symbol>(j + 1))) s += prior[j];
    return s;
  }
  const auto c = seq->counts(n);
  std::uint64_t ab = 0, b = 0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    const auto s = static_cast<Symbol>(j + 1);
    if (condition.contains(s)) {
      b += c[j];
      if (a.contains(s)) ab += c[j];
    }
  }
  return static_cast<double>(ab) / static_cast<double>(b);
}

ConditionalFrequency conditional_frequency(const SymbolSequence& seq, const Event& b,
                                           std::optional<SimplexPoint> prior) {
  check_event(seq, b);
  const std::uint64_t nb = first_occurrence(seq, b);
  if (nb == 0) throw Error(ErrorCode::NeverOccurred, "conditioning event never occurs");
  SimplexPoint p0 = prior ? *prior : SimplexPoint::uniform(seq.k());
  if (p0.dim() != seq.k()) throw Error(ErrorCode::DimensionMismatch, "prior alphabet mismatch");
  return ConditionalFrequency{&seq, b, nb, std::move(p0)};
}

WindowEstimate conditional_prevision_window(const SymbolSequence& seq, const Gamble& x,
                                            const Event& b, const TailPolicy& policy) {
  check_gamble(seq, x);
  check_event(seq, b);
  const std::uint64_t N = seq.size();
  const std::uint64_t nb = first_occurrence(seq, b);
  if (nb == 0) throw Error(ErrorCode::NeverOccurred, "conditioning event never occurs");
  const std::uint64_t start = std::max(policy.start_index(N), nb);
  Vec xb(x.values);
  for (std::size_t j = 0; j < xb.size(); ++j)
    if (!b.contains(static_cast<Symbol>(j + 1))) xb[j] = 0.0;
  double lo = 0.0, hi = 0.0;
  std::uint64_t argmin = 0, argmax = 0;
  visit_run_ends(seq, start, N, [&](std::uint64_t n, std::span<const std::uint64_t> c) {
    std::uint64_t cb = 0;
    for (std::size_t j = 0; j < c.size(); ++j)
      if (b.contains(static_cast<Symbol>(j + 1))) cb += c[j];
    const double v = weighted(xb, c) / static_cast<double>(cb);
    if (argmax == 0 || v > hi) hi = v, argmax = n;
    if (argmin == 0 || v < lo) lo = v, argmin = n;
  });
  return finish_series(lo, hi, start, N, argmin, argmax);
}

double conditional_upper_prevision_estimate(const SymbolSequence& seq, const Gamble& x,
                                            const Event& b, const TailPolicy& policy) {
  return conditional_prevision_window(seq, x, b, policy).limsup;
}

double conditional_lower_prevision_estimate(const SymbolSequence& seq, const Gamble& x,
                                            const Event& b, const TailPolicy& policy) {
  return conditional_prevision_window(seq, x, b, policy).liminf;
}

IrrelevanceReport irrelevance_check(const SymbolSequence& seq, const Event& a,
                                    const Event& b, const TailPolicy& policy, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  IrrelevanceReport r;
  r.upper_conditional =
      conditional_upper_prevision_estimate(seq, Gamble::indicator(a), b, policy);
  r.upper_unconditional = upper_probability_estimate(seq, a, policy);
  r.gap = std::abs(r.upper_conditional - r.upper_unconditional);
  r.irrelevant = r.gap <= tol;
  return r;
}

IndependenceReport independence_check(const SymbolSequence& seq, const Event& a,
                                      const Event& b, const TailPolicy& policy, double tol) {
  IndependenceReport r;
  r.b_to_a = irrelevance_check(seq, a, b, policy, tol);
  r.a_to_b = irrelevance_check(seq, b, a, policy, tol);
  r.independent = r.b_to_a.irrelevant && r.a_to_b.irrelevant;
  return r;
}

namespace {

std::vector<Event> threshold_events(const Gamble& x) {
  Vec levels = x.values;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::vector<Event> out;
  for (double a : levels) {
    std::vector<Symbol> m;
    for (std::size_t j = 0; j < x.k(); ++j)
      if (x.values[j] <= a) m.push_back(static_cast<Symbol>(j + 1));
    out.emplace_back(x.k(), m);
  }
  return out;
}

}  // namespace

GambleIrrelevanceReport gamble_irrelevance_check(const SymbolSequence& seq, const Gamble& x,
                                                 const Gamble& y, const TailPolicy& policy,
                                                 double tol) {
  check_gamble(seq, x);
  check_gamble(seq, y);
  Vec xs = x.values, ys = y.values;
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  const auto ex = threshold_events(x);
  const auto ey = threshold_events(y);
  const auto& total = seq.total_counts();

  GambleIrrelevanceReport r;
  bool first = true;
  for (std::size_t bi = 0; bi < ey.size(); ++bi) {
    std::uint64_t occ = 0;
    for (Symbol s : ey[bi].members()) occ += total[s - 1];
    if (occ == 0) continue;
    for (std::size_t ai = 0; ai < ex.size(); ++ai) {
      const auto rep = irrelevance_check(seq, ex[ai], ey[bi], policy, tol);
      ++r.pairs_checked;
      if (first || rep.gap > r.max_gap) {
        r.max_gap = rep.gap;
        r.x_threshold = xs[ai];
        r.y_threshold = ys[bi];
        first = false;
      }
    }
  }
  r.irrelevant = r.max_gap <= tol;
  return r;
}

SelectionReport selection_subsequence(const SymbolSequence& seq, const SelectionRule& rule,
                                      std::span<const Event> family, const TailPolicy& policy,
                                      double tol) {
  if (rule.kind == SelectionRule::Kind::Periodic && rule.period == 0)
    throw Error(ErrorCode::InvalidArgument, "selection period must be positive");
  SelectionReport rep{SymbolSequence(seq.k(), seq.width()), {}, true};
  Symbol prev = 0;
  seq.walk(1, seq.size(), [&](std::uint64_t n, std::span<const std::uint64_t>, Symbol s) {
    const std::uint64_t i = n - 1;
    bool take = false;
    switch (rule.kind) {
      case SelectionRule::Kind::Mask:
        take = i < rule.mask.size() && rule.mask[i];
        break;
      case SelectionRule::Kind::Periodic:
        take = i % rule.period == rule.offset;
        break;
      case SelectionRule::Kind::AfterSymbol:
        take = i > 0 && prev == rule.symbol;
        break;
    }
    if (take) rep.subsequence.push_back(s);
    prev = s;
  });
  if (rep.subsequence.empty()) throw Error(ErrorCode::EmptySelection, "rule selects no index");
  for (const Event& a : family) {
    SelectionGap g;
    g.event = a;
    g.full = probability_window(seq, a, policy);
    g.selected = probability_window(rep.subsequence, a, policy);
    g.gap = std::max(std::abs(g.full.liminf - g.selected.liminf),
                     std::abs(g.full.limsup - g.selected.limsup));
    if (g.gap > tol) rep.admissible = false;
    rep.gaps.push_back(std::move(g));
  }
  return rep;
}

PointSet cluster_point_estimate(const SymbolSequence& seq, const TailPolicy& policy, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  const std::uint64_t N = seq.size();
  const std::uint64_t start = policy.start_index(N);
  const std::size_t k = seq.k();
  std::vector<Vec> centers;
  std::vector<std::vector<std::uint64_t>> center_counts;
  std::size_t last_hit = 0;
  Vec r(k);
  const double eps2 = eps * eps;
  auto near = [&](const Vec& c) {
    double d2 = 0.0;
    for (std::size_t j = 0; j < k; ++j) d2 += (c[j] - r[j]) * (c[j] - r[j]);
    return d2 <= eps2;
  };
  seq.walk(start, N, [&](std::uint64_t n, std::span<const std::uint64_t> c, Symbol) {
    for (std::size_t j = 0; j < k; ++j)
      r[j] = static_cast<double>(c[j]) / static_cast<double>(n);
    // consecutive points are close, so the previous hit is tried first
    if (!centers.empty() && near(centers[last_hit])) return;
    for (std::size_t i = 0; i < centers.size(); ++i)
      if (near(centers[i])) {
        last_hit = i;
        return;
      }
    centers.push_back(r);
    center_counts.emplace_back(c.begin(), c.end());
    last_hit = centers.size() - 1;
  });
  PointSet out;
  for (const auto& c : center_counts) out.push_back(SimplexPoint::from_counts(c));
  return out;
}

std::vector<Point2> tail_hull(const SymbolSequence& seq, const TailPolicy& policy) {
  if (seq.k() != 3) throw Error(ErrorCode::DimensionMismatch, "tail hull needs k = 3");
  const std::uint64_t N = seq.size();
  const std::uint64_t start = policy.start_index(N);
  std::vector<Point2> pts;
  double r[3];
  visit_run_ends(seq, start, N, [&](std::uint64_t n, std::span<const std::uint64_t> c) {
    for (std::size_t j = 0; j < 3; ++j) r[j] = static_cast<double>(c[j]) / static_cast<double>(n);
    pts.push_back(ternary_projection(r));
    // keep memory bounded on literal-heavy sequences
    if (pts.size() > (1u << 20)) pts = convex_hull_2d(std::move(pts));
  });
  return convex_hull_2d(std::move(pts));
}

PrecisionReport precision_system(const SymbolSequence& seq, std::span<const Event> family,
                                 const TailPolicy& policy, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  PrecisionReport rep;
  for (const Event& a : family) {
    PrecisionEntry e;
    e.event = a;
    e.window = probability_window(seq, a, policy);
    e.precise = e.window.width <= tol;
    if (e.precise) rep.precise.push_back(a);
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

}  // namespace freqlab
