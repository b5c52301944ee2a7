#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "freqlab/builder.hpp"
#include "freqlab/error.hpp"
#include "freqlab/frequency.hpp"
#include "test_support.hpp"

using namespace freqlab;

namespace {

// Brute-force window extrema of <X, r(n)> visiting every n.
std::pair<double, double> naive_window(const std::vector<Symbol>& s, std::size_t k, const Vec& x,
                                       std::uint64_t start) {
  std::vector<std::uint64_t> c(k, 0);
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t n = 1; n <= s.size(); ++n) {
    ++c[s[n - 1] - 1];
    if (n < start) continue;
    double v = 0.0;
    for (std::size_t i = 0; i < k; ++i) v += x[i] * static_cast<double>(c[i]) / static_cast<double>(n);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

Vec random_gamble(std::mt19937_64& g, std::size_t k) {
  Vec v(k);
  for (auto& x : v) x = testing::uniform(g, -3.0, 3.0);
  return v;
}

std::vector<Symbol> periodic(const std::vector<Symbol>& block, std::size_t n) {
  std::vector<Symbol> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = block[i % block.size()];
  return out;
}

// Two independent binary coordinates: a alternates every step, b every two
// steps, encoded as symbol 1 + a + 2b.
std::vector<Symbol> product_sequence(std::size_t n) {
  std::vector<Symbol> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<Symbol>(1 + (i % 2) + 2 * ((i / 2) % 2));
  return out;
}

// Binary de Bruijn sequence of order m (Lyndon word concatenation).
std::vector<Symbol> de_bruijn(int m) {
  std::vector<int> a(static_cast<std::size_t>(m) + 1, 0);
  std::vector<Symbol> out;
  auto rec = [&](auto&& self, int t, int p) -> void {
    if (t > m) {
      if (m % p == 0)
        for (int j = 1; j <= p; ++j) out.push_back(static_cast<Symbol>(a[j] + 1));
    } else {
      a[t] = a[t - p];
      self(self, t + 1, p);
      for (int j = a[t - p] + 1; j < 2; ++j) {
        a[t] = j;
        self(self, t + 1, t);
      }
    }
  };
  rec(rec, 1, 1);
  return out;
}

}  // namespace

TEST_CASE("relative frequency and running average examples") {
  CHECK(relative_frequency(testing::from_symbols(3, {1}), 1).vec() == Vec{1, 0, 0});
  CHECK(relative_frequency(testing::from_symbols(2, {1, 2, 1, 1}), 4).vec() == Vec{0.75, 0.25});
  const auto d = relative_frequency(von_mises_doubling(10), 3);
  CHECK(d[0] == doctest::Approx(2.0 / 3.0));
  CHECK(d[1] == doctest::Approx(1.0 / 3.0));

  const auto ra = running_average(testing::from_symbols(2, {1, 2}), Gamble{{2.0, -2.0}});
  CHECK(ra == std::vector<double>{2.0, 0.0});
  for (double v : running_average(von_mises_doubling(100), Gamble::constant(2, 0.7)))
    CHECK(v == doctest::Approx(0.7).epsilon(1e-15));
  const auto seq = testing::from_symbols(3, {1, 3, 3, 2, 1, 3});
  const Event a(3, {1, 3});
  const auto ind = running_average(seq, Gamble::indicator(a));
  for (std::uint64_t n = 1; n <= seq.size(); ++n) {
    const auto c = seq.counts(n);
    CHECK(ind[n - 1] == doctest::Approx(static_cast<double>(c[0] + c[2]) / static_cast<double>(n)));
  }
}

TEST_CASE("running average is linear in the counts") {
  auto g = testing::make_rng(30);
  for (int t = 0; t < 50; ++t) {
    const std::size_t k = 2 + t % 5;
    const auto s = testing::random_symbols(g, k, 500);
    const auto seq = testing::from_symbols(k, s);
    const Vec x = random_gamble(g, k);
    const auto ra = running_average(seq, Gamble{x});
    std::vector<std::uint64_t> c(k, 0);
    for (std::size_t n = 1; n <= s.size(); ++n) {
      ++c[s[n - 1] - 1];
      double v = 0.0;
      for (std::size_t j = 0; j < k; ++j) v += x[j] * static_cast<double>(c[j]) / static_cast<double>(n);
      REQUIRE(std::abs(ra[n - 1] - v) <= 1e-12);
    }
  }
}

TEST_CASE("tail window policy") {
  CHECK(TailPolicy{}.start_index(100) == 50);
  CHECK(TailPolicy{}.start_index(1) == 1);
  CHECK(TailPolicy::fraction(0.0).start_index(10) == 1);
  CHECK(TailPolicy::fraction(1.0).start_index(10) == 10);
  CHECK(TailPolicy::fixed_start(7).start_index(10) == 7);
  CHECK_THROWS_AS(TailPolicy::fixed_start(11).start_index(10), Error);

  const std::vector<double> flat(40, 0.25);
  CHECK(limsup_estimate(flat, TailPolicy{}) == 0.25);
  CHECK(liminf_estimate(flat, TailPolicy{}) == 0.25);

  // 1 - 1/n increases to 1
  std::vector<double> inc(1000);
  for (std::size_t i = 0; i < inc.size(); ++i) inc[i] = 1.0 - 1.0 / static_cast<double>(i + 1);
  const auto start = TailPolicy{}.start_index(inc.size());
  CHECK(std::abs(limsup_estimate(inc, TailPolicy{}) - 1.0) <= 2.0 / static_cast<double>(start));
  CHECK(liminf_estimate(inc, TailPolicy{}) == inc[start - 1]);
  CHECK_THROWS_AS(limsup_estimate(std::vector<double>{}, TailPolicy{}), Error);
}

TEST_CASE("prevision window matches brute force") {
  auto g = testing::make_rng(31);
  for (int t = 0; t < 200; ++t) {
    const std::size_t k = 2 + t % 4;
    // long runs exercise the run-end shortcut
    std::vector<Symbol> s;
    std::uniform_int_distribution<int> sym(1, static_cast<int>(k)), len(1, 30);
    while (s.size() < 600) s.insert(s.end(), static_cast<std::size_t>(len(g)), static_cast<Symbol>(sym(g)));
    const auto seq = testing::from_symbols(k, s);
    const Vec x = random_gamble(g, k);
    const TailPolicy pol = TailPolicy::fraction(testing::uniform(g, 0.0, 0.9));
    const auto w = prevision_window(seq, Gamble{x}, pol);
    const auto [lo, hi] = naive_window(s, k, x, pol.start_index(s.size()));
    CHECK(w.liminf == doctest::Approx(lo).epsilon(1e-12));
    CHECK(w.limsup == doctest::Approx(hi).epsilon(1e-12));
    CHECK(w.start == pol.start_index(s.size()));
    CHECK(w.end == s.size());
    CHECK(w.argmin >= w.start);
    CHECK(w.argmax <= w.end);
  }
}

TEST_CASE("estimator properties: conjugacy, bounds, monotonicity, normalization") {
  auto g = testing::make_rng(32);
  for (int t = 0; t < 200; ++t) {
    const std::size_t k = 2 + t % 4;
    const auto seq = testing::from_symbols(k, testing::random_symbols(g, k, 300));
    const Gamble x{random_gamble(g, k)};
    Gamble y = x;
    for (auto& v : y.values) v += testing::uniform(g, 0.0, 1.0);
    const TailPolicy pol;
    CHECK(lower_prevision_estimate(seq, x, pol) == -upper_prevision_estimate(seq, -x, pol));
    const double up = upper_prevision_estimate(seq, x, pol);
    CHECK(up <= x.sup() + 1e-15);
    CHECK(up >= x.inf() - 1e-15);
    CHECK(up <= upper_prevision_estimate(seq, y, pol));
    CHECK(upper_probability_estimate(seq, Event::all(k), pol) == 1.0);
    CHECK(lower_probability_estimate(seq, Event::all(k), pol) == 1.0);
    CHECK(upper_probability_estimate(seq, Event::none(k), pol) == 0.0);

    std::vector<Symbol> members;
    for (Symbol s = 1; s <= k; ++s)
      if (g() % 2) members.push_back(s);
    const Event a(k, members);
    CHECK(probability_window(seq, a, pol).width == probability_window(seq, a.complement(), pol).width);
    CHECK(upper_probability_estimate(seq, a, pol) ==
          doctest::Approx(upper_prevision_estimate(seq, Gamble::indicator(a), pol)).epsilon(1e-15));
  }
}

TEST_CASE("periodic sequence is precise") {
  const auto seq = testing::from_symbols(2, periodic({1, 2}, 10000));
  const TailPolicy pol;
  const double start = static_cast<double>(pol.start_index(seq.size()));
  const Gamble x{{1.0, 0.0}};
  CHECK(std::abs(upper_prevision_estimate(seq, x, pol) - 0.5) <= 1.0 / start);
  CHECK(std::abs(lower_prevision_estimate(seq, x, pol) - 0.5) <= 1.0 / start);
}

TEST_CASE("two-vertex polytope sequence: upper prevision is the linear maximum") {
  const SimplexPoint p1({0.5, 0.3, 0.2}), p2({0.25, 0.35, 0.4});
  const auto c = construct_polytope_boundary({p1, p2}, {VSchedule::constant(2), TSchedule::sqrt()},
                                             {0, 1'000'000});
  // each segment doubles n, so the window has to reach back over a full cycle
  const TailPolicy pol = TailPolicy::fraction(0.2);
  auto g = testing::make_rng(33);
  for (int t = 0; t < 20; ++t) {
    const Gamble x{random_gamble(g, 3)};
    const double oracle = std::max(dot(x.values, p1.vec()), dot(x.values, p2.vec()));
    CHECK(std::abs(upper_prevision_estimate(c.sequence, x, pol) - oracle) <= 0.02);
  }
}

TEST_CASE("conditional frequency examples") {
  const auto seq = testing::from_symbols(3, {1, 2, 3, 2});
  const auto cf = conditional_frequency(seq, Event(3, {2, 3}));
  CHECK(cf.first_occurrence == 2);
  CHECK(cf.probability(Event(3, {2}), 4) == doctest::Approx(2.0 / 3.0));
  CHECK(cf.probability(Event(3, {1}), 1) == doctest::Approx(1.0 / 3.0));
  CHECK(cf.at(1).vec() == SimplexPoint::uniform(3).vec());

  const auto custom = conditional_frequency(seq, Event(3, {2}), SimplexPoint({0.0, 0.0, 1.0}));
  CHECK(custom.at(1).vec() == Vec{0, 0, 1});

  // A and B occur once, together
  std::vector<Symbol> s(200, 1);
  s[10] = 2;
  const auto once = testing::from_symbols(2, s);
  const Event b(2, {2});
  CHECK(conditional_upper_prevision_estimate(once, Gamble::indicator(b), b, TailPolicy{}) == 1.0);
  CHECK(conditional_lower_prevision_estimate(once, Gamble::indicator(b), b, TailPolicy{}) == 1.0);

  try {
    conditional_frequency(testing::from_symbols(3, {1, 1}), Event(3, {3}));
    FAIL("expected NeverOccurred");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NeverOccurred);
  }
}

TEST_CASE("conditional frequencies are probability vectors") {
  auto g = testing::make_rng(34);
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = 2 + t % 4;
    const auto s = testing::random_symbols(g, k, 120);
    const auto seq = testing::from_symbols(k, s);
    const Event b(k, {s[60]});
    const auto cf = conditional_frequency(seq, b);
    for (std::uint64_t n = 1; n <= seq.size(); ++n) {
      const auto p = cf.at(n);
      double sum = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        REQUIRE(p[i] >= 0.0);
        sum += p[i];
      }
      REQUIRE(std::abs(sum - 1.0) <= 1e-12);
      if (n >= cf.first_occurrence) REQUIRE(p[s[60] - 1] == 1.0);
    }
  }
}

TEST_CASE("conditional prevision estimates") {
  auto g = testing::make_rng(35);
  const auto seq = testing::from_symbols(3, testing::random_symbols(g, 3, 500));
  const Event b(3, {1, 3});
  CHECK(conditional_upper_prevision_estimate(seq, Gamble::constant(3, 4.5), b, TailPolicy{}) ==
        doctest::Approx(4.5).epsilon(1e-15));
  const Gamble x{{1.0, -2.0, 0.5}};
  CHECK(conditional_upper_prevision_estimate(seq, x, Event::all(3), TailPolicy{}) ==
        doctest::Approx(upper_prevision_estimate(seq, x, TailPolicy{})).epsilon(1e-14));

  // periodic: P(A | B) = P(A and B) / P(B)
  const auto per = testing::from_symbols(4, periodic({1, 2, 2, 3, 4, 4, 4}, 70000));
  const Event a(4, {2, 3}), bb(4, {1, 2, 4});
  const double target = 2.0 / 6.0;
  const TailPolicy pol;
  const double start = static_cast<double>(pol.start_index(per.size()));
  CHECK(std::abs(conditional_upper_prevision_estimate(per, Gamble::indicator(a), bb, pol) - target) <= 2.0 / start);
  CHECK(std::abs(conditional_lower_prevision_estimate(per, Gamble::indicator(a), bb, pol) - target) <= 2.0 / start);
}

TEST_CASE("irrelevance checks") {
  auto g = testing::make_rng(36);
  const auto rnd = testing::from_symbols(3, testing::random_symbols(g, 3, 400));
  const auto r = irrelevance_check(rnd, Event::all(3), Event(3, {2}), TailPolicy{}, 0.01);
  CHECK(r.irrelevant);
  CHECK(r.gap == 0.0);

  // independent coordinates: counting oracle gives P(A|B) = P(A) = 1/2
  const auto prod = testing::from_symbols(4, product_sequence(40000));
  const Event a(4, {2, 4}), b(4, {3, 4});
  const auto ind = independence_check(prod, a, b, TailPolicy{}, 0.01);
  CHECK(ind.independent);
  CHECK(ind.b_to_a.gap <= 0.01);
  CHECK(ind.a_to_b.gap <= 0.01);

  // A occurs exactly when B does
  const auto tied = testing::from_symbols(3, periodic({1, 2, 3}, 3000));
  const auto t = irrelevance_check(tied, Event(3, {1}), Event(3, {1}), TailPolicy{}, 0.01);
  CHECK_FALSE(t.irrelevant);
  CHECK(t.upper_conditional == 1.0);
  CHECK(t.gap == doctest::Approx(1.0 - t.upper_unconditional));
  CHECK(t.gap >= 0.6);
}

TEST_CASE("gamble irrelevance") {
  auto g = testing::make_rng(37);
  const auto seq = testing::from_symbols(3, testing::random_symbols(g, 3, 600));
  const auto c = gamble_irrelevance_check(seq, Gamble::constant(3, 1.0), Gamble{{0, 1, 2}}, TailPolicy{}, 0.01);
  CHECK(c.irrelevant);
  CHECK(c.max_gap == 0.0);

  const Gamble id{{1, 2, 3}};
  const auto same = gamble_irrelevance_check(seq, id, id, TailPolicy{}, 0.01);
  CHECK_FALSE(same.irrelevant);
  CHECK(same.max_gap >= 0.5);

  // X reads the first coordinate, Y the second
  const auto prod = testing::from_symbols(4, product_sequence(40000));
  const Gamble x{{0, 1, 0, 1}}, y{{-1, -1, 2, 2}};
  const auto p = gamble_irrelevance_check(prod, x, y, TailPolicy{}, 0.01);
  CHECK(p.irrelevant);
  CHECK(p.max_gap <= 0.01);
  CHECK(p.pairs_checked > 0);
}

TEST_CASE("place selection") {
  const auto alt = testing::from_symbols(2, periodic({1, 2}, 2000));
  const std::vector<Event> fam{Event(2, {1})};
  const auto all = selection_subsequence(alt, SelectionRule::from_mask(std::vector<bool>(2000, true)), fam,
                                         TailPolicy{}, 0.01);
  CHECK(all.subsequence.to_vector() == alt.to_vector());
  CHECK(all.gaps.at(0).gap == 0.0);
  CHECK(all.admissible);

  const auto even = selection_subsequence(alt, SelectionRule::periodic(2, 0), fam, TailPolicy{}, 0.01);
  CHECK(even.subsequence.size() == 1000);
  CHECK(even.gaps.at(0).selected.limsup == 1.0);
  CHECK(even.gaps.at(0).gap == doctest::Approx(0.5).epsilon(1e-3));
  CHECK_FALSE(even.admissible);

  // after_symbol(1) on a repeated de Bruijn cycle, checked against direct selection
  const auto db = de_bruijn(10);
  const auto s = periodic(db, db.size() * 20);
  const auto seq = testing::from_symbols(2, s);
  const auto rep = selection_subsequence(seq, SelectionRule::after_symbol(1), fam, TailPolicy{}, 0.01);
  std::vector<Symbol> oracle;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i - 1] == 1) oracle.push_back(s[i]);
  CHECK(rep.subsequence.to_vector() == oracle);
  CHECK(rep.gaps.at(0).gap <= 0.01);
  CHECK(rep.admissible);

  try {
    const auto ones = testing::from_symbols(2, std::vector<Symbol>(10, 1));
    selection_subsequence(ones, SelectionRule::after_symbol(2), fam, TailPolicy{}, 0.01);
    FAIL("expected EmptySelection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptySelection);
  }
}

TEST_CASE("cluster point estimation") {
  std::vector<Symbol> s(100, 2);
  s.insert(s.end(), 100000, 1);
  const auto tail = cluster_point_estimate(testing::from_symbols(2, s), TailPolicy{}, 0.05);
  CHECK(tail.size() == 1);

  // every tail point lies within eps of a center, and centers are eps apart
  const auto d = von_mises_doubling(1u << 16);
  const double eps = 0.05;
  const auto centers = cluster_point_estimate(d, TailPolicy{}, eps);
  REQUIRE_FALSE(centers.empty());
  const std::uint64_t start = TailPolicy{}.start_index(d.size());
  d.walk(start, d.size(), [&](std::uint64_t n, std::span<const std::uint64_t> c, Symbol) {
    const Vec p{static_cast<double>(c[0]) / n, static_cast<double>(c[1]) / n};
    double best = INFINITY;
    for (const auto& q : centers) best = std::min(best, distance(p, q.coords()));
    REQUIRE(best <= eps + 1e-12);
  });
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (std::size_t j = i + 1; j < centers.size(); ++j)
      CHECK(distance(centers[i].coords(), centers[j].coords()) > eps);
  double lo = 1.0, hi = 0.0;
  for (const auto& q : centers) lo = std::min(lo, q[1]), hi = std::max(hi, q[1]);
  // the frequency of symbol 2 oscillates between 1/3 and 1/2
  CHECK(std::abs(lo - 1.0 / 3.0) <= eps);
  CHECK(std::abs(hi - 0.5) <= eps);
}

TEST_CASE("tail hull visits run ends only but matches the full hull") {
  auto g = testing::make_rng(38);
  for (int t = 0; t < 30; ++t) {
    std::vector<Symbol> s;
    std::uniform_int_distribution<int> sym(1, 3), len(1, 50);
    while (s.size() < 3000) s.insert(s.end(), static_cast<std::size_t>(len(g)), static_cast<Symbol>(sym(g)));
    const auto seq = testing::from_symbols(3, s);
    const auto hull = tail_hull(seq, TailPolicy{});
    std::vector<Point2> pts;
    std::vector<std::uint64_t> c(3, 0);
    const auto start = TailPolicy{}.start_index(s.size());
    for (std::size_t n = 1; n <= s.size(); ++n) {
      ++c[s[n - 1] - 1];
      if (n < start) continue;
      const Vec p{static_cast<double>(c[0]) / n, static_cast<double>(c[1]) / n, static_cast<double>(c[2]) / n};
      pts.push_back(ternary_projection(p));
    }
    CHECK(polygon_area(hull) == doctest::Approx(polygon_area(convex_hull_2d(pts))).epsilon(1e-9));
  }
  CHECK_THROWS_AS(tail_hull(von_mises_doubling(10), TailPolicy{}), Error);
}

TEST_CASE("system of precision") {
  auto g = testing::make_rng(39);
  const auto seq = testing::from_symbols(3, testing::random_symbols(g, 3, 100));
  const std::vector<Event> trivial{Event::none(3), Event::all(3)};
  const auto r = precision_system(seq, trivial, TailPolicy{}, 0.01);
  CHECK(r.precise.size() == 2);
  CHECK(r.entries[0].window.width == 0.0);

  const auto d = von_mises_doubling(1u << 20);
  const std::vector<Event> singles{Event(2, {1}), Event(2, {2})};
  CHECK(precision_system(d, singles, TailPolicy{}, 0.1).precise.empty());

  const auto ce = pre_dynkin_counterexample(1u << 16);
  std::vector<Event> evens;
  for (Symbol s = 2; s <= 12; s += 2) {
    evens.emplace_back(ce.k(), std::initializer_list<Symbol>{s});
  }
  const auto pr = precision_system(ce, evens, TailPolicy{}, 0.01);
  CHECK(pr.precise.size() == evens.size());
}

TEST_CASE("decomposition of relative frequencies is exact") {
  auto g = testing::make_rng(40);
  for (int t = 0; t < 300; ++t) {
    const std::size_t k = 2 + t % 5;
    const auto s = testing::random_symbols(g, k, 400);
    const auto seq = testing::from_symbols(k, s);
    const std::uint64_t n = 1 + g() % 399;
    const std::uint64_t m = 1 + g() % (400 - n);
    const auto shifted = testing::from_symbols(k, std::vector<Symbol>(s.begin() + n, s.end()));
    const auto a = seq.counts(n), b = seq.counts(n + m), c = shifted.counts(m);
    for (std::size_t i = 0; i < k; ++i) REQUIRE(b[i] == a[i] + c[i]);
  }
}
