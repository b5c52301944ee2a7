#include <algorithm>

#include "doctest.h"
#include "freqlab/error.hpp"
#include "freqlab/sequence.hpp"
#include "test_support.hpp"

using namespace freqlab;

namespace {

// Applies a random mix of append operations to both a SymbolSequence and a
// plain vector.
std::pair<SymbolSequence, std::vector<Symbol>> random_build(std::mt19937_64& g, std::size_t k,
                                                            SymbolWidth w) {
  SymbolSequence seq(k, w);
  std::vector<Symbol> ref;
  std::uniform_int_distribution<int> op(0, 2), sym(1, static_cast<int>(k)), len(0, 40),
      reps(0, 30);
  for (int step = 0; step < 200; ++step) {
    switch (op(g)) {
      case 0: {
        const auto s = static_cast<Symbol>(sym(g));
        seq.push_back(s);
        ref.push_back(s);
        break;
      }
      case 1: {
        const auto s = static_cast<Symbol>(sym(g));
        const auto c = static_cast<std::uint64_t>(len(g));
        seq.append_run(s, c);
        ref.insert(ref.end(), c, s);
        break;
      }
      default: {
        std::vector<Symbol> block(static_cast<std::size_t>(1 + len(g) % 9));
        for (auto& s : block) s = static_cast<Symbol>(sym(g));
        const auto r = static_cast<std::uint64_t>(reps(g));
        seq.append_repeated(block, r);
        for (std::uint64_t i = 0; i < r; ++i) ref.insert(ref.end(), block.begin(), block.end());
      }
    }
  }
  return {std::move(seq), std::move(ref)};
}

}  // namespace

TEST_CASE("chunked storage matches a plain array") {
  auto g = testing::make_rng(10);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t k = 1 + trial % 6;
    const auto width = trial % 2 ? SymbolWidth::Compact8 : SymbolWidth::Wide16;
    auto [seq, ref] = random_build(g, k, width);
    REQUIRE(seq.size() == ref.size());
    CHECK(seq.to_vector() == ref);
    std::vector<std::uint64_t> c(k, 0);
    for (std::size_t n = 1; n <= ref.size(); ++n) {
      ++c[ref[n - 1] - 1];
      REQUIRE(seq.at(n) == ref[n - 1]);
      REQUIRE(seq.counts(n) == c);
    }
    CHECK(seq.total_counts() == c);
    CHECK(seq.counts(0) == std::vector<std::uint64_t>(k, 0));

    if (ref.empty()) continue;
    // walk from an arbitrary start
    const std::uint64_t from = 1 + ref.size() / 3;
    std::vector<std::uint64_t> expect = testing::tally(k, ref, from - 1);
    std::uint64_t next = from;
    seq.walk(from, ref.size(), [&](std::uint64_t n, std::span<const std::uint64_t> cc, Symbol s) {
      REQUIRE(n == next++);
      REQUIRE(s == ref[n - 1]);
      ++expect[s - 1];
      REQUIRE(std::equal(cc.begin(), cc.end(), expect.begin()));
    });
    CHECK(next == ref.size() + 1);

    // runs tile the range and are constant
    std::uint64_t cursor = from;
    seq.for_each_run(from, ref.size(), [&](std::uint64_t first, std::uint64_t last, Symbol s) {
      REQUIRE(first == cursor);
      REQUIRE(last >= first);
      for (std::uint64_t i = first; i <= last; ++i) REQUIRE(ref[i - 1] == s);
      cursor = last + 1;
    });
    CHECK(cursor == ref.size() + 1);
  }
}

TEST_CASE("long runs cost one chunk") {
  SymbolSequence seq(3);
  seq.append_run(1, 1'000'000'000'000ull);
  seq.append_run(1, 5);
  seq.append_run(2, 3'000'000'000'000ull);
  CHECK(seq.size() == 4'000'000'000'005ull);
  CHECK(seq.chunk_count() == 2);
  CHECK(seq.count(1, seq.size()) == 1'000'000'000'005ull);
  CHECK(seq.at(1'000'000'000'006ull) == 2);
  CHECK_THROWS_AS(seq.to_vector(), Error);
}

TEST_CASE("symbol and index errors") {
  SymbolSequence seq(2);
  CHECK_THROWS_AS(seq.push_back(0), Error);
  CHECK_THROWS_AS(seq.push_back(3), Error);
  seq.push_back(1);
  CHECK_THROWS_AS(seq.at(2), Error);
  CHECK_THROWS_AS(seq.frequency(0), Error);
  try {
    seq.frequency(5);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfRange);
  }
  CHECK_THROWS_AS(SymbolSequence(300, SymbolWidth::Compact8), Error);
  CHECK_THROWS_AS(SymbolSequence(0), Error);
}

TEST_CASE("frequency is the exact count ratio") {
  const auto seq = testing::from_symbols(2, {1, 2, 1, 1});
  CHECK(seq.frequency(4).vec() == Vec{0.75, 0.25});
  CHECK(seq.frequency(1).vec() == Vec{1.0, 0.0});
}
