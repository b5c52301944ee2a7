#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "freqlab/simplex.hpp"

namespace freqlab {

/// Symbols take values 1..k.
using Symbol = std::uint16_t;

enum class SymbolWidth { Compact8, Wide16 };

/// A finite prefix of a symbol sequence x : N -> [k].
///
/// Storage is a list of chunks, each a short block of symbols repeated some
/// number of times. Literal symbols accumulate into a single growing block,
/// single-symbol runs and the repeated blocks produced by the constructions
/// cost O(1) regardless of their length. Per-chunk starting counts plus
/// per-64-symbol checkpoints over the block pool give exact prefix counts in
/// O(k + 64) for any n, so sequences far longer than memory (the extreme
/// construction reaches 10^13 symbols) stay queryable.
class SymbolSequence {
 public:
  explicit SymbolSequence(std::size_t k, SymbolWidth width = SymbolWidth::Wide16);

  std::size_t k() const { return k_; }
  std::uint64_t size() const { return total_; }
  bool empty() const { return total_ == 0; }
  SymbolWidth width() const { return width_; }

  void push_back(Symbol s);
  void append_run(Symbol s, std::uint64_t count);
  void append_repeated(std::span<const Symbol> block, std::uint64_t reps);

  /// Symbol at 1-based position n.
  Symbol at(std::uint64_t n) const;

  /// Per-symbol counts over positions 1..n, n in [0, size()].
  std::vector<std::uint64_t> counts(std::uint64_t n) const;
  void counts_into(std::uint64_t n, std::span<std::uint64_t> out) const;
  std::uint64_t count(Symbol s, std::uint64_t n) const;
  const std::vector<std::uint64_t>& total_counts() const { return total_counts_; }

  /// r^x(n); n in [1, size()], else OutOfRange.
  SimplexPoint frequency(std::uint64_t n) const;

  /// Visits n = from..to in order with the running counts of positions 1..n
  /// and the symbol at n. Callback signature: (uint64 n, span<const uint64>
  /// counts, Symbol s). Requires 1 <= from <= to <= size().
  template <typename F>
  void walk(std::uint64_t from, std::uint64_t to, F&& f) const;

  /// Visits constant-symbol stretches [first, last] covering from..to in
  /// order (not necessarily maximal). Callback: (uint64 first, uint64 last,
  /// Symbol s).
  template <typename F>
  void for_each_run(std::uint64_t from, std::uint64_t to, F&& f) const;

  /// Materializes positions 1..size(); throws Overflow above max_len.
  std::vector<Symbol> to_vector(std::uint64_t max_len = (1ull << 32)) const;

  std::size_t chunk_count() const { return chunks_.size(); }

 private:
  struct Chunk {
    std::uint64_t start = 0;  // symbols preceding this chunk
    std::uint64_t reps = 0;
    std::uint64_t offset = 0;  // block position in the pool
    std::uint64_t len = 0;     // block length
    std::uint64_t end() const { return start + reps * len; }
  };

  void check_symbol(Symbol s) const;
  void pool_push(Symbol s);
  Symbol pool_get(std::uint64_t i) const {
    return width_ == SymbolWidth::Compact8
               ? bytes_[i]
               : static_cast<Symbol>(bytes_[2 * i] | (bytes_[2 * i + 1] << 8));
  }
  // Adds counts of pool[begin, end) into out.
  void pool_range_counts(std::uint64_t begin, std::uint64_t end,
                         std::span<std::uint64_t> out, std::uint64_t scale) const;
  void pool_prefix(std::uint64_t i, std::span<std::uint64_t> out, std::uint64_t scale,
                   bool subtract) const;
  std::size_t find_chunk(std::uint64_t n) const;  // chunk containing position n >= 1
  void new_chunk(std::uint64_t offset, std::uint64_t len, std::uint64_t reps);
  bool last_is_open_literal() const;

  std::size_t k_;
  SymbolWidth width_;
  std::uint64_t total_ = 0;
  std::vector<std::uint64_t> total_counts_;

  std::vector<std::uint8_t> bytes_;
  std::uint64_t pool_size_ = 0;
  std::vector<std::uint64_t> pool_running_;      // counts over the whole pool
  std::vector<std::uint64_t> pool_checkpoints_;  // k per 64 pool symbols

  std::vector<Chunk> chunks_;
  std::vector<std::uint64_t> chunk_start_counts_;  // k per chunk
  bool literal_open_ = false;
};

template <typename F>
void SymbolSequence::walk(std::uint64_t from, std::uint64_t to, F&& f) const {
  if (from < 1 || to > total_ || from > to) return;
  std::vector<std::uint64_t> c = counts(from - 1);
  std::uint64_t n = from;
  for (std::size_t ci = find_chunk(from); ci < chunks_.size() && n <= to; ++ci) {
    const Chunk& ch = chunks_[ci];
    std::uint64_t pos = n - ch.start - 1;  // 0-based offset inside the chunk
    while (n <= to && pos < ch.reps * ch.len) {
      const Symbol s = pool_get(ch.offset + pos % ch.len);
      ++c[s - 1];
      f(n, std::span<const std::uint64_t>(c), s);
      ++n;
      ++pos;
    }
  }
}

template <typename F>
void SymbolSequence::for_each_run(std::uint64_t from, std::uint64_t to, F&& f) const {
  if (from < 1 || to > total_ || from > to) return;
  std::uint64_t n = from;
  for (std::size_t ci = find_chunk(from); ci < chunks_.size() && n <= to; ++ci) {
    const Chunk& ch = chunks_[ci];
    if (ch.len == 1) {
      const std::uint64_t last = std::min(to, ch.end());
      f(n, last, pool_get(ch.offset));
      n = last + 1;
      continue;
    }
    std::uint64_t pos = n - ch.start - 1;
    while (n <= to && pos < ch.reps * ch.len) {
      const Symbol s = pool_get(ch.offset + pos % ch.len);
      std::uint64_t first = n;
      // extend while the symbol repeats inside this chunk
      while (n + 1 <= to && pos + 1 < ch.reps * ch.len &&
             pool_get(ch.offset + (pos + 1) % ch.len) == s) {
        ++n;
        ++pos;
      }
      f(first, n, s);
      ++n;
      ++pos;
    }
  }
}

}  // namespace freqlab
