#include "freqlab/sequence.hpp"

#include <algorithm>
#include <string>

#include "freqlab/error.hpp"

namespace freqlab {

namespace {
constexpr std::uint64_t kCheckpointStride = 64;
constexpr std::uint64_t kInlineRun = 16;
}  // namespace

SymbolSequence::SymbolSequence(std::size_t k, SymbolWidth width)
    : k_(k), width_(width), total_counts_(k, 0), pool_running_(k, 0) {
  if (k < 1 || k > 65535)
    throw Error(ErrorCode::InvalidArgument, "alphabet size must be in [1, 65535]");
  if (width == SymbolWidth::Compact8 && k > 255)
    throw Error(ErrorCode::InvalidArgument, "compact 8-bit storage needs k <= 255");
}

void SymbolSequence::check_symbol(Symbol s) const {
  if (s < 1 || s > k_)
    throw Error(ErrorCode::OutOfRange,
                "symbol " + std::to_string(s) + " outside [1, " + std::to_string(k_) + "]");
}

void SymbolSequence::pool_push(Symbol s) {
  if (pool_size_ % kCheckpointStride == 0)
    pool_checkpoints_.insert(pool_checkpoints_.end(), pool_running_.begin(),
                             pool_running_.end());
  if (width_ == SymbolWidth::Compact8) {
    bytes_.push_back(static_cast<std::uint8_t>(s));
  } else {
    bytes_.push_back(static_cast<std::uint8_t>(s & 0xff));
    bytes_.push_back(static_cast<std::uint8_t>(s >> 8));
  }
  ++pool_running_[s - 1];
  ++pool_size_;
}

void SymbolSequence::pool_prefix(std::uint64_t i, std::span<std::uint64_t> out,
                                 std::uint64_t scale, bool subtract) const {
  const std::uint64_t j = i / kCheckpointStride;
  const std::uint64_t ncp = pool_checkpoints_.size() / k_;
  std::uint64_t from;
  if (j < ncp) {
    const std::uint64_t* cp = pool_checkpoints_.data() + j * k_;
    for (std::size_t s = 0; s < k_; ++s)
      out[s] = subtract ? out[s] - scale * cp[s] : out[s] + scale * cp[s];
    from = j * kCheckpointStride;
  } else {
    // i == pool_size_ on a stride boundary whose checkpoint is not yet pushed
    for (std::size_t s = 0; s < k_; ++s)
      out[s] = subtract ? out[s] - scale * pool_running_[s] : out[s] + scale * pool_running_[s];
    return;
  }
  for (std::uint64_t p = from; p < i; ++p) {
    const Symbol s = pool_get(p);
    if (subtract)
      out[s - 1] -= scale;
    else
      out[s - 1] += scale;
  }
}

void SymbolSequence::pool_range_counts(std::uint64_t begin, std::uint64_t end,
                                       std::span<std::uint64_t> out,
                                       std::uint64_t scale) const {
  if (end - begin <= 2 * kCheckpointStride) {
    for (std::uint64_t p = begin; p < end; ++p) out[pool_get(p) - 1] += scale;
    return;
  }
  pool_prefix(end, out, scale, false);
  pool_prefix(begin, out, scale, true);
}

void SymbolSequence::new_chunk(std::uint64_t offset, std::uint64_t len, std::uint64_t reps) {
  Chunk ch;
  ch.start = total_;
  ch.reps = reps;
  ch.offset = offset;
  ch.len = len;
  chunks_.push_back(ch);
  chunk_start_counts_.insert(chunk_start_counts_.end(), total_counts_.begin(),
                             total_counts_.end());
  if (len > 0) {
    pool_range_counts(offset, offset + len, total_counts_, reps);
    total_ += reps * len;
  }
}

bool SymbolSequence::last_is_open_literal() const { return literal_open_; }

void SymbolSequence::push_back(Symbol s) {
  check_symbol(s);
  if (!literal_open_) {
    new_chunk(pool_size_, 0, 1);
    literal_open_ = true;
  }
  pool_push(s);
  ++chunks_.back().len;
  ++total_;
  ++total_counts_[s - 1];
}

void SymbolSequence::append_run(Symbol s, std::uint64_t count) {
  check_symbol(s);
  if (count == 0) return;
  if (total_ > UINT64_MAX - count) throw Error(ErrorCode::Overflow, "sequence length overflow");
  if (!literal_open_ && !chunks_.empty() && chunks_.back().len == 1 &&
      pool_get(chunks_.back().offset) == s) {
    chunks_.back().reps += count;
    total_ += count;
    total_counts_[s - 1] += count;
    return;
  }
  if (count <= kInlineRun) {
    for (std::uint64_t i = 0; i < count; ++i) push_back(s);
    return;
  }
  literal_open_ = false;
  pool_push(s);
  new_chunk(pool_size_ - 1, 1, count);
}

void SymbolSequence::append_repeated(std::span<const Symbol> block, std::uint64_t reps) {
  if (block.empty() || reps == 0) return;
  for (Symbol s : block) check_symbol(s);
  if (block.size() == 1) return append_run(block[0], reps);
  if (reps > (UINT64_MAX - total_) / block.size())
    throw Error(ErrorCode::Overflow, "sequence length overflow");
  if (reps == 1 || (literal_open_ && reps * block.size() <= kCheckpointStride)) {
    for (std::uint64_t r = 0; r < reps; ++r)
      for (Symbol s : block) push_back(s);
    return;
  }
  literal_open_ = false;
  const std::uint64_t offset = pool_size_;
  for (Symbol s : block) pool_push(s);
  new_chunk(offset, block.size(), reps);
}

std::size_t SymbolSequence::find_chunk(std::uint64_t n) const {
  auto it = std::partition_point(chunks_.begin(), chunks_.end(),
                                 [n](const Chunk& c) { return c.end() < n; });
  return static_cast<std::size_t>(it - chunks_.begin());
}

Symbol SymbolSequence::at(std::uint64_t n) const {
  if (n < 1 || n > total_) throw Error(ErrorCode::OutOfRange, "position out of range");
  const Chunk& ch = chunks_[find_chunk(n)];
  return pool_get(ch.offset + (n - ch.start - 1) % ch.len);
}

void SymbolSequence::counts_into(std::uint64_t n, std::span<std::uint64_t> out) const {
  if (out.size() != k_) throw Error(ErrorCode::DimensionMismatch, "counts buffer size");
  if (n > total_) throw Error(ErrorCode::OutOfRange, "prefix length out of range");
  std::fill(out.begin(), out.end(), 0);
  if (n == 0) return;
  const std::size_t ci = find_chunk(n);
  const Chunk& ch = chunks_[ci];
  std::copy_n(chunk_start_counts_.begin() + static_cast<std::ptrdiff_t>(ci * k_), k_,
              out.begin());
  const std::uint64_t offset = n - ch.start;
  const std::uint64_t full = offset / ch.len;
  const std::uint64_t rem = offset % ch.len;
  if (full > 0) pool_range_counts(ch.offset, ch.offset + ch.len, out, full);
  if (rem > 0) pool_range_counts(ch.offset, ch.offset + rem, out, 1);
}

std::vector<std::uint64_t> SymbolSequence::counts(std::uint64_t n) const {
  std::vector<std::uint64_t> c(k_);
  counts_into(n, c);
  return c;
}

std::uint64_t SymbolSequence::count(Symbol s, std::uint64_t n) const {
  check_symbol(s);
  return counts(n)[s - 1];
}

SimplexPoint SymbolSequence::frequency(std::uint64_t n) const {
  if (n < 1 || n > total_) throw Error(ErrorCode::OutOfRange, "frequency index out of range");
  return SimplexPoint::from_counts(counts(n));
}

std::vector<Symbol> SymbolSequence::to_vector(std::uint64_t max_len) const {
  if (total_ > max_len)
    throw Error(ErrorCode::Overflow, "sequence of length " + std::to_string(total_) +
                                         " too long to materialize");
  std::vector<Symbol> out;
  out.reserve(total_);
  for (const Chunk& ch : chunks_)
    for (std::uint64_t r = 0; r < ch.reps; ++r)
      for (std::uint64_t i = 0; i < ch.len; ++i) out.push_back(pool_get(ch.offset + i));
  return out;
}

}  // namespace freqlab
