#pragma once

#include <bit>
#include <cstdint>
#include <cstddef>
#include <span>
#include <vector>

namespace unitals {

// Contiguous rows x cols bit matrix. Rows are 64-bit word aligned so whole
// rows can be combined with AND/OR and popcounted.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows),
        cols_(cols),
        words_(cols == 0 ? 1 : (cols + 63) / 64),
        bits_(rows * words_, 0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t words_per_row() const noexcept { return words_; }

  bool get(std::size_t r, std::size_t c) const {
    return (bits_[r * words_ + c / 64] >> (c % 64)) & 1;
  }
  void set(std::size_t r, std::size_t c) {
    bits_[r * words_ + c / 64] |= std::uint64_t{1} << (c % 64);
  }
  void reset(std::size_t r, std::size_t c) {
    bits_[r * words_ + c / 64] &= ~(std::uint64_t{1} << (c % 64));
  }

  std::span<const std::uint64_t> row(std::size_t r) const {
    return {bits_.data() + r * words_, words_};
  }
  std::span<std::uint64_t> row(std::size_t r) {
    return {bits_.data() + r * words_, words_};
  }

  std::size_t row_popcount(std::size_t r) const {
    std::size_t n = 0;
    for (std::uint64_t w : row(r)) n += std::popcount(w);
    return n;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0, words_ = 0;
  std::vector<std::uint64_t> bits_;
};

inline std::size_t popcount_and(std::span<const std::uint64_t> a,
                                std::span<const std::uint64_t> b) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += std::popcount(a[i] & b[i]);
  return n;
}

inline std::size_t popcount_and_andnot(std::span<const std::uint64_t> a,
                                       std::span<const std::uint64_t> b,
                                       std::span<const std::uint64_t> excl) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    n += std::popcount(a[i] & b[i] & ~excl[i]);
  return n;
}

// Calls fn(index) for every set bit of the word span, ascending.
template <class Fn>
void for_each_bit(std::span<const std::uint64_t> words, Fn&& fn) {
  for (std::size_t w = 0; w < words.size(); ++w) {
    std::uint64_t x = words[w];
    while (x) {
      fn(w * 64 + static_cast<std::size_t>(std::countr_zero(x)));
      x &= x - 1;
    }
  }
}

// Scratch row for composing row expressions before iterating.
class BitRow {
 public:
  explicit BitRow(std::size_t words) : words_(words, 0) {}
  void assign_and(std::span<const std::uint64_t> a,
                  std::span<const std::uint64_t> b) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] = a[i] & b[i];
  }
  void and_with(std::span<const std::uint64_t> a) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= a[i];
  }
  void andnot_with(std::span<const std::uint64_t> a) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~a[i];
  }
  std::span<const std::uint64_t> words() const { return words_; }
  std::size_t popcount() const {
    std::size_t n = 0;
    for (std::uint64_t w : words_) n += std::popcount(w);
    return n;
  }

 private:
  std::vector<std::uint64_t> words_;
};

}  // namespace unitals
