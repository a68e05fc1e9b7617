#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

namespace sparsemap {

// Dense symmetric adjacency over up to a few thousand vertices.
// Rows are word-packed so neighbourhood scans vectorize.
class BitMatrix {
 public:
  BitMatrix() = default;
  explicit BitMatrix(int n) : n_(n), words_((n + 63) / 64), bits_(std::size_t(n) * words_, 0) {}

  int size() const { return n_; }

  void set(int a, int b) {
    bits_[std::size_t(a) * words_ + b / 64] |= (uint64_t(1) << (b % 64));
    bits_[std::size_t(b) * words_ + a / 64] |= (uint64_t(1) << (a % 64));
  }
  bool get(int a, int b) const {
    return (bits_[std::size_t(a) * words_ + b / 64] >> (b % 64)) & 1;
  }
  const uint64_t* row(int a) const { return bits_.data() + std::size_t(a) * words_; }
  int words() const { return words_; }

  int degree(int a) const {
    int d = 0;
    const uint64_t* r = row(a);
    for (int w = 0; w < words_; ++w) d += __builtin_popcountll(r[w]);
    return d;
  }

  template <typename F>
  void for_each_neighbor(int a, F&& f) const {
    const uint64_t* r = row(a);
    for (int w = 0; w < words_; ++w) {
      uint64_t bits = r[w];
      while (bits) {
        int b = w * 64 + __builtin_ctzll(bits);
        bits &= bits - 1;
        f(b);
      }
    }
  }

 private:
  int n_ = 0;
  int words_ = 0;
  std::vector<uint64_t> bits_;
};

}  // namespace sparsemap
