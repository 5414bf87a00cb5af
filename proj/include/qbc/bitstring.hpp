#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "qbc/errors.hpp"

namespace qbc {

/// Classical n-bit register, n <= 24. Qubit 1 is the most significant bit of
/// the basis index, so "00101" has index 5.
class Bitstring {
 public:
  static constexpr int kMaxBits = 24;

  Bitstring() = default;

  Bitstring(int size, std::uint32_t index) : size_(size), index_(index) {
    if (size < 0 || size > kMaxBits) {
      throw InputError("bitstring length " + std::to_string(size) + " outside [0, 24]");
    }
    if (size < 32 && (index >> size) != 0) {
      throw InputError("basis index " + std::to_string(index) + " does not fit in " +
                       std::to_string(size) + " bits");
    }
  }

  static Bitstring zeros(int size) { return Bitstring(size, 0); }

  static Bitstring parse(std::string_view text) {
    if (text.size() > static_cast<std::size_t>(kMaxBits)) {
      throw InputError("bitstring longer than 24 bits");
    }
    std::uint32_t index = 0;
    for (char c : text) {
      if (c != '0' && c != '1') {
        throw InputError("bitstring contains non-binary character '" + std::string(1, c) + "'");
      }
      index = (index << 1) | static_cast<std::uint32_t>(c == '1');
    }
    return Bitstring(static_cast<int>(text.size()), index);
  }

  int size() const { return size_; }
  std::uint32_t index() const { return index_; }

  /// Bit of qubit q, 1-based.
  bool bit(int q) const {
    check_qubit(q);
    return ((index_ >> (size_ - q)) & 1u) != 0;
  }

  Bitstring flipped(int q) const {
    check_qubit(q);
    return Bitstring(size_, index_ ^ (1u << (size_ - q)));
  }

  std::string to_string() const {
    std::string out(static_cast<std::size_t>(size_), '0');
    for (int q = 1; q <= size_; ++q) {
      if (bit(q)) out[static_cast<std::size_t>(q - 1)] = '1';
    }
    return out;
  }

  friend Bitstring operator^(const Bitstring& a, const Bitstring& b) {
    if (a.size_ != b.size_) {
      throw InputError("xor of bitstrings with lengths " + std::to_string(a.size_) + " and " +
                       std::to_string(b.size_));
    }
    return Bitstring(a.size_, a.index_ ^ b.index_);
  }

  friend bool operator==(const Bitstring&, const Bitstring&) = default;

 private:
  void check_qubit(int q) const {
    if (q < 1 || q > size_) {
      throw InputError("bit " + std::to_string(q) + " outside [1, " + std::to_string(size_) + "]");
    }
  }

  int size_ = 0;
  std::uint32_t index_ = 0;
};

}  // namespace qbc
