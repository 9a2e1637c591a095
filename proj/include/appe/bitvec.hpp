#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace appe {

// Packed bit vector used for message logs in transcripts.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t count) : size_(count), bytes_((count + 7) / 8, 0) {}

  std::size_t size() const { return size_; }

  void push_back(std::uint8_t bit) {
    if (size_ % 8 == 0) bytes_.push_back(0);
    if (bit & 1u) bytes_[size_ / 8] |= static_cast<std::uint8_t>(1u << (size_ % 8));
    ++size_;
  }

  std::uint8_t get(std::size_t i) const {
    if (i >= size_) throw std::out_of_range("BitVec::get");
    return (bytes_[i / 8] >> (i % 8)) & 1u;
  }

  void set(std::size_t i, std::uint8_t bit) {
    if (i >= size_) throw std::out_of_range("BitVec::set");
    const std::uint8_t mask = static_cast<std::uint8_t>(1u << (i % 8));
    if (bit & 1u)
      bytes_[i / 8] |= mask;
    else
      bytes_[i / 8] &= static_cast<std::uint8_t>(~mask);
  }

  std::string to_hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes_.size() * 2);
    for (std::uint8_t b : bytes_) {
      out.push_back(digits[b >> 4]);
      out.push_back(digits[b & 0xf]);
    }
    return out;
  }

  bool operator==(const BitVec& other) const {
    return size_ == other.size_ && bytes_ == other.bytes_;
  }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint8_t> bytes_;
};

}  // namespace appe
