#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mcp {

// ceil(log2(v)) for v >= 1; 0 for v <= 1.
int ceil_log2(std::uint64_t v);
// floor(log2(v)) for v >= 1.
int floor_log2(std::uint64_t v);

class BitString {
 public:
  BitString() = default;
  explicit BitString(const std::string& zeros_and_ones);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  bool operator[](std::size_t i) const { return bits_[i]; }

  void push_back(bool b) { bits_.push_back(b); }
  // Appends the low `width` bits of v, most significant first.
  void write_uint(std::uint64_t v, int width);
  // Elias delta code of v >= 1.
  void write_delta(std::uint64_t v);
  void append(const BitString& other);

  // True when *this is a proper prefix of other.
  bool is_proper_prefix_of(const BitString& other) const;
  std::string to_string() const;
  // Byte-padded, most significant bit first.
  std::vector<std::uint8_t> to_bytes() const;
  static BitString from_bytes(const std::vector<std::uint8_t>& bytes,
                              std::size_t bit_count);

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<bool> bits_;
};

// Length in bits of the Elias delta code of v >= 1.
int delta_length(std::uint64_t v);

class BitReader {
 public:
  explicit BitReader(const BitString& bits) : bits_(bits) {}

  bool read_bit();
  std::uint64_t read_uint(int width);
  std::uint64_t read_delta();

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return bits_.size() - pos_; }

 private:
  const BitString& bits_;
  std::size_t pos_ = 0;
};

}  // namespace mcp
