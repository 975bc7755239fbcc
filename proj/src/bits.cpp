#include "mcp/bits.hpp"

#include <bit>

#include "mcp/errors.hpp"

namespace mcp {

int ceil_log2(std::uint64_t v) {
  if (v <= 1) return 0;
  return 64 - std::countl_zero(v - 1);
}

int floor_log2(std::uint64_t v) {
  if (v == 0) throw DomainError("floor_log2(0)");
  return 63 - std::countl_zero(v);
}

BitString::BitString(const std::string& zeros_and_ones) {
  for (char c : zeros_and_ones) {
    if (c != '0' && c != '1') {
      throw DomainError("BitString: expected only '0' and '1'");
    }
    bits_.push_back(c == '1');
  }
}

void BitString::write_uint(std::uint64_t v, int width) {
  for (int b = width - 1; b >= 0; --b) {
    bits_.push_back(b < 64 && ((v >> b) & 1u));
  }
}

void BitString::write_delta(std::uint64_t v) {
  if (v == 0) throw DomainError("Elias delta code needs v >= 1");
  const int n = floor_log2(v);
  const auto len = static_cast<std::uint64_t>(n + 1);
  const int l = floor_log2(len);
  for (int i = 0; i < l; ++i) bits_.push_back(false);
  write_uint(len, l + 1);
  write_uint(v, n);
}

int delta_length(std::uint64_t v) {
  if (v == 0) throw DomainError("Elias delta code needs v >= 1");
  const int n = floor_log2(v);
  return n + 2 * floor_log2(static_cast<std::uint64_t>(n + 1)) + 1;
}

void BitString::append(const BitString& other) {
  bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

bool BitString::is_proper_prefix_of(const BitString& other) const {
  if (bits_.size() >= other.bits_.size()) return false;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] != other.bits_[i]) return false;
  }
  return true;
}

std::string BitString::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (bool b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

std::vector<std::uint8_t> BitString::to_bytes() const {
  std::vector<std::uint8_t> out((bits_.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  }
  return out;
}

BitString BitString::from_bytes(const std::vector<std::uint8_t>& bytes,
                                std::size_t bit_count) {
  if (bit_count > bytes.size() * 8) {
    throw DecodeError("bit count exceeds payload size");
  }
  BitString s;
  for (std::size_t i = 0; i < bit_count; ++i) {
    s.bits_.push_back((bytes[i / 8] >> (7 - i % 8)) & 1u);
  }
  return s;
}

bool BitReader::read_bit() {
  if (pos_ >= bits_.size()) throw DecodeError("read past end of codeword");
  return bits_[pos_++];
}

std::uint64_t BitReader::read_uint(int width) {
  if (width > 64) throw DecodeError("field wider than 64 bits");
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) v = (v << 1) | (read_bit() ? 1u : 0u);
  return v;
}

std::uint64_t BitReader::read_delta() {
  int l = 0;
  while (!read_bit()) {
    if (++l > 6) throw DecodeError("malformed Elias delta prefix");
  }
  // The leading 1 of len has been consumed.
  std::uint64_t len = 1;
  for (int i = 0; i < l; ++i) len = (len << 1) | (read_bit() ? 1u : 0u);
  if (len > 64) throw DecodeError("Elias delta length exceeds 64");
  const int n = static_cast<int>(len) - 1;
  return (std::uint64_t{1} << n) | read_uint(n);
}

}  // namespace mcp
