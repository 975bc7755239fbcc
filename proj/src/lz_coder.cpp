#include <array>

#include "mcp/coders.hpp"
#include "mcp/errors.hpp"

namespace mcp {

namespace {

struct Phrase {
  std::size_t prefix;  // dictionary index of the phrase this one extends
  bool has_literal;
  bool literal;
};

// Phrase i (1-based) is coded against a dictionary of i entries, counting
// the empty phrase at index 0.
std::vector<Phrase> lz78_parse(const BitString& s) {
  std::vector<std::array<std::size_t, 2>> trie{{0, 0}};
  std::vector<Phrase> phrases;
  std::size_t node = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const int b = s[i] ? 1 : 0;
    if (trie[node][b] != 0) {
      node = trie[node][b];
      continue;
    }
    trie[node][b] = trie.size();
    trie.push_back({0, 0});
    phrases.push_back({node, true, s[i]});
    node = 0;
  }
  if (node != 0) phrases.push_back({node, false, false});
  return phrases;
}

}  // namespace

BitString index_bits(const QuantizedSignal& q) {
  BitString s;
  for (std::uint64_t j : q.indices()) s.write_uint(j, q.resolution().bits());
  return s;
}

std::size_t lz78_length(const BitString& s) {
  const auto phrases = lz78_parse(s);
  std::size_t bits = 0;
  for (std::size_t i = 0; i < phrases.size(); ++i) {
    bits += static_cast<std::size_t>(ceil_log2(i + 1));
    if (phrases[i].has_literal) ++bits;
  }
  return bits;
}

BitString lz78_encode(const BitString& s) {
  // Trie node ids coincide with dictionary indices: node j is phrase j.
  const auto phrases = lz78_parse(s);
  BitString out;
  for (std::size_t i = 0; i < phrases.size(); ++i) {
    out.write_uint(phrases[i].prefix, ceil_log2(i + 1));
    if (phrases[i].has_literal) out.push_back(phrases[i].literal);
  }
  return out;
}

BitString lz78_decode(BitReader& in, std::size_t length) {
  std::vector<std::pair<std::size_t, bool>> dict{{0, false}};
  BitString out;
  std::vector<bool> scratch;
  while (out.size() < length) {
    const std::size_t i = dict.size();
    const std::uint64_t prefix = in.read_uint(ceil_log2(i));
    if (prefix >= dict.size()) throw DecodeError("lz78: dangling phrase index");
    scratch.clear();
    for (std::size_t node = prefix; node != 0; node = dict[node].first) {
      scratch.push_back(dict[node].second);
    }
    for (auto it = scratch.rbegin(); it != scratch.rend(); ++it) {
      out.push_back(*it);
    }
    if (out.size() > length) throw DecodeError("lz78: overlong phrase");
    if (out.size() == length) break;
    const bool literal = in.read_bit();
    out.push_back(literal);
    dict.emplace_back(prefix, literal);
  }
  return out;
}

std::size_t lz_bits(const QuantizedSignal& q) {
  return LZCoder::kHeaderBits + lz78_length(index_bits(q));
}

std::optional<std::size_t> LZCoder::try_length(const QuantizedSignal& q) const {
  const BitString raw = index_bits(q);
  return kHeaderBits + std::min(raw.size(), lz78_length(raw));
}

std::optional<BitString> LZCoder::try_encode(const QuantizedSignal& q) const {
  const BitString raw = index_bits(q);
  BitString out;
  out.write_uint(static_cast<std::uint64_t>(id()), kTagBits);
  if (lz78_length(raw) < raw.size()) {
    out.push_back(true);
    out.append(lz78_encode(raw));
  } else {
    out.push_back(false);
    out.append(raw);
  }
  return out;
}

QuantizedSignal LZCoder::decode(BitReader& in, std::size_t n,
                                Resolution m) const {
  if (in.read_uint(kTagBits) != static_cast<std::uint64_t>(id())) {
    throw DecodeError("lz: tag mismatch");
  }
  const std::size_t total = n * static_cast<std::size_t>(m.bits());
  BitString raw;
  if (in.read_bit()) {
    raw = lz78_decode(in, total);
  } else {
    for (std::size_t i = 0; i < total; ++i) raw.push_back(in.read_bit());
  }
  BitReader r(raw);
  std::vector<std::uint64_t> idx(n);
  for (auto& j : idx) j = r.read_uint(m.bits());
  return QuantizedSignal(std::move(idx), m);
}

}  // namespace mcp
