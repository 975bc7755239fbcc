#include <boost/multiprecision/cpp_int.hpp>

#include <unordered_map>

#include "mcp/coders.hpp"
#include "mcp/errors.hpp"

namespace mcp {

using boost::multiprecision::cpp_int;

namespace {

// Row n of Pascal's triangle with the ceil(log2) of each entry.
struct BinomialRow {
  std::vector<cpp_int> values;
  std::vector<std::size_t> ceil_log2;
};

std::size_t ceil_log2_big(const cpp_int& v) {
  if (v <= 1) return 0;
  const cpp_int w = v - 1;
  return boost::multiprecision::msb(w) + 1;
}

const BinomialRow& binomial_row(std::size_t n) {
  thread_local std::unordered_map<std::size_t, BinomialRow> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  BinomialRow row;
  row.values.reserve(n + 1);
  cpp_int c = 1;
  for (std::size_t k = 0; k <= n; ++k) {
    row.values.push_back(c);
    row.ceil_log2.push_back(ceil_log2_big(c));
    c = c * (n - k) / (k + 1);
  }
  return cache.emplace(n, std::move(row)).first->second;
}

// C(a, b) with the convention C(a, b) = 0 for b > a.
cpp_int binom(std::size_t a, std::size_t b) {
  if (b > a) return 0;
  return binomial_row(a).values[b];
}

int k_field_bits(std::size_t n) {
  return ceil_log2(static_cast<std::uint64_t>(n) + 1);
}

}  // namespace

std::size_t ceil_log2_binomial(std::size_t n, std::size_t k) {
  if (k > n) throw DomainError("ceil_log2_binomial: k > n");
  return binomial_row(n).ceil_log2[k];
}

std::size_t sparse_support_bits(std::size_t n, std::size_t k) {
  if (k > n) throw DomainError("sparse_support_bits: k > n");
  return ceil_log2_binomial(n, k) + static_cast<std::size_t>(k_field_bits(n));
}

std::size_t SparseCoder::header_bits(std::size_t n, Resolution) const {
  return kTagBits + static_cast<std::size_t>(k_field_bits(n));
}

std::optional<std::size_t> SparseCoder::bits_for_support_size(
    std::size_t n, Resolution m, std::size_t k) const {
  return header_bits(n, m) + ceil_log2_binomial(n, k) +
         k * static_cast<std::size_t>(m.bits());
}

std::optional<std::size_t> SparseCoder::try_length(
    const QuantizedSignal& q) const {
  return bits_for_support_size(q.size(), q.resolution(), q.support_size());
}

std::optional<BitString> SparseCoder::try_encode(
    const QuantizedSignal& q) const {
  const std::size_t n = q.size();
  const int m = q.resolution().bits();
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < n; ++i) {
    if (q.index(i) != 0) support.push_back(i);
  }
  const std::size_t k = support.size();

  BitString out;
  out.write_uint(static_cast<std::uint64_t>(id()), kTagBits);
  out.write_uint(k, k_field_bits(n));

  // Combinatorial number system: rank = sum_i C(c_i, i+1).
  cpp_int rank = 0;
  for (std::size_t i = 0; i < k; ++i) rank += binom(support[i], i + 1);
  const std::size_t width = ceil_log2_binomial(n, k);
  for (std::size_t b = width; b-- > 0;) {
    out.push_back(boost::multiprecision::bit_test(rank, b));
  }
  for (std::size_t i : support) out.write_uint(q.index(i), m);
  return out;
}

QuantizedSignal SparseCoder::decode(BitReader& in, std::size_t n,
                                    Resolution m) const {
  if (in.read_uint(kTagBits) != static_cast<std::uint64_t>(id())) {
    throw DecodeError("sparse: tag mismatch");
  }
  const std::uint64_t k = in.read_uint(k_field_bits(n));
  if (k > n) throw DecodeError("sparse: support size exceeds n");

  const std::size_t width = ceil_log2_binomial(n, k);
  cpp_int rank = 0;
  for (std::size_t b = 0; b < width; ++b) {
    rank <<= 1;
    if (in.read_bit()) rank |= 1;
  }
  if (rank >= binom(n, k)) throw DecodeError("sparse: support rank too large");

  std::vector<std::size_t> support(k);
  std::size_t upper = n;
  for (std::size_t i = k; i-- > 0;) {
    // Largest c < upper with C(c, i+1) <= rank.
    std::size_t c = upper;
    do {
      --c;
    } while (binom(c, i + 1) > rank);
    support[i] = c;
    rank -= binom(c, i + 1);
    upper = c;
  }

  std::vector<std::uint64_t> idx(n, 0);
  for (std::size_t i : support) {
    idx[i] = in.read_uint(m.bits());
    if (idx[i] == 0) throw DecodeError("sparse: zero value inside support");
  }
  return QuantizedSignal(std::move(idx), m);
}

}  // namespace mcp
